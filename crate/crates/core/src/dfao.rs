//! Deterministic finite automata with output, read least-significant digit first,
//! and uniform substitutions used as an independent sequence source.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// Where a [`SeqPrefix`] came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Dfao,
    Substitution,
    CaColumn,
}

/// A finite prefix `u_0, u_1, ..` of a sequence over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqPrefix {
    pub ctx: FieldCtx,
    pub values: Vec<FieldElem>,
    pub origin: Origin,
}

impl SeqPrefix {
    pub fn new(ctx: &FieldCtx, values: Vec<FieldElem>, origin: Origin) -> Self {
        SeqPrefix { ctx: ctx.clone(), values, origin }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the first disagreement with `other` over the common length.
    pub fn first_mismatch(&self, other: &[FieldElem]) -> Option<usize> {
        self.values.iter().zip(other).position(|(a, b)| a != b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao {
    ctx: FieldCtx,
    base: u32,
    names: Vec<String>,
    outputs: Vec<FieldElem>,
    delta: Vec<Vec<usize>>,
    initial: usize,
}

/// A kernel sequence `(u_{k^j n + r})`, identified with the state reached on
/// the `j` digits of `r` (least significant first, zero padded).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelEntry {
    pub state: usize,
    pub depth: u32,
    pub offset: u64,
}

impl Dfao {
    pub fn new(
        ctx: &FieldCtx,
        base: u32,
        names: Vec<String>,
        outputs: Vec<FieldElem>,
        delta: Vec<Vec<usize>>,
        initial: usize,
    ) -> Result<Self> {
        let n = outputs.len();
        if base < 2 {
            return Err(Error::Dfao(format!("base {base} is below 2")));
        }
        if n == 0 || names.len() != n || delta.len() != n {
            return Err(Error::Dfao("state tables have inconsistent sizes".into()));
        }
        if initial >= n {
            return Err(Error::Dfao("initial state out of range".into()));
        }
        for (s, row) in delta.iter().enumerate() {
            if row.len() != base as usize {
                return Err(Error::Dfao(format!("state `{}` lacks transitions", names[s])));
            }
            if row.iter().any(|&t| t >= n) {
                return Err(Error::Dfao(format!("state `{}` has a dangling transition", names[s])));
            }
        }
        if outputs.iter().any(|o| o.index() >= ctx.q()) {
            return Err(Error::Dfao("output outside the field".into()));
        }
        Ok(Dfao { ctx: ctx.clone(), base, names, outputs, delta, initial })
    }

    /// Parse the line-oriented automaton format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut base = None;
        let mut ctx = None;
        let mut lsd = false;
        let mut states: Vec<(String, String)> = Vec::new();
        let mut trans: Vec<(String, u32, String, usize)> = Vec::new();
        let mut initial = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: cannot read `{line}`", lineno + 1));
            let tok: Vec<&str> = line.split_whitespace().collect();
            match tok[0] {
                "base" => base = Some(tok.get(1).and_then(|s| s.parse::<u32>().ok()).ok_or_else(bad)?),
                "field" => ctx = Some(FieldCtx::from_header_tokens(&tok[1..])?),
                "digits" => match tok.get(1) {
                    Some(&"lsd") => lsd = true,
                    Some(&"msd") => {
                        return Err(Error::Dfao(
                            "most-significant-digit-first automata are not supported".into(),
                        ))
                    }
                    _ => return Err(bad()),
                },
                "state" => {
                    if tok.len() != 4 || tok[2] != "output" {
                        return Err(bad());
                    }
                    states.push((tok[1].to_string(), tok[3].to_string()));
                }
                "trans" => {
                    if tok.len() != 4 {
                        return Err(bad());
                    }
                    let digit = tok[2].parse().map_err(|_| bad())?;
                    trans.push((tok[1].to_string(), digit, tok[3].to_string(), lineno + 1));
                }
                "initial" => initial = Some(tok.get(1).ok_or_else(bad)?.to_string()),
                _ => return Err(bad()),
            }
        }
        let base = base.ok_or_else(|| Error::Parse("missing `base` line".into()))?;
        let ctx = ctx.ok_or_else(|| Error::Parse("missing `field` line".into()))?;
        if !lsd {
            return Err(Error::Dfao("missing `digits lsd` declaration".into()));
        }
        let mut index = HashMap::new();
        let mut names = Vec::new();
        let mut outputs = Vec::new();
        for (name, out) in &states {
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::Dfao(format!("state `{name}` declared twice")));
            }
            names.push(name.clone());
            outputs.push(ctx.parse_elem(out)?);
        }
        let lookup = |name: &str| {
            index.get(name).copied().ok_or_else(|| Error::Dfao(format!("unknown state `{name}`")))
        };
        let mut delta = vec![vec![usize::MAX; base as usize]; names.len()];
        for (from, digit, to, lineno) in &trans {
            if *digit >= base {
                return Err(Error::Dfao(format!("line {lineno}: digit {digit} not below base {base}")));
            }
            let (f, t) = (lookup(from)?, lookup(to)?);
            if delta[f][*digit as usize] != usize::MAX {
                return Err(Error::Dfao(format!("line {lineno}: duplicate transition")));
            }
            delta[f][*digit as usize] = t;
        }
        for (s, row) in delta.iter().enumerate() {
            if let Some(r) = row.iter().position(|&t| t == usize::MAX) {
                return Err(Error::Dfao(format!("missing transition from `{}` on {r}", names[s])));
            }
        }
        let init = lookup(&initial.ok_or_else(|| Error::Parse("missing `initial` line".into()))?)?;
        Dfao::new(&ctx, base, names, outputs, delta, init)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "base {}", self.base);
        let _ = writeln!(out, "field {}", self.ctx.header());
        out.push_str("digits lsd\n");
        for (name, &o) in self.names.iter().zip(&self.outputs) {
            let _ = writeln!(out, "state {name} output {}", self.ctx.fmt_elem(o));
        }
        for (s, row) in self.delta.iter().enumerate() {
            for (r, &t) in row.iter().enumerate() {
                let _ = writeln!(out, "trans {} {r} {}", self.names[s], self.names[t]);
            }
        }
        let _ = writeln!(out, "initial {}", self.names[self.initial]);
        out
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn num_states(&self) -> usize {
        self.outputs.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn output(&self, s: usize) -> FieldElem {
        self.outputs[s]
    }

    pub fn next(&self, s: usize, digit: u32) -> usize {
        self.delta[s][digit as usize]
    }

    /// State reached from `s` on the base-k digits of `n` (empty word for `n = 0`).
    pub fn run_from(&self, s: usize, mut n: u64) -> usize {
        let k = self.base as u64;
        let mut s = s;
        while n > 0 {
            s = self.delta[s][(n % k) as usize];
            n /= k;
        }
        s
    }

    pub fn eval(&self, n: u64) -> FieldElem {
        self.outputs[self.run_from(self.initial, n)]
    }

    /// Sequence generated when starting in state `s`.
    pub fn eval_from(&self, s: usize, n: u64) -> FieldElem {
        self.outputs[self.run_from(s, n)]
    }

    pub fn prefix(&self, len: usize) -> SeqPrefix {
        SeqPrefix::new(&self.ctx, (0..len as u64).map(|n| self.eval(n)).collect(), Origin::Dfao)
    }

    pub fn prefix_from(&self, s: usize, len: usize) -> Vec<FieldElem> {
        (0..len as u64).map(|n| self.eval_from(s, n)).collect()
    }

    /// Same automaton with every output passed through `map`.
    pub fn map_outputs(&self, map: impl Fn(FieldElem) -> FieldElem) -> Dfao {
        let mut d = self.clone();
        d.outputs = self.outputs.iter().map(|&o| map(o)).collect();
        d
    }

    /// Equivalent automaton in which every state `s` satisfies
    /// `output(next(s, 0)) == output(s)`, so a digit 0 read at the end of the
    /// word never changes the value.  Each state of the result generates the
    /// kernel sequence `n -> u_{k^j n + r}` including its `n = 0` term.
    pub fn zero_stable(&self) -> Dfao {
        let mut index: HashMap<(usize, FieldElem), usize> = HashMap::new();
        let mut pairs = Vec::new();
        let mut queue = VecDeque::new();
        let start = (self.initial, self.outputs[self.initial]);
        index.insert(start, 0);
        pairs.push(start);
        queue.push_back(start);
        let mut delta = Vec::new();
        while let Some((s, v)) = queue.pop_front() {
            let mut row = Vec::with_capacity(self.base as usize);
            for r in 0..self.base as usize {
                let t = self.delta[s][r];
                let child = (t, if r == 0 { v } else { self.outputs[t] });
                let next = *index.entry(child).or_insert_with(|| {
                    pairs.push(child);
                    queue.push_back(child);
                    pairs.len() - 1
                });
                row.push(next);
            }
            delta.push(row);
        }
        let names = pairs
            .iter()
            .map(|&(s, v)| {
                if v == self.outputs[s] {
                    self.names[s].clone()
                } else {
                    format!("{}~{}", self.names[s], self.ctx.fmt_elem(v))
                }
            })
            .collect();
        let outputs = pairs.iter().map(|&(_, v)| v).collect();
        Dfao { ctx: self.ctx.clone(), base: self.base, names, outputs, delta, initial: 0 }
    }

    /// Moore partition refinement on reachable states.  States of the result
    /// are numbered breadth-first from the initial state in digit order.
    pub fn minimize(&self) -> Dfao {
        let reach = self.bfs_order(self.initial);
        let mut class: HashMap<usize, usize> = HashMap::new();
        {
            let mut ids: BTreeMap<u32, usize> = BTreeMap::new();
            for &s in &reach {
                let n = ids.len();
                let c = *ids.entry(self.outputs[s].index()).or_insert(n);
                class.insert(s, c);
            }
        }
        loop {
            let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next: HashMap<usize, usize> = HashMap::new();
            for &s in &reach {
                let sig = (class[&s], self.delta[s].iter().map(|t| class[t]).collect());
                let n = ids.len();
                next.insert(s, *ids.entry(sig).or_insert(n));
            }
            let old = class.values().collect::<std::collections::HashSet<_>>().len();
            let stable = ids.len() == old;
            class = next;
            if stable {
                break;
            }
        }
        let mut rep: HashMap<usize, usize> = HashMap::new();
        for &s in &reach {
            rep.entry(class[&s]).or_insert(s);
        }
        let quotient = Dfao {
            ctx: self.ctx.clone(),
            base: self.base,
            names: (0..rep.len()).map(|c| self.names[rep[&c]].clone()).collect(),
            outputs: (0..rep.len()).map(|c| self.outputs[rep[&c]]).collect(),
            delta: (0..rep.len())
                .map(|c| self.delta[rep[&c]].iter().map(|t| class[t]).collect())
                .collect(),
            initial: class[&self.initial],
        };
        quotient.renumbered()
    }

    fn bfs_order(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < order.len() {
            for &t in &self.delta[order[i]] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    fn renumbered(&self) -> Dfao {
        let order = self.bfs_order(self.initial);
        let mut pos = vec![usize::MAX; self.num_states()];
        for (i, &s) in order.iter().enumerate() {
            pos[s] = i;
        }
        Dfao {
            ctx: self.ctx.clone(),
            base: self.base,
            names: order.iter().map(|&s| self.names[s].clone()).collect(),
            outputs: order.iter().map(|&s| self.outputs[s]).collect(),
            delta: order.iter().map(|&s| self.delta[s].iter().map(|&t| pos[t]).collect()).collect(),
            initial: 0,
        }
    }

    /// Zero-stable minimal automaton whose states are exactly the kernel sequences.
    pub fn kernel_automaton(&self) -> Dfao {
        self.zero_stable().minimize()
    }

    /// Kernel closure of the initial state, breadth-first in digit order.
    /// Expects a [`kernel_automaton`](Self::kernel_automaton).
    pub fn kernel(&self) -> Vec<KernelEntry> {
        let mut seen = vec![false; self.num_states()];
        let mut out = vec![KernelEntry { state: self.initial, depth: 0, offset: 0 }];
        seen[self.initial] = true;
        let mut i = 0;
        while i < out.len() {
            let KernelEntry { state, depth, offset } = out[i].clone();
            for r in 0..self.base {
                let t = self.delta[state][r as usize];
                if !seen[t] {
                    seen[t] = true;
                    let offset = offset + r as u64 * (self.base as u64).pow(depth);
                    out.push(KernelEntry { state: t, depth: depth + 1, offset });
                }
            }
            i += 1;
        }
        out
    }

    /// Automaton over base `k^e` reading `e` base-k digits at a time.
    pub fn power_base(&self, e: u32) -> Result<Dfao> {
        if e == 0 {
            return Err(Error::Dfao("power_base needs e >= 1".into()));
        }
        if e == 1 {
            return Ok(self.clone());
        }
        let k = self.base as u64;
        let big = k.checked_pow(e).filter(|&b| b <= 1 << 16).ok_or_else(|| {
            Error::Dfao(format!("base {}^{e} is too large", self.base))
        })?;
        let z = self.zero_stable();
        let delta = (0..z.num_states())
            .map(|s| {
                (0..big)
                    .map(|c| {
                        let mut t = s;
                        let mut c = c;
                        for _ in 0..e {
                            t = z.delta[t][(c % k) as usize];
                            c /= k;
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        Dfao::new(&z.ctx, big as u32, z.names.clone(), z.outputs.clone(), delta, z.initial)
    }
}

/// A uniform substitution with a letter-to-letter coding into `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    ctx: FieldCtx,
    rules: BTreeMap<char, Vec<char>>,
    coding: BTreeMap<char, FieldElem>,
    seed: char,
}

impl Substitution {
    pub fn new(
        ctx: &FieldCtx,
        rules: BTreeMap<char, Vec<char>>,
        coding: BTreeMap<char, FieldElem>,
        seed: char,
    ) -> Result<Self> {
        let k = rules.values().next().map(Vec::len).unwrap_or(0);
        if k < 2 {
            return Err(Error::Substitution("images must have length at least 2".into()));
        }
        for (a, w) in &rules {
            if w.len() != k {
                return Err(Error::Substitution(format!("image of `{a}` has length {}, expected {k}", w.len())));
            }
            if let Some(b) = w.iter().find(|b| !rules.contains_key(b)) {
                return Err(Error::Substitution(format!("letter `{b}` has no image")));
            }
            if !coding.contains_key(a) {
                return Err(Error::Substitution(format!("letter `{a}` has no coding")));
            }
        }
        match rules.get(&seed) {
            Some(w) if w[0] == seed => {}
            Some(_) => return Err(Error::Substitution(format!("image of seed `{seed}` does not start with it"))),
            None => return Err(Error::Substitution(format!("unknown seed `{seed}`"))),
        }
        Ok(Substitution { ctx: ctx.clone(), rules, coding, seed })
    }

    /// Lines `field ..`, `subst a -> word`, `code a elem`, `seed a`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ctx = None;
        let mut rules = BTreeMap::new();
        let mut codes = Vec::new();
        let mut seed = None;
        let letter = |s: &str| {
            let mut it = s.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(Error::Parse(format!("`{s}` is not a single letter"))),
            }
        };
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            match (tok[0], tok.len()) {
                ("field", _) => ctx = Some(FieldCtx::from_header_tokens(&tok[1..])?),
                ("subst", 4) if tok[2] == "->" => {
                    rules.insert(letter(tok[1])?, tok[3].chars().collect());
                }
                ("code", 3) => codes.push((letter(tok[1])?, tok[2].to_string())),
                ("seed", 2) => seed = Some(letter(tok[1])?),
                _ => return Err(Error::Parse(format!("cannot read `{line}`"))),
            }
        }
        let ctx = ctx.ok_or_else(|| Error::Parse("missing `field` line".into()))?;
        let mut coding = BTreeMap::new();
        for (a, v) in codes {
            coding.insert(a, ctx.parse_elem(&v)?);
        }
        let seed = seed.ok_or_else(|| Error::Parse("missing `seed` line".into()))?;
        Substitution::new(&ctx, rules, coding, seed)
    }

    pub fn length(&self) -> usize {
        self.rules[&self.seed].len()
    }

    /// First `n` letters of the fixed point starting with the seed.
    pub fn fixed_point_letters(&self, n: usize) -> Vec<char> {
        let mut word = vec![self.seed];
        while word.len() < n {
            word = word.iter().flat_map(|a| self.rules[a].iter().copied()).collect();
        }
        word.truncate(n);
        word
    }

    pub fn fixed_point(&self, n: usize) -> SeqPrefix {
        let values = self.fixed_point_letters(n).iter().map(|a| self.coding[a]).collect();
        SeqPrefix::new(&self.ctx, values, Origin::Substitution)
    }

    pub fn apply(&self, word: &[char]) -> Vec<char> {
        word.iter().flat_map(|a| self.rules[a].iter().copied()).collect()
    }
}
