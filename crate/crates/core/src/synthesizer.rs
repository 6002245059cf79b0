//! Build a linear cellular automaton with memory whose column `-2` carries a
//! tail of the sequence described by a normalized equation.

use std::fmt::Write as _;

use crate::bipoly::BiPoly;
use crate::christol::{algebraic_equation, OreEquation};
use crate::dfao::Dfao;
use crate::engine::Row;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::normalizer::{default_relabel, normalize, normalize_invertible, swap_with_zero, NormalizedEquation};
use crate::poly::LaurentPoly;

/// Column that carries the sequence in a synthesized spec.
pub const TARGET_COLUMN: i64 = -2;

/// Where a synthesized spec came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub p: BiPoly,
    pub r: usize,
    pub d: usize,
}

/// A linear CA with memory `D`: `R_n = sum_{i=1}^{D} rule[i-1] * R_{n-i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaSpec {
    pub ctx: FieldCtx,
    pub rule: Vec<LaurentPoly>,
    /// Rows with labels `first_label .. first_label + D`.
    pub rows: Vec<Row>,
    pub first_label: i64,
    pub target_column: i64,
    pub invertible: bool,
    pub provenance: Option<Provenance>,
    /// The column carries the sequence with this value swapped with `0`.
    pub relabel: Option<FieldElem>,
}

impl CaSpec {
    pub fn new(ctx: &FieldCtx, rule: Vec<LaurentPoly>, rows: Vec<Row>, first_label: i64) -> Result<Self> {
        let spec = CaSpec {
            ctx: ctx.clone(),
            rule,
            rows,
            first_label,
            target_column: TARGET_COLUMN,
            invertible: false,
            provenance: None,
            relabel: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rule.is_empty() {
            return Err(Error::Synthesize("memory must be at least 1".into()));
        }
        if self.rows.len() != self.rule.len() {
            return Err(Error::Synthesize(format!(
                "memory {} needs {} initial rows, got {}",
                self.rule.len(),
                self.rule.len(),
                self.rows.len()
            )));
        }
        if self.rule.iter().any(|p| p.ctx() != &self.ctx) || self.rows.iter().any(|r| r.ctx() != &self.ctx) {
            return Err(Error::Synthesize("rule and rows must share the spec's field".into()));
        }
        if self.invertible {
            let d = self.effective_memory();
            if d == 0 || self.lag(d).as_monomial().is_none() {
                return Err(Error::Synthesize("invertible spec needs a monomial top lag".into()));
            }
        }
        Ok(())
    }

    pub fn memory(&self) -> usize {
        self.rule.len()
    }

    /// Coefficient of `R_{n-i}`, `1 <= i <= D`.
    pub fn lag(&self, i: usize) -> &LaurentPoly {
        &self.rule[i - 1]
    }

    /// Largest lag with a nonzero coefficient, `0` for the zero rule.
    pub fn effective_memory(&self) -> usize {
        self.rule.iter().rposition(|p| !p.is_zero()).map_or(0, |i| i + 1)
    }

    /// `(l, rr)`: cell `m` reads cells `m - l ..= m + rr` of earlier rows.
    pub fn radii(&self) -> (usize, usize) {
        let l = self.rule.iter().filter_map(LaurentPoly::max_exp).max().unwrap_or(0).max(0);
        let rr = self.rule.iter().filter_map(LaurentPoly::min_exp).map(|k| -k).max().unwrap_or(0).max(0);
        (l as usize, rr as usize)
    }

    pub fn last_initial_label(&self) -> i64 {
        self.first_label + self.rows.len() as i64 - 1
    }

    /// Move every row by `x^{m - target}` so the sequence sits in column `m`.
    pub fn translate(&self, m: i64) -> CaSpec {
        let k = m - self.target_column;
        let mut out = self.clone();
        out.rows = self.rows.iter().map(|r| r.shift(k)).collect();
        out.target_column = m;
        out
    }

    pub fn to_text(&self) -> String {
        let f = &self.ctx;
        let mut out = String::new();
        let _ = writeln!(out, "# linear cellular automaton with memory");
        let _ = writeln!(out, "field {}", f.header());
        let _ = writeln!(out, "memory {}", self.memory());
        for (i, p) in self.rule.iter().enumerate() {
            let _ = writeln!(out, "lag {} : {p}", i + 1);
        }
        for (j, r) in self.rows.iter().enumerate() {
            let _ = writeln!(out, "row {} : {}", self.first_label + j as i64, row_to_text(r));
        }
        let _ = writeln!(out, "target-column {}", self.target_column);
        let _ = writeln!(out, "invertible {}", self.invertible);
        if let Some(a) = self.relabel {
            let _ = writeln!(out, "relabel {}", f.fmt_elem(a));
        }
        if let Some(pv) = &self.provenance {
            let _ = writeln!(out, "provenance P : {}", pv.p);
            let _ = writeln!(out, "provenance r : {}", pv.r);
            let _ = writeln!(out, "provenance d : {}", pv.d);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut ctx: Option<FieldCtx> = None;
        let mut memory: Option<usize> = None;
        let mut lags: Vec<(usize, String)> = Vec::new();
        let mut rows: Vec<(i64, String)> = Vec::new();
        let mut target = TARGET_COLUMN;
        let mut invertible = false;
        let mut relabel: Option<String> = None;
        let (mut pv_p, mut pv_r, mut pv_d) = (None, None, None);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: `{line}`", lineno + 1));
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match key {
                "field" => {
                    let tok: Vec<&str> = rest.split_whitespace().collect();
                    ctx = Some(FieldCtx::from_header_tokens(&tok)?);
                }
                "memory" => memory = Some(rest.parse().map_err(|_| bad("bad memory"))?),
                "lag" | "row" => {
                    let (head, body) = rest.split_once(':').ok_or_else(|| bad("missing `:`"))?;
                    let head = head.trim();
                    if key == "lag" {
                        lags.push((head.parse().map_err(|_| bad("bad lag index"))?, body.trim().to_string()));
                    } else {
                        rows.push((head.parse().map_err(|_| bad("bad row label"))?, body.trim().to_string()));
                    }
                }
                "target-column" => target = rest.parse().map_err(|_| bad("bad column"))?,
                "invertible" => invertible = rest.parse().map_err(|_| bad("expected true or false"))?,
                "relabel" => relabel = Some(rest.to_string()),
                "provenance" => {
                    let (k, v) = rest.split_once(':').ok_or_else(|| bad("missing `:`"))?;
                    let v = v.trim().to_string();
                    match k.trim() {
                        "P" => pv_p = Some(v),
                        "r" => pv_r = Some(v.parse::<usize>().map_err(|_| bad("bad r"))?),
                        "d" => pv_d = Some(v.parse::<usize>().map_err(|_| bad("bad d"))?),
                        _ => return Err(bad("unknown provenance key")),
                    }
                }
                _ => return Err(bad("unknown directive")),
            }
        }
        let f = ctx.ok_or_else(|| Error::Parse("missing `field` line".into()))?;
        let d = memory.ok_or_else(|| Error::Parse("missing `memory` line".into()))?;
        let mut rule = vec![LaurentPoly::zero(&f); d];
        let mut seen = vec![false; d];
        for (i, body) in &lags {
            if *i == 0 || *i > d {
                return Err(Error::Parse(format!("lag {i} outside 1..={d}")));
            }
            if std::mem::replace(&mut seen[i - 1], true) {
                return Err(Error::Parse(format!("lag {i} given twice")));
            }
            rule[i - 1] = parse_laurent(&f, body)?;
        }
        rows.sort_by_key(|(label, _)| *label);
        let first_label = rows.first().map_or(0, |(label, _)| *label);
        for (j, (label, _)) in rows.iter().enumerate() {
            if *label != first_label + j as i64 {
                return Err(Error::Parse("row labels must be consecutive and distinct".into()));
            }
        }
        let rows = rows.iter().map(|(_, body)| parse_row(&f, body)).collect::<Result<Vec<_>>>()?;
        let provenance = match (pv_p, pv_r, pv_d) {
            (Some(p), Some(r), Some(d)) => Some(Provenance { p: BiPoly::parse(&f, &p)?, r, d }),
            (None, None, None) => None,
            _ => return Err(Error::Parse("provenance needs P, r and d".into())),
        };
        let spec = CaSpec {
            relabel: relabel.map(|s| f.parse_elem(&s)).transpose()?,
            ctx: f,
            rule,
            rows,
            first_label,
            target_column: target,
            invertible,
            provenance,
        };
        spec.validate().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(spec)
    }
}

fn parse_laurent(f: &FieldCtx, text: &str) -> Result<LaurentPoly> {
    let b = BiPoly::parse(f, text)?;
    if b.t_degree().unwrap_or(0) > 0 {
        return Err(Error::Parse(format!("`{text}` must not involve t")));
    }
    Ok(LaurentPoly::from_terms(f, b.terms().map(|(k, c)| (k, c.coeff(0)))))
}

fn word_to_text(f: &FieldCtx, w: &[FieldElem]) -> String {
    w.iter().map(|&c| f.fmt_elem(c)).collect::<Vec<_>>().join(",")
}

/// `(col,elem) ..` for the nonzero core cells, followed by both tails when
/// the row is not finitely supported.
pub fn row_to_text(r: &Row) -> String {
    let f = r.ctx();
    let cells: Vec<String> = r.cells().iter().map(|&(m, c)| format!("({m},{})", f.fmt_elem(c))).collect();
    let mut out = cells.join(" ");
    if !r.is_finite() {
        let _ = write!(
            out,
            " | left-period {} @ {} | right-period {} @ {}",
            word_to_text(f, r.left_period()),
            r.core_start(),
            word_to_text(f, r.right_period()),
            r.core_end()
        );
    }
    out.trim().to_string()
}

pub fn parse_row(f: &FieldCtx, text: &str) -> Result<Row> {
    let bad = |what: &str| Error::Parse(format!("{what} in row `{text}`"));
    let mut parts = text.split('|');
    let cells_text = parts.next().unwrap_or("");
    let mut cells = Vec::new();
    for tok in cells_text.split_whitespace() {
        let inner = tok
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| bad("cells look like `(col,elem)`"))?;
        let (m, c) = inner.split_once(',').ok_or_else(|| bad("cells look like `(col,elem)`"))?;
        let m: i64 = m.trim().parse().map_err(|_| bad("bad column"))?;
        cells.push((m, f.parse_elem(c)?));
    }
    let mut left = None;
    let mut right = None;
    for part in parts {
        let (kind, rest) = part.trim().split_once(char::is_whitespace).ok_or_else(|| bad("empty clause"))?;
        let (word, anchor) = rest.split_once('@').ok_or_else(|| bad("period needs `@ anchor`"))?;
        let word = word
            .trim()
            .split(',')
            .map(|s| f.parse_elem(s))
            .collect::<Result<Vec<_>>>()?;
        let anchor: i64 = anchor.trim().parse().map_err(|_| bad("bad anchor"))?;
        match kind {
            "left-period" if left.is_none() => left = Some((word, anchor)),
            "right-period" if right.is_none() => right = Some((word, anchor)),
            _ => return Err(bad("unknown or repeated clause")),
        }
    }
    if left.is_none() && right.is_none() {
        let mut seen = std::collections::BTreeSet::new();
        if !cells.iter().all(|(m, _)| seen.insert(*m)) {
            return Err(bad("column given twice"));
        }
        return Ok(Row::from_cells(f, &cells));
    }
    let lo_cells = cells.iter().map(|c| c.0).min();
    let hi_cells = cells.iter().map(|c| c.0 + 1).max();
    let a = left.as_ref().map(|l| l.1).or(lo_cells).or(right.as_ref().map(|r| r.1)).unwrap();
    let b = right.as_ref().map(|r| r.1).or(hi_cells).unwrap_or(a);
    if b < a {
        return Err(bad("right anchor lies left of the left anchor"));
    }
    let mut core = vec![f.zero(); (b - a) as usize];
    let mut seen = vec![false; core.len()];
    for (m, c) in cells {
        if m < a || m >= b {
            return Err(bad("cell outside the core between the anchors"));
        }
        if std::mem::replace(&mut seen[(m - a) as usize], true) {
            return Err(bad("column given twice"));
        }
        core[(m - a) as usize] = c;
    }
    let left = left.map_or_else(|| vec![f.zero()], |l| l.0);
    let right = right.map_or_else(|| vec![f.zero()], |r| r.0);
    Row::new(f, left, core, a, right)
}

/// `C_0(x) .. C_d(x)` with `P = sum_i C_i(x) t^i`; `C_0` must be `a x`.
pub fn slice_coefficients(p: &BiPoly) -> Result<Vec<LaurentPoly>> {
    let slices = p.t_slices();
    match slices.first().and_then(LaurentPoly::as_monomial) {
        Some((_, 1)) => Ok(slices),
        _ => Err(Error::Synthesize(format!("t^0 slice of {p} is not a degree-1 monomial in x"))),
    }
}

fn c0_inverse(slices: &[LaurentPoly]) -> Result<LaurentPoly> {
    let c0 = slices.first().ok_or_else(|| Error::Synthesize("no slices".into()))?;
    match c0.as_monomial() {
        Some((a, 1)) => Ok(LaurentPoly::monomial(c0.ctx(), c0.ctx().inv(a)?, -1)),
        _ => Err(Error::Synthesize(format!("C_0 = {c0} is not a degree-1 monomial"))),
    }
}

/// `rule[i-1] = -C_i / C_0` for `i = 1 ..= d`.
pub fn local_rule(slices: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
    let inv = c0_inverse(slices)?;
    Ok(slices[1..].iter().map(|c| -&(c * &inv)).collect())
}

fn x_derivative(p: &LaurentPoly) -> LaurentPoly {
    let f = p.ctx();
    LaurentPoly::from_terms(f, p.terms().map(|(k, c)| (k - 1, f.mul(f.from_int(k), c))))
}

/// `R_0 .. R_d` of `P_x / P = sum_n R_n(x) t^n`.
pub fn initial_rows(p: &BiPoly, d: usize) -> Result<Vec<LaurentPoly>> {
    let slices = slice_coefficients(p)?;
    let inv = c0_inverse(&slices)?;
    let f = p.ctx();
    let mut rows: Vec<LaurentPoly> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut acc = slices.get(n).map_or_else(|| LaurentPoly::zero(f), x_derivative);
        for i in 1..=n.min(slices.len() - 1) {
            acc = &acc - &(&slices[i] * &rows[n - i]);
        }
        rows.push(&acc * &inv);
    }
    Ok(rows)
}

/// The automaton of a normalized equation: memory `d + r + 1`, rows
/// `R_{-r} .. R_0` set to `u_j x^{-2}` followed by the expansion rows `R_1 .. R_d`.
pub fn build_ca(neq: &NormalizedEquation) -> Result<CaSpec> {
    let f = neq.p.ctx().clone();
    let slices = slice_coefficients(&neq.p)?;
    let d = slices.len() - 1;
    let r = neq.r;
    let memory = d + r + 1;
    let mut rule = local_rule(&slices)?;
    rule.resize(memory, LaurentPoly::zero(&f));
    let expansion = initial_rows(&neq.p, d)?;
    let mut rows: Vec<Row> = neq
        .consumed
        .iter()
        .take(r + 1)
        .map(|&u| Row::from_cells(&f, &[(TARGET_COLUMN, u)]))
        .collect();
    if rows.len() != r + 1 {
        return Err(Error::Synthesize(format!("need u_0 .. u_{r}, have {} terms", rows.len())));
    }
    rows.extend(expansion[1..].iter().map(Row::from_laurent));
    let top = rule.iter().rposition(|p| !p.is_zero());
    let invertible = top.is_some_and(|i| rule[i].as_monomial().is_some());
    let mut spec = CaSpec::new(&f, rule, rows, -(r as i64))?;
    spec.invertible = invertible;
    spec.provenance = Some(Provenance { p: neq.p.clone(), r, d });
    Ok(spec)
}

/// Terms of the sequence handed to the normalizer.
pub const COMPILE_PREFIX: usize = 2048;

/// Shift search bound used for invertible specs.
pub const INVERTIBLE_SEARCH: usize = 512;

/// Every intermediate object of [`compile`].
#[derive(Clone, Debug)]
pub struct Compiled {
    pub equation: OreEquation,
    pub normalized: NormalizedEquation,
    pub spec: CaSpec,
}

/// Automaton to equation to normalized equation to spec.  With `invertible`
/// and a sequence without zeros, the outputs are relabeled first and the
/// swap is recorded in the spec.
pub fn compile(dfao: &Dfao, equation: Option<&OreEquation>, invertible: bool) -> Result<Compiled> {
    let s = dfao.prefix(COMPILE_PREFIX);
    let eq = match equation {
        Some(e) => e.clone(),
        None => algebraic_equation(dfao)?,
    };
    if !invertible {
        let neq = normalize(&eq, &s)?;
        let spec = build_ca(&neq)?;
        return Ok(Compiled { equation: eq, normalized: neq, spec });
    }
    match normalize_invertible(&eq, &s, INVERTIBLE_SEARCH) {
        Ok(neq) => {
            let spec = build_ca(&neq)?;
            Ok(Compiled { equation: eq, normalized: neq, spec })
        }
        Err(err) => {
            let Some(a) = default_relabel(&s) else { return Err(err) };
            if equation.is_some() {
                return Err(Error::Synthesize(format!(
                    "{err}; the sequence needs relabeling, which invalidates the given equation"
                )));
            }
            let relabeled = dfao.map_outputs(swap_with_zero(a));
            let eq = algebraic_equation(&relabeled)?;
            let neq = normalize_invertible(&eq, &relabeled.prefix(COMPILE_PREFIX), INVERTIBLE_SEARCH)?;
            let mut spec = build_ca(&neq)?;
            spec.relabel = Some(a);
            Ok(Compiled { equation: eq, normalized: neq, spec })
        }
    }
}

/// A memory-1 automaton on `F_q^D`: component `a` of the next configuration is
/// `sum_b matrix[a][b] * component_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrappedCa {
    pub ctx: FieldCtx,
    pub matrix: Vec<Vec<LaurentPoly>>,
    pub components: Vec<Row>,
    pub projection: usize,
    pub first_label: i64,
    pub target_column: i64,
    pub relabel: Option<FieldElem>,
}

/// Stack each window of `D` consecutive rows into one row over `F_q^D`.
pub fn wrap_memoryless(ca: &CaSpec) -> WrappedCa {
    let f = &ca.ctx;
    let d = ca.memory();
    let mut matrix = vec![vec![LaurentPoly::zero(f); d]; d];
    for (a, row) in matrix.iter_mut().enumerate().take(d - 1) {
        row[a + 1] = LaurentPoly::monomial(f, f.one(), 0);
    }
    for i in 1..=d {
        matrix[d - 1][d - i] = ca.lag(i).clone();
    }
    WrappedCa {
        ctx: f.clone(),
        matrix,
        components: ca.rows.clone(),
        projection: 0,
        first_label: ca.first_label,
        target_column: ca.target_column,
        relabel: ca.relabel,
    }
}

impl WrappedCa {
    pub fn dimension(&self) -> usize {
        self.matrix.len()
    }

    pub fn step(&self, config: &[Row]) -> Vec<Row> {
        self.matrix
            .iter()
            .map(|row| {
                let terms: Vec<(&LaurentPoly, &Row)> = row.iter().zip(config).collect();
                crate::engine::combine(&self.ctx, &terms)
            })
            .collect()
    }

    /// Configurations `0 .. n`.
    pub fn simulate(&self, n: usize) -> Vec<Vec<Row>> {
        let mut out: Vec<Vec<Row>> = Vec::with_capacity(n);
        if n > 0 {
            out.push(self.components.clone());
        }
        while out.len() < n {
            let next = self.step(out.last().unwrap());
            out.push(next);
        }
        out
    }

    /// The projected column over `n` time steps.
    pub fn column(&self, m: i64, n: usize) -> Vec<FieldElem> {
        self.simulate(n).iter().map(|c| c[self.projection].value(m)).collect()
    }

    pub fn to_text(&self) -> String {
        let f = &self.ctx;
        let mut out = String::new();
        let _ = writeln!(out, "# memoryless automaton over tuples");
        let _ = writeln!(out, "field {}", f.header());
        let _ = writeln!(out, "wrapped {}", self.dimension());
        for (a, row) in self.matrix.iter().enumerate() {
            for (b, p) in row.iter().enumerate() {
                if !p.is_zero() {
                    let _ = writeln!(out, "entry {a} {b} : {p}");
                }
            }
        }
        for (b, r) in self.components.iter().enumerate() {
            let _ = writeln!(out, "component {b} : {}", row_to_text(r));
        }
        let _ = writeln!(out, "projection {}", self.projection);
        let _ = writeln!(out, "first-row {}", self.first_label);
        let _ = writeln!(out, "target-column {}", self.target_column);
        if let Some(a) = self.relabel {
            let _ = writeln!(out, "relabel {}", f.fmt_elem(a));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut ctx: Option<FieldCtx> = None;
        let mut dim: Option<usize> = None;
        let mut entries = Vec::new();
        let mut comps = Vec::new();
        let mut projection = 0;
        let mut first_label = 0;
        let mut target = TARGET_COLUMN;
        let mut relabel = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: `{line}`", lineno + 1));
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match key {
                "field" => {
                    let tok: Vec<&str> = rest.split_whitespace().collect();
                    ctx = Some(FieldCtx::from_header_tokens(&tok)?);
                }
                "wrapped" => dim = Some(rest.parse().map_err(|_| bad("bad dimension"))?),
                "entry" => {
                    let (head, body) = rest.split_once(':').ok_or_else(|| bad("missing `:`"))?;
                    let ij: Vec<usize> = head
                        .split_whitespace()
                        .map(|s| s.parse().map_err(|_| bad("bad index")))
                        .collect::<Result<_>>()?;
                    if ij.len() != 2 {
                        return Err(bad("entry needs two indices"));
                    }
                    entries.push((ij[0], ij[1], body.trim().to_string()));
                }
                "component" => {
                    let (head, body) = rest.split_once(':').ok_or_else(|| bad("missing `:`"))?;
                    comps.push((head.trim().parse::<usize>().map_err(|_| bad("bad index"))?, body.trim().to_string()));
                }
                "projection" => projection = rest.parse().map_err(|_| bad("bad projection"))?,
                "first-row" => first_label = rest.parse().map_err(|_| bad("bad label"))?,
                "target-column" => target = rest.parse().map_err(|_| bad("bad column"))?,
                "relabel" => relabel = Some(rest.to_string()),
                _ => return Err(bad("unknown directive")),
            }
        }
        let f = ctx.ok_or_else(|| Error::Parse("missing `field` line".into()))?;
        let n = dim.ok_or_else(|| Error::Parse("missing `wrapped` line".into()))?;
        if n == 0 || projection >= n {
            return Err(Error::Parse("dimension must be positive and cover the projection".into()));
        }
        let mut matrix = vec![vec![LaurentPoly::zero(&f); n]; n];
        for (a, b, body) in entries {
            if a >= n || b >= n {
                return Err(Error::Parse(format!("entry {a} {b} outside {n} x {n}")));
            }
            matrix[a][b] = parse_laurent(&f, &body)?;
        }
        let mut components = vec![None; n];
        for (b, body) in comps {
            if b >= n {
                return Err(Error::Parse(format!("component {b} outside dimension {n}")));
            }
            components[b] = Some(parse_row(&f, &body)?);
        }
        let components = components.into_iter().map(|c| c.unwrap_or_else(|| Row::zero(&f))).collect();
        Ok(WrappedCa {
            relabel: relabel.map(|s| f.parse_elem(&s)).transpose()?,
            ctx: f,
            matrix,
            components,
            projection,
            first_label,
            target_column: target,
        })
    }
}
