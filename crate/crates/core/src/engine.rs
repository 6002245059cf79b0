//! Exact simulation of linear cellular automata with memory on bi-infinite,
//! eventually periodic rows, plus the rational-series view of a spacetime
//! diagram and an empirical column-to-automaton guesser.
//!
//! A row `R` is identified with the formal sum `sum_m R(m) x^m`, so the rule
//! coefficient `c x^k` contributes `c * R(m - k)` to cell `m`.

use std::collections::VecDeque;
use std::fmt;

use crate::bipoly::BiPoly;
use crate::dfao::{Dfao, Origin, SeqPrefix};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::poly::{LaurentPoly, Poly};
use crate::synthesizer::CaSpec;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn primitive(mut w: Vec<FieldElem>) -> Vec<FieldElem> {
    let n = w.len();
    if let Some(d) = (1..n).find(|&d| n % d == 0 && (d..n).all(|i| w[i] == w[i - d])) {
        w.truncate(d);
    }
    w
}

/// A bi-infinite row: `left` repeated toward `-inf`, `core` starting at column
/// `start`, `right` repeated toward `+inf`.
#[derive(Clone)]
pub struct Row {
    ctx: FieldCtx,
    left: Vec<FieldElem>,
    core: Vec<FieldElem>,
    start: i64,
    right: Vec<FieldElem>,
}

impl Row {
    /// For `m < start` the value is `left[(m - start) mod |left|]`; for
    /// `m >= start + |core|` it is `right[(m - start - |core|) mod |right|]`.
    pub fn new(
        ctx: &FieldCtx,
        left: Vec<FieldElem>,
        core: Vec<FieldElem>,
        start: i64,
        right: Vec<FieldElem>,
    ) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::Engine("periodic tails must be nonempty".into()));
        }
        let mut row = Row { ctx: ctx.clone(), left: primitive(left), core, start, right: primitive(right) };
        row.canonicalize();
        Ok(row)
    }

    fn canonicalize(&mut self) {
        while let Some(&last) = self.core.last() {
            if last != self.right[self.right.len() - 1] {
                break;
            }
            self.core.pop();
            self.right.rotate_right(1);
        }
        let mut drop = 0;
        while drop < self.core.len() && self.core[drop] == self.left[drop % self.left.len()] {
            drop += 1;
        }
        if drop > 0 {
            self.core.drain(..drop);
            self.start += drop as i64;
            let l = self.left.len();
            self.left.rotate_left(drop % l);
        }
        if self.core.is_empty() && self.is_tail_zero() {
            self.start = 0;
        }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        Row { ctx: ctx.clone(), left: vec![ctx.zero()], core: Vec::new(), start: 0, right: vec![ctx.zero()] }
    }

    /// Finitely supported row with the given nonzero cells.
    pub fn from_cells(ctx: &FieldCtx, cells: &[(i64, FieldElem)]) -> Self {
        Self::from_laurent(&LaurentPoly::from_terms(ctx, cells.iter().copied()))
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        let ctx = p.ctx();
        match (p.min_exp(), p.max_exp()) {
            (Some(lo), Some(hi)) => {
                let core = (lo..=hi).map(|m| p.coeff(m)).collect();
                Row::new(ctx, vec![ctx.zero()], core, lo, vec![ctx.zero()]).expect("nonempty tails")
            }
            _ => Row::zero(ctx),
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn value(&self, m: i64) -> FieldElem {
        if m < self.start {
            self.left[(m - self.start).rem_euclid(self.left.len() as i64) as usize]
        } else if m < self.core_end() {
            self.core[(m - self.start) as usize]
        } else {
            self.right[((m - self.core_end()) as usize) % self.right.len()]
        }
    }

    /// Values on `[a, b)`.
    pub fn window(&self, a: i64, b: i64) -> Vec<FieldElem> {
        (a..b).map(|m| self.value(m)).collect()
    }

    pub fn core(&self) -> &[FieldElem] {
        &self.core
    }

    pub fn core_start(&self) -> i64 {
        self.start
    }

    pub fn core_end(&self) -> i64 {
        self.start + self.core.len() as i64
    }

    pub fn left_period(&self) -> &[FieldElem] {
        &self.left
    }

    pub fn right_period(&self) -> &[FieldElem] {
        &self.right
    }

    fn is_tail_zero(&self) -> bool {
        self.left.iter().chain(&self.right).all(|v| v.is_zero())
    }

    /// Both tails are zero.
    pub fn is_finite(&self) -> bool {
        self.is_tail_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.core.is_empty() && self.is_tail_zero()
    }

    /// The row as a Laurent polynomial, when it is finitely supported.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        self.is_finite().then(|| {
            LaurentPoly::from_terms(
                &self.ctx,
                self.core.iter().enumerate().map(|(i, &c)| (self.start + i as i64, c)),
            )
        })
    }

    /// `x^k * self`: the row moved `k` cells to the right.
    pub fn shift(&self, k: i64) -> Row {
        let mut r = self.clone();
        r.start += k;
        if r.core.is_empty() && r.is_tail_zero() {
            r.start = 0;
        }
        r
    }

    pub fn scale(&self, c: FieldElem) -> Row {
        combine(&self.ctx, &[(&LaurentPoly::monomial(&self.ctx, c, 0), self)])
    }

    pub fn add(&self, other: &Row) -> Row {
        let one = LaurentPoly::monomial(&self.ctx, self.ctx.one(), 0);
        combine(&self.ctx, &[(&one, self), (&one, other)])
    }

    /// Nonzero cells of the core, for finite rows the whole support.
    pub fn cells(&self) -> Vec<(i64, FieldElem)> {
        self.core
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (self.start + i as i64, c))
            .collect()
    }
}

impl PartialEq for Row {
    fn eq(&self, other: &Row) -> bool {
        if self.ctx != other.ctx {
            return false;
        }
        let period = lcm(
            lcm(self.left.len(), other.left.len()),
            lcm(self.right.len(), other.right.len()),
        ) as i64;
        let a = self.start.min(other.start) - period;
        let b = self.core_end().max(other.core_end()) + period;
        (a..b).all(|m| self.value(m) == other.value(m))
    }
}

impl Eq for Row {}

impl fmt::Debug for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = |v: &[FieldElem]| v.iter().map(|&c| self.ctx.fmt_elem(c)).collect::<Vec<_>>().join(",");
        write!(f, "Row(({})* | {}@{} | ({})*)", w(&self.left), w(&self.core), self.start, w(&self.right))
    }
}

/// `sum_j poly_j * row_j`, exact.
pub fn combine(ctx: &FieldCtx, terms: &[(&LaurentPoly, &Row)]) -> Row {
    let terms: Vec<_> = terms.iter().filter(|(p, r)| !p.is_zero() && !r.is_zero()).collect();
    if terms.is_empty() {
        return Row::zero(ctx);
    }
    let mut s = i64::MAX;
    let mut e = i64::MIN;
    let (mut ll, mut lr) = (1usize, 1usize);
    for (p, r) in &terms {
        let (kmin, kmax) = (p.min_exp().unwrap(), p.max_exp().unwrap());
        s = s.min(r.start + kmin);
        e = e.max(r.core_end() + kmax);
        ll = lcm(ll, r.left.len());
        lr = lcm(lr, r.right.len());
    }
    let a = s - ll as i64;
    let b = e + lr as i64;
    let mut out = vec![ctx.zero(); (b - a) as usize];
    for (p, r) in &terms {
        let (kmin, kmax) = (p.min_exp().unwrap(), p.max_exp().unwrap());
        let src_a = a - kmax;
        let src = r.window(src_a, b - kmin);
        for (k, c) in p.terms() {
            let off = (a - k - src_a) as usize;
            for (i, o) in out.iter_mut().enumerate() {
                *o = ctx.add(*o, ctx.mul(c, src[off + i]));
            }
        }
    }
    let left = out[..ll].to_vec();
    let core = out[ll..ll + (e - s) as usize].to_vec();
    let right = out[ll + (e - s) as usize..].to_vec();
    Row::new(ctx, left, core, s, right).expect("nonempty tails")
}

/// One forward step: `R_n = sum_{i=1}^{D} rule_i R_{n-i}`, with `window[j] = R_{n-D+j}`.
pub fn step(ca: &CaSpec, window: &[Row]) -> Row {
    let d = ca.memory();
    assert_eq!(window.len(), d, "window must hold exactly `memory` rows");
    let terms: Vec<(&LaurentPoly, &Row)> = (1..=d).map(|i| (ca.lag(i), &window[d - i])).collect();
    combine(&ca.ctx, &terms)
}

/// Consecutive rows with labels `first_label, first_label + 1, ..`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub first_label: i64,
    pub rows: Vec<Row>,
}

impl Diagram {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last_label(&self) -> i64 {
        self.first_label + self.rows.len() as i64 - 1
    }

    pub fn row(&self, label: i64) -> Option<&Row> {
        usize::try_from(label - self.first_label).ok().and_then(|i| self.rows.get(i))
    }

    pub fn column(&self, m: i64) -> SeqPrefix {
        let ctx = self.rows.first().map(|r| r.ctx.clone()).expect("nonempty diagram");
        SeqPrefix::new(&ctx, self.rows.iter().map(|r| r.value(m)).collect(), Origin::CaColumn)
    }

    /// Rows with labels in `[a, b]`.
    pub fn slice(&self, a: i64, b: i64) -> Diagram {
        let lo = (a - self.first_label).max(0) as usize;
        let hi = ((b - self.first_label + 1).max(0) as usize).min(self.rows.len());
        Diagram { first_label: self.first_label + lo as i64, rows: self.rows[lo.min(hi)..hi].to_vec() }
    }
}

/// The first `n` rows, starting from the spec's initial rows.
pub fn simulate(ca: &CaSpec, n: usize) -> Diagram {
    let d = ca.memory();
    let mut rows: Vec<Row> = ca.rows.iter().take(n).cloned().collect();
    while rows.len() < n {
        let next = step(ca, &rows[rows.len() - d..]);
        rows.push(next);
    }
    Diagram { first_label: ca.first_label, rows }
}

/// Continue a diagram forward until it has `n` rows.
pub fn extend(ca: &CaSpec, diag: &Diagram, n: usize) -> Diagram {
    let d = ca.memory();
    let mut rows = diag.rows.clone();
    assert!(rows.len() >= d, "need at least `memory` rows to continue");
    while rows.len() < n {
        let next = step(ca, &rows[rows.len() - d..]);
        rows.push(next);
    }
    Diagram { first_label: diag.first_label, rows }
}

/// `R_n(m)` for the first `n` rows, computing only the cells inside the
/// backward light cone of column `m` (and inside the support for finite rows).
pub fn column_stream(ca: &CaSpec, m: i64, n: usize) -> Vec<FieldElem> {
    let f = &ca.ctx;
    let d = ca.memory();
    let (l, rr) = ca.radii();
    let (l, rr) = (l as i64, rr as i64);
    let finite = ca.rows.iter().all(Row::is_finite);
    let lags: Vec<(usize, Vec<(i64, FieldElem)>, i64, i64)> = (1..=d)
        .filter(|&i| !ca.lag(i).is_zero())
        .map(|i| {
            let p = ca.lag(i);
            (i, p.terms().collect(), p.min_exp().unwrap(), p.max_exp().unwrap())
        })
        .collect();
    // (a, values): cells a .. a + len; cells outside are zero for finite rows.
    let mut hist: VecDeque<(i64, Vec<FieldElem>)> = VecDeque::with_capacity(d + 1);
    let mut out = Vec::with_capacity(n);
    let last = n as i64 - 1;
    for j in 0..n {
        let lo_cone = m - l * (last - j as i64);
        let hi_cone = m + rr * (last - j as i64);
        let row = if j < d {
            let r = &ca.rows[j];
            let (mut a, mut b) = (lo_cone, hi_cone + 1);
            if finite {
                a = a.max(r.core_start());
                b = b.min(r.core_end());
            }
            if a >= b {
                (0, Vec::new())
            } else {
                (a, r.window(a, b))
            }
        } else {
            let (mut a, mut b) = (lo_cone, hi_cone + 1);
            if finite {
                let (mut sa, mut sb) = (i64::MAX, i64::MIN);
                for (i, _, kmin, kmax) in &lags {
                    let src = &hist[hist.len() - i];
                    if !src.1.is_empty() {
                        sa = sa.min(src.0 + kmin);
                        sb = sb.max(src.0 + src.1.len() as i64 + kmax);
                    }
                }
                a = a.max(sa);
                b = b.min(sb);
            }
            if a >= b {
                (0, Vec::new())
            } else {
                let mut vals = vec![f.zero(); (b - a) as usize];
                for (i, terms, _, _) in &lags {
                    let (sa, src) = &hist[hist.len() - i];
                    if src.is_empty() {
                        continue;
                    }
                    let send = sa + src.len() as i64;
                    for &(k, c) in terms {
                        // cell x reads src at x - k
                        let x0 = a.max(sa + k);
                        let x1 = b.min(send + k);
                        if x0 >= x1 {
                            continue;
                        }
                        let dst = &mut vals[(x0 - a) as usize..(x1 - a) as usize];
                        let s = &src[(x0 - k - sa) as usize..(x1 - k - sa) as usize];
                        if c == f.one() {
                            for (o, &v) in dst.iter_mut().zip(s) {
                                *o = f.add(*o, v);
                            }
                        } else {
                            for (o, &v) in dst.iter_mut().zip(s) {
                                *o = f.add(*o, f.mul(c, v));
                            }
                        }
                    }
                }
                (a, vals)
            }
        };
        let v = if row.1.is_empty() || m < row.0 || m >= row.0 + row.1.len() as i64 {
            if finite || row.1.is_empty() && j >= d {
                f.zero()
            } else {
                ca.rows[j.min(d - 1)].value(m)
            }
        } else {
            row.1[(m - row.0) as usize]
        };
        out.push(v);
        hist.push_back(row);
        if hist.len() > d {
            hist.pop_front();
        }
    }
    out
}

/// Rows `R_{a-steps} .. R_{a-1}` preceding a window `R_a .. R_{a+D-1}` that
/// satisfies the recurrence, obtained from the inverse rule.
pub fn simulate_backward(ca: &CaSpec, window: &[Row], steps: usize) -> Result<Vec<Row>> {
    if !ca.invertible {
        return Err(Error::Engine("spec is not marked invertible".into()));
    }
    let f = &ca.ctx;
    let d = ca.effective_memory();
    if d == 0 {
        return Err(Error::Engine("zero rule has no inverse".into()));
    }
    if window.len() < d {
        return Err(Error::Engine(format!("backward step needs {d} rows, got {}", window.len())));
    }
    let (alpha, s) = ca
        .lag(d)
        .as_monomial()
        .ok_or_else(|| Error::Engine(format!("top lag {} is not a monomial", ca.lag(d))))?;
    let inv = LaurentPoly::monomial(f, f.inv(alpha)?, -s);
    // R_{a-1} = sum_{j=1}^{d} back[j] R_{a-1+j}
    let mut back = vec![LaurentPoly::zero(f); d + 1];
    back[d] = inv.clone();
    for i in 1..d {
        back[d - i] = -&(&inv * ca.lag(i));
    }
    let mut block: VecDeque<Row> = window[..d].iter().cloned().collect();
    let mut out = VecDeque::with_capacity(steps);
    for _ in 0..steps {
        let terms: Vec<(&LaurentPoly, &Row)> = (1..=d).map(|j| (&back[j], &block[j - 1])).collect();
        let prev = combine(f, &terms);
        block.pop_back();
        block.push_front(prev.clone());
        out.push_front(prev);
    }
    Ok(out.into())
}

/// Spec whose initial rows start `steps` rows before label `from`, found by
/// running the rows `from .. from+D-1` of `ca` backward.  The result keeps the
/// rule and target column and drops the provenance.
pub fn rewind(ca: &CaSpec, from: i64, steps: usize) -> Result<CaSpec> {
    if from < ca.first_label {
        return Err(Error::Engine(format!("window start {from} precedes the first row {}", ca.first_label)));
    }
    let memory = ca.memory();
    let need = (from - ca.first_label) as usize + memory;
    let diag = simulate(ca, need);
    let window = diag.rows[need - memory..].to_vec();
    let mut rows = simulate_backward(ca, &window, steps)?;
    rows.extend(window);
    rows.truncate(memory);
    let mut out = ca.clone();
    out.rows = rows;
    out.first_label = from - steps as i64;
    out.provenance = None;
    Ok(out)
}

/// Which part of the rows a [`SeriesPart`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// Finitely supported rows: the numerator expands directly.
    Finite,
    /// Cells `m >= split`; rows are `num_n(x) / (1 - x^period)` expanded toward `+inf`.
    Right { split: i64, period: usize },
    /// Cells `m < split`; rows are `num_n(x) / (1 - x^-period)` expanded toward `-inf`.
    Left { split: i64, period: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPart {
    pub numerator: BiPoly,
    pub tail: Tail,
}

/// `E(t, x) = sum_n R_n(x) t^n` as `sum_parts numerator / denominator`, where
/// `denominator = sum_{i=0}^{D} C_i(x) t^i` with `C_0 = -1` and `C_i = rule_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    pub denominator: BiPoly,
    pub parts: Vec<SeriesPart>,
}

fn row_numerators(ca: &CaSpec, init: &[LaurentPoly]) -> BiPoly {
    let f = &ca.ctx;
    let d = ca.memory();
    let minus_one = LaurentPoly::monomial(f, f.neg(f.one()), 0);
    let mut num = BiPoly::zero(f);
    for n in 0..d {
        let mut acc = &minus_one * &init[n];
        for i in 1..=n {
            acc = &acc + &(ca.lag(i) * &init[n - i]);
        }
        for (k, c) in acc.terms() {
            num.add_term(k, Poly::monomial(f, c, n));
        }
    }
    num
}

/// Rational form of the spacetime diagram generated by the spec.
pub fn spacetime_series(ca: &CaSpec) -> RationalSeries {
    let f = &ca.ctx;
    let d = ca.memory();
    let mut slices = vec![LaurentPoly::monomial(f, f.neg(f.one()), 0)];
    slices.extend((1..=d).map(|i| ca.lag(i).clone()));
    let denominator = BiPoly::from_t_slices(f, &slices);
    if ca.rows.iter().all(Row::is_finite) {
        let init: Vec<LaurentPoly> = ca.rows.iter().map(|r| r.to_laurent().unwrap()).collect();
        let numerator = row_numerators(ca, &init);
        return RationalSeries { denominator, parts: vec![SeriesPart { numerator, tail: Tail::Finite }] };
    }
    let split = ca.rows.iter().map(Row::core_start).min().unwrap_or(0);
    let lr = ca.rows.iter().fold(1, |a, r| lcm(a, r.right.len()));
    let ll = ca.rows.iter().fold(1, |a, r| lcm(a, r.left.len()));
    let end = ca.rows.iter().map(Row::core_end).max().unwrap_or(0).max(split);
    // Right part times (1 - x^lr) is supported on [split, end + lr).
    let right: Vec<LaurentPoly> = ca
        .rows
        .iter()
        .map(|r| {
            let terms = (split..end + lr as i64).map(|m| {
                let prev = if m - (lr as i64) >= split { r.value(m - lr as i64) } else { f.zero() };
                (m, f.sub(r.value(m), prev))
            });
            LaurentPoly::from_terms(f, terms)
        })
        .collect();
    // Left part times (1 - x^-ll) is supported on [split - ll, split).
    let left: Vec<LaurentPoly> = ca
        .rows
        .iter()
        .map(|r| {
            let terms = (split - ll as i64..split).map(|m| {
                let prev = if m + (ll as i64) < split { r.value(m + ll as i64) } else { f.zero() };
                (m, f.sub(r.value(m), prev))
            });
            LaurentPoly::from_terms(f, terms)
        })
        .collect();
    RationalSeries {
        denominator,
        parts: vec![
            SeriesPart { numerator: row_numerators(ca, &right), tail: Tail::Right { split, period: lr } },
            SeriesPart { numerator: row_numerators(ca, &left), tail: Tail::Left { split, period: ll } },
        ],
    }
}

impl RationalSeries {
    /// The first `n` rows of the formal expansion in `t`.
    pub fn expand(&self, n: usize) -> Vec<Row> {
        let f = self.denominator.ctx().clone();
        let slices = self.denominator.t_slices();
        let mut rows = vec![Row::zero(&f); n];
        for part in &self.parts {
            let nums = part.numerator.t_slices();
            let mut seq: Vec<LaurentPoly> = Vec::with_capacity(n);
            for k in 0..n {
                // -M_k + sum_{i>=1} C_i M_{k-i} = N_k
                let mut acc = nums.get(k).cloned().unwrap_or_else(|| LaurentPoly::zero(&f));
                acc = -&acc;
                for (i, c) in slices.iter().enumerate().skip(1) {
                    if i <= k {
                        acc = &acc + &(c * &seq[k - i]);
                    }
                }
                seq.push(acc);
            }
            for (row, m) in rows.iter_mut().zip(&seq) {
                *row = row.add(&tail_row(&f, m, part.tail));
            }
        }
        rows
    }

    /// The numerator when the rows are finitely supported.
    pub fn numerator(&self) -> Option<&BiPoly> {
        match self.parts.as_slice() {
            [SeriesPart { numerator, tail: Tail::Finite }] => Some(numerator),
            _ => None,
        }
    }
}

fn tail_row(f: &FieldCtx, m: &LaurentPoly, tail: Tail) -> Row {
    let (lo, hi) = match (m.min_exp(), m.max_exp()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Row::zero(f),
    };
    match tail {
        Tail::Finite => Row::from_laurent(m),
        Tail::Right { period, .. } => {
            let l = period as i64;
            let v = |x: i64| {
                let mut acc = f.zero();
                let mut y = x;
                while y >= lo {
                    if y <= hi {
                        acc = f.add(acc, m.coeff(y));
                    }
                    y -= l;
                }
                acc
            };
            let core = (lo..=hi).map(v).collect();
            let right = (hi + 1..hi + 1 + l).map(v).collect();
            Row::new(f, vec![f.zero()], core, lo, right).expect("nonempty tails")
        }
        Tail::Left { period, .. } => {
            let l = period as i64;
            let v = |x: i64| {
                let mut acc = f.zero();
                let mut y = x;
                while y <= hi {
                    if y >= lo {
                        acc = f.add(acc, m.coeff(y));
                    }
                    y += l;
                }
                acc
            };
            let core = (lo..=hi).map(v).collect();
            let left = (lo - l..lo).map(v).collect();
            Row::new(f, left, core, lo, vec![f.zero()]).expect("nonempty tails")
        }
    }
}

/// Tuning for [`guess_dfao_with`].
#[derive(Clone, Copy, Debug)]
pub struct GuessOptions {
    pub max_states: usize,
    /// Shortest overlap accepted as evidence that two kernel sequences agree.
    pub min_window: usize,
}

impl Default for GuessOptions {
    fn default() -> Self {
        GuessOptions { max_states: 64, min_window: 32 }
    }
}

/// A heuristic automaton consistent with a finite prefix.
#[derive(Clone, Debug)]
pub struct CandidateDfao {
    pub dfao: Dfao,
    /// Terms of the prefix the candidate was built from and checked against.
    pub prefix_len: usize,
    pub horizon: usize,
}

#[derive(Clone, Debug)]
pub enum Guess {
    Found(CandidateDfao),
    NoCandidate(String),
}

impl Guess {
    pub fn candidate(&self) -> Option<&CandidateDfao> {
        match self {
            Guess::Found(c) => Some(c),
            Guess::NoCandidate(_) => None,
        }
    }
}

pub fn guess_dfao(s: &SeqPrefix, k: u32, horizon: usize) -> Guess {
    guess_dfao_with(s, k, horizon, GuessOptions::default())
}

/// Kernel closure on prefix windows.  A subsequence `n -> u_{k^j n + r}` is
/// merged into an earlier one when both windows agree on their whole overlap.
pub fn guess_dfao_with(s: &SeqPrefix, k: u32, horizon: usize, opts: GuessOptions) -> Guess {
    if k < 2 {
        return Guess::NoCandidate(format!("base {k} is below 2"));
    }
    if s.len() < 4 * horizon || s.is_empty() {
        return Guess::NoCandidate(format!("prefix of {} terms is shorter than 4 x {horizon}", s.len()));
    }
    let n = s.len() as u64;
    let kk = k as u64;
    let subseq = |step: u64, r: u64| -> Vec<FieldElem> {
        (0..).map(|i| r + step * i).take_while(|&x| x < n).map(|x| s.values[x as usize]).collect()
    };
    // (step = k^j, offset r, window)
    let mut states: Vec<(u64, u64, Vec<FieldElem>)> = vec![(1, 0, s.values.clone())];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (step, r) = (states[i].0, states[i].1);
        let mut row = Vec::with_capacity(k as usize);
        for digit in 0..kk {
            let Some(cstep) = step.checked_mul(kk) else {
                return Guess::NoCandidate("kernel depth overflow".into());
            };
            let cr = r + digit * step;
            let w = subseq(cstep, cr);
            if w.len() < opts.min_window {
                return Guess::NoCandidate(format!(
                    "kernel window (u_{{{cstep}n+{cr}}}) has only {} terms",
                    w.len()
                ));
            }
            let hit = states.iter().position(|(_, _, v)| {
                let o = v.len().min(w.len());
                o >= opts.min_window && v[..o] == w[..o]
            });
            let t = match hit {
                Some(t) => t,
                None => {
                    if states.len() >= opts.max_states {
                        return Guess::NoCandidate(format!("more than {} kernel states", opts.max_states));
                    }
                    states.push((cstep, cr, w));
                    states.len() - 1
                }
            };
            row.push(t);
        }
        delta.push(row);
        i += 1;
    }
    let names = (0..states.len()).map(|i| format!("q{i}")).collect();
    let outputs = states.iter().map(|(_, _, w)| w[0]).collect();
    let dfao = match Dfao::new(&s.ctx, k, names, outputs, delta, 0) {
        Ok(d) => d.minimize(),
        Err(e) => return Guess::NoCandidate(e.to_string()),
    };
    if let Some(bad) = (0..s.len()).find(|&i| dfao.eval(i as u64) != s.values[i]) {
        return Guess::NoCandidate(format!("closure disagrees with the prefix at n = {bad}"));
    }
    Guess::Found(CandidateDfao { dfao, prefix_len: s.len(), horizon })
}
