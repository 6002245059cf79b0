//! Bring an equation `B(t) + sum_i A_i(t) x^{p^i} = 0` for `F(t)` into the
//! normalized shape `P(t, x)` with `A_0(0) != 0` and `B(0) = A_i(0) = 0`
//! satisfied by a shifted tail of the sequence.

use std::fmt;

use crate::bipoly::BiPoly;
use crate::christol::{verify_equation, verify_poly, OreEquation};
use crate::dfao::SeqPrefix;
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::poly::{LaurentPoly, Poly};

#[derive(Clone, Debug)]
pub struct NormalizedEquation {
    /// `A_0(t) x + A_1(t) x^p + .. + A_m(t) x^{p^m} + B(t)`.
    pub p: BiPoly,
    pub m: u32,
    /// `P(t, G(t)) = 0` for `G(t) = sum_{n >= 1} u_{n+r} t^n`.
    pub r: usize,
    /// Number of terms consumed while clearing `t` from `A_0`.
    pub r_star: usize,
    /// `u_0 .. u_r`.
    pub consumed: Vec<FieldElem>,
    /// `t`-degree of `P`.
    pub d: usize,
    /// `C_0(x) .. C_d(x)` with `P = sum_i C_i(x) t^i`.
    pub slices: Vec<LaurentPoly>,
    /// Equation after the `p`-th root passes.
    pub reduced: OreEquation,
    /// Equation satisfied by `sum_n u_{n + r_star} t^n`, with `t` not dividing `A_0`.
    pub stripped: OreEquation,
}

impl NormalizedEquation {
    pub fn a(&self, i: u32) -> Poly {
        self.p.coeff((self.p.ctx().p() as i64).pow(i))
    }

    pub fn b(&self) -> Poly {
        self.p.coeff(0)
    }

    /// `C_d(x)` is a single monomial, which makes the synthesized automaton invertible.
    pub fn top_slice_is_monomial(&self) -> bool {
        self.slices.last().is_some_and(|c| c.as_monomial().is_some())
    }

    /// The checks every normalized equation must pass; `s` is the source prefix.
    pub fn check(&self, s: &SeqPrefix) -> Result<()> {
        let f = self.p.ctx();
        let fail = |what: &str| Err(Error::Normalize(format!("{what} fails for P = {}", self.p)));
        if self.a(0).coeff(0).is_zero() {
            return fail("A_0(0) != 0");
        }
        if !self.b().coeff(0).is_zero() {
            return fail("B(0) = 0");
        }
        if (1..=self.m).any(|i| !self.a(i).coeff(0).is_zero()) {
            return fail("A_i(0) = 0");
        }
        if self.slices.first() != Some(&LaurentPoly::monomial(f, self.a(0).coeff(0), 1)) {
            return fail("C_0(x) = A_0(0) x");
        }
        if BiPoly::from_t_slices(f, &self.slices) != self.p {
            return fail("slice reassembly");
        }
        if self.consumed.len() != self.r + 1 || s.values[..=self.r] != self.consumed[..] {
            return fail("consumed prefix");
        }
        if !annihilates_tail(&self.p, s, self.r) {
            return fail("P(t, G(t)) = 0");
        }
        Ok(())
    }
}

impl fmt::Display for NormalizedEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

/// Does `P(t, sum_{n >= 1} u_{n+r} t^n)` vanish modulo `t^{N - r - d}`?
pub fn annihilates_tail(p: &BiPoly, s: &SeqPrefix, r: usize) -> bool {
    let f = &s.ctx;
    if s.len() <= r + 1 {
        return false;
    }
    let mut g = vec![f.zero()];
    g.extend_from_slice(&s.values[r + 1..]);
    let n = g.len();
    let d = p.t_degree().unwrap_or(0);
    if n <= d {
        return false;
    }
    p.eval_series(&Poly::new(f, g), n - d).is_ok_and(|v| v.is_zero())
}

/// Repeated `p`-th roots until `x^1` has a nonzero coefficient.
pub fn reduce_to_linear_term(eq: &OreEquation, s: &SeqPrefix) -> Result<OreEquation> {
    let f = eq.ctx();
    let p = f.p();
    let mut cur = eq.clone();
    while cur.poly().coeff(1).is_zero() {
        let classes: Vec<BiPoly> = (0..p as usize)
            .map(|c| {
                BiPoly::from_terms(
                    f,
                    cur.poly().terms().map(|(k, a)| {
                        let part = &a.residue_split(p)[c];
                        let root = Poly::new(f, part.coeffs().iter().map(|&v| f.frobenius_inv(v)).collect());
                        (k / p as i64, root)
                    }),
                )
            })
            .collect();
        let next = classes
            .into_iter()
            .filter(|b| b.x_degree().is_some_and(|k| k >= 1))
            .filter_map(|b| OreEquation::new(b).ok())
            .find(|e| verify_equation(e, s))
            .ok_or_else(|| {
                Error::Normalize(format!("no residue class of `{cur}` gives a valid relation"))
            })?;
        cur = next;
    }
    Ok(cur)
}

/// Substitute `x -> u_j + t x` and divide by the `t`-content until `t` no longer
/// divides the coefficient of `x`.  Returns the equation for `sum_n u_{n+r*} t^n` and `r*`.
pub fn strip_t_divisibility(eq: &OreEquation, s: &SeqPrefix) -> Result<(OreEquation, usize)> {
    let f = eq.ctx();
    if eq.poly().coeff(1).is_zero() {
        return Err(Error::Normalize(format!("`{eq}` has no x term")));
    }
    let d = eq.poly().t_degree().unwrap_or(0);
    let bound = 4 * (d + 1) * (f.p() as usize).pow(eq.top_index());
    let mut cur = eq.poly().clone();
    let mut j = 0;
    while cur.coeff(1).coeff(0).is_zero() {
        if j >= bound {
            return Err(Error::Normalize(format!("t still divides A_0 after {bound} substitutions")));
        }
        let u = *s.values.get(j).ok_or_else(|| Error::Normalize("sequence prefix exhausted".into()))?;
        let sub = cur.shift_subst(&[u])?;
        let content = sub.t_content()?;
        cur = sub.div_t_pow(content).expect("t-content divides");
        j += 1;
        if !verify_poly(&cur, s, j) {
            return Err(Error::Normalize(format!("`{cur}` fails on the shifted sequence after {j} steps")));
        }
    }
    Ok((OreEquation::new(cur)?, j))
}

/// `E*(u_{r*} + .. + u_r t^{r-r*} + t^{r-r*} x) / t^{r-r*}`.
fn shifted(stripped: &OreEquation, s: &SeqPrefix, r_star: usize, r: usize) -> Result<BiPoly> {
    let f = stripped.ctx();
    let k = r - r_star;
    let head = s
        .values
        .get(r_star..=r)
        .ok_or_else(|| Error::Normalize("sequence prefix exhausted".into()))?;
    let sub = stripped.poly().substitute(&Poly::new(f, head.to_vec()), k)?;
    sub.div_t_pow(k)
        .ok_or_else(|| Error::Normalize(format!("t^{k} does not divide the substituted equation")))
}

fn finish(
    reduced: OreEquation,
    stripped: OreEquation,
    r_star: usize,
    r: usize,
    s: &SeqPrefix,
) -> Result<NormalizedEquation> {
    let p = shifted(&stripped, s, r_star, r)?;
    let neq = NormalizedEquation {
        m: stripped.top_index(),
        r,
        r_star,
        consumed: s.values[..=r].to_vec(),
        d: p.t_degree().unwrap_or(0),
        slices: p.t_slices(),
        p,
        reduced,
        stripped,
    };
    neq.check(s)?;
    Ok(neq)
}

fn prepare(eq: &OreEquation, s: &SeqPrefix) -> Result<(OreEquation, OreEquation, usize)> {
    if !verify_equation(eq, s) {
        return Err(Error::Normalize(format!("`{eq}` is not satisfied by the sequence")));
    }
    let reduced = reduce_to_linear_term(eq, s)?;
    let (stripped, r_star) = strip_t_divisibility(&reduced, s)?;
    Ok((reduced, stripped, r_star))
}

/// Least shift: `r = r* + 1`.
pub fn normalize(eq: &OreEquation, s: &SeqPrefix) -> Result<NormalizedEquation> {
    let (reduced, stripped, r_star) = prepare(eq, s)?;
    finish(reduced, stripped, r_star, r_star + 1, s)
}

/// Shift chosen so that the top `t`-degree of `P` sits only in the `x^{p^m}`
/// coefficient and `u_r = 0`, making `C_d(x)` a monomial.
pub fn normalize_invertible(eq: &OreEquation, s: &SeqPrefix, search_bound: usize) -> Result<NormalizedEquation> {
    let (reduced, stripped, r_star) = prepare(eq, s)?;
    let f = s.ctx.clone();
    let top = (f.p() as i64).pow(stripped.top_index());
    let limit = (r_star + search_bound).min(s.len().saturating_sub(1));
    let top_only = |r2: usize| -> Result<bool> {
        let head = Poly::new(&f, s.values[r_star..=r2].to_vec());
        let q = stripped.poly().substitute(&head, r2 - r_star + 1)?;
        let d = q.t_degree().unwrap_or(0);
        let only = q.terms().all(|(k, a)| k == top || a.degree() < Some(d));
        Ok(only)
    };
    let mut r2 = r_star;
    while !top_only(r2)? {
        r2 += 1;
        if r2 >= limit {
            return Err(Error::Normalize(format!("no qualifying shift below {limit}")));
        }
    }
    let r = (r2 + 1..limit)
        .find(|&r| s.values[r].is_zero())
        .ok_or_else(|| Error::Normalize(format!("no zero term u_r with {} <= r < {limit}", r2 + 1)))?;
    let neq = finish(reduced, stripped, r_star, r, s)?;
    if neq.d > 0 && !neq.top_slice_is_monomial() {
        return Err(Error::Normalize(format!("top slice of `{}` is not a monomial", neq.p)));
    }
    Ok(neq)
}

/// The permutation used when a sequence has no zero term: swap the most
/// frequent value among the first 256 terms with 0.  `None` when 0 already occurs.
pub fn default_relabel(s: &SeqPrefix) -> Option<FieldElem> {
    let head = &s.values[..s.len().min(256)];
    if head.iter().any(|v| v.is_zero()) {
        return None;
    }
    let mut counts = std::collections::BTreeMap::new();
    for v in head {
        *counts.entry(v.index()).or_insert(0usize) += 1;
    }
    let (&idx, _) = counts.iter().max_by_key(|(&i, &c)| (c, std::cmp::Reverse(i)))?;
    s.ctx.elem(idx)
}

/// Swap `a` and 0.
pub fn swap_with_zero(a: FieldElem) -> impl Fn(FieldElem) -> FieldElem {
    move |v| {
        if v == a {
            FieldElem::ZERO
        } else if v.is_zero() {
            a
        } else {
            v
        }
    }
}

/// Both `A_m` and `B` are monomials of degree `d`.
pub fn is_embeddable(neq: &NormalizedEquation) -> bool {
    match (neq.a(neq.m).as_monomial(), neq.b().as_monomial()) {
        (Some((_, i)), Some((_, j))) => i == neq.d && j == neq.d,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfao::{Dfao, Origin};
    use crate::field::FieldCtx;

    fn f2() -> FieldCtx {
        FieldCtx::prime(2).unwrap()
    }

    fn tm() -> SeqPrefix {
        Dfao::parse(include_str!("../fixtures/thue_morse.dfao")).unwrap().prefix(1024)
    }

    fn eq(s: &str) -> OreEquation {
        OreEquation::parse(&f2(), s).unwrap()
    }

    #[test]
    fn thue_morse_chain() {
        let e = eq("t*x + (1+t)*x^2 + (1+t^4)*x^4");
        let s = tm();
        assert_eq!(reduce_to_linear_term(&e, &s).unwrap(), e);
        let (st, r) = strip_t_divisibility(&e, &s).unwrap();
        assert_eq!(st.to_string(), "x + (1+t)*x^2 + (t^2+t^6)*x^4");
        assert_eq!(r, 1);
        let n = normalize(&e, &s).unwrap();
        assert_eq!(n.p.to_string(), "(t^2+t^9) + x + (t+t^2)*x^2 + (t^5+t^9)*x^4");
        assert_eq!((n.r, n.d), (2, 9));
        assert!(!is_embeddable(&n));
    }

    #[test]
    fn square_of_x_reduces() {
        let zero = SeqPrefix::new(&f2(), vec![f2().zero(); 256], Origin::Dfao);
        assert_eq!(reduce_to_linear_term(&eq("x^2"), &zero).unwrap().to_string(), "x");
    }

    #[test]
    fn unit_coefficient_needs_no_strip() {
        let zero = SeqPrefix::new(&f2(), vec![f2().zero(); 256], Origin::Dfao);
        let (e, r) = strip_t_divisibility(&eq("x + t*x^2"), &zero).unwrap();
        assert_eq!((e.to_string().as_str(), r), ("x + t*x^2", 0));
    }

    #[test]
    fn embeddable_shape() {
        let zero = SeqPrefix::new(&f2(), vec![f2().zero(); 256], Origin::Dfao);
        let mut n = normalize(&eq("x"), &zero).unwrap();
        n.p = BiPoly::parse(&f2(), "t + x + t*x^2").unwrap();
        n.m = 1;
        n.d = 1;
        assert!(is_embeddable(&n));
    }

    #[test]
    fn relabel_picks_most_frequent() {
        let f = FieldCtx::prime(3).unwrap();
        let vals = [1, 2, 2, 1, 2].iter().map(|&i| f.from_int(i)).collect();
        let s = SeqPrefix::new(&f, vals, Origin::Dfao);
        assert_eq!(default_relabel(&s), Some(f.from_int(2)));
        assert_eq!(swap_with_zero(f.from_int(2))(f.zero()), f.from_int(2));
    }
}
