//! Dense univariate polynomials, Laurent polynomials and rational functions over `F_q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// A polynomial in one variable with `F_q` coefficients, indexed by exponent.
/// The zero polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ctx: FieldCtx,
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn new(ctx: &FieldCtx, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        Poly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Self::constant(ctx, ctx.one())
    }

    pub fn constant(ctx: &FieldCtx, c: FieldElem) -> Self {
        Self::new(ctx, vec![c])
    }

    /// `c * t^deg`
    pub fn monomial(ctx: &FieldCtx, c: FieldElem, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero(ctx);
        }
        let mut coeffs = vec![ctx.zero(); deg + 1];
        coeffs[deg] = c;
        Poly { ctx: ctx.clone(), coeffs }
    }

    /// Sum of `t^e` over the listed exponents (repeated exponents add).
    pub fn from_exponents(ctx: &FieldCtx, exps: &[usize]) -> Self {
        let mut coeffs = vec![ctx.zero(); exps.iter().max().map_or(0, |m| m + 1)];
        for &e in exps {
            coeffs[e] = ctx.add(coeffs[e], ctx.one());
        }
        Self::new(ctx, coeffs)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn lead(&self) -> FieldElem {
        self.coeffs.last().copied().unwrap_or_default()
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Exponent of the lowest nonzero term.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, FieldElem)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (i, c))
    }

    /// `Some((c, k))` when the polynomial is exactly `c t^k`.
    pub fn as_monomial(&self) -> Option<(FieldElem, usize)> {
        let mut it = self.terms();
        let first = it.next()?;
        it.next().is_none().then_some((first.1, first.0))
    }

    pub fn scale(&self, c: FieldElem) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.ctx.zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { ctx: self.ctx.clone(), coeffs }
    }

    /// Exact division by `t^k`; `None` if some retained term would be lost.
    pub fn div_t_pow(&self, k: usize) -> Option<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(&self.ctx, self.coeffs.get(k..).unwrap_or(&[]).to_vec()))
    }

    /// Truncate to terms of degree `< n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().take(n).copied().collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.ctx.inv(self.lead()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// `(quotient, remainder)` with `self = q*b + r`, `deg r < deg b`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let f = &self.ctx;
        let lead_inv = f.inv(b.lead())?;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![f.zero(); r.len() - db];
        for k in (0..quot.len()).rev() {
            let c = f.mul(r[k + db], lead_inv);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &bi) in b.coeffs.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, bi));
            }
        }
        r.truncate(db);
        Ok((Poly::new(f, quot), Poly::new(f, r)))
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let g = self.gcd(other);
        let (q, _) = (self * other).divmod(&g).expect("nonzero gcd");
        q.monic()
    }

    /// `a(t)^p`: Frobenius on coefficients and exponents times `p`.
    pub fn frobenius(&self) -> Poly {
        self.frobenius_pow(1)
    }

    /// `a(t)^(p^j)`.
    pub fn frobenius_pow(&self, j: u32) -> Poly {
        let f = &self.ctx;
        let step = (f.p() as usize).pow(j);
        let mut coeffs = vec![f.zero(); self.degree().map_or(0, |d| d * step + 1)];
        for (i, c) in self.terms() {
            coeffs[i * step] = f.frobenius(c, j);
        }
        Poly::new(f, coeffs)
    }

    /// Substitute `t -> t^k`.
    pub fn inflate(&self, k: usize) -> Poly {
        let f = &self.ctx;
        let mut coeffs = vec![f.zero(); self.degree().map_or(0, |d| d * k + 1)];
        for (i, c) in self.terms() {
            coeffs[i * k] = c;
        }
        Poly::new(f, coeffs)
    }

    /// The unique `r` with `r(t)^p = self`. Every exponent must be divisible by `p`.
    pub fn pth_root(&self, p: u32) -> Result<Poly> {
        let f = &self.ctx;
        debug_assert_eq!(p, f.p());
        let p = p as usize;
        if let Some((e, _)) = self.terms().find(|(e, _)| e % p != 0) {
            return Err(Error::NotPthPower { poly: self.to_string(), exponent: e, p: p as u32 });
        }
        let mut coeffs = vec![f.zero(); self.degree().map_or(0, |d| d / p + 1)];
        for (i, c) in self.terms() {
            coeffs[i / p] = f.frobenius_inv(c);
        }
        Ok(Poly::new(f, coeffs))
    }

    /// `(a_0, .., a_{p-1})` with `self(t) = sum_s t^s a_s(t^p)`.
    pub fn residue_split(&self, p: u32) -> Vec<Poly> {
        let f = &self.ctx;
        let p = p as usize;
        let mut parts = vec![Vec::new(); p];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let part = &mut parts[i % p];
            let k = i / p;
            if part.len() <= k {
                part.resize(k + 1, f.zero());
            }
            part[k] = c;
        }
        parts.into_iter().map(|c| Poly::new(f, c)).collect()
    }

    /// Inverse of [`residue_split`](Self::residue_split).
    pub fn reassemble(ctx: &FieldCtx, parts: &[Poly]) -> Poly {
        let p = parts.len();
        parts
            .iter()
            .enumerate()
            .fold(Poly::zero(ctx), |acc, (s, a)| &acc + &a.inflate(p).shift(s))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.ctx;
        let coeffs =
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_int(i as i64), c));
        Poly::new(f, coeffs.collect())
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = &self.ctx;
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    fn zip_with(&self, other: &Poly, op: impl Fn(FieldElem, FieldElem) -> FieldElem) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| op(self.coeff(i), other.coeff(i))).collect();
        Poly::new(&self.ctx, coeffs)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.zip_with(rhs, |a, b| self.ctx.add(a, b))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.zip_with(rhs, |a, b| self.ctx.sub(a, b))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(&self.ctx, self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let f = &self.ctx;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.terms() {
            for (j, b) in rhs.terms() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, &self.ctx, self.terms().map(|(i, c)| (i as i64, c)), "t")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Render `sum c_i v^i` as `1+t+2*t^3`; `0` when empty.
pub(crate) fn write_sum(
    f: &mut fmt::Formatter<'_>,
    ctx: &FieldCtx,
    terms: impl Iterator<Item = (i64, FieldElem)>,
    var: &str,
) -> fmt::Result {
    let mut first = true;
    for (i, c) in terms {
        if !first {
            f.write_str("+")?;
        }
        first = false;
        f.write_str(&term_string(ctx, c, i, var))?;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

pub(crate) fn term_string(ctx: &FieldCtx, c: FieldElem, i: i64, var: &str) -> String {
    let mono = match i {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{i}"),
    };
    if mono.is_empty() {
        ctx.fmt_elem(c)
    } else if c == ctx.one() {
        mono
    } else {
        format!("{}*{mono}", ctx.fmt_elem(c))
    }
}

/// A Laurent polynomial `sum_{k >= low} c_k x^k` (finitely many terms).
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    ctx: FieldCtx,
    low: i64,
    coeffs: Vec<FieldElem>,
}

impl LaurentPoly {
    pub fn new(ctx: &FieldCtx, low: i64, coeffs: Vec<FieldElem>) -> Self {
        let mut lp = LaurentPoly { ctx: ctx.clone(), low, coeffs };
        lp.normalize();
        lp
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        LaurentPoly { ctx: ctx.clone(), low: 0, coeffs: Vec::new() }
    }

    pub fn monomial(ctx: &FieldCtx, c: FieldElem, k: i64) -> Self {
        Self::new(ctx, k, vec![c])
    }

    pub fn from_poly(p: &Poly) -> Self {
        Self::new(p.ctx(), 0, p.coeffs().to_vec())
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents add.
    pub fn from_terms(ctx: &FieldCtx, terms: impl IntoIterator<Item = (i64, FieldElem)>) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::zero(ctx);
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![ctx.zero(); (hi - lo + 1) as usize];
        for (k, c) in terms {
            let slot = &mut coeffs[(k - lo) as usize];
            *slot = ctx.add(*slot, c);
        }
        Self::new(ctx, lo, coeffs)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> FieldElem {
        if k < self.low {
            return FieldElem::ZERO;
        }
        self.coeffs.get((k - self.low) as usize).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.low + i as i64, c))
    }

    pub fn as_monomial(&self) -> Option<(FieldElem, i64)> {
        let mut it = self.terms();
        let first = it.next()?;
        it.next().is_none().then_some((first.1, first.0))
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { ctx: self.ctx.clone(), low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: FieldElem) -> Self {
        Self::new(&self.ctx, self.low, self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect())
    }

    /// `Some(poly)` when no negative exponents occur.
    pub fn to_poly(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero(&self.ctx));
        }
        if self.low < 0 {
            return None;
        }
        let mut c = vec![self.ctx.zero(); self.low as usize];
        c.extend_from_slice(&self.coeffs);
        Some(Poly::new(&self.ctx, c))
    }

    /// Exact division by a monomial `c x^k`.
    pub fn div_monomial(&self, c: FieldElem, k: i64) -> Result<Self> {
        let inv = self.ctx.inv(c)?;
        Ok(self.scale(inv).shift(-k))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let f = &self.ctx;
        LaurentPoly::from_terms(f, self.terms().chain(rhs.terms()))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::new(&self.ctx, self.low, self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect())
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let f = &self.ctx;
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        LaurentPoly::new(f, self.low + rhs.low, out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            f.write_str(&term_string(&self.ctx, c, k, "x"))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// An element of `F_q(t)`, kept reduced with a monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        let f = num.ctx().clone();
        if num.is_zero() {
            return RatFun { num, den: Poly::one(&f) };
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.divmod(&g).expect("gcd nonzero");
        let (mut d, _) = den.divmod(&g).expect("gcd nonzero");
        let lead = d.lead();
        if lead != f.one() {
            let inv = f.inv(lead).expect("nonzero");
            n = n.scale(inv);
            d = d.scale(inv);
        }
        RatFun { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.ctx());
        RatFun { num: p, den: one }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        Self::from_poly(Poly::zero(ctx))
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Self::from_poly(Poly::one(ctx))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Re-run the reduction; a no-op on values built through this API.
    pub fn reduced(&self) -> Self {
        Self::reduce(self.num.clone(), self.den.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &RatFun) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFun::reduce(num, &self.den * &rhs.den)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}
