//! Polynomials in `t` and `x` (Laurent in `x`), plus the textual literal syntax
//! shared by fixtures and CLI output, e.g. `(t^2+t^9) + x + (t+t^2)*x^2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::poly::{term_string, LaurentPoly, Poly};

/// `sum_k c_k(t) x^k` with `c_k` in `F_q[t]` and `k` any integer.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    ctx: FieldCtx,
    terms: BTreeMap<i64, Poly>,
}

impl BiPoly {
    pub fn zero(ctx: &FieldCtx) -> Self {
        BiPoly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    /// `c(t) x^k`
    pub fn term(c: Poly, k: i64) -> Self {
        let mut b = Self::zero(c.ctx());
        b.add_term(k, c);
        b
    }

    pub fn from_terms(ctx: &FieldCtx, terms: impl IntoIterator<Item = (i64, Poly)>) -> Self {
        let mut b = Self::zero(ctx);
        for (k, c) in terms {
            b.add_term(k, c);
        }
        b
    }

    /// The variable `x`.
    pub fn x(ctx: &FieldCtx) -> Self {
        Self::term(Poly::one(ctx), 1)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: i64, c: Poly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&k) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
    }

    /// Coefficient of `x^k` (zero when absent).
    pub fn coeff(&self, k: i64) -> Poly {
        self.terms.get(&k).cloned().unwrap_or_else(|| Poly::zero(&self.ctx))
    }

    /// `(x-exponent, t-polynomial)` pairs in ascending `x` order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Poly)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn x_exponents(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    pub fn x_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn x_min(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(Poly::degree).max()
    }

    /// Largest `k` with `t^k` dividing every coefficient.
    pub fn t_content(&self) -> Result<usize> {
        self.terms
            .values()
            .filter_map(Poly::valuation)
            .min()
            .ok_or_else(|| Error::Parse("t-content of the zero polynomial".into()))
    }

    pub fn div_t_pow(&self, k: usize) -> Option<Self> {
        let mut out = Self::zero(&self.ctx);
        for (&e, c) in &self.terms {
            out.add_term(e, c.div_t_pow(k)?);
        }
        Some(out)
    }

    pub fn mul_poly(&self, c: &Poly) -> Self {
        Self::from_terms(&self.ctx, self.terms.iter().map(|(&k, a)| (k, a * c)))
    }

    pub fn scale(&self, c: FieldElem) -> Self {
        Self::from_terms(&self.ctx, self.terms.iter().map(|(&k, a)| (k, a.scale(c))))
    }

    /// Multiply by `x^k`.
    pub fn shift_x(&self, k: i64) -> Self {
        Self::from_terms(&self.ctx, self.terms.iter().map(|(&e, a)| (e + k, a.clone())))
    }

    /// `self^(p^j)`: exact in characteristic `p`.
    pub fn frobenius_pow(&self, j: u32) -> Self {
        let step = (self.ctx.p() as i64).pow(j);
        Self::from_terms(&self.ctx, self.terms.iter().map(|(&k, a)| (k * step, a.frobenius_pow(j))))
    }

    /// `self^n`, using the base-`p` digits of `n` and Frobenius for each digit position.
    pub fn pow(&self, n: u64) -> Self {
        let p = self.ctx.p() as u64;
        let mut result = Self::term(Poly::one(&self.ctx), 0);
        let mut n = n;
        let mut j = 0u32;
        while n > 0 {
            let digit = n % p;
            if digit > 0 {
                let base = self.frobenius_pow(j);
                for _ in 0..digit {
                    result = &result * &base;
                }
            }
            n /= p;
            j += 1;
        }
        result
    }

    /// Substitute `x -> c_0 + c_1 t + .. + c_{k-1} t^{k-1} + t^k x` and expand.
    pub fn shift_subst(&self, c: &[FieldElem]) -> Result<Self> {
        self.substitute(&Poly::new(&self.ctx, c.to_vec()), c.len())
    }

    /// Substitute `x -> s(t) + t^k x` and expand.
    pub fn substitute(&self, s: &Poly, k: usize) -> Result<Self> {
        if self.x_min().is_some_and(|e| e < 0) {
            return Err(Error::Normalize("substitution into negative powers of x".into()));
        }
        let f = &self.ctx;
        let mut image = Self::term(s.clone(), 0);
        image.add_term(1, Poly::monomial(f, f.one(), k));
        let mut out = Self::zero(f);
        for (&e, a) in &self.terms {
            out = &out + &image.pow(e as u64).mul_poly(a);
        }
        Ok(out)
    }

    /// `P = sum_i C_i(x) t^i`: the slices `C_0 .. C_d`.
    pub fn t_slices(&self) -> Vec<LaurentPoly> {
        let f = &self.ctx;
        let d = match self.t_degree() {
            Some(d) => d,
            None => return Vec::new(),
        };
        (0..=d)
            .map(|i| LaurentPoly::from_terms(f, self.terms.iter().map(|(&k, a)| (k, a.coeff(i)))))
            .collect()
    }

    pub fn from_t_slices(ctx: &FieldCtx, slices: &[LaurentPoly]) -> Self {
        let mut out = Self::zero(ctx);
        for (i, s) in slices.iter().enumerate() {
            for (k, c) in s.terms() {
                out.add_term(k, Poly::monomial(ctx, c, i));
            }
        }
        out
    }

    pub fn x_derivative(&self) -> Self {
        let f = &self.ctx;
        Self::from_terms(f, self.terms.iter().map(|(&k, a)| (k - 1, a.scale(f.from_int(k)))))
    }

    /// True when every `x`-exponent is `0` or a power of `p`.
    pub fn is_ore_form(&self) -> bool {
        let p = self.ctx.p() as i64;
        self.terms.keys().all(|&k| {
            if k < 0 {
                return false;
            }
            let mut k = k;
            if k == 0 {
                return true;
            }
            while k % p == 0 {
                k /= p;
            }
            k == 1
        })
    }

    /// `sum_k c_k(t) g(t)^k mod t^m` for a power series `g` known modulo `t^m`.
    pub fn eval_series(&self, g: &Poly, m: usize) -> Result<Poly> {
        let f = &self.ctx;
        let p = f.p() as u64;
        let mut acc = Poly::zero(f);
        for (&k, c) in &self.terms {
            if k < 0 {
                return Err(Error::Parse("series evaluation at a negative power of x".into()));
            }
            let mut power = Poly::one(f).truncate(m);
            let (mut n, mut j, mut step) = (k as u64, 0u32, 1usize);
            while n > 0 {
                let digit = n % p;
                if digit > 0 {
                    let base = g.truncate(m.div_ceil(step)).frobenius_pow(j).truncate(m);
                    for _ in 0..digit {
                        power = (&power * &base).truncate(m);
                    }
                }
                n /= p;
                j += 1;
                step = step.saturating_mul(p as usize);
            }
            acc = &acc + &(c * &power).truncate(m);
        }
        Ok(acc)
    }

    /// Parse the literal syntax; see [`fmt::Display`].
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<Self> {
        let mut p = Parser { ctx, chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
        let out = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(out)
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self + &(-rhs)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly::from_terms(&self.ctx, self.terms.iter().map(|(&k, a)| (k, -a)))
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero(&self.ctx);
        for (&i, a) in &self.terms {
            for (&j, b) in &rhs.terms {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&k, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let xmono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            let coef = match c.as_monomial() {
                Some((a, j)) => {
                    if xmono.is_empty() || j > 0 || a != self.ctx.one() {
                        Some(term_string(&self.ctx, a, j as i64, "t"))
                    } else {
                        None
                    }
                }
                None => Some(format!("({c})")),
            };
            match (coef, xmono.is_empty()) {
                (Some(c), true) => f.write_str(&c)?,
                (Some(c), false) => write!(f, "{c}*{xmono}")?,
                (None, _) => f.write_str(&xmono)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

struct Parser<'a> {
    ctx: &'a FieldCtx,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        let s: String = self.chars.iter().collect();
        Error::Parse(format!("{msg} at offset {} in `{s}`", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            -&self.term()?
        } else {
            self.term()?
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn int(&mut self, signed: bool) -> Result<i64> {
        let start = self.pos;
        if signed && self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("expected integer"))
    }

    fn factor(&mut self) -> Result<BiPoly> {
        let f = self.ctx;
        let atom = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                inner
            }
            Some('[') => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c != ']') {
                    self.pos += 1;
                }
                if self.peek() != Some(']') {
                    return Err(self.error("unterminated `[`"));
                }
                self.pos += 1;
                let s: String = self.chars[start..self.pos].iter().collect();
                BiPoly::term(Poly::constant(f, f.parse_elem(&s)?), 0)
            }
            Some('t') => {
                self.pos += 1;
                let e = if self.peek() == Some('^') {
                    self.pos += 1;
                    self.int(false)?
                } else {
                    1
                };
                return Ok(BiPoly::term(Poly::monomial(f, f.one(), e as usize), 0));
            }
            Some('x') => {
                self.pos += 1;
                let e = if self.peek() == Some('^') {
                    self.pos += 1;
                    self.int(true)?
                } else {
                    1
                };
                return Ok(BiPoly::term(Poly::one(f), e));
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int(false)?;
                if n >= f.p() as i64 {
                    return Err(self.error("integer coefficient outside the prime field"));
                }
                BiPoly::term(Poly::constant(f, f.from_int(n)), 0)
            }
            _ => return Err(self.error("unexpected token")),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.int(false)?;
            return Ok(atom.pow(e as u64));
        }
        Ok(atom)
    }
}
