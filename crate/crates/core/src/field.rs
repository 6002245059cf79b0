//! Finite fields `F_q`, `q = p^e`.
//!
//! Elements are stored as plain indices: the residue vector `(c_0, .., c_{e-1})`
//! of an element in the basis `1, z, .., z^{e-1}` is packed as `sum c_i p^i`.
//! All arithmetic goes through the [`FieldCtx`], which owns the log/exp tables
//! built from a primitive element at construction time.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order we are willing to tabulate.
pub const MAX_ORDER: u32 = 1 << 16;

/// An element of `F_q`, meaningful only together with its [`FieldCtx`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    /// The packed residue index, in `[0, q)`.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, ascending coefficients, length `e + 1`. `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    one: u32,
    add_table: Option<Vec<u32>>,
}

/// The field `F_q` together with its arithmetic tables. Cheap to clone.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.e == other.inner.e
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({})", self.header())
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` modulo `b` over `F_p`; `b` must have a nonzero leading coefficient.
fn zpoly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = (r[r.len() - 1] * lead_inv) % p;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - (c * bi) % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        k >>= 1;
    }
    result as u32
}

/// Monic `f` over `F_p` of degree `e` is irreducible iff no monic polynomial of
/// degree `1..=e/2` divides it.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let e = f.len() - 1;
    for deg in 1..=e / 2 {
        let count = (p as u64).pow(deg as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut v = idx;
            for _ in 0..deg {
                g.push((v % p as u64) as u32);
                v /= p as u64;
            }
            g.push(1);
            if zpoly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn unpack(x: u32, p: u32, e: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(e as usize);
    let mut x = x;
    for _ in 0..e {
        v.push(x % p);
        x /= p;
    }
    v
}

fn pack(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn raw_mul(a: u32, b: u32, p: u32, e: u32, modulus: &[u32]) -> u32 {
    let av = unpack(a, p, e);
    let bv = unpack(b, p, e);
    let mut prod = vec![0u32; 2 * e as usize];
    for (i, &x) in av.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in bv.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = zpoly_rem(&prod, modulus, p);
    r.resize(e as usize, 0);
    pack(&r, p)
}

fn raw_add(a: u32, b: u32, p: u32, e: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    if e == 1 {
        return (a + b) % p;
    }
    let mut out = 0u32;
    let mut scale = 1u32;
    let (mut a, mut b) = (a, b);
    for _ in 0..e {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

impl FieldCtx {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::build(p, vec![0, 1])
    }

    /// `F_{p^e}` as `F_p[z]/(modulus)`. `modulus` lists ascending coefficients
    /// and must be monic of degree `e >= 1` and irreducible over `F_p`.
    pub fn extension(p: u32, modulus: Vec<u32>) -> Result<Self> {
        Self::build(p, modulus)
    }

    fn build(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Field(format!("characteristic {p} is not prime")));
        }
        if modulus.len() < 2 {
            return Err(Error::Field("modulus must have degree at least 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::Field(format!("modulus coefficients must lie in [0, {p})")));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::Field("modulus must be monic".into()));
        }
        let e = (modulus.len() - 1) as u32;
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_ORDER as u64);
        let q = match q {
            Some(q) => q as u32,
            None => return Err(Error::Field(format!("field order {p}^{e} exceeds {MAX_ORDER}"))),
        };
        let modulus = if e == 1 { vec![0, 1] } else { modulus };
        if e > 1 && !is_irreducible(&modulus, p) {
            return Err(Error::Field("modulus is reducible over the prime field".into()));
        }

        let one = 1u32;
        let factors = prime_factors(q - 1);
        let mut exp = vec![0u32; (q - 1).max(1) as usize];
        let mut log = vec![0u32; q as usize];
        if q == 2 {
            exp[0] = 1;
        } else {
            let mut found = false;
            for g in 2..q {
                // g^((q-1)/l) != 1 for every prime l | q-1
                let mut powers = vec![one; 1];
                let mut x = one;
                for _ in 1..q - 1 {
                    x = raw_mul(x, g, p, e, &modulus);
                    powers.push(x);
                }
                if factors.iter().all(|&l| powers[((q - 1) / l) as usize] != one) {
                    exp.copy_from_slice(&powers);
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(Error::Field("no primitive element found".into()));
            }
        }
        for (k, &x) in exp.iter().enumerate() {
            log[x as usize] = k as u32;
        }
        let add_table = if p != 2 && e > 1 && q <= 256 {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = raw_add(a, b, p, e);
                }
            }
            Some(t)
        } else {
            None
        };
        Ok(FieldCtx {
            inner: Arc::new(Inner { p, e, q, modulus, exp, log, one, add_table }),
        })
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn e(&self) -> u32 {
        self.inner.e
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Ascending modulus coefficients (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(self.inner.one)
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.inner.q).map(FieldElem)
    }

    /// Element from its packed index; `None` when out of range.
    pub fn elem(&self, index: u32) -> Option<FieldElem> {
        (index < self.inner.q).then_some(FieldElem(index))
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.inner.p as i64) as u32)
    }

    /// Element with residue vector `coeffs` in the basis `1, z, .., z^{e-1}`.
    pub fn from_residues(&self, coeffs: &[u32]) -> Result<FieldElem> {
        let p = self.inner.p;
        let mut v = coeffs.iter().map(|c| c % p).collect::<Vec<_>>();
        trim(&mut v);
        if v.len() > self.inner.e as usize {
            v = zpoly_rem(&v, &self.inner.modulus, p);
        }
        v.resize(self.inner.e as usize, 0);
        Ok(FieldElem(pack(&v, p)))
    }

    pub fn residues(&self, a: FieldElem) -> Vec<u32> {
        unpack(a.0, self.inner.p, self.inner.e)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let inner = &*self.inner;
        if inner.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if inner.e == 1 {
            let s = a.0 + b.0;
            return FieldElem(if s >= inner.p { s - inner.p } else { s });
        }
        match &inner.add_table {
            Some(t) => FieldElem(t[(a.0 * inner.q + b.0) as usize]),
            None => FieldElem(raw_add(a.0, b.0, inner.p, inner.e)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let inner = &*self.inner;
        if inner.p == 2 || a.0 == 0 {
            return a;
        }
        if inner.e == 1 {
            return FieldElem(inner.p - a.0);
        }
        let v: Vec<u32> = unpack(a.0, inner.p, inner.e)
            .into_iter()
            .map(|c| (inner.p - c) % inner.p)
            .collect();
        FieldElem(pack(&v, inner.p))
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        let inner = &*self.inner;
        if inner.q == 2 {
            return FieldElem(1);
        }
        let n = inner.q - 1;
        let s = inner.log[a.0 as usize] + inner.log[b.0 as usize];
        FieldElem(inner.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.inner;
        if inner.q == 2 {
            return Ok(a);
        }
        let n = inner.q - 1;
        let l = inner.log[a.0 as usize];
        Ok(FieldElem(inner.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, k: u64) -> FieldElem {
        if k == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return a;
        }
        let inner = &*self.inner;
        if inner.q == 2 {
            return a;
        }
        let n = (inner.q - 1) as u64;
        let l = inner.log[a.0 as usize] as u64;
        FieldElem(inner.exp[((l * (k % n)) % n) as usize])
    }

    /// `a^(p^j)`.
    pub fn frobenius(&self, a: FieldElem, j: u32) -> FieldElem {
        let j = j % self.inner.e;
        self.pow(a, (self.inner.p as u64).pow(j))
    }

    /// The inverse Frobenius `a ↦ a^(q/p)`, i.e. the unique `b` with `b^p = a`.
    pub fn frobenius_inv(&self, a: FieldElem) -> FieldElem {
        self.frobenius(a, self.inner.e - 1)
    }

    /// Header used by every text format: `p e [modulus]`.
    pub fn header(&self) -> String {
        if self.inner.e == 1 {
            format!("{} 1", self.inner.p)
        } else {
            format!("{} {} {}", self.inner.p, self.inner.e, zpoly_to_string(&self.inner.modulus))
        }
    }

    /// Parse the `p e [modulus]` tokens of a `field` line.
    pub fn from_header_tokens(tokens: &[&str]) -> Result<Self> {
        let bad = || Error::Parse(format!("bad field declaration `{}`", tokens.join(" ")));
        let p: u32 = tokens.first().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let e: u32 = tokens.get(1).map_or(Some(1), |s| s.parse().ok()).ok_or_else(bad)?;
        if e == 0 {
            return Err(bad());
        }
        if e == 1 {
            if tokens.len() > 3 {
                return Err(bad());
            }
            return Self::prime(p);
        }
        let text = tokens.get(2..).map(|t| t.join("")).filter(|s| !s.is_empty()).ok_or_else(|| {
            Error::Parse("extension fields need an explicit irreducible modulus".into())
        })?;
        let modulus = parse_zpoly(&text, p)?;
        if modulus.len() != e as usize + 1 {
            return Err(Error::Parse(format!("modulus `{text}` does not have degree {e}")));
        }
        Self::extension(p, modulus)
    }

    /// Render an element: integers for the prime subfield, `[..]` otherwise.
    pub fn fmt_elem(&self, a: FieldElem) -> String {
        let r = self.residues(a);
        if r.iter().skip(1).all(|&c| c == 0) {
            r[0].to_string()
        } else {
            format!("[{}]", zpoly_to_string(&r))
        }
    }

    /// Inverse of [`fmt_elem`](Self::fmt_elem); also accepts a bare `z`-polynomial.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        let s = s.trim();
        let body = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')).unwrap_or(s);
        if let Ok(n) = body.parse::<u64>() {
            if n >= self.inner.p as u64 {
                return Err(Error::Parse(format!(
                    "element {n} lies outside F_{}",
                    self.inner.q
                )));
            }
            return Ok(FieldElem(n as u32));
        }
        if self.inner.e == 1 {
            return Err(Error::Parse(format!("bad field element `{s}`")));
        }
        let v = parse_zpoly(body, self.inner.p)?;
        if v.len() > self.inner.e as usize {
            return Err(Error::Parse(format!("element `{s}` has degree >= {}", self.inner.e)));
        }
        self.from_residues(&v)
    }
}

fn zpoly_to_string(c: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &a) in c.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{i}"),
        };
        parts.push(match (a, i) {
            (_, 0) => a.to_string(),
            (1, _) => mono,
            _ => format!("{a}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Parse a `z`-polynomial like `z^2+z+1` or `2*z+1` into ascending coefficients mod `p`.
fn parse_zpoly(s: &str, p: u32) -> Result<Vec<u32>> {
    let bad = || Error::Parse(format!("bad z-polynomial `{s}`"));
    let mut out: Vec<u32> = Vec::new();
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(bad());
    }
    for term in cleaned.split('+') {
        let (coef, mono) = match term.split_once('*') {
            Some((c, m)) => (c.parse::<u32>().map_err(|_| bad())?, m),
            None if term.starts_with('z') => (1, term),
            None => (term.parse::<u32>().map_err(|_| bad())?, ""),
        };
        let deg = match mono {
            "" => 0usize,
            "z" => 1,
            m => m.strip_prefix("z^").and_then(|d| d.parse().ok()).ok_or_else(bad)?,
        };
        if out.len() <= deg {
            out.resize(deg + 1, 0);
        }
        out[deg] = (out[deg] + coef % p) % p;
    }
    trim(&mut out);
    Ok(out)
}
