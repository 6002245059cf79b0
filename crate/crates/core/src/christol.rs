//! From an automaton to a polynomial equation satisfied by the generating
//! series `F(t) = sum u_n t^n`.

use std::fmt;

use crate::bipoly::BiPoly;
use crate::dfao::{Dfao, SeqPrefix};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::poly::{Poly, RatFun};

/// Prefix length used to re-check every equation this module returns.
pub const CHECK_LEN: usize = 1024;

/// Largest `t`-degree allowed in the elimination matrix.
const MAX_MATRIX_DEGREE: u64 = 1 << 20;

/// `B(t) + sum_i A_i(t) x^{p^i} = 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct OreEquation {
    poly: BiPoly,
}

impl OreEquation {
    pub fn new(poly: BiPoly) -> Result<Self> {
        if !poly.is_ore_form() {
            return Err(Error::Christol(format!(
                "`{poly}` has an x-exponent that is not 0 or a power of {}",
                poly.ctx().p()
            )));
        }
        if poly.x_degree().unwrap_or(0) < 1 {
            return Err(Error::Christol(format!("`{poly}` does not involve x")));
        }
        Ok(OreEquation { poly })
    }

    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<Self> {
        let body = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .collect::<Vec<_>>()
            .join(" ");
        let body = body.trim();
        let body = body.strip_suffix("= 0").or_else(|| body.strip_suffix("=0")).unwrap_or(body);
        Self::new(BiPoly::parse(ctx, body)?)
    }

    pub fn poly(&self) -> &BiPoly {
        &self.poly
    }

    pub fn into_poly(self) -> BiPoly {
        self.poly
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.poly.ctx()
    }

    /// `m` with `x^{p^m}` the top power.
    pub fn top_index(&self) -> u32 {
        let p = self.ctx().p() as i64;
        let mut k = self.poly.x_degree().unwrap_or(1);
        let mut m = 0;
        while k > 1 {
            k /= p;
            m += 1;
        }
        m
    }

    /// `A_i`, the coefficient of `x^{p^i}`.
    pub fn coeff(&self, i: u32) -> Poly {
        self.poly.coeff((self.ctx().p() as i64).pow(i))
    }

    /// `B`, the coefficient of `x^0`.
    pub fn constant(&self) -> Poly {
        self.poly.coeff(0)
    }
}

impl fmt::Display for OreEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

impl fmt::Debug for OreEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OreEquation({})", self.poly)
    }
}

/// `F_i(t) = sum_r t^r F_{next[i][r]}(t^k)` for every kernel sequence `F_i`.
#[derive(Clone, Debug)]
pub struct KernelSystem {
    automaton: Dfao,
}

impl KernelSystem {
    pub fn automaton(&self) -> &Dfao {
        &self.automaton
    }

    pub fn base(&self) -> u32 {
        self.automaton.base()
    }

    pub fn len(&self) -> usize {
        self.automaton.num_states()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `next[i][r]`: the kernel sequence that `F_i` restricted to `n = r mod k` is built from.
    pub fn next(&self, i: usize, r: u32) -> usize {
        self.automaton.next(i, r)
    }

    /// Generating series of kernel sequence `i`, truncated to `len` terms.
    pub fn series(&self, i: usize, len: usize) -> Poly {
        Poly::new(self.automaton.ctx(), self.automaton.prefix_from(i, len))
    }

    /// Check every identity on truncations to `len` terms.
    pub fn check(&self, len: usize) -> bool {
        let k = self.base() as usize;
        let f = self.automaton.ctx();
        (0..self.len()).all(|i| {
            let rhs = (0..k as u32).fold(Poly::zero(f), |acc, r| {
                let part = self.series(self.next(i, r), len.div_ceil(k)).inflate(k).shift(r as usize);
                &acc + &part
            });
            rhs.truncate(len) == self.series(i, len)
        })
    }
}

impl fmt::Display for KernelSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.base();
        for i in 0..self.len() {
            write!(f, "F{}(t) =", i + 1)?;
            for r in 0..k {
                let sep = if r == 0 { " " } else { " + " };
                let tr = match r {
                    0 => String::new(),
                    1 => "t*".to_string(),
                    _ => format!("t^{r}*"),
                };
                write!(f, "{sep}{tr}F{}(t^{k})", self.next(i, r) + 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Kernel decomposition over a base `k` with `u^k = u` for every output, so that
/// `F_j(t^k) = F_j(t)^k`.  Bases that are powers of `p` are raised as needed.
pub fn kernel_system(d: &Dfao) -> Result<KernelSystem> {
    let f = d.ctx();
    let p = f.p() as u64;
    let k = d.base() as u64;
    let mut a = 0u32;
    let mut rest = k;
    while rest % p == 0 {
        rest /= p;
        a += 1;
    }
    if rest != 1 {
        return Err(Error::Christol(format!("base {k} is not a power of the characteristic {p}")));
    }
    let mut exponent = 1;
    while (a * exponent) % f.e() != 0 {
        exponent += 1;
    }
    let fixed = |d: &Dfao| {
        let k = d.base() as u64;
        (0..d.num_states()).all(|s| f.pow(d.output(s), k) == d.output(s))
    };
    let d = if fixed(d) { d.clone() } else { d.power_base(exponent)? };
    Ok(KernelSystem { automaton: d.kernel_automaton() })
}

/// A nonzero relation `sum_i c_i(t) F(t)^{k^i} = 0`, re-checked on [`CHECK_LEN`] terms.
pub fn algebraic_equation(d: &Dfao) -> Result<OreEquation> {
    let sys = kernel_system(d)?;
    let eq = relation(&sys)?;
    let prefix = sys.automaton.prefix(CHECK_LEN);
    if !verify_equation(&eq, &prefix) {
        return Err(Error::Christol(format!("relation `{eq}` fails on the sequence prefix")));
    }
    Ok(eq)
}

fn relation(sys: &KernelSystem) -> Result<OreEquation> {
    let aut = &sys.automaton;
    let f = aut.ctx();
    let n = sys.len();
    if n == 1 && aut.output(0).is_zero() {
        return OreEquation::new(BiPoly::x(f));
    }
    let k = sys.base() as u64;
    let top = (n + 1) as u32;
    if k.checked_pow(top).is_none_or(|v| v > MAX_MATRIX_DEGREE) {
        return Err(Error::Christol(format!(
            "{n} kernel sequences in base {k} exceed the supported matrix size"
        )));
    }

    // expand[m][l]: coefficient of F_l(t^{k^m}) in F_0(t).
    let mut expand = vec![vec![Poly::zero(f); n]];
    expand[0][0] = Poly::one(f);
    for m in 0..top {
        let step = k.pow(m) as usize;
        let mut next = vec![Poly::zero(f); n];
        for (l, c) in expand[m as usize].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for r in 0..k as u32 {
                let t = sys.next(l, r);
                next[t] = &next[t] + &c.shift(r as usize * step);
            }
        }
        expand.push(next);
    }

    // Row i: F(t^{k^i}) in the basis F_l(t^{k^top}), augmented by the unit vector e_i.
    let width = n + top as usize;
    let mut rows: Vec<Vec<RatFun>> = (0..top as usize)
        .map(|i| {
            let scale = k.pow(i as u32) as usize;
            let mut row: Vec<RatFun> = expand[top as usize - i]
                .iter()
                .map(|c| RatFun::from_poly(c.inflate(scale)))
                .collect();
            row.extend((0..top as usize).map(|j| if i == j { RatFun::one(f) } else { RatFun::zero(f) }));
            row
        })
        .collect();

    // Row echelon form of the whole augmented matrix; its bottom row has a zero
    // left block and holds the relation with the largest leading power of `x`.
    let mut lead = 0;
    for c in 0..width {
        let Some(piv) = (lead..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(lead, piv);
        for i in lead + 1..rows.len() {
            let factor = rows[i][c].div(&rows[lead][c])?;
            if factor.is_zero() {
                continue;
            }
            for cc in c..width {
                let delta = &factor * &rows[lead][cc];
                rows[i][cc] = &rows[i][cc] - &delta;
            }
        }
        lead += 1;
        if lead == rows.len() {
            break;
        }
    }
    let bottom = rows.last().expect("at least two rows");
    if bottom[..n].iter().any(|c| !c.is_zero()) || bottom[n..].iter().all(RatFun::is_zero) {
        return Err(Error::Christol("elimination produced only the zero relation".into()));
    }
    relation_from_row(f, &bottom[n..], k)
}

fn relation_from_row(f: &FieldCtx, lambda: &[RatFun], k: u64) -> Result<OreEquation> {
    let den = lambda.iter().fold(Poly::one(f), |acc, l| acc.lcm(l.den()));
    let coeffs: Vec<Poly> = lambda
        .iter()
        .map(|l| {
            let (q, _) = den.divmod(l.den())?;
            Ok(l.num() * &q)
        })
        .collect::<Result<_>>()?;
    let content = coeffs.iter().fold(Poly::zero(f), |acc, c| acc.gcd(c));
    let mut poly = BiPoly::zero(f);
    for (i, c) in coeffs.iter().enumerate() {
        let (q, _) = c.divmod(&content)?;
        poly.add_term(k.pow(i as u32) as i64, q);
    }
    let top = poly.coeff(poly.x_degree().unwrap_or(0));
    let poly = poly.scale(f.inv(top.lead())?);
    OreEquation::new(poly)
}

/// Does the truncated series satisfy the equation?  Only coefficients of `t^j`
/// with `j < N - max deg_t c_i` are compared.
pub fn verify_equation(eq: &OreEquation, s: &SeqPrefix) -> bool {
    verify_poly(eq.poly(), s, 0)
}

/// Check `P(t, G) = 0` where `G = sum_{n >= 0} s[n + skip] t^n`, up to the
/// truncation limit described in [`verify_equation`].
pub fn verify_poly(p: &BiPoly, s: &SeqPrefix, skip: usize) -> bool {
    let n = s.len().saturating_sub(skip);
    let dt = p.t_degree().unwrap_or(0);
    if n <= dt {
        return false;
    }
    let g = Poly::new(&s.ctx, s.values[skip..].to_vec());
    match p.eval_series(&g, n - dt) {
        Ok(v) => v.is_zero(),
        Err(_) => false,
    }
}
