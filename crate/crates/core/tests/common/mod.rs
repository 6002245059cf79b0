#![allow(dead_code)]

use autocell::engine::Row;
use autocell::{CaSpec, Dfao, FieldCtx, FieldElem, LaurentPoly};
use rand::rngs::StdRng;
use rand::Rng;

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

pub fn dfao(name: &str) -> Dfao {
    Dfao::parse(&fixture(&format!("{name}.dfao"))).unwrap()
}

/// F_2, F_3 and F_4 = F_2[z]/(z^2+z+1).
pub fn field(i: usize) -> FieldCtx {
    match i {
        0 => FieldCtx::prime(2).unwrap(),
        1 => FieldCtx::prime(3).unwrap(),
        _ => FieldCtx::extension(2, vec![1, 1, 1]).unwrap(),
    }
}

pub fn elem(f: &FieldCtx, rng: &mut StdRng) -> FieldElem {
    f.elem(rng.gen_range(0..f.q())).unwrap()
}

pub fn nonzero(f: &FieldCtx, rng: &mut StdRng) -> FieldElem {
    f.elem(rng.gen_range(1..f.q())).unwrap()
}

pub fn word(f: &FieldCtx, rng: &mut StdRng, max: usize) -> Vec<FieldElem> {
    let n = rng.gen_range(1..=max);
    (0..n).map(|_| elem(f, rng)).collect()
}

pub fn random_row(f: &FieldCtx, rng: &mut StdRng, periodic: bool) -> Row {
    let core: Vec<FieldElem> = (0..rng.gen_range(0..6)).map(|_| elem(f, rng)).collect();
    let start = rng.gen_range(-5..5);
    if periodic {
        Row::new(f, word(f, rng, 3), core, start, word(f, rng, 3)).unwrap()
    } else {
        Row::new(f, vec![f.zero()], core, start, vec![f.zero()]).unwrap()
    }
}

pub fn random_poly(f: &FieldCtx, rng: &mut StdRng, radius: i64) -> LaurentPoly {
    let mut terms = Vec::new();
    for k in -radius..=radius {
        if rng.gen_bool(0.5) {
            terms.push((k, elem(f, rng)));
        }
    }
    LaurentPoly::from_terms(f, terms)
}

pub fn random_spec(f: &FieldCtx, rng: &mut StdRng, memory: usize, radius: i64, periodic: bool) -> CaSpec {
    let rule = (0..memory).map(|_| random_poly(f, rng, radius)).collect();
    let rows = (0..memory).map(|_| random_row(f, rng, periodic)).collect();
    CaSpec::new(f, rule, rows, 0).unwrap()
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub fn lcm(v: impl Iterator<Item = usize>) -> usize {
    v.fold(1, |a, b| a / gcd(a, b) * b)
}

/// Cell `m` of `sum_i rule_i R_{n-i}` computed straight from the definition.
pub fn oracle_step(ca: &CaSpec, window: &[Row], m: i64) -> FieldElem {
    let f = &ca.ctx;
    let d = ca.memory();
    let mut acc = f.zero();
    for i in 1..=d {
        for (k, c) in ca.lag(i).terms() {
            acc = f.add(acc, f.mul(c, window[d - i].value(m - k)));
        }
    }
    acc
}
