use autocell::{BiPoly, FieldCtx, FieldElem, LaurentPoly, Poly, RatFun};
use proptest::prelude::*;

fn fields() -> Vec<FieldCtx> {
    vec![
        FieldCtx::prime(2).unwrap(),
        FieldCtx::prime(3).unwrap(),
        FieldCtx::extension(2, vec![1, 1, 1]).unwrap(),
    ]
}

fn elems(f: &FieldCtx, raw: &[u32]) -> Vec<FieldElem> {
    raw.iter().map(|&r| f.elem(r % f.q()).unwrap()).collect()
}

fn poly(f: &FieldCtx, raw: &[u32]) -> Poly {
    Poly::new(f, elems(f, raw))
}

fn laurent(f: &FieldCtx, low: i64, raw: &[u32]) -> LaurentPoly {
    LaurentPoly::new(f, low, elems(f, raw))
}

fn coeffs() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..4, 0..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn poly_ring_axioms(fi in 0usize..3, a in coeffs(), b in coeffs(), c in coeffs()) {
        let f = &fields()[fi];
        let (a, b, c) = (poly(f, &a), poly(f, &b), poly(f, &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(f), a.clone());
    }

    #[test]
    fn laurent_ring_axioms(fi in 0usize..3, la in -4i64..4, lb in -4i64..4, lc in -4i64..4,
                           a in coeffs(), b in coeffs(), c in coeffs()) {
        let f = &fields()[fi];
        let (a, b, c) = (laurent(f, la, &a), laurent(f, lb, &b), laurent(f, lc, &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn ratfun_field_axioms(fi in 0usize..3, a in coeffs(), b in coeffs(), c in coeffs(), d in coeffs()) {
        let f = &fields()[fi];
        let (pa, pb, pc, pd) = (poly(f, &a), poly(f, &b), poly(f, &c), poly(f, &d));
        prop_assume!(!pb.is_zero() && !pd.is_zero());
        let x = RatFun::new(pa, pb).unwrap();
        let y = RatFun::new(pc, pd.clone()).unwrap();
        let z = RatFun::new(pd, Poly::one(f)).unwrap();
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), RatFun::one(f));
        }
    }

    #[test]
    fn residue_split_round_trip(fi in 0usize..3, a in prop::collection::vec(0u32..4, 0..20)) {
        let f = &fields()[fi];
        let a = poly(f, &a);
        let parts = a.residue_split(f.p());
        prop_assert_eq!(parts.len(), f.p() as usize);
        prop_assert_eq!(Poly::reassemble(f, &parts), a);
    }

    #[test]
    fn pth_root_inverts_frobenius(fi in 0usize..3, a in coeffs()) {
        let f = &fields()[fi];
        let a = poly(f, &a);
        let fr = a.frobenius();
        prop_assert_eq!(fr.pth_root(f.p()).unwrap(), a.clone());
        // Frobenius is the p-th power map.
        let mut pow = Poly::one(f);
        for _ in 0..f.p() {
            pow = &pow * &a;
        }
        prop_assert_eq!(fr, pow);
    }

    #[test]
    fn bipoly_text_round_trip(fi in 0usize..3,
                              terms in prop::collection::vec((0i64..9, coeffs()), 0..5)) {
        let f = &fields()[fi];
        let b = BiPoly::from_terms(f, terms.iter().map(|(k, c)| (*k, poly(f, c))));
        let text = b.to_string();
        prop_assert_eq!(BiPoly::parse(f, &text).unwrap(), b);
    }

    #[test]
    fn bipoly_slices_round_trip(fi in 0usize..3,
                                terms in prop::collection::vec((-3i64..9, coeffs()), 0..5)) {
        let f = &fields()[fi];
        let b = BiPoly::from_terms(f, terms.iter().map(|(k, c)| (*k, poly(f, c))));
        prop_assert_eq!(BiPoly::from_t_slices(f, &b.t_slices()), b);
    }
}

#[test]
fn frobenius_is_a_field_automorphism() {
    for f in fields() {
        for a in f.elements() {
            for b in f.elements() {
                let fa = f.frobenius(a, 1);
                assert_eq!(f.frobenius(f.add(a, b), 1), f.add(fa, f.frobenius(b, 1)));
                assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(fa, f.frobenius(b, 1)));
                assert_eq!(f.frobenius_inv(fa), a);
            }
        }
    }
}

#[test]
fn f4_multiplication_table() {
    // Brute-force oracle: residues of z^i * z^j reduced by z^2 = z + 1.
    let f = FieldCtx::extension(2, vec![1, 1, 1]).unwrap();
    for a in f.elements() {
        for b in f.elements() {
            let (ra, rb) = (f.residues(a), f.residues(b));
            let mut prod = [0u32; 3];
            for i in 0..2 {
                for j in 0..2 {
                    prod[i + j] ^= ra[i] & rb[j];
                }
            }
            let want = [prod[0] ^ prod[2], prod[1] ^ prod[2]];
            assert_eq!(f.residues(f.mul(a, b)), want.to_vec());
        }
    }
}
