use proptest::prelude::*;

use pqc_core::algebra::ParaQuaternion;
use pqc_core::calculus::{ExteriorCalculus, Form};
use pqc_core::models::conformal::conformal_heisenberg;
use pqc_core::models::{builtin_heisenberg, builtin_l0, GaugeTransform, PqcModel};
use pqc_core::sasakian::{classify, DgaRules, FormalElement, GENERATORS};
use pqc_core::scalar::{frac, int, Rat};

fn pq() -> impl Strategy<Value = ParaQuaternion> {
    (-6i64..=6, -6i64..=6, -6i64..=6, -6i64..=6).prop_map(|(t, x, y, z)| ParaQuaternion::from_i64(t, x, y, z))
}

fn rat() -> impl Strategy<Value = Rat> {
    (-5i64..=5, 1i64..=3).prop_map(|(p, q)| frac(p, q))
}

/// `c · t^k · g_1 ⋯ g_m` for a list of generators.
fn formal_monomial() -> impl Strategy<Value = FormalElement> {
    (rat(), 0usize..=2, prop::collection::vec(0..GENERATORS.len(), 0..=3)).prop_map(|(c, k, gens)| {
        let mut e = FormalElement::constant(c);
        for _ in 0..k {
            e = &e * &FormalElement::t();
        }
        for g in gens {
            e = &e * &FormalElement::generator(g);
        }
        e
    })
}

fn formal_element() -> impl Strategy<Value = FormalElement> {
    prop::collection::vec(formal_monomial(), 1..=4).prop_map(|ms| ms.iter().fold(FormalElement::zero(), |acc, m| &acc + m))
}

fn sign(odd: bool, e: &FormalElement) -> FormalElement {
    if odd {
        -e
    } else {
        e.clone()
    }
}

proptest! {
    #[test]
    fn paraquaternion_product_is_associative(p in pq(), q in pq(), r in pq()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
    }

    #[test]
    fn paraquaternion_norm_is_multiplicative(p in pq(), q in pq()) {
        prop_assert_eq!((&p * &q).norm(), p.norm() * q.norm());
    }

    #[test]
    fn paraquaternion_conjugation_reverses_products(p in pq(), q in pq()) {
        prop_assert_eq!((&p * &q).conj(), &q.conj() * &p.conj());
        prop_assert_eq!(&p.conj() * &p, ParaQuaternion::from_parts(p.norm(), [int(0), int(0), int(0)]));
    }

    #[test]
    fn formal_product_is_graded_commutative(a in formal_monomial(), b in formal_monomial()) {
        let ab = &a * &b;
        prop_assert_eq!(&ab, &sign(a.is_odd() && b.is_odd(), &(&b * &a)));
    }

    #[test]
    fn formal_product_is_associative(a in formal_element(), b in formal_element(), c in formal_element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn formal_d_is_a_derivation(a in formal_monomial(), b in formal_element()) {
        let r = DgaRules::para_3_sasakian();
        let lhs = (&a * &b).d(&r);
        let rhs = &(&a.d(&r) * &b) + &sign(a.is_odd(), &(&a * &b.d(&r)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn formal_d_squares_to_zero(a in formal_element()) {
        let r = DgaRules::para_3_sasakian();
        prop_assert!(a.d(&r).d(&r).is_zero());
    }
}

fn form_of(dim: usize, degree: usize, coeffs: &[(i64, u32)]) -> Form {
    // each entry picks a degree-sized subset of the frame from its bit pattern
    let mut f = Form::zero(dim, degree);
    for &(c, bits) in coeffs {
        let idx: Vec<usize> = (0..dim).filter(|a| bits >> a & 1 == 1).take(degree).collect();
        if idx.len() == degree {
            f = &f + &Form::monomial(dim, &idx).scale(&int(c));
        }
    }
    f
}

fn coeff_list() -> impl Strategy<Value = Vec<(i64, u32)>> {
    prop::collection::vec((-4i64..=4, any::<u32>()), 1..=5)
}

proptest! {
    #[test]
    fn frame_d_squares_to_zero(deg in 0usize..=3, cs in coeff_list()) {
        for m in [builtin_heisenberg(2), builtin_l0(&int(3))] {
            let ext = ExteriorCalculus::new(&m.frame);
            let w = form_of(m.dim(), deg, &cs);
            prop_assert!(ext.d(&ext.d(&w)).is_zero());
        }
    }

    #[test]
    fn frame_d_obeys_leibniz(p in 0usize..=2, q in 0usize..=2, a in coeff_list(), b in coeff_list()) {
        let m = builtin_l0(&int(2));
        let ext = ExteriorCalculus::new(&m.frame);
        let (x, y) = (form_of(m.dim(), p, &a), form_of(m.dim(), q, &b));
        let lhs = ext.d(&x.wedge(&y));
        let second = x.wedge(&ext.d(&y));
        let rhs = &ext.d(&x).wedge(&y) + &if p % 2 == 1 { -&second } else { second };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_graded_commutative(p in 0usize..=3, q in 0usize..=3, a in coeff_list(), b in coeff_list()) {
        let (x, y) = (form_of(11, p, &a), form_of(11, q, &b));
        let yx = y.wedge(&x);
        prop_assert_eq!(x.wedge(&y), if p * q % 2 == 1 { -&yx } else { yx });
    }
}

fn gauge_invariant(m: &PqcModel, seed: u64, rescale: Option<Rat>) -> Result<(), TestCaseError> {
    let base = classify(m).unwrap();
    let g = GaugeTransform::random(m, seed, rescale).unwrap().apply(m).unwrap();
    let moved = classify(&g).unwrap();
    prop_assert_eq!(base.label, moved.label);
    prop_assert_eq!(base.tau_zero, moved.tau_zero);
    prop_assert_eq!(base.mu_zero, moved.mu_zero);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classification_is_gauge_invariant(seed in any::<u64>(), rescale in prop::option::of((1i64..=4, 1i64..=3))) {
        let rescale = rescale.map(|(p, q)| frac(p, q));
        for m in [builtin_heisenberg(1), builtin_l0(&int(2)), conformal_heisenberg(1, &int(1))] {
            gauge_invariant(&m, seed, rescale.clone())?;
        }
    }
}
