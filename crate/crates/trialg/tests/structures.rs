use proptest::prelude::*;
use trialg::composition::{
    cayley_dickson, doubled_cayley, is_hurwitz, is_symmetric_composition, okubo_sl3, para, split_quadratic, zorn_cayley, SymCompAlgebra,
};
use trialg::cyclic::{cyclic_from_symmetric, verify_cyclic_axioms, CyclicAlgebra, DIM};
use trialg::linalg::{sv_add, sv_scale, SVec};
use trialg::triality::{check_lie, der_cyclic, is_d4, killing_matrix, root_datum, spanning_triple, tri_basis, check_tri_triple};
use trialg::{make_field, Cyc, Field};

fn field() -> Field {
    make_field(12).unwrap()
}

fn models(f: &Field) -> Vec<SymCompAlgebra> {
    vec![para(&zorn_cayley(f)).unwrap(), okubo_sl3(f).unwrap()]
}

fn vec_of(f: &Field, c: &[i64]) -> SVec {
    c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, Cyc::from_i64(f, x))).collect()
}

#[test]
fn composition_suites() {
    let f = field();
    for s in models(&f) {
        let r = is_symmetric_composition(&s);
        assert!(r.ok(), "{}: {:?}", s.name, r.violations);
    }
    assert!(is_hurwitz(&zorn_cayley(&f)).ok());
    assert!(is_hurwitz(&doubled_cayley(&f)).ok());
    // no Hurwitz algebra beyond dimension 8
    assert!(cayley_dickson(&zorn_cayley(&f), &Cyc::one(&f)).is_err());
    assert!(is_hurwitz(&split_quadratic(&f)).ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // (x⋆y)⋆x = n(x)y = x⋆(y⋆x) on random integer vectors
    #[test]
    fn symmetric_composition_identity(x in prop::collection::vec(-3i64..=3, 8), y in prop::collection::vec(-3i64..=3, 8), okubo in any::<bool>()) {
        let f = field();
        let s = if okubo { okubo_sl3(&f).unwrap() } else { para(&zorn_cayley(&f)).unwrap() };
        let (x, y) = (vec_of(&f, &x), vec_of(&f, &y));
        let ny = sv_scale(&s.norm(&x), &y);
        prop_assert_eq!(s.mul(&s.mul(&x, &y), &x), ny.clone());
        prop_assert_eq!(s.mul(&x, &s.mul(&y, &x)), ny);
        prop_assert_eq!(s.norm(&s.mul(&x, &y)), &s.norm(&x) * &s.norm(&y));
    }

    #[test]
    fn cyclic_q_is_multiplicative(x in prop::collection::vec(-2i64..=2, DIM), y in prop::collection::vec(-2i64..=2, DIM)) {
        let f = field();
        let v = cyclic_from_symmetric(&para(&zorn_cayley(&f)).unwrap()).unwrap();
        let (x, y) = (vec_of(&f, &x), vec_of(&f, &y));
        // Q(x∗y) = ρ(Q(x))ρ²(Q(y))
        let lhs = v.q(&v.mul(&x, &y));
        let (qx, qy) = (v.q(&x), v.q(&y));
        let rhs = trialg::cyclic::l_mul(&trialg::cyclic::rho(&qx, 1), &trialg::cyclic::rho(&qy, 2));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn spanning_triples_are_triples(a in 0usize..8, b in 0usize..8, c in -2i64..=2) {
        let f = field();
        let s = para(&zorn_cayley(&f)).unwrap();
        let x = sv_add(&s.basis(a), &sv_scale(&Cyc::from_i64(&f, c), &s.basis((a + 3) % 8)));
        let t = spanning_triple(&s, &x, &s.basis(b));
        prop_assert!(check_tri_triple(&s, &t).ok());
    }
}

#[test]
fn cyclic_axioms_for_both_models() {
    let f = field();
    for s in models(&f) {
        let v: CyclicAlgebra = cyclic_from_symmetric(&s).unwrap();
        let r = verify_cyclic_axioms(&v);
        assert!(r.ok(), "{}: {:?}", s.name, &r.violations[..r.violations.len().min(3)]);
        assert!(verify_cyclic_axioms(&v.opposite()).ok());
    }
}

#[test]
fn triality_is_d4() {
    let f = field();
    for s in models(&f) {
        let tri = tri_basis(&s).unwrap();
        assert_eq!(tri.dim(), 28);
        assert_eq!(tri.projection_ranks(), [28, 28, 28]);
        assert!(check_lie(&tri.lie).ok());
        let rd = root_datum(&tri).unwrap();
        assert_eq!(rd.roots.len(), 24);
        assert_eq!(rd.simple_roots.len(), 4);
        assert!(is_d4(&rd.cartan_matrix));
        // the Killing form of a simple Lie algebra is nondegenerate
        assert!(!killing_matrix(&tri.lie).det().is_zero());
    }
}

#[test]
fn derivations_of_v_are_tri() {
    let f = field();
    let s = para(&zorn_cayley(&f)).unwrap();
    let v = cyclic_from_symmetric(&s).unwrap();
    let der = der_cyclic(&v).unwrap();
    assert_eq!(der.len(), 28);
    for t in &der {
        assert!(check_tri_triple(&s, t).ok());
    }
}
