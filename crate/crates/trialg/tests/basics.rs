use proptest::prelude::*;
use trialg::fgab::{characters, quotient, smith_normal_form, subgroup_generated, AbGroup, GroupElem};
use trialg::{make_field, Cyc, Field};

fn field() -> Field {
    make_field(12).unwrap()
}

fn cyc(f: &Field, c: &[i64]) -> Cyc {
    c.iter().enumerate().fold(Cyc::zero(f), |acc, (k, &x)| &acc + &(&Cyc::from_i64(f, x) * &Cyc::zeta_pow(f, k as i64)))
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, 4)
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = b.first().map_or(0, |r| r.len());
    a.iter().map(|r| (0..m).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in coeffs(), b in coeffs(), c in coeffs()) {
        let f = field();
        let (a, b, c) = (cyc(&f, &a), cyc(&f, &b), cyc(&f, &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn galois_is_a_ring_map(a in coeffs(), b in coeffs(), k in prop::sample::select(vec![1i64, 5, 7, 11])) {
        let f = field();
        let (a, b) = (cyc(&f, &a), cyc(&f, &b));
        prop_assert_eq!((&a * &b).galois(k).unwrap(), &a.galois(k).unwrap() * &b.galois(k).unwrap());
        prop_assert_eq!((&a + &b).galois(k).unwrap(), &a.galois(k).unwrap() + &b.galois(k).unwrap());
    }

    #[test]
    fn string_round_trip(a in coeffs()) {
        let f = field();
        let a = cyc(&f, &a);
        prop_assert_eq!(Cyc::from_strings(&f, &a.to_strings()).unwrap(), a);
    }

    #[test]
    fn smith_form_is_a_factorization(m in prop::collection::vec(prop::collection::vec(-9i64..=9, 3), 1..4)) {
        let s = smith_normal_form(&m, 3);
        // oracle: U·M·V = D by plain integer multiplication
        prop_assert_eq!(matmul(&matmul(&s.u, &m), &s.v), s.d.clone());
        let d: Vec<i64> = s.diagonal().into_iter().filter(|&x| x != 0).collect();
        for w in d.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        prop_assert!(d.iter().all(|&x| x > 0));
    }

    #[test]
    fn lagrange(t in prop::collection::vec(prop::sample::select(vec![2i64, 3, 4, 6]), 1..4), seed in 0u64..1000) {
        let g = AbGroup::presented(0, &t).unwrap();
        let n = g.elements().unwrap().len();
        let pick = GroupElem(t.iter().enumerate().map(|(i, &m)| ((seed >> (2 * i)) as i64) % m).collect());
        let (sub, _) = subgroup_generated(&g, std::slice::from_ref(&pick)).unwrap();
        let (q, _) = quotient(&g, std::slice::from_ref(&pick)).unwrap();
        let ord = g.element_order(&pick).unwrap() as usize;
        prop_assert_eq!(sub.elements().unwrap().len(), ord);
        prop_assert_eq!(q.elements().unwrap().len() * ord, n);
    }

    #[test]
    fn characters_are_homomorphisms(t in prop::collection::vec(prop::sample::select(vec![2i64, 3, 4, 6, 12]), 1..3)) {
        let f = field();
        let g = AbGroup::presented(0, &t).unwrap();
        let els = g.elements().unwrap();
        let chars = characters(&g, &f).unwrap();
        prop_assert_eq!(chars.len(), els.len());
        for c in chars.iter().take(6) {
            for x in els.iter().take(8) {
                for y in els.iter().take(8) {
                    prop_assert_eq!(c.eval(&g, &f, &g.add(x, y)), &c.eval(&g, &f, x) * &c.eval(&g, &f, y));
                }
            }
        }
    }
}

#[test]
fn iso_types() {
    let g = AbGroup::presented(0, &[2, 3]).unwrap();
    assert!(g.is_isomorphic(&AbGroup::presented(0, &[6]).unwrap()));
    let h = AbGroup::presented(1, &[4, 6]).unwrap();
    assert_eq!(h.iso_type(), AbGroup::presented(1, &[2, 12]).unwrap().iso_type());
    // Z4 x Z6 = Z2 x Z4 x Z3
    assert_eq!(h.primary_form().torsion, vec![2, 4, 3]);
    assert_eq!(AbGroup::presented(0, &[2, 2, 6]).unwrap().primary_form().to_string(), "Z2^3 x Z3");
}

#[test]
fn characters_need_small_exponent() {
    let f = field();
    assert!(characters(&AbGroup::presented(0, &[5]).unwrap(), &f).is_err());
    assert!(characters(&AbGroup::presented(1, &[]).unwrap(), &f).is_err());
}
