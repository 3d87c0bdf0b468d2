use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trialg::classify::{
    build, enumerate_params, okubo_orientation, rank, replay, similar_params, similarity_classes, verify_build, verify_graded_iso, witness_map,
    Justification, Model, TypeIIIParams, Variant, WitnessCase,
};
use trialg::composition::Sign;
use trialg::fgab::{AbGroup, GroupElem};
use trialg::grading::type_vector;
use std::collections::BTreeMap;
use trialg::triality::{induce_tri_grading, tri_basis, Tri};
use trialg::{make_field, Field};

fn field() -> Field {
    make_field(12).unwrap()
}

fn z3cubed() -> AbGroup {
    AbGroup::presented(0, &[3, 3, 3]).unwrap()
}

fn z2cubed_z3() -> AbGroup {
    AbGroup::presented(0, &[2, 2, 2, 3]).unwrap()
}

fn infinite_params(g: &AbGroup) -> Vec<TypeIIIParams> {
    let h = g.gen(g.ngens() - 1);
    let x = g.gen(0);
    let y = if g.free_rank > 1 { g.gen(1) } else { x.clone() };
    let mk = |variant| TypeIIIParams { group: g.clone(), variant };
    vec![
        mk(Variant::R2 { gamma: [x.clone(), y.clone(), g.neg(&g.add(&x, &y))], h: h.clone() }),
        mk(Variant::R2 { gamma: [x.clone(), g.add(&y, &h), g.neg(&g.add(&g.add(&x, &y), &h))], h: h.clone() }),
        mk(Variant::R4 { g: x.clone(), h: h.clone() }),
        mk(Variant::R4 { g: g.add(&x, &h), h: g.times(2, &h) }),
        mk(Variant::R8 { h: h.clone(), t: Model::P }),
        mk(Variant::R8 { h, t: Model::O }),
    ]
}

#[test]
fn ranks_across_groups() {
    let f = field();
    let finite = [z3cubed(), z2cubed_z3(), AbGroup::presented(0, &[9, 3]).unwrap()];
    for g in &finite {
        for r in [0u8, 1, 2, 4, 8] {
            let ps = enumerate_params(g, r).unwrap();
            let step = (ps.len() / 60).max(1);
            for p in ps.iter().step_by(step) {
                let gc = build(&f, p).unwrap();
                assert_eq!(rank(&gc).unwrap(), r as usize, "{g} {p:?}");
            }
        }
    }
    for g in [AbGroup::presented(2, &[3]).unwrap(), AbGroup::presented(1, &[3]).unwrap()] {
        for p in infinite_params(&g) {
            let gc = build(&f, &p).unwrap();
            assert_eq!(rank(&gc).unwrap(), p.rank() as usize);
            assert!(verify_build(&gc).ok());
        }
        // no room for K ≅ Z3² or Z2³
        let h = g.gen(g.ngens() - 1);
        let p0 = TypeIIIParams { group: g.clone(), variant: Variant::R0 { k: [g.gen(0), g.gen(0)], h, delta: Sign::Plus } };
        assert!(build(&f, &p0).is_err());
    }
    // Z9×Z3 has no rank-0 data: its 3-torsion always contains ⟨h⟩
    assert!(enumerate_params(&finite[2], 0).unwrap().is_empty());
}

/// Every pair (exhaustive unless `sample`), against the class partition.
fn check_relation(ps: &[TypeIIIParams], classes: &[Vec<usize>], sample: Option<usize>) {
    let mut class_of = vec![0usize; ps.len()];
    for (c, m) in classes.iter().enumerate() {
        for &i in m {
            class_of[i] = c;
        }
    }
    let check = |i: usize, j: usize| {
        let v = similar_params(&ps[i], &ps[j]).unwrap();
        assert_eq!(v.similar, class_of[i] == class_of[j], "{:?} vs {:?}", ps[i], ps[j]);
        assert_eq!(similar_params(&ps[j], &ps[i]).unwrap().similar, v.similar, "asymmetric");
        assert!(replay(&ps[i], &ps[j], &v), "trace does not replay: {:?}", v.trace);
    };
    match sample {
        None => {
            for i in 0..ps.len() {
                for j in i..ps.len() {
                    check(i, j);
                }
            }
        }
        Some(k) => {
            // members against their representative, both ways
            for m in classes {
                for &i in m {
                    check(m[0], i);
                }
            }
            // representatives against the whole ⟨h⟩ bucket (other ⟨h⟩ are
            // rejected at the first step and show up among the random pairs)
            for m in classes {
                let hh = ps[m[0]].h().clone();
                let g = &ps[m[0]].group;
                for j in 0..ps.len() {
                    let h2 = ps[j].h();
                    if *h2 == hh || *h2 == g.neg(&hh) {
                        let v = similar_params(&ps[m[0]], &ps[j]).unwrap();
                        assert_eq!(v.similar, class_of[m[0]] == class_of[j]);
                    }
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..k {
                check(rng.gen_range(0..ps.len()), rng.gen_range(0..ps.len()));
            }
        }
    }
}

type Signature = (usize, Vec<usize>, AbGroup, Vec<usize>);

fn signature(f: &Field, p: &TypeIIIParams, tris: &mut BTreeMap<String, Tri>) -> Signature {
    let gc = build(f, p).unwrap();
    let inv = gc.invariants();
    let tri = tris.entry(gc.v.s.name.clone()).or_insert_with(|| tri_basis(&gc.v.s).unwrap());
    let tg = induce_tri_grading(tri, &gc.basis_grading()).unwrap();
    (rank(&gc).unwrap(), inv.type_vector.clone(), inv.universal_group.iso_type(), type_vector(&tg.dims()))
}

fn sweep(g: &AbGroup, big: usize) {
    let f = field();
    for r in [0u8, 1, 2, 4, 8] {
        let ps = enumerate_params(g, r).unwrap();
        if ps.is_empty() {
            continue;
        }
        let classes = similarity_classes(&ps).unwrap();
        check_relation(&ps, &classes, (ps.len() > big).then_some(100_000));
        // similar pairs share invariants: first and last member of each class
        let mut tris = BTreeMap::new();
        for m in classes.iter().filter(|m| m.len() > 1) {
            let reference = signature(&f, &ps[m[0]], &mut tris);
            let last = m[m.len() - 1];
            assert_eq!(signature(&f, &ps[last], &mut tris), reference, "{:?} vs {:?}", ps[m[0]], ps[last]);
        }
    }
}

#[test]
fn similarity_sweep_z3_cubed() {
    sweep(&z3cubed(), 1000);
}

#[test]
fn similarity_sweep_z2_cubed_z3() {
    sweep(&z2cubed_z3(), 1000);
}

#[test]
fn witnesses_are_graded_isomorphisms() {
    let f = field();
    for case in WitnessCase::ALL {
        for g in [z3cubed(), z2cubed_z3()] {
            let ps = enumerate_params(&g, case.rank()).unwrap();
            for p in ps.iter().step_by((ps.len() / 5).max(1)) {
                let w = witness_map(&f, case, p).unwrap();
                assert!(w.report.ok(), "{case:?} {p:?}: {:?}", w.report.violations);
                let a = build(&f, &w.source).unwrap();
                let b = build(&f, &w.target).unwrap();
                let r = verify_graded_iso(&w.iso, &a.v, &a.basis_grading(), &b.v, &b.basis_grading(), w.opposite);
                assert!(r.ok(), "{case:?}: {:?}", r.violations);
                assert!(similar_params(&w.source, &w.target).unwrap().similar);
            }
        }
    }
}

#[test]
fn orientation_separates_inverse_h() {
    let f = field();
    let g = z3cubed();
    let k = [g.gen(0), g.gen(1)];
    let h = g.gen(2);
    let p = TypeIIIParams { group: g.clone(), variant: Variant::R0 { k: k.clone(), h: h.clone(), delta: Sign::Plus } };
    let q = p.with_h(g.neg(&h));
    let v = similar_params(&p, &q).unwrap();
    assert!(!v.similar);
    assert!(matches!(v.trace, Justification::Orientation { h_inverted: true, .. }));
    // same subgroups and same orientation of the k-components: only h tells them apart
    let (a, b) = (build(&f, &p).unwrap(), build(&f, &q).unwrap());
    assert_eq!(okubo_orientation(&a.v, &a.basis_grading(), &k[0], &k[1]).unwrap(), Sign::Plus);
    assert_eq!(okubo_orientation(&b.v, &b.basis_grading(), &k[0], &k[1]).unwrap(), Sign::Plus);
    assert_eq!(a.invariants().type_vector, b.invariants().type_vector);
    // flipping δ as well restores similarity
    let q2 = TypeIIIParams { group: g.clone(), variant: Variant::R0 { k, h: g.neg(&h), delta: Sign::Minus } };
    assert!(similar_params(&p, &q2).unwrap().similar);
}

#[test]
fn rank_eight_models_differ() {
    let g = z3cubed();
    let h: GroupElem = g.gen(0);
    let p = TypeIIIParams { group: g.clone(), variant: Variant::R8 { h: h.clone(), t: Model::P } };
    let o = TypeIIIParams { group: g, variant: Variant::R8 { h, t: Model::O } };
    assert!(!similar_params(&p, &o).unwrap().similar);
}
