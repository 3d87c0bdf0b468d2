use trialg::albert::{albert, grade_albert, verify_degree3, verify_jordan, AlbertElement, ALBERT_DIM};
use trialg::classify::{build, FineKind, Model, TypeIIIParams, Variant};
use trialg::composition::{okubo_sl3, para, zorn_cayley};
use trialg::cyclic::cyclic_from_symmetric;
use trialg::fgab::AbGroup;
use trialg::{make_field, Cyc};

#[test]
fn jordan_identity_for_both_models() {
    let f = make_field(12).unwrap();
    for s in [para(&zorn_cayley(&f)).unwrap(), okubo_sl3(&f).unwrap()] {
        let j = albert(&cyclic_from_symmetric(&s).unwrap()).unwrap();
        assert_eq!(j.structure.dim(0), ALBERT_DIM);
        let r = verify_jordan(&j.structure);
        assert!(r.ok(), "{:?}", &r.violations[..r.violations.len().min(5)]);
        let r = verify_degree3(&j, 100, 7);
        assert!(r.ok(), "{:?}", r.violations);
        assert!(!j.trace_gram().det().is_zero());
    }
}

#[test]
fn v_is_orthogonal_to_l_and_norm_restricts() {
    let f = make_field(12).unwrap();
    let j = albert(&cyclic_from_symmetric(&para(&zorn_cayley(&f)).unwrap()).unwrap()).unwrap();
    for a in 0..3 {
        for b in 3..ALBERT_DIM {
            assert!(j.trace_form(&j.basis(a), &j.basis(b)).is_zero());
        }
    }
    let l = [Cyc::from_i64(&f, 2), Cyc::from_ratio(&f, 1, 3), Cyc::from_i64(&f, -4)];
    let x = AlbertElement { l: l.clone(), v: vec![] };
    assert_eq!(j.norm(&x).unwrap(), &(&l[0] * &l[1]) * &l[2]);
}

#[test]
fn corrupted_constant_is_caught() {
    let f = make_field(12).unwrap();
    let j = albert(&cyclic_from_symmetric(&para(&zorn_cayley(&f)).unwrap()).unwrap()).unwrap();
    let mut s = j.structure.clone();
    let t = &mut s.maps[0].table[5][9];
    t.push((0, Cyc::one(&f)));
    t.sort_by_key(|x| x.0);
    let r = verify_jordan(&s);
    assert!(!r.ok());
}

#[test]
fn fine_okubo_grading_extends_with_one_dimensional_components() {
    let f = make_field(12).unwrap();
    let gc = build(&f, &FineKind::Okubo.params()).unwrap();
    let j = albert(&gc.v).unwrap();
    let (gr, _) = grade_albert(&j, &gc).unwrap();
    let comps = gr.components(0);
    assert_eq!(comps.len(), 27);
    assert!(comps.values().all(|&d| d == 1));
}

#[test]
fn rank_eight_identity_component() {
    let f = make_field(12).unwrap();
    let g = AbGroup::presented(0, &[3]).unwrap();
    let p = TypeIIIParams { group: g.clone(), variant: Variant::R8 { h: g.gen(0), t: Model::P } };
    let gc = build(&f, &p).unwrap();
    let j = albert(&gc.v).unwrap();
    let (gr, _) = grade_albert(&j, &gc).unwrap();
    assert_eq!(gr.components(0)[&g.zero()], 9);
}

#[test]
fn trivial_l_grading_is_rejected() {
    let f = make_field(12).unwrap();
    let s = para(&zorn_cayley(&f)).unwrap();
    let g = AbGroup::presented(0, &[3]).unwrap();
    let gc = trialg::classify::graded_tensor(&s, &g, &vec![g.zero(); 8], &g.zero()).unwrap();
    let j = albert(&gc.v).unwrap();
    assert!(grade_albert(&j, &gc).is_err());
}
