use trialg::classify::{fine_typeiii, FineKind};
use trialg::fgab::quotient;
use trialg::trialitarian::{detect_type, end_algebra, induce_e_grading, restriction_matches_tri, verify_e_grading, GradingType};
use trialg::triality::{center_orbit, check_graded_module, induce_tri_grading, tri_basis};
use trialg::{make_field, Field};

fn field() -> Field {
    make_field(12).unwrap()
}

#[test]
fn fine_gradings_induce_type_three_on_e() {
    let f = field();
    for kind in [FineKind::Cartan, FineKind::Z2cubed, FineKind::Okubo] {
        let (gc, _) = fine_typeiii(&f, kind).unwrap();
        let bg = gc.basis_grading();
        let e = end_algebra(&gc.v);
        let eg = induce_e_grading(&e, &bg).unwrap();
        let r = verify_e_grading(&e, &eg, None);
        assert!(r.ok(), "{kind:?}: {:?}", r.violations);
        assert_eq!(detect_type(&e, &eg).unwrap(), GradingType::III(gc.h.clone()));
        let tri = tri_basis(&gc.v.s).unwrap();
        let tg = induce_tri_grading(&tri, &bg).unwrap();
        assert!(restriction_matches_tri(&e, &eg, &tri, &tg));
        assert!(check_graded_module(&tri, &bg, &tg).ok());
        // killing h leaves a Type I grading
        let (_, proj) = quotient(&bg.group, std::slice::from_ref(&gc.h)).unwrap();
        let coarse = bg.coarsen(&proj);
        let eg1 = induce_e_grading(&e, &coarse).unwrap();
        assert_eq!(detect_type(&e, &eg1).unwrap(), GradingType::I);
    }
}

#[test]
fn center_orbit_is_invisible_on_tri_and_e() {
    let f = field();
    for kind in [FineKind::Cartan, FineKind::Z2cubed, FineKind::Okubo] {
        let (gc, _) = fine_typeiii(&f, kind).unwrap();
        let bg = gc.basis_grading();
        let orbit = center_orbit(&gc.v, &bg);
        assert_eq!(orbit.len(), 4);
        let tri = tri_basis(&gc.v.s).unwrap();
        let e = end_algebra(&gc.v);
        let tgs: Vec<_> = orbit.iter().map(|(_, g)| induce_tri_grading(&tri, g).unwrap()).collect();
        let egs: Vec<_> = orbit.iter().map(|(_, g)| induce_e_grading(&e, g).unwrap()).collect();
        for a in 0..4 {
            for b in (a + 1)..4 {
                assert!(!orbit[a].1.same_components(&orbit[b].1, &f), "{kind:?}: orbit gradings {a}, {b} agree on V");
                assert!(tgs[a].same_as(&tgs[b], &f));
                assert!(egs[a].same_as(&egs[b], &f));
            }
        }
    }
}
