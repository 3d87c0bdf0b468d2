//! Acceptance criteria 1-12, one line of output each.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};

use trialg::albert::{albert, grade_albert, verify_degree3, verify_jordan, ALBERT_DIM};
use trialg::brauer::{check_beta_bar, graded_division_from_pair, related_triple, verify_brauer_relations, Bichar, MatGraded};
use trialg::classify::{
    build, enumerate_params, fine_catalog, fine_typeiii, graded_tensor, rank, replay, similar_params, similarity_classes, verify_build,
    verify_graded_iso, witness_map, FineKind, Justification, TypeIIIParams, Variant, WitnessCase,
};
use trialg::composition::{doubled_cayley, is_hurwitz, is_symmetric_composition, okubo_sl3, para, z2cubed_degrees, zorn_cayley, Sign, SymCompAlgebra};
use trialg::cyclic::{cyclic_from_symmetric, verify_cyclic_axioms};
use trialg::fgab::{quotient, AbGroup};
use trialg::grading::type_vector;
use trialg::linalg::same_span;
use trialg::trialitarian::{
    alpha, clifford_even, end_algebra, induce_e_grading, kappa, lie_of_e, triples_in_e, verify_alpha, verify_clifford, verify_end, CL_L_DIM,
    E_DIM,
};
use trialg::triality::{center_orbit, check_graded_module, check_lie, der_cyclic, induce_tri_grading, is_d4, root_datum, tri_basis, BasisGrading, Tri};
use trialg::{make_field, Cyc, Field, Report};

type Outcome = Result<(), String>;

fn field() -> Field {
    make_field(12).unwrap()
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn ok(label: &str, r: &Report) -> Outcome {
    ensure(r.ok(), || format!("{label}: {} of {} checks failed, first: {:?}", r.violations.len(), r.checks, r.violations.first()))
}

fn models(f: &Field) -> Vec<SymCompAlgebra> {
    vec![para(&zorn_cayley(f)).unwrap(), okubo_sl3(f).unwrap()]
}

fn z3cubed() -> AbGroup {
    AbGroup::presented(0, &[3, 3, 3]).unwrap()
}

fn z2cubed_z3() -> AbGroup {
    AbGroup::presented(0, &[2, 2, 2, 3]).unwrap()
}

/// Hand-made data for the groups with a free part, where enumeration is not finite.
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
        mk(Variant::R8 { h: h.clone(), t: trialg::classify::Model::P }),
        mk(Variant::R8 { h, t: trialg::classify::Model::O }),
    ]
}

/// A spread of parameters over all five groups, at most `per` per (group, rank).
fn sample_params(per: usize) -> Vec<TypeIIIParams> {
    let mut out = Vec::new();
    for g in [z3cubed(), z2cubed_z3(), AbGroup::presented(0, &[9, 3]).unwrap()] {
        for r in [0u8, 1, 2, 4, 8] {
            let ps = enumerate_params(&g, r).unwrap();
            let step = (ps.len() / per).max(1);
            out.extend(ps.into_iter().step_by(step).take(per));
        }
    }
    for g in [AbGroup::presented(2, &[3]).unwrap(), AbGroup::presented(1, &[3]).unwrap()] {
        out.extend(infinite_params(&g));
    }
    out
}

fn criterion_1() -> Outcome {
    let f = field();
    for s in models(&f) {
        ok(&s.name, &is_symmetric_composition(&s))?;
    }
    ok("split Cayley", &is_hurwitz(&zorn_cayley(&f)))?;
    ok("doubled Cayley", &is_hurwitz(&doubled_cayley(&f)))
}

fn criterion_2() -> Outcome {
    let f = field();
    for s in models(&f) {
        let tri = tri_basis(&s).map_err(|e| e.to_string())?;
        ensure(tri.dim() == 28, || format!("{}: dim tri = {}", s.name, tri.dim()))?;
        ensure(tri.projection_ranks() == [28; 3], || format!("{}: projection ranks {:?}", s.name, tri.projection_ranks()))?;
        ok("Jacobi", &check_lie(&tri.lie))?;
        let rd = root_datum(&tri).map_err(|e| e.to_string())?;
        ensure(rd.simple_roots.len() == 4 && rd.roots.len() == 24, || format!("{} roots, {} simple", rd.roots.len(), rd.simple_roots.len()))?;
        ensure(is_d4(&rd.cartan_matrix), || format!("Cartan matrix {:?}", rd.cartan_matrix))?;
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let f = field();
    for s in models(&f) {
        let v = cyclic_from_symmetric(&s).map_err(|e| e.to_string())?;
        ok(&s.name, &verify_cyclic_axioms(&v))?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let f = field();
    for s in models(&f) {
        let v = cyclic_from_symmetric(&s).map_err(|e| e.to_string())?;
        let e = end_algebra(&v);
        ok("End_L(V)", &verify_end(&e))?;
        let cl = clifford_even(&v);
        ensure(cl.dim() == 3 * CL_L_DIM, || format!("Cl0 has F-dimension {}", cl.dim()))?;
        ok("Cl0", &verify_clifford(&cl, 20, 7))?;
        let al = alpha(&v, &cl);
        ok("alpha", &verify_alpha(&e, &cl, &al))?;
        let kp = kappa(&e, &cl);
        let lie = lie_of_e(&e, &kp, &al, &Cyc::from_i64(&f, 2));
        ensure(lie.len() == 28, || format!("{}: L(E) has dimension {}", s.name, lie.len()))?;
        let der = triples_in_e(&der_cyclic(&v).map_err(|e| e.to_string())?);
        ensure(same_span(&f, &lie, &der, E_DIM), || format!("{}: L(E) differs from Der_L(V)", s.name))?;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let f = field();
    let (rows, r) = fine_catalog(&f).map_err(|e| e.to_string())?;
    ok("catalog", &r)?;
    let want = [AbGroup::presented(2, &[3]).unwrap(), z2cubed_z3(), z3cubed()];
    for ((kind, row), w) in FineKind::ALL.iter().zip(&rows).zip(&want) {
        let (gc, inv) = fine_typeiii(&f, *kind).map_err(|e| e.to_string())?;
        ok(&format!("{kind:?}"), &verify_build(&gc))?;
        ensure(inv.universal_group.is_isomorphic(w), || format!("{kind:?}: universal group {} (want {w})", row.universal_group))?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let f = field();
    for p in sample_params(40) {
        let gc = build(&f, &p).map_err(|e| format!("{p:?}: {e}"))?;
        let r = rank(&gc).map_err(|e| e.to_string())?;
        ensure(r == p.rank() as usize, || format!("{} {p:?}: identity component has dimension {r}", p.group))?;
    }
    Ok(())
}

fn check_relation(ps: &[TypeIIIParams], classes: &[Vec<usize>], random_pairs: Option<usize>) -> Outcome {
    let mut class_of = vec![0usize; ps.len()];
    for (c, m) in classes.iter().enumerate() {
        for &i in m {
            class_of[i] = c;
        }
    }
    let check = |i: usize, j: usize| -> Outcome {
        let v = similar_params(&ps[i], &ps[j]).map_err(|e| e.to_string())?;
        ensure(v.similar == (class_of[i] == class_of[j]), || format!("not transitive at {:?} vs {:?}", ps[i], ps[j]))?;
        ensure(similar_params(&ps[j], &ps[i]).unwrap().similar == v.similar, || format!("not symmetric at {:?} vs {:?}", ps[i], ps[j]))?;
        ensure(replay(&ps[i], &ps[j], &v), || format!("trace {:?} does not replay", v.trace))
    };
    match random_pairs {
        None => {
            for i in 0..ps.len() {
                for j in i..ps.len() {
                    check(i, j)?;
                }
            }
        }
        Some(k) => {
            for m in classes {
                for &i in m {
                    check(m[0], i)?;
                }
            }
            for m in classes {
                let hh = ps[m[0]].h().clone();
                let g = &ps[m[0]].group;
                for j in 0..ps.len() {
                    if *ps[j].h() == hh || *ps[j].h() == g.neg(&hh) {
                        let v = similar_params(&ps[m[0]], &ps[j]).unwrap();
                        ensure(v.similar == (class_of[m[0]] == class_of[j]), || format!("{:?} vs {:?}", ps[m[0]], ps[j]))?;
                    }
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..k {
                check(rng.gen_range(0..ps.len()), rng.gen_range(0..ps.len()))?;
            }
        }
    }
    Ok(())
}

type Signature = (usize, Vec<usize>, AbGroup, Vec<usize>);

fn signature(f: &Field, p: &TypeIIIParams, tris: &mut BTreeMap<String, Tri>) -> Signature {
    let gc = build(f, p).unwrap();
    let inv = gc.invariants();
    let tri = tris.entry(gc.v.s.name.clone()).or_insert_with(|| tri_basis(&gc.v.s).unwrap());
    let tg = induce_tri_grading(tri, &gc.basis_grading()).unwrap();
    (rank(&gc).unwrap(), inv.type_vector.clone(), inv.universal_group.iso_type(), type_vector(&tg.dims()))
}

fn criterion_7() -> Outcome {
    let f = field();
    let mut tris = BTreeMap::new();
    for g in [z3cubed(), z2cubed_z3()] {
        for r in [0u8, 1, 2, 4, 8] {
            let ps = enumerate_params(&g, r).map_err(|e| e.to_string())?;
            if ps.is_empty() {
                continue;
            }
            let classes = similarity_classes(&ps).map_err(|e| e.to_string())?;
            check_relation(&ps, &classes, (ps.len() > 1000).then_some(100_000))?;
            for m in classes.iter().filter(|m| m.len() > 1) {
                let last = m[m.len() - 1];
                let (a, b) = (signature(&f, &ps[m[0]], &mut tris), signature(&f, &ps[last], &mut tris));
                ensure(a == b, || format!("similar {:?} and {:?} have invariants {a:?} and {b:?}", ps[m[0]], ps[last]))?;
            }
        }
    }
    for case in WitnessCase::ALL {
        for g in [z3cubed(), z2cubed_z3()] {
            let ps = enumerate_params(&g, case.rank()).unwrap();
            for p in ps.iter().step_by((ps.len() / 5).max(1)) {
                let w = witness_map(&f, case, p).map_err(|e| format!("{case:?}: {e}"))?;
                ok(&format!("{case:?}"), &w.report)?;
                let a = build(&f, &w.source).unwrap();
                let b = build(&f, &w.target).unwrap();
                ok(&format!("{case:?} iso"), &verify_graded_iso(&w.iso, &a.v, &a.basis_grading(), &b.v, &b.basis_grading(), w.opposite))?;
            }
        }
    }
    let g = z3cubed();
    let p = TypeIIIParams { group: g.clone(), variant: Variant::R0 { k: [g.gen(0), g.gen(1)], h: g.gen(2), delta: Sign::Plus } };
    let q = p.with_h(g.neg(&g.gen(2)));
    let v = similar_params(&p, &q).map_err(|e| e.to_string())?;
    ensure(!v.similar && matches!(v.trace, Justification::Orientation { .. }), || format!("(+,h) vs (+,h⁻¹): {v:?}"))
}

fn criterion_8() -> Outcome {
    let f = field();
    for kind in FineKind::ALL {
        let (gc, _) = fine_typeiii(&f, kind).map_err(|e| e.to_string())?;
        let bg = gc.basis_grading();
        let orbit = center_orbit(&gc.v, &bg);
        ensure(orbit.len() == 4, || format!("{kind:?}: orbit of size {}", orbit.len()))?;
        let tri = tri_basis(&gc.v.s).unwrap();
        let e = end_algebra(&gc.v);
        let tgs: Vec<_> = orbit.iter().map(|(_, g)| induce_tri_grading(&tri, g).unwrap()).collect();
        let egs: Vec<_> = orbit.iter().map(|(_, g)| induce_e_grading(&e, g).unwrap()).collect();
        for a in 0..4 {
            for b in (a + 1)..4 {
                ensure(!orbit[a].1.same_components(&orbit[b].1, &f), || format!("{kind:?}: orbit gradings {a}, {b} agree on V"))?;
                ensure(tgs[a].same_as(&tgs[b], &f), || format!("{kind:?}: orbit gradings {a}, {b} differ on tri"))?;
                ensure(egs[a].same_as(&egs[b], &f), || format!("{kind:?}: orbit gradings {a}, {b} differ on E"))?;
            }
        }
    }
    Ok(())
}

fn brauer_of(tri: &Tri, bg: &BasisGrading, label: &str) -> Result<trialg::brauer::BrauerVerdict, String> {
    let tg = induce_tri_grading(tri, bg).map_err(|e| e.to_string())?;
    let rt = related_triple(tri, &tg).map_err(|e| format!("{label}: {e}"))?;
    ok(&format!("{label}: related triple"), &rt.report)?;
    let v = verify_brauer_relations(&rt).map_err(|e| format!("{label}: {e}"))?;
    ok(&format!("{label}: relations"), &v.report)?;
    Ok(v)
}

fn criterion_9() -> Outcome {
    let f = field();
    let mut tris: BTreeMap<String, Tri> = BTreeMap::new();
    let mut ps = sample_params(3);
    ps.extend(FineKind::ALL.iter().map(|k| k.params()));
    for p in &ps {
        // characters of the coarsened group need its exponent to divide N
        let (quo, proj) = quotient(&p.group, &[p.h().clone()]).map_err(|e| e.to_string())?;
        let exp = quo.torsion.iter().fold(12, |n, &t| num_integer::lcm(n, t));
        let f = if exp == 12 { f.clone() } else { make_field(exp as u32).map_err(|e| e.to_string())? };
        let gc = build(&f, p).map_err(|e| e.to_string())?;
        let bg = gc.basis_grading().coarsen(&proj);
        let tri = tris.entry(format!("{}/{exp}", gc.v.s.name)).or_insert_with(|| tri_basis(&gc.v.s).unwrap());
        let v = brauer_of(tri, &bg, &format!("{p:?}"))?;
        ensure(v.params.iter().all(|d| d.is_trivial()), || format!("{p:?}: nontrivial division factor"))?;
    }
    // the Z2³ grading on the doubled Cayley algebra
    let s = para(&doubled_cayley(&f)).unwrap();
    let g = AbGroup::presented(0, &[2, 2, 2]).unwrap();
    let degs = z2cubed_degrees(&g, &[g.gen(0), g.gen(1), g.gen(2)]);
    let gc = graded_tensor(&s, &g, &degs, &g.zero()).map_err(|e| e.to_string())?;
    let tri = tri_basis(&s).unwrap();
    brauer_of(&tri, &gc.basis_grading(), "Z2^3 Cayley")?;
    // the correspondence D ↔ (T, β) on two divisions
    let pauli = AbGroup::presented(0, &[2, 2]).unwrap();
    let z3_pauli = AbGroup::presented(0, &[3, 2, 2]).unwrap();
    for (grp, i, j) in [(pauli, 0, 1), (z3_pauli, 1, 2)] {
        let mut b = Bichar::trivial(&f, &grp);
        b.set(i, j, &-Cyc::one(&f)).map_err(|e| e.to_string())?;
        let (st, gr) = graded_division_from_pair(&b).map_err(|e| e.to_string())?;
        let a = MatGraded::from_structure(&st, &gr).map_err(|e| e.to_string())?;
        ok(&format!("{grp} division"), &check_beta_bar(&a).map_err(|e| e.to_string())?)?;
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let f = field();
    for s in models(&f) {
        let v = cyclic_from_symmetric(&s).unwrap();
        let j = albert(&v).map_err(|e| e.to_string())?;
        ensure(j.structure.dim(0) == ALBERT_DIM, || format!("dim J = {}", j.structure.dim(0)))?;
        ok(&format!("{} Jordan", s.name), &verify_jordan(&j.structure))?;
        ok(&format!("{} degree 3", s.name), &verify_degree3(&j, 100, 2024))?;
    }
    let (gc, _) = fine_typeiii(&f, FineKind::Okubo).unwrap();
    let j = albert(&gc.v).unwrap();
    let (g, r) = grade_albert(&j, &gc).map_err(|e| e.to_string())?;
    ok("Albert grading", &r)?;
    let comps = g.components(0);
    ensure(comps.len() == 27 && comps.values().all(|&d| d == 1), || format!("{} components", comps.len()))
}

fn criterion_11() -> Outcome {
    let f = field();
    let mut tris: BTreeMap<String, Tri> = BTreeMap::new();
    let mut ps = sample_params(12);
    ps.extend(FineKind::ALL.iter().map(|k| k.params()));
    for p in &ps {
        let gc = build(&f, p).map_err(|e| e.to_string())?;
        let bg = gc.basis_grading();
        let tri = tris.entry(gc.v.s.name.clone()).or_insert_with(|| tri_basis(&gc.v.s).unwrap());
        let tg = induce_tri_grading(tri, &bg).map_err(|e| e.to_string())?;
        ok(&format!("{p:?}"), &check_graded_module(tri, &bg, &tg))?;
    }
    Ok(())
}

fn scratch_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("trialg-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn run_cli(args: &[String]) -> (Vec<u8>, Option<i32>) {
    let o = Command::new(env!("CARGO_BIN_EXE_trialg"))
        .args(args)
        .env_remove("TRIALG_FIELD_CONDUCTOR")
        .env_remove("TRIALG_SEED")
        .env_remove("TRIALG_OUT")
        .output()
        .expect("run trialg");
    (o.stdout, o.status.code())
}

fn criterion_12() -> Outcome {
    let dir = scratch_dir();
    let r8p = write(&dir, "r8p.json", r#"{"r":8,"group":{"free_rank":0,"torsion":[3]},"h":[1],"t":"p"}"#);
    let r8o = write(&dir, "r8o.json", r#"{"r":8,"group":{"free_rank":0,"torsion":[3]},"h":[1],"t":"o"}"#);
    let r0 = write(&dir, "r0.json", r#"{"r":0,"group":{"free_rank":0,"torsion":[3,3,3]},"k":[[1,0,0],[0,1,0]],"h":[0,0,1],"delta":"+"}"#);
    let pauli = write(&dir, "pauli.json", r#"{"group":{"free_rank":0,"torsion":[2,2]},"beta":[[0,1,["-1"]]]}"#);
    let bad = write(&dir, "bad.json", "{\"r\": 8,");
    let cmds: Vec<(Vec<&str>, i32)> = vec![
        (vec!["catalog", "fine-typeIII"], 0),
        (vec!["similar", &r8p, &r8o], 0),
        (vec!["similar", &r0, &r0], 0),
        (vec!["invariants", &r0], 0),
        (vec!["verify", "composition"], 0),
        (vec!["verify", "cyclic"], 0),
        (vec!["verify", "lie"], 0),
        (vec!["verify", "trialitarian"], 0),
        (vec!["verify", "jordan", "--seed", "5"], 0),
        (vec!["verify", "grading"], 0),
        (vec!["verify", "grading", "--params", &r8o], 0),
        (vec!["brauer", "--builtin", "z2cubed-cayley"], 0),
        (vec!["brauer", &r0], 0),
        (vec!["build", "okubo"], 0),
        (vec!["build", "type-iii", "--params", &r0], 0),
        (vec!["build", "division", "--params", &pauli], 0),
        (vec!["build", "albert-okubo", "--field-conductor", "24"], 0),
        (vec!["similar", &bad, &r8o], 2),
    ];
    for (args, code) in &cmds {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let (a, ca) = run_cli(&args);
        let (b, cb) = run_cli(&args);
        ensure(ca == Some(*code) && cb == Some(*code), || format!("{args:?}: exit codes {ca:?}, {cb:?}, want {code}"))?;
        ensure(a == b, || format!("{args:?}: output differs between runs"))?;
        ensure(!a.is_empty(), || format!("{args:?}: no output"))?;
    }
    let (sim, _) = run_cli(&["similar".into(), r8p, r8o]);
    let v: serde_json::Value = serde_json::from_slice(&sim).map_err(|e| e.to_string())?;
    ensure(v["data"]["similar"] == serde_json::json!(false), || "rank-8 (h,p) vs (h,o) reported similar".into())?;
    ensure(v["conductor"] == 12 && v["version"] == trialg::VERSION, || "report lacks conductor or version".into())?;
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 12] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(()) => println!("criterion {n}: PASS"),
            Err(e) => {
                failed += 1;
                println!("criterion {n}: FAIL ({e})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
