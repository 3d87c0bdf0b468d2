use clap::ValueEnum;
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::Path;

use trialg::albert::{albert, grade_albert, verify_degree3, verify_jordan, ALBERT_DIM};
use trialg::brauer::{graded_division_from_pair, related_triple, verify_brauer_relations, Bichar, MatGraded};
use trialg::classify::{build as build_typeiii, fine_catalog, fine_typeiii, replay, similar_params, verify_build, FineKind, GradedCyclic, TypeIIIParams};
use trialg::composition::{
    cartan_degrees, doubled_cayley, is_hurwitz, is_symmetric_composition, okubo_sl3, para, split_quadratic, z2cubed_degrees, zorn_cayley,
    SymCompAlgebra,
};
use trialg::cyclic::{cyclic_from_symmetric, verify_cyclic_axioms, CyclicAlgebra};
use trialg::fgab::{quotient, AbGroup};
use trialg::grading::verify_grading;
use trialg::linalg::same_span;
use trialg::trialitarian::{
    alpha, clifford_even, detect_type, end_algebra, induce_e_grading, kappa, lie_of_e, triples_in_e, verify_alpha, verify_clifford,
    verify_e_grading, verify_end, verify_kappa, GradingType, E_DIM,
};
use trialg::triality::{check_graded_module, check_lie, der_cyclic, induce_tri_grading, is_d4, root_datum, tri_basis, BasisGrading, TRI_DIM};
use trialg::scalars::parse_rational;
use trialg::{Cyc, Field, Report};

use crate::output::{self, read_json, CliError, Out};

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Constructor {
    ZornCayley,
    DoubledCayley,
    SplitQuadratic,
    ParaCayley,
    Okubo,
    CyclicPara,
    CyclicOkubo,
    TriPara,
    TriOkubo,
    AlbertPara,
    AlbertOkubo,
    /// Needs --params with Type III parameters.
    #[value(name = "type-iii")]
    TypeIii,
    /// Needs --params with a bicharacter.
    Division,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Suite {
    Composition,
    Cyclic,
    Lie,
    Trialitarian,
    Jordan,
    Grading,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum BuiltinTypeOne {
    Trivial,
    Cartan,
    #[value(name = "z2cubed-cayley")]
    Z2cubedCayley,
}

/// {"group": {"free_rank": 0, "torsion": [2, 2]}, "beta": [[0, 1, ["-1"]]]}
#[derive(Deserialize)]
struct BicharJson {
    group: AbGroup,
    #[serde(default)]
    beta: Vec<(usize, usize, Vec<String>)>,
}

fn lib(e: impl std::fmt::Display) -> CliError {
    CliError::param(e)
}

fn models(f: &Field) -> Result<Vec<SymCompAlgebra>, CliError> {
    Ok(vec![para(&zorn_cayley(f)).map_err(lib)?, okubo_sl3(f).map_err(lib)?])
}

fn cyclic_of(f: &Field, okubo: bool) -> Result<CyclicAlgebra, CliError> {
    let s = if okubo { okubo_sl3(f) } else { para(&zorn_cayley(f)) }.map_err(lib)?;
    cyclic_from_symmetric(&s).map_err(lib)
}

fn need_params<T: serde::de::DeserializeOwned>(params: Option<&Path>, what: &str) -> Result<T, CliError> {
    let p = params.ok_or_else(|| CliError::Param(format!("{what} needs --params")))?;
    read_json(p)
}

/// Coefficients of 1, ζ, ζ², … (any number of them).
fn read_scalar(f: &Field, c: &[String]) -> Result<Cyc, CliError> {
    let coeffs = c.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>().map_err(lib)?;
    Ok(Cyc::from_poly(f, &coeffs))
}

fn read_bichar(f: &Field, j: BicharJson) -> Result<Bichar, CliError> {
    let group = AbGroup::presented(j.group.free_rank, &j.group.torsion).map_err(lib)?;
    let mut b = Bichar::trivial(f, &group);
    for (i, k, c) in &j.beta {
        if *i >= group.ngens() || *k >= group.ngens() {
            return Err(CliError::Param(format!("generator index out of range in beta entry ({i}, {k})")));
        }
        b.set(*i, *k, &read_scalar(f, c)?).map_err(lib)?;
    }
    b.validate().map_err(lib)?;
    Ok(b)
}

pub fn build(f: &Field, out: &mut Out, name: Constructor, params: Option<&Path>) -> Result<(), CliError> {
    use Constructor::*;
    out.data("constructor", json!(name.to_possible_value().map(|v| v.get_name().to_string())));
    match name {
        ZornCayley | DoubledCayley | SplitQuadratic => {
            let a = match name {
                ZornCayley => zorn_cayley(f),
                DoubledCayley => doubled_cayley(f),
                _ => split_quadratic(f),
            };
            out.report("hurwitz", &is_hurwitz(&a));
            out.data("structure", output::structure(&a.structure()));
        }
        ParaCayley | Okubo => {
            let s = if matches!(name, Okubo) { okubo_sl3(f) } else { para(&zorn_cayley(f)) }.map_err(lib)?;
            out.report("symmetric_composition", &is_symmetric_composition(&s));
            out.data("structure", output::structure(&s.structure()));
        }
        CyclicPara | CyclicOkubo => {
            let v = cyclic_of(f, matches!(name, CyclicOkubo))?;
            out.report("cyclic_axioms", &verify_cyclic_axioms(&v));
            out.data("structure", output::structure(&v.structure()));
        }
        TriPara | TriOkubo => {
            let s = if matches!(name, TriOkubo) { okubo_sl3(f) } else { para(&zorn_cayley(f)) }.map_err(lib)?;
            let tri = tri_basis(&s).map_err(lib)?;
            out.check("dimension", tri.dim() == TRI_DIM, json!(tri.dim()));
            out.report("lie", &check_lie(&tri.lie));
            out.data("structure", output::structure(&tri.lie));
        }
        AlbertPara | AlbertOkubo => {
            let j = albert(&cyclic_of(f, matches!(name, AlbertOkubo))?).map_err(lib)?;
            out.check("dimension", j.structure.dim(0) == ALBERT_DIM, json!(j.structure.dim(0)));
            out.report("jordan", &verify_jordan(&j.structure));
            out.data("structure", output::structure(&j.structure));
        }
        TypeIii => {
            let p: TypeIIIParams = need_params(params, "type-iii")?;
            let gc = build_typeiii(f, &p).map_err(lib)?;
            out.report("build", &verify_build(&gc));
            out.data("params", p.to_json());
            out.data("structure", output::structure(&gc.structure));
            out.data("grading", output::grading(&gc.grading));
        }
        Division => {
            let b = read_bichar(f, need_params(params, "division")?)?;
            let (s, g) = graded_division_from_pair(&b).map_err(lib)?;
            out.report("grading", &verify_grading(&s, &g));
            out.report("matrix_grading", &MatGraded::from_structure(&s, &g).map_err(lib)?.verify());
            out.data("structure", output::structure(&s));
            out.data("grading", output::grading(&g));
        }
    }
    Ok(())
}

pub fn verify(f: &Field, out: &mut Out, suite: Suite, params: Option<&Path>, seed: u64) -> Result<(), CliError> {
    match suite {
        Suite::Composition => {
            for s in models(f)? {
                out.report(&format!("symmetric/{}", s.name), &is_symmetric_composition(&s));
            }
            let d = para(&doubled_cayley(f)).map_err(lib)?;
            out.report(&format!("symmetric/{}", d.name), &is_symmetric_composition(&d));
            for a in [zorn_cayley(f), doubled_cayley(f), split_quadratic(f)] {
                out.report(&format!("hurwitz/{}", a.name), &is_hurwitz(&a));
            }
        }
        Suite::Cyclic => {
            for s in models(f)? {
                let v = cyclic_from_symmetric(&s).map_err(lib)?;
                out.report(&s.name.to_string(), &verify_cyclic_axioms(&v));
                out.report(&format!("{}/opposite", s.name), &verify_cyclic_axioms(&v.opposite()));
            }
        }
        Suite::Lie => {
            for s in models(f)? {
                let tri = tri_basis(&s).map_err(lib)?;
                let name = s.name.clone();
                out.check(&format!("{name}/dimension"), tri.dim() == TRI_DIM, json!(tri.dim()));
                let ranks = tri.projection_ranks();
                out.check(&format!("{name}/projection_ranks"), ranks.iter().all(|&r| r == TRI_DIM), json!(ranks));
                out.report(&format!("{name}/jacobi"), &check_lie(&tri.lie));
                let rd = root_datum(&tri).map_err(lib)?;
                let d4 = rd.roots.len() == 24 && rd.simple_roots.len() == 4 && is_d4(&rd.cartan_matrix);
                out.check(&format!("{name}/root_datum"), d4, json!({"roots": rd.roots.len(), "cartan_matrix": rd.cartan_matrix}));
                let der = der_cyclic(&cyclic_from_symmetric(&s).map_err(lib)?).map_err(lib)?;
                out.check(&format!("{name}/derivations"), der.len() == TRI_DIM, json!(der.len()));
            }
        }
        Suite::Trialitarian => {
            for s in models(f)? {
                let name = s.name.clone();
                let v = cyclic_from_symmetric(&s).map_err(lib)?;
                let e = end_algebra(&v);
                out.report(&format!("{name}/end"), &verify_end(&e));
                let cl = clifford_even(&v);
                out.report(&format!("{name}/clifford"), &verify_clifford(&cl, 20, seed));
                let al = alpha(&v, &cl);
                out.report(&format!("{name}/alpha"), &verify_alpha(&e, &cl, &al));
                let kp = kappa(&e, &cl);
                out.report(&format!("{name}/kappa"), &verify_kappa(&e, &cl, &kp));
                let lie = lie_of_e(&e, &kp, &al, &Cyc::from_i64(f, 2));
                let der = triples_in_e(&der_cyclic(&v).map_err(lib)?);
                out.check(&format!("{name}/lie_dimension"), lie.len() == TRI_DIM, json!(lie.len()));
                out.check(&format!("{name}/lie_is_derivations"), same_span(f, &lie, &der, E_DIM), json!(null));
            }
        }
        Suite::Jordan => {
            for (okubo, label) in [(false, "para"), (true, "okubo")] {
                let j = albert(&cyclic_of(f, okubo)?).map_err(lib)?;
                out.check(&format!("{label}/dimension"), j.structure.dim(0) == ALBERT_DIM, json!(j.structure.dim(0)));
                out.report(&format!("{label}/jordan"), &verify_jordan(&j.structure));
                out.report(&format!("{label}/degree3"), &verify_degree3(&j, 100, seed));
            }
            let (gc, _) = fine_typeiii(f, FineKind::Okubo).map_err(lib)?;
            let j = albert(&gc.v).map_err(lib)?;
            let (g, r) = grade_albert(&j, &gc).map_err(lib)?;
            out.report("okubo_fine/grading", &r);
            let comps = g.components(0);
            let one_dim = comps.len() == ALBERT_DIM && comps.values().all(|&d| d == 1);
            out.check("okubo_fine/components", one_dim, json!(comps.len()));
        }
        Suite::Grading => match params {
            Some(path) => {
                let p: TypeIIIParams = read_json(path)?;
                let gc = build_typeiii(f, &p).map_err(lib)?;
                grading_checks(out, "params", &gc)?;
            }
            None => {
                for kind in FineKind::ALL {
                    let (gc, _) = fine_typeiii(f, kind).map_err(lib)?;
                    grading_checks(out, &format!("{kind:?}").to_lowercase(), &gc)?;
                }
            }
        },
    }
    Ok(())
}

fn grading_checks(out: &mut Out, label: &str, gc: &GradedCyclic) -> Result<(), CliError> {
    out.report(&format!("{label}/build"), &verify_build(gc));
    let bg = gc.basis_grading();
    let tri = tri_basis(&gc.v.s).map_err(lib)?;
    let tg = induce_tri_grading(&tri, &bg).map_err(lib)?;
    out.report(&format!("{label}/graded_module"), &check_graded_module(&tri, &bg, &tg));
    let e = end_algebra(&gc.v);
    let eg = induce_e_grading(&e, &bg).map_err(lib)?;
    out.report(&format!("{label}/e_grading"), &verify_e_grading(&e, &eg, None));
    let ty = detect_type(&e, &eg).map_err(lib)?;
    out.check(&format!("{label}/type"), ty == GradingType::III(gc.h.clone()), json!(format!("{ty:?}")));
    Ok(())
}

pub fn invariants(f: &Field, out: &mut Out, path: &Path) -> Result<(), CliError> {
    let p: TypeIIIParams = read_json(path)?;
    let gc = build_typeiii(f, &p).map_err(lib)?;
    out.report("build", &verify_build(&gc));
    let inv = gc.invariants();
    let tri = tri_basis(&gc.v.s).map_err(lib)?;
    let tg = induce_tri_grading(&tri, &gc.basis_grading()).map_err(lib)?;
    let dims: Vec<Value> = inv.dims.iter().map(|(g, d)| json!([g, d])).collect();
    out.data("params", p.to_json());
    out.data("rank", json!(inv.identity_dim));
    out.data("support", json!(inv.support));
    out.data("dims", json!(dims));
    out.data("type_vector", json!(inv.type_vector));
    out.data("universal_group", json!(inv.universal_group.primary_form().to_string()));
    out.data("tri_type_vector", json!(trialg::grading::type_vector(&tg.dims())));
    Ok(())
}

pub fn similar(out: &mut Out, a: &Path, b: &Path) -> Result<(), CliError> {
    let p: TypeIIIParams = read_json(a)?;
    let q: TypeIIIParams = read_json(b)?;
    let v = similar_params(&p, &q).map_err(lib)?;
    out.check("replay", replay(&p, &q, &v), json!(null));
    out.data("similar", json!(v.similar));
    out.data("trace", serde_json::to_value(&v.trace).expect("json"));
    Ok(())
}

fn builtin_grading(f: &Field, b: BuiltinTypeOne) -> Result<(SymCompAlgebra, BasisGrading), CliError> {
    let (s, g, degs) = match b {
        BuiltinTypeOne::Trivial => {
            let g = AbGroup::presented(0, &[]).map_err(lib)?;
            let d = vec![g.zero(); 8];
            (para(&zorn_cayley(f)).map_err(lib)?, g, d)
        }
        BuiltinTypeOne::Cartan => {
            let g = AbGroup::presented(2, &[]).map_err(lib)?;
            let d = cartan_degrees(&g, &g.gen(0), &g.gen(1));
            (para(&zorn_cayley(f)).map_err(lib)?, g, d)
        }
        BuiltinTypeOne::Z2cubedCayley => {
            let g = AbGroup::presented(0, &[2, 2, 2]).map_err(lib)?;
            let d = z2cubed_degrees(&g, &[g.gen(0), g.gen(1), g.gen(2)]);
            (para(&doubled_cayley(f)).map_err(lib)?, g, d)
        }
    };
    let gc = trialg::classify::graded_tensor(&s, &g, &degs, &g.zero()).map_err(lib)?;
    Ok((s, gc.basis_grading()))
}

pub fn brauer(f: &Field, out: &mut Out, params: Option<&Path>, builtin: Option<BuiltinTypeOne>) -> Result<(), CliError> {
    let (s, bg) = match (params, builtin) {
        (_, Some(b)) => {
            out.data("source", json!(b.to_possible_value().map(|v| v.get_name().to_string())));
            builtin_grading(f, b)?
        }
        (Some(path), None) => {
            let p: TypeIIIParams = read_json(path)?;
            let gc = build_typeiii(f, &p).map_err(lib)?;
            let (_, proj) = quotient(&p.group, &[p.h().clone()]).map_err(lib)?;
            out.data("source", p.to_json());
            (gc.v.s.clone(), gc.basis_grading().coarsen(&proj))
        }
        (None, None) => return Err(CliError::Param("brauer needs parameters or --builtin".into())),
    };
    out.data("group", json!(bg.group.to_string()));
    let tri = tri_basis(&s).map_err(lib)?;
    let tg = induce_tri_grading(&tri, &bg).map_err(lib)?;
    let rt = related_triple(&tri, &tg).map_err(lib)?;
    out.report("related_triple", &rt.report);
    let v = verify_brauer_relations(&rt).map_err(lib)?;
    out.report("relations", &v.report);
    out.data("relations", v.to_json());
    out.data("all_trivial", json!(v.params.iter().all(|p| p.is_trivial())));
    Ok(())
}

pub fn catalog(f: &Field, out: &mut Out) -> Result<(), CliError> {
    let (rows, r): (_, Report) = fine_catalog(f).map_err(lib)?;
    out.report("catalog", &r);
    out.data("rows", serde_json::to_value(&rows).expect("json"));
    Ok(())
}
