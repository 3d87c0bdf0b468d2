//! Type III gradings on the rank-8 cyclic composition algebra: the five
//! families Γ_r, their ranks, the similarity criteria, explicit witnesses,
//! and the three fine gradings.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::composition::{cartan_degrees, doubled_cayley, okubo_degrees, okubo_sl3, okubo_coords, para, z2cubed_degrees, zorn_cayley, Sign, SymCompAlgebra};
use crate::cyclic::{l_slot, rho, verify_cyclic_axioms, CyclicAlgebra, LElem, DIM, RANK};
use crate::fgab::{quotient, AbGroup, GroupElem};
use crate::grading::{invariants, tensor_degrees, verify_grading, Grading, GradingInvariants, Structure};
use crate::linalg::{kernel, sv_scale, sv_unit, Echelon, Mat, SVec};
use crate::scalars::{Cyc, Field};
use crate::triality::BasisGrading;
use crate::Report;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("group mismatch: {0} vs {1}")]
    GroupMismatch(String, String),
    #[error("rank {0} is not one of 0, 1, 2, 4, 8")]
    Rank(usize),
    #[error("orientation: {0}")]
    Orientation(String),
    #[error("witness: {0}")]
    Witness(String),
    #[error("construction: {0}")]
    Build(String),
}

type Res<T> = Result<T, ClassifyError>;

fn pre(ok: bool, msg: impl FnOnce() -> String) -> Res<()> {
    if ok {
        Ok(())
    } else {
        Err(ClassifyError::Precondition(msg()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// para-Cayley
    P,
    /// Okubo
    O,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    R0 { k: [GroupElem; 2], h: GroupElem, delta: Sign },
    R1 { k: [GroupElem; 3], h: GroupElem },
    R2 { gamma: [GroupElem; 3], h: GroupElem },
    R4 { g: GroupElem, h: GroupElem },
    R8 { h: GroupElem, t: Model },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ParamsJson", into = "ParamsJson")]
pub struct TypeIIIParams {
    pub group: AbGroup,
    pub variant: Variant,
}

/// Flat JSON form: {"r": 0, "group": {...}, "k": [..], "h": .., "delta": "+"}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsJson {
    pub r: u8,
    pub group: AbGroup,
    pub h: GroupElem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<GroupElem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Sign>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<GroupElem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<GroupElem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Model>,
}

impl TryFrom<ParamsJson> for TypeIIIParams {
    type Error = String;
    fn try_from(j: ParamsJson) -> Result<Self, String> {
        let group = AbGroup::presented(j.group.free_rank, &j.group.torsion).map_err(|e| e.to_string())?;
        let fix = |e: GroupElem| -> Result<GroupElem, String> { group.elem(&e.0).map_err(|e| e.to_string()) };
        let h = fix(j.h)?;
        let arr = |v: Option<Vec<GroupElem>>, n: usize, name: &str| -> Result<Vec<GroupElem>, String> {
            let v = v.ok_or(format!("r = {} needs \"{name}\"", j.r))?;
            if v.len() != n {
                return Err(format!("\"{name}\" must have {n} entries"));
            }
            v.into_iter().map(fix).collect()
        };
        let variant = match j.r {
            0 => {
                let k = arr(j.k, 2, "k")?;
                Variant::R0 { k: [k[0].clone(), k[1].clone()], h, delta: j.delta.ok_or("r = 0 needs \"delta\"")? }
            }
            1 => {
                let k = arr(j.k, 3, "k")?;
                Variant::R1 { k: [k[0].clone(), k[1].clone(), k[2].clone()], h }
            }
            2 => {
                let g = arr(j.gamma, 3, "gamma")?;
                Variant::R2 { gamma: [g[0].clone(), g[1].clone(), g[2].clone()], h }
            }
            4 => Variant::R4 { g: fix(j.g.ok_or("r = 4 needs \"g\"")?)?, h },
            8 => Variant::R8 { h, t: j.t.ok_or("r = 8 needs \"t\"")? },
            r => return Err(format!("r = {r} is not one of 0, 1, 2, 4, 8")),
        };
        Ok(TypeIIIParams { group, variant })
    }
}

impl From<TypeIIIParams> for ParamsJson {
    fn from(p: TypeIIIParams) -> ParamsJson {
        let mut j = ParamsJson { r: p.rank(), group: p.group.clone(), h: p.h().clone(), k: None, delta: None, gamma: None, g: None, t: None };
        match p.variant {
            Variant::R0 { k, delta, .. } => {
                j.k = Some(k.to_vec());
                j.delta = Some(delta);
            }
            Variant::R1 { k, .. } => j.k = Some(k.to_vec()),
            Variant::R2 { gamma, .. } => j.gamma = Some(gamma.to_vec()),
            Variant::R4 { g, .. } => j.g = Some(g),
            Variant::R8 { t, .. } => j.t = Some(t),
        }
        j
    }
}

impl TypeIIIParams {
    pub fn rank(&self) -> u8 {
        match self.variant {
            Variant::R0 { .. } => 0,
            Variant::R1 { .. } => 1,
            Variant::R2 { .. } => 2,
            Variant::R4 { .. } => 4,
            Variant::R8 { .. } => 8,
        }
    }

    pub fn h(&self) -> &GroupElem {
        match &self.variant {
            Variant::R0 { h, .. } | Variant::R1 { h, .. } | Variant::R2 { h, .. } | Variant::R4 { h, .. } | Variant::R8 { h, .. } => h,
        }
    }

    pub fn with_h(&self, h2: GroupElem) -> TypeIIIParams {
        let mut p = self.clone();
        match &mut p.variant {
            Variant::R0 { h, .. } | Variant::R1 { h, .. } | Variant::R2 { h, .. } | Variant::R4 { h, .. } | Variant::R8 { h, .. } => *h = h2,
        }
        p
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn span(g: &AbGroup, gens: &[GroupElem]) -> BTreeSet<GroupElem> {
    g.span(gens, 1 << 12).unwrap_or_default()
}

fn order_is(g: &AbGroup, x: &GroupElem, n: u64) -> bool {
    g.element_order(x) == Some(n)
}

/// Preconditions on the Type III data, with the failed one named.
pub fn check_params(p: &TypeIIIParams) -> Res<()> {
    let g = &p.group;
    let all: Vec<&GroupElem> = match &p.variant {
        Variant::R0 { k, h, .. } => vec![&k[0], &k[1], h],
        Variant::R1 { k, h } => vec![&k[0], &k[1], &k[2], h],
        Variant::R2 { gamma, h } => vec![&gamma[0], &gamma[1], &gamma[2], h],
        Variant::R4 { g, h } => vec![g, h],
        Variant::R8 { h, .. } => vec![h],
    };
    for x in all {
        pre(g.contains(x), || format!("{x} is not an element of {g}"))?;
    }
    let h = p.h();
    pre(order_is(g, h, 3), || format!("h = {h} must have order 3"))?;
    let hh = span(g, std::slice::from_ref(h));
    match &p.variant {
        Variant::R0 { k, .. } => {
            pre(order_is(g, &k[0], 3) && order_is(g, &k[1], 3), || "the generators of K must have order 3".into())?;
            let ks = span(g, k);
            pre(ks.len() == 9, || "K must be isomorphic to Z3^2".into())?;
            pre(!ks.contains(h), || "h must not lie in K".into())?;
        }
        Variant::R1 { k, .. } => {
            pre(k.iter().all(|x| order_is(g, x, 2)), || "the generators of K must have order 2".into())?;
            let ks = span(g, k);
            pre(ks.len() == 8, || "K must be isomorphic to Z2^3".into())?;
            pre(!ks.contains(h), || "h must not lie in K".into())?;
        }
        Variant::R2 { gamma, .. } => {
            for (i, x) in gamma.iter().enumerate() {
                pre(!hh.contains(x), || format!("g{} = {x} must not lie in <h>", i + 1))?;
            }
            let s = g.add(&g.add(&gamma[0], &gamma[1]), &gamma[2]);
            pre(g.is_zero(&s), || "g1 g2 g3 must equal e".into())?;
        }
        Variant::R4 { g: x, .. } => pre(!hh.contains(x), || format!("g = {x} must not lie in <h>"))?,
        Variant::R8 { .. } => {}
    }
    Ok(())
}

/// A cyclic composition algebra with a grading on its structure (sorts V, L, F).
#[derive(Debug, Clone)]
pub struct GradedCyclic {
    pub v: CyclicAlgebra,
    pub structure: Structure,
    pub grading: Grading,
    pub h: GroupElem,
}

impl GradedCyclic {
    pub fn basis_grading(&self) -> BasisGrading {
        BasisGrading::homogeneous(&self.v, &self.grading)
    }

    pub fn invariants(&self) -> GradingInvariants {
        invariants(&self.structure, &self.grading)
    }
}

/// Γ_S ⊗ Γ_L on S ⊗ L, with deg ξ = h.
pub fn graded_tensor(s: &SymCompAlgebra, group: &AbGroup, s_degrees: &[GroupElem], h: &GroupElem) -> Res<GradedCyclic> {
    let v = crate::cyclic::cyclic_from_symmetric(s).map_err(|e| ClassifyError::Build(e.to_string()))?;
    let structure = v.structure();
    Ok(tensor_on(v, structure, group, s_degrees, h))
}

fn tensor_on(v: CyclicAlgebra, structure: Structure, group: &AbGroup, s_degrees: &[GroupElem], h: &GroupElem) -> GradedCyclic {
    let mut grading = Grading::trivial(&structure, group);
    grading.degrees[0] = tensor_degrees(group, s_degrees, h);
    grading.degrees[1] = (0..3).map(|j| group.times(j, h)).collect();
    GradedCyclic { v, structure, grading, h: h.clone() }
}

thread_local! {
    /// The four model algebras S ⊗ L with their structures, per conductor.
    static MODELS: std::cell::RefCell<BTreeMap<(u32, &'static str), (CyclicAlgebra, Structure)>> = Default::default();
}

fn model_key(p: &TypeIIIParams) -> &'static str {
    match &p.variant {
        Variant::R0 { .. } | Variant::R8 { t: Model::O, .. } => "okubo",
        Variant::R1 { .. } => "doubled",
        _ => "zorn",
    }
}

fn model_algebra(f: &Field, p: &TypeIIIParams) -> Res<(SymCompAlgebra, Vec<GroupElem>)> {
    let g = &p.group;
    let b = |e: crate::composition::CompError| ClassifyError::Build(e.to_string());
    Ok(match &p.variant {
        Variant::R0 { k, delta, .. } => (okubo_sl3(f).map_err(b)?, okubo_degrees(g, &k[0], &k[1], *delta)),
        Variant::R1 { k, .. } => (para(&doubled_cayley(f)).map_err(b)?, z2cubed_degrees(g, k)),
        Variant::R2 { gamma, .. } => (para(&zorn_cayley(f)).map_err(b)?, cartan_degrees(g, &gamma[0], &gamma[1])),
        Variant::R4 { g: x, .. } => (para(&zorn_cayley(f)).map_err(b)?, cartan_degrees(g, &g.zero(), x)),
        Variant::R8 { t: Model::P, .. } => (para(&zorn_cayley(f)).map_err(b)?, vec![g.zero(); RANK]),
        Variant::R8 { t: Model::O, .. } => (okubo_sl3(f).map_err(b)?, vec![g.zero(); RANK]),
    })
}

/// Γ_r with the grading verified and its rank checked. The axioms of the
/// underlying cyclic algebra are checked by [`verify_build`].
pub fn build(f: &Field, p: &TypeIIIParams) -> Res<GradedCyclic> {
    check_params(p)?;
    let (s, degs) = model_algebra(f, p)?;
    let key = (f.conductor(), model_key(p));
    let cached = MODELS.with(|m| m.borrow().get(&key).cloned());
    let (v, st) = match cached {
        Some(x) => x,
        None => {
            let v = crate::cyclic::cyclic_from_symmetric(&s).map_err(|e| ClassifyError::Build(e.to_string()))?;
            let st = v.structure();
            MODELS.with(|m| m.borrow_mut().insert(key, (v.clone(), st.clone())));
            (v, st)
        }
    };
    let gc = tensor_on(v, st, &p.group, &degs, p.h());
    let r = verify_grading(&gc.structure, &gc.grading);
    if !r.ok() {
        return Err(ClassifyError::Build(r.violations.join("; ")));
    }
    let got = rank(&gc)?;
    if got != p.rank() as usize {
        return Err(ClassifyError::Build(format!("identity component has dimension {got}, expected {}", p.rank())));
    }
    Ok(gc)
}

pub fn verify_build(gc: &GradedCyclic) -> Report {
    let mut r = Report::new();
    r.merge("grading", verify_grading(&gc.structure, &gc.grading));
    r.merge("cyclic axioms", verify_cyclic_axioms(&gc.v));
    r
}

/// dim V_e.
pub fn rank(gc: &GradedCyclic) -> Res<usize> {
    let e = gc.grading.group.zero();
    let d = gc.grading.main().iter().filter(|x| **x == e).count();
    if [0, 1, 2, 4, 8].contains(&d) {
        Ok(d)
    } else {
        Err(ClassifyError::Rank(d))
    }
}

/// Which of x∗y, y∗x vanishes for x ∈ V_{k1}, y ∈ V_{k2}: + if x∗y = 0.
/// Both components must be 1-dimensional and b_Q(x, x∗x) must be nonzero, so
/// that x and y can be normalized; the verdict does not depend on scaling.
pub fn okubo_orientation(v: &CyclicAlgebra, g: &BasisGrading, k1: &GroupElem, k2: &GroupElem) -> Res<Sign> {
    let (cx, cy) = (g.component(k1), g.component(k2));
    if cx.len() != 1 || cy.len() != 1 {
        return Err(ClassifyError::Orientation(format!("components of degrees {k1} and {k2} have dimensions {} and {}", cx.len(), cy.len())));
    }
    let (x, y) = (&cx[0], &cy[0]);
    for (name, z) in [("x", x), ("y", y)] {
        if v.bq(z, &v.mul(z, z)).iter().all(|c| c.is_zero()) {
            return Err(ClassifyError::Orientation(format!("b_Q({name}, {name}∗{name}) = 0, cannot normalize")));
        }
    }
    match (v.mul(x, y).is_empty(), v.mul(y, x).is_empty()) {
        (true, false) => Ok(Sign::Plus),
        (false, true) => Ok(Sign::Minus),
        (a, b) => Err(ClassifyError::Orientation(format!("x∗y = 0 is {a} and y∗x = 0 is {b}"))),
    }
}

/// The similarity rule that decided the verdict, with its witness data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Justification {
    RankDiffers { r: u8, r2: u8 },
    DistinguishedSubgroupDiffers,
    /// KH for rank 0, K for rank 1.
    SubgroupDiffers,
    /// Rank 0: K' = A·K modulo H with det A = `det` (mod 3).
    Orientation { det: i64, h_inverted: bool, delta: Sign, delta2_rel: Sign },
    SameSubgroups,
    Permutation { pi: [usize; 3], j: i64, inverted: bool },
    NoPermutation,
    Inversion { inverted: bool },
    NotInverse,
    Model { t: Model, t2: Model },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimilarityVerdict {
    pub similar: bool,
    pub trace: Justification,
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// A with k'_i ≡ Σ_j a_ij k_j modulo H, found by search over Z3.
fn z3_matrix(g: &AbGroup, hh: &[GroupElem], k: &[GroupElem; 2], k2: &[GroupElem; 2]) -> Option<[[i64; 2]; 2]> {
    let (q, proj) = quotient(g, hh).ok()?;
    let img = |x: &GroupElem| proj.apply(x);
    let mut a = [[0i64; 2]; 2];
    for i in 0..2 {
        let target = img(&k2[i]);
        let mut found = false;
        'search: for x in 0..3 {
            for y in 0..3 {
                let c = q.add(&q.times(x, &img(&k[0])), &q.times(y, &img(&k[1])));
                if c == target {
                    a[i] = [x, y];
                    found = true;
                    break 'search;
                }
            }
        }
        if !found {
            return None;
        }
    }
    Some(a)
}

/// Decides similarity of Γ_r(p) and Γ_r'(p') by the criteria of the classification theorem.
pub fn similar_params(p: &TypeIIIParams, q: &TypeIIIParams) -> Res<SimilarityVerdict> {
    if p.group != q.group {
        return Err(ClassifyError::GroupMismatch(p.group.to_string(), q.group.to_string()));
    }
    check_params(p)?;
    check_params(q)?;
    let g = &p.group;
    let yes = |t| Ok(SimilarityVerdict { similar: true, trace: t });
    let no = |t| Ok(SimilarityVerdict { similar: false, trace: t });
    if p.rank() != q.rank() {
        return no(Justification::RankDiffers { r: p.rank(), r2: q.rank() });
    }
    let (h, h2) = (p.h(), q.h());
    let hh = span(g, std::slice::from_ref(h));
    if hh != span(g, std::slice::from_ref(h2)) {
        return no(Justification::DistinguishedSubgroupDiffers);
    }
    match (&p.variant, &q.variant) {
        (Variant::R0 { k, delta, .. }, Variant::R0 { k: k2, delta: d2, .. }) => {
            let kh = span(g, &[k[0].clone(), k[1].clone(), h.clone()]);
            if kh != span(g, &[k2[0].clone(), k2[1].clone(), h2.clone()]) {
                return no(Justification::SubgroupDiffers);
            }
            let a = z3_matrix(g, std::slice::from_ref(h), k, k2).ok_or_else(|| ClassifyError::Precondition("K' is not inside KH".into()))?;
            let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).rem_euclid(3);
            let rel = if det == 1 { *d2 } else { d2.flip() };
            let h_inverted = h2 != h;
            let t = Justification::Orientation { det, h_inverted, delta: *delta, delta2_rel: rel };
            if (!h_inverted && rel == *delta) || (h_inverted && rel == delta.flip()) {
                yes(t)
            } else {
                no(t)
            }
        }
        (Variant::R1 { k, .. }, Variant::R1 { k: k2, .. }) => {
            if span(g, k) == span(g, k2) {
                yes(Justification::SameSubgroups)
            } else {
                no(Justification::SubgroupDiffers)
            }
        }
        (Variant::R2 { gamma, .. }, Variant::R2 { gamma: gamma2, .. }) => {
            for inverted in [false, true] {
                for pi in PERMS {
                    for j in 1..=3 {
                        let ok = (0..3).all(|i| {
                            let base = if inverted { g.neg(&gamma[pi[i]]) } else { gamma[pi[i]].clone() };
                            g.add(&base, &g.times(j, h)) == gamma2[i]
                        });
                        if ok {
                            return yes(Justification::Permutation { pi, j, inverted });
                        }
                    }
                }
            }
            no(Justification::NoPermutation)
        }
        (Variant::R4 { g: x, .. }, Variant::R4 { g: x2, .. }) => {
            if x2 == x {
                yes(Justification::Inversion { inverted: false })
            } else if *x2 == g.neg(x) {
                yes(Justification::Inversion { inverted: true })
            } else {
                no(Justification::NotInverse)
            }
        }
        (Variant::R8 { t, .. }, Variant::R8 { t: t2, .. }) => {
            let tr = Justification::Model { t: *t, t2: *t2 };
            if t == t2 {
                yes(tr)
            } else {
                no(tr)
            }
        }
        _ => unreachable!("ranks agree"),
    }
}

/// Checks that the trace's data really implies the recorded verdict.
pub fn replay(p: &TypeIIIParams, q: &TypeIIIParams, v: &SimilarityVerdict) -> bool {
    let g = &p.group;
    let h = p.h();
    match (&v.trace, &p.variant, &q.variant) {
        (Justification::RankDiffers { r, r2 }, _, _) => !v.similar && *r == p.rank() && *r2 == q.rank() && r != r2,
        (Justification::DistinguishedSubgroupDiffers, _, _) => !v.similar && span(g, std::slice::from_ref(h)) != span(g, &[q.h().clone()]),
        (Justification::SubgroupDiffers, Variant::R0 { k, .. }, Variant::R0 { k: k2, .. }) => {
            !v.similar && span(g, &[k[0].clone(), k[1].clone(), h.clone()]) != span(g, &[k2[0].clone(), k2[1].clone(), q.h().clone()])
        }
        (Justification::SubgroupDiffers, Variant::R1 { k, .. }, Variant::R1 { k: k2, .. }) => !v.similar && span(g, k) != span(g, k2),
        (Justification::SameSubgroups, Variant::R1 { k, .. }, Variant::R1 { k: k2, .. }) => v.similar && span(g, k) == span(g, k2),
        (Justification::Orientation { det, h_inverted, delta, delta2_rel }, Variant::R0 { k, delta: d, .. }, Variant::R0 { k: k2, delta: d2, .. }) => {
            let Some(a) = z3_matrix(g, std::slice::from_ref(h), k, k2) else { return false };
            let d_ok = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).rem_euclid(3) == *det;
            let rel_ok = *delta2_rel == if *det == 1 { *d2 } else { d2.flip() };
            let inv_ok = *h_inverted == (q.h() != h) && (!*h_inverted || *q.h() == g.neg(h));
            let verdict = if *h_inverted { *delta2_rel == delta.flip() } else { delta2_rel == delta };
            d_ok && rel_ok && inv_ok && delta == d && verdict == v.similar
        }
        (Justification::Permutation { pi, j, inverted }, Variant::R2 { gamma, .. }, Variant::R2 { gamma: gamma2, .. }) => {
            v.similar
                && (0..3).all(|i| {
                    let base = if *inverted { g.neg(&gamma[pi[i]]) } else { gamma[pi[i]].clone() };
                    g.add(&base, &g.times(*j, h)) == gamma2[i]
                })
        }
        (Justification::NoPermutation, Variant::R2 { .. }, Variant::R2 { .. }) => !v.similar && similar_params(p, q).map(|w| !w.similar).unwrap_or(false),
        (Justification::Inversion { inverted }, Variant::R4 { g: x, .. }, Variant::R4 { g: x2, .. }) => v.similar && *x2 == if *inverted { g.neg(x) } else { x.clone() },
        (Justification::NotInverse, Variant::R4 { g: x, .. }, Variant::R4 { g: x2, .. }) => !v.similar && x2 != x && *x2 != g.neg(x),
        (Justification::Model { t, t2 }, Variant::R8 { t: a, .. }, Variant::R8 { t: b, .. }) => t == a && t2 == b && v.similar == (t == t2),
        _ => false,
    }
}

/// (φ₁, φ₀): φ₁ is F-linear in slot coordinates, φ₀ sends slot k to slot phi0[k].
#[derive(Debug, Clone)]
pub struct GradedIso {
    pub phi1: Mat,
    pub phi0: [usize; 3],
}

fn phi0_apply(p: &[usize; 3], l: &LElem) -> LElem {
    let mut out = l.clone();
    for k in 0..3 {
        out[p[k]] = l[k].clone();
    }
    out
}

/// Degree-preserving isomorphism from (A, Γ_A), or from A^op when `opposite`,
/// onto (B, Γ_B). All checks are exact and on bases.
pub fn verify_graded_iso(iso: &GradedIso, a: &CyclicAlgebra, ga: &BasisGrading, b: &CyclicAlgebra, gb: &BasisGrading, opposite: bool) -> Report {
    let f = a.field().clone();
    let a = if opposite { a.opposite() } else { a.clone() };
    let mut r = Report::new();
    let mut perm = iso.phi0;
    perm.sort_unstable();
    r.check(perm == [0, 1, 2], || format!("φ₀ = {:?} is not a permutation of the slots", iso.phi0));
    if !r.ok() {
        return r;
    }
    for k in 0..3 {
        let e = l_slot(&f, k);
        let lhs = phi0_apply(&iso.phi0, &rho(&e, a.twist));
        let rhs = rho(&phi0_apply(&iso.phi0, &e), b.twist);
        r.check(lhs == rhs, || format!("φ₀ does not intertwine the automorphisms at slot {k}"));
    }
    let cols: Vec<SVec> = (0..DIM).map(|i| iso.phi1.col_sv(i)).collect();
    r.check(iso.phi1.rank() == DIM, || "φ₁ is not bijective".into());
    for (i, c) in cols.iter().enumerate() {
        let want = iso.phi0[i / RANK];
        r.check(c.iter().all(|(j, _)| j / RANK == want), || format!("φ₁ is not φ₀-semilinear on basis vector {i}"));
    }
    for i in 0..DIM {
        for j in 0..DIM {
            let (x, y) = (sv_unit(i, &f), sv_unit(j, &f));
            let lhs = iso.phi1.apply_sv(&a.mul(&x, &y));
            let rhs = b.mul(&cols[i], &cols[j]);
            r.check(lhs == rhs, || format!("φ₁ does not preserve the product at ({i}, {j})"));
            if j >= i {
                let lhs = phi0_apply(&iso.phi0, &a.bq(&x, &y));
                r.check(lhs == b.bq(&cols[i], &cols[j]), || format!("φ₁ does not preserve b_Q at ({i}, {j})"));
            }
        }
    }
    let mut echs: BTreeMap<GroupElem, Echelon> = BTreeMap::new();
    for d in gb.support() {
        let mut e = Echelon::new(&f, DIM);
        for v in gb.component(&d) {
            e.insert(&v);
        }
        echs.insert(d, e);
    }
    r.check(ga.group == gb.group, || format!("grading groups differ: {} vs {}", ga.group, gb.group));
    for (v, d) in ga.basis.iter().zip(&ga.degrees) {
        let img = iso.phi1.apply_sv(v);
        r.check(echs.get(d).is_some_and(|e| e.contains(&img)), || format!("φ₁ moves a vector of degree {d} out of degree {d}"));
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessCase {
    Rank1HFlip,
    Rank4HFlip,
    Rank2HFlip,
    Rank2Shift,
    Rank0Flip,
}

impl WitnessCase {
    pub const ALL: [WitnessCase; 5] = [WitnessCase::Rank1HFlip, WitnessCase::Rank4HFlip, WitnessCase::Rank2HFlip, WitnessCase::Rank2Shift, WitnessCase::Rank0Flip];

    pub fn rank(self) -> u8 {
        match self {
            WitnessCase::Rank1HFlip => 1,
            WitnessCase::Rank4HFlip => 4,
            WitnessCase::Rank2HFlip | WitnessCase::Rank2Shift => 2,
            WitnessCase::Rank0Flip => 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub case: WitnessCase,
    pub source: TypeIIIParams,
    pub target: TypeIIIParams,
    /// The map starts from the opposite algebra of the source.
    pub opposite: bool,
    pub iso: GradedIso,
    pub report: Report,
}

const TAU: [usize; 3] = [0, 2, 1];

/// x⊗ℓ ↦ f(x)⊗τ(ℓ) for an F-linear f on S, in slot coordinates.
fn tensor_with_tau(f: &Field, fs: &[SVec]) -> Mat {
    let mut cols = Vec::with_capacity(DIM);
    for k in 0..3 {
        for i in 0..RANK {
            cols.push(fs[i].iter().map(|(j, c)| (RANK * TAU[k] + j, c.clone())).collect());
        }
    }
    Mat::from_columns(f, DIM, &cols)
}

fn flip_h(g: &AbGroup, p: &TypeIIIParams) -> TypeIIIParams {
    p.with_h(g.neg(p.h()))
}

/// The map x⊗ℓ ↦ x̄⊗τ(ℓ) for the para-Cayley cases.
fn conj_tau(f: &Field, p: &TypeIIIParams) -> Res<Witness> {
    let (s, _) = model_algebra(f, p)?;
    let conj: Vec<SVec> = (0..RANK).map(|i| s.conj(&s.basis(i))).collect::<Result<_, _>>().map_err(|e| ClassifyError::Witness(e.to_string()))?;
    let iso = GradedIso { phi1: tensor_with_tau(f, &conj), phi0: TAU };
    Ok(Witness { case: WitnessCase::Rank1HFlip, source: p.clone(), target: flip_h(&p.group, p), opposite: true, iso, report: Report::new() })
}

/// An anti-automorphism of the Okubo algebra exchanging X and Y:
/// M ↦ g Mᵀ g⁻¹ with gX = Yg and gY² = Xg.
pub fn okubo_flip(s: &SymCompAlgebra) -> Res<Vec<SVec>> {
    let f = &s.field;
    let (x, y) = crate::composition::okubo_generators(f).map_err(|e| ClassifyError::Witness(e.to_string()))?;
    let y2 = y.mul(&y);
    let mut eqs = Vec::new();
    for (l, r) in [(&x, &y), (&y2, &x)] {
        // g·l − r·g = 0, in the 9 entries of g
        let cols: Vec<SVec> = (0..9)
            .map(|u| {
                let mut e = Mat::zeros(f, 3, 3);
                e.set(u / 3, u % 3, Cyc::one(f));
                e.mul(l).sub(&r.mul(&e)).flat()
            })
            .collect();
        eqs.extend(crate::triality::transpose_sparse(&cols, 9));
    }
    let sols = kernel(f, &eqs, 9);
    let g = sols
        .iter()
        .map(|v| Mat::from_flat(f, 3, 3, v))
        .find(|m| m.inverse().is_some())
        .ok_or_else(|| ClassifyError::Witness("no invertible intertwiner g".into()))?;
    let gi = g.inverse().expect("checked");
    let mats = s.matrices.as_ref().ok_or_else(|| ClassifyError::Witness("Okubo matrix model missing".into()))?;
    mats.iter()
        .map(|m| okubo_coords(s, &g.mul(&m.transpose()).mul(&gi)).ok_or_else(|| ClassifyError::Witness("image is not traceless".into())))
        .collect()
}

/// The rank-2 re-cut at ε′ = ωe₁ + ω²e₂: ψ(s_i) = c_i·(s_i⊗ξ^{j_i}) with
/// C_{ε′} = ψ(C), found by search over roots of unity.
fn rank2_shift(f: &Field, p: &TypeIIIParams) -> Res<Witness> {
    let Variant::R2 { gamma, h } = &p.variant else { unreachable!() };
    let g = &p.group;
    let gc = build(f, p)?;
    let v = &gc.v;
    let s = &v.s;
    let w = Cyc::omega(f).map_err(|e| ClassifyError::Witness(e.to_string()))?;
    let eps = crate::cyclic::diagonal(&[(0, w.clone()), (1, w.pow(2))]);
    let sub = v.para_subalgebra_from_idempotent(&eps).map_err(|e| ClassifyError::Witness(e.to_string()))?;
    if !sub.report.ok() {
        return Err(ClassifyError::Witness(format!("C_ε′: {}", sub.report.violations.join("; "))));
    }
    let mut ech = Echelon::new(f, DIM);
    for b in &sub.basis {
        ech.insert(b);
    }
    let mut base: Vec<SVec> = vec![sv_scale(&w, &v.homogeneous_vector(0, 0)), sv_scale(&w.pow(2), &v.homogeneous_vector(1, 0))];
    let mut js = vec![0usize, 0];
    for i in 2..RANK {
        let j = (0..3).find(|&j| ech.contains(&v.homogeneous_vector(i, j))).ok_or_else(|| ClassifyError::Witness(format!("s{i}⊗ξ^j is never in C_ε′")))?;
        js.push(j);
        base.push(v.homogeneous_vector(i, j));
    }
    let roots: Vec<Cyc> = (0..12).map(|k| Cyc::zeta_pow(f, k)).collect();
    let mut c: Vec<Cyc> = vec![Cyc::one(f); RANK];
    let consistent = |c: &[Cyc], upto: usize| -> bool {
        let img = |i: usize| sv_scale(&c[i], &base[i]);
        for a in 0..upto {
            for b in 0..upto {
                let prod = &s.mult[a][b];
                if prod.iter().any(|(k, _)| *k >= upto) {
                    continue;
                }
                let mut lhs = crate::linalg::Acc::new();
                for (k, x) in prod {
                    lhs.add_scaled(x, &img(*k));
                }
                if lhs.finish() != v.mul(&img(a), &img(b)) {
                    return false;
                }
                let n = s.polar.get(a, b);
                if v.bq(&img(a), &img(b)) != crate::cyclic::l_const(n) {
                    return false;
                }
            }
        }
        true
    };
    fn search(t: usize, c: &mut Vec<Cyc>, roots: &[Cyc], ok: &dyn Fn(&[Cyc], usize) -> bool) -> bool {
        if t == RANK {
            return true;
        }
        for r in roots {
            c[t] = r.clone();
            if ok(c, t + 1) && search(t + 1, c, roots, ok) {
                return true;
            }
        }
        false
    }
    if !consistent(&c, 2) || !search(2, &mut c, &roots, &consistent) {
        return Err(ClassifyError::Witness("no diagonal identification of C with C_ε′".into()));
    }
    let psi: Vec<SVec> = (0..RANK).map(|i| sv_scale(&c[i], &base[i])).collect();
    let mut cols = Vec::with_capacity(DIM);
    for k in 0..3 {
        for i in 0..RANK {
            cols.push(psi[i].iter().filter(|(idx, _)| idx / RANK == k).cloned().collect::<SVec>());
        }
    }
    let iso = GradedIso { phi1: Mat::from_columns(f, DIM, &cols), phi0: [0, 1, 2] };
    // source degrees: deg_γ(s_i) + j_i h; the u-block fixes γ′
    let ju = js[2] as i64;
    if js[2..5].iter().any(|&j| j != js[2]) {
        return Err(ClassifyError::Witness(format!("Peirce block splits across powers of ξ: {js:?}")));
    }
    let gamma2 = [0, 1, 2].map(|i| g.add(&gamma[i], &g.times(ju, h)));
    let source = TypeIIIParams { group: g.clone(), variant: Variant::R2 { gamma: gamma2, h: h.clone() } };
    Ok(Witness { case: WitnessCase::Rank2Shift, source, target: p.clone(), opposite: false, iso, report: Report::new() })
}

/// Builds and verifies the witness map of `case` starting from `p`.
pub fn witness_map(f: &Field, case: WitnessCase, p: &TypeIIIParams) -> Res<Witness> {
    check_params(p)?;
    if p.rank() != case.rank() {
        return Err(ClassifyError::Precondition(format!("{case:?} needs rank {}, got {}", case.rank(), p.rank())));
    }
    let mut w = match case {
        WitnessCase::Rank1HFlip | WitnessCase::Rank4HFlip | WitnessCase::Rank2HFlip => conj_tau(f, p)?,
        WitnessCase::Rank2Shift => rank2_shift(f, p)?,
        WitnessCase::Rank0Flip => {
            let Variant::R0 { k, h, delta } = &p.variant else { unreachable!() };
            let s = okubo_sl3(f).map_err(|e| ClassifyError::Witness(e.to_string()))?;
            let fl = okubo_flip(&s)?;
            let target = TypeIIIParams { group: p.group.clone(), variant: Variant::R0 { k: k.clone(), h: p.group.neg(h), delta: delta.flip() } };
            Witness { case, source: p.clone(), target, opposite: true, iso: GradedIso { phi1: tensor_with_tau(f, &fl), phi0: TAU }, report: Report::new() }
        }
    };
    w.case = case;
    let a = build(f, &w.source)?;
    let b = build(f, &w.target)?;
    w.report = verify_graded_iso(&w.iso, &a.v, &a.basis_grading(), &b.v, &b.basis_grading(), w.opposite);
    if !w.report.ok() {
        return Err(ClassifyError::Witness(w.report.violations.join("; ")));
    }
    Ok(w)
}

/// x ↦ ℓx, from (V, Γ) onto (V, ℓ·Γ).
pub fn center_orbit_iso(v: &CyclicAlgebra, l: &LElem) -> GradedIso {
    let f = v.field();
    let cols: Vec<SVec> = (0..DIM).map(|i| sv_scale(&l[i / RANK], &sv_unit(i, f))).collect();
    GradedIso { phi1: Mat::from_columns(f, DIM, &cols), phi0: [0, 1, 2] }
}

/// All valid parameter tuples of rank r over a finite G. Subgroups K are
/// listed once each, with the first basis found.
pub fn enumerate_params(g: &AbGroup, r: u8) -> Res<Vec<TypeIIIParams>> {
    let els = g.elements().map_err(|e| ClassifyError::Precondition(e.to_string()))?;
    let of_order = |n: u64| -> Vec<GroupElem> { els.iter().filter(|x| order_is(g, x, n)).cloned().collect() };
    let hs = of_order(3);
    let mk = |variant| TypeIIIParams { group: g.clone(), variant };
    let mut out = Vec::new();
    match r {
        0 => {
            let mut seen = BTreeSet::new();
            for a in &hs {
                for b in &hs {
                    let k = [a.clone(), b.clone()];
                    let ks = span(g, &k);
                    if ks.len() != 9 || !seen.insert(ks.clone()) {
                        continue;
                    }
                    for h in hs.iter().filter(|h| !ks.contains(h)) {
                        for delta in [Sign::Plus, Sign::Minus] {
                            out.push(mk(Variant::R0 { k: k.clone(), h: h.clone(), delta }));
                        }
                    }
                }
            }
        }
        1 => {
            let twos = of_order(2);
            let mut seen = BTreeSet::new();
            for a in &twos {
                for b in &twos {
                    for c in &twos {
                        let k = [a.clone(), b.clone(), c.clone()];
                        let ks = span(g, &k);
                        if ks.len() != 8 || !seen.insert(ks) {
                            continue;
                        }
                        for h in &hs {
                            out.push(mk(Variant::R1 { k: k.clone(), h: h.clone() }));
                        }
                    }
                }
            }
        }
        2 => {
            for h in &hs {
                let hh = span(g, std::slice::from_ref(h));
                for a in els.iter().filter(|x| !hh.contains(x)) {
                    for b in els.iter().filter(|x| !hh.contains(x)) {
                        let c = g.neg(&g.add(a, b));
                        if !hh.contains(&c) {
                            out.push(mk(Variant::R2 { gamma: [a.clone(), b.clone(), c], h: h.clone() }));
                        }
                    }
                }
            }
        }
        4 => {
            for h in &hs {
                let hh = span(g, std::slice::from_ref(h));
                for x in els.iter().filter(|x| !hh.contains(x)) {
                    out.push(mk(Variant::R4 { g: x.clone(), h: h.clone() }));
                }
            }
        }
        8 => {
            for h in &hs {
                for t in [Model::P, Model::O] {
                    out.push(mk(Variant::R8 { h: h.clone(), t }));
                }
            }
        }
        _ => return Err(ClassifyError::Rank(r as usize)),
    }
    Ok(out)
}

/// Similarity classes (indices into `ps`): inside each bucket with the same
/// rank and ⟨h⟩, every parameter set is compared with one representative of
/// each class found so far. This presumes similarity is an equivalence
/// relation, which the sweep tests check.
pub fn similarity_classes(ps: &[TypeIIIParams]) -> Res<Vec<Vec<usize>>> {
    let mut buckets: BTreeMap<(u8, BTreeSet<GroupElem>), Vec<usize>> = BTreeMap::new();
    for (i, p) in ps.iter().enumerate() {
        buckets.entry((p.rank(), span(&p.group, &[p.h().clone()]))).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for idx in buckets.values() {
        let first = classes.len();
        for &i in idx {
            let mut home = None;
            for (c, class) in classes[first..].iter().enumerate() {
                if similar_params(&ps[class[0]], &ps[i])?.similar {
                    home = Some(first + c);
                    break;
                }
            }
            match home {
                Some(c) => classes[c].push(i),
                None => classes.push(vec![i]),
            }
        }
    }
    classes.sort();
    Ok(classes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FineKind {
    Cartan,
    Z2cubed,
    Okubo,
}

impl FineKind {
    pub const ALL: [FineKind; 3] = [FineKind::Cartan, FineKind::Z2cubed, FineKind::Okubo];

    /// The group it is built over, which is also its universal group.
    pub fn group(self) -> AbGroup {
        match self {
            FineKind::Cartan => AbGroup::presented(2, &[3]),
            FineKind::Z2cubed => AbGroup::presented(0, &[2, 2, 2, 3]),
            FineKind::Okubo => AbGroup::presented(0, &[3, 3, 3]),
        }
        .expect("valid torsion")
    }

    pub fn params(self) -> TypeIIIParams {
        let g = self.group();
        let e = |i: usize| g.gen(i);
        let variant = match self {
            FineKind::Cartan => Variant::R2 { gamma: [e(0), e(1), g.neg(&g.add(&e(0), &e(1)))], h: e(2) },
            FineKind::Z2cubed => Variant::R1 { k: [e(0), e(1), e(2)], h: e(3) },
            FineKind::Okubo => Variant::R0 { k: [e(0), e(1)], h: e(2), delta: Sign::Plus },
        };
        TypeIIIParams { group: g, variant }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FineRow {
    pub kind: FineKind,
    pub group: String,
    pub universal_group: String,
    pub rank: usize,
    pub type_vector: Vec<usize>,
    pub components: usize,
}

pub fn fine_typeiii(f: &Field, kind: FineKind) -> Res<(GradedCyclic, GradingInvariants)> {
    let gc = build(f, &kind.params())?;
    let inv = gc.invariants();
    Ok((gc, inv))
}

/// The catalog of the three fine gradings, and whether any one of them
/// could be a coarsening of another.
pub fn fine_catalog(f: &Field) -> Res<(Vec<FineRow>, Report)> {
    let mut rows = Vec::new();
    let mut invs = Vec::new();
    for kind in FineKind::ALL {
        let (gc, inv) = fine_typeiii(f, kind)?;
        rows.push(FineRow {
            kind,
            group: gc.grading.group.to_string(),
            universal_group: inv.universal_group.primary_form().to_string(),
            rank: inv.identity_dim,
            type_vector: inv.type_vector.clone(),
            components: inv.dims.len(),
        });
        invs.push(inv);
    }
    let mut r = Report::new();
    for (i, a) in invs.iter().enumerate() {
        r.check(a.universal_group.is_isomorphic(&FineKind::ALL[i].group()), || format!("{:?}: universal group {}", FineKind::ALL[i], a.universal_group));
        for (j, b) in invs.iter().enumerate() {
            if i != j {
                r.check(!crate::grading::coarsening_possible(a, b), || format!("{:?} might coarsen to {:?}", FineKind::ALL[i], FineKind::ALL[j]));
            }
        }
    }
    Ok((rows, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::make_field;

    fn z3cubed() -> AbGroup {
        AbGroup::presented(0, &[3, 3, 3]).unwrap()
    }

    #[test]
    fn ranks_and_preconditions() {
        let f = make_field(12).unwrap();
        let g = z3cubed();
        let p = TypeIIIParams { group: g.clone(), variant: Variant::R0 { k: [g.gen(0), g.gen(1)], h: g.gen(2), delta: Sign::Plus } };
        let gc = build(&f, &p).unwrap();
        assert_eq!(rank(&gc).unwrap(), 0);
        let bad = TypeIIIParams { group: g.clone(), variant: Variant::R2 { gamma: [g.gen(2), g.gen(0), g.neg(&g.add(&g.gen(2), &g.gen(0)))], h: g.gen(2) } };
        assert!(matches!(build(&f, &bad), Err(ClassifyError::Precondition(m)) if m.contains("g1")));
        let json = serde_json::to_string(&p).unwrap();
        let back: TypeIIIParams = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn orientation_of_okubo_family() {
        let f = make_field(12).unwrap();
        let g = z3cubed();
        for delta in [Sign::Plus, Sign::Minus] {
            let p = TypeIIIParams { group: g.clone(), variant: Variant::R0 { k: [g.gen(0), g.gen(1)], h: g.gen(2), delta } };
            let gc = build(&f, &p).unwrap();
            assert_eq!(okubo_orientation(&gc.v, &gc.basis_grading(), &g.gen(0), &g.gen(1)).unwrap(), delta);
            assert_eq!(okubo_orientation(&gc.v.opposite(), &gc.basis_grading(), &g.gen(0), &g.gen(1)).unwrap(), delta.flip());
        }
    }

    #[test]
    fn witnesses_verify() {
        let f = make_field(12).unwrap();
        let g = z3cubed();
        let p2 = TypeIIIParams { group: g.clone(), variant: Variant::R2 { gamma: [g.gen(0), g.gen(1), g.neg(&g.add(&g.gen(0), &g.gen(1)))], h: g.gen(2) } };
        let w = witness_map(&f, WitnessCase::Rank2Shift, &p2).unwrap();
        assert!(similar_params(&w.source, &w.target).unwrap().similar);
        let p0 = TypeIIIParams { group: g.clone(), variant: Variant::R0 { k: [g.gen(0), g.gen(1)], h: g.gen(2), delta: Sign::Plus } };
        let w = witness_map(&f, WitnessCase::Rank0Flip, &p0).unwrap();
        assert!(similar_params(&w.source, &w.target).unwrap().similar);
    }
}
