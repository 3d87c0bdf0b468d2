//! Graded division algebras and the Brauer data of related triples.
//!
//! Everything is phrased for graded algebras of matrices (`MatGraded`): an
//! abstract associative algebra is brought into this form by its left regular
//! representation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde_json::{json, Value};
use thiserror::Error;

use crate::fgab::{characters, quotient, subgroup_generated, AbGroup, Character, GroupElem, GroupError, GroupHom};
use crate::grading::{Grading, Kind, Structure};
use crate::linalg::{kernel, solve, Echelon, Mat, SVec};
use crate::triality::{Tri, TriGrading};
use crate::{Cyc, Field, Report};

#[derive(Debug, Error)]
pub enum BrauerError {
    #[error("β is not an alternating bicharacter: {0}")]
    NotBicharacter(String),
    #[error("not a graded division algebra: {0}")]
    NotDivision(String),
    #[error("no primitive idempotent found in the identity component (dim {0})")]
    Idempotent(usize),
    #[error("degree propagation is inconsistent in factor {factor} at degree {degree}")]
    Propagation { factor: usize, degree: String },
    #[error("the projections generate only {got} of {want} dimensions")]
    NotGenerating { got: usize, want: usize },
    #[error("no invertible solution of u·a = χ(a)·a·u")]
    NoIntertwiner,
    #[error("graded algebra of dim {dim} is not all of M_{n}")]
    NotFullMatrix { dim: usize, n: usize },
    #[error("{0}")]
    Group(#[from] GroupError),
}

/// An alternating bicharacter on a finite group, by its values on pairs of
/// coordinate generators.
#[derive(Debug, Clone)]
pub struct Bichar {
    pub field: Field,
    pub group: AbGroup,
    pub table: Vec<Vec<Cyc>>,
}

impl Bichar {
    pub fn trivial(f: &Field, group: &AbGroup) -> Bichar {
        let n = group.ngens();
        Bichar { field: f.clone(), group: group.clone(), table: vec![vec![Cyc::one(f); n]; n] }
    }

    /// β(e_i, e_j) = c, β(e_j, e_i) = c⁻¹.
    pub fn set(&mut self, i: usize, j: usize, c: &Cyc) -> Result<(), BrauerError> {
        let inv = c.inv().map_err(|e| BrauerError::NotBicharacter(e.to_string()))?;
        self.table[i][j] = c.clone();
        self.table[j][i] = inv;
        Ok(())
    }

    pub fn eval(&self, s: &GroupElem, t: &GroupElem) -> Cyc {
        let mut out = Cyc::one(&self.field);
        for (i, &si) in s.0.iter().enumerate() {
            for (j, &tj) in t.0.iter().enumerate() {
                let e = si * tj;
                if e != 0 {
                    out = &out * &self.table[i][j].pow(e);
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), BrauerError> {
        let g = &self.group;
        if !g.is_finite() {
            return Err(BrauerError::NotBicharacter(format!("{g} is infinite")));
        }
        let n = g.ngens();
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return Err(BrauerError::NotBicharacter("table shape".into()));
        }
        for i in 0..n {
            if !self.table[i][i].is_one() {
                return Err(BrauerError::NotBicharacter(format!("β(e{i},e{i}) ≠ 1")));
            }
            for j in 0..n {
                let (a, b) = (&self.table[i][j], &self.table[j][i]);
                if !(a * b).is_one() {
                    return Err(BrauerError::NotBicharacter(format!("β(e{i},e{j})β(e{j},e{i}) ≠ 1")));
                }
                if !a.pow(g.modulus(i)).is_one() || !a.pow(g.modulus(j)).is_one() {
                    return Err(BrauerError::NotBicharacter(format!("β(e{i},e{j}) has the wrong order")));
                }
            }
        }
        Ok(())
    }

    /// Radical {s : β(s, ·) ≡ 1}.
    pub fn radical(&self) -> Result<Vec<GroupElem>, BrauerError> {
        let els = self.group.elements()?;
        let gens: Vec<GroupElem> = (0..self.group.ngens()).map(|i| self.group.gen(i)).collect();
        Ok(els.into_iter().filter(|s| gens.iter().all(|t| self.eval(s, t).is_one())).collect())
    }
}

/// The twisted group algebra F^τT, τ(s,t) = ∏_{i<j} β(e_j,e_i)^{s_j t_i}.
///
/// τ is bilinear in the coordinates, so τ(s,t)/τ(t,s) = β(s,t), and it is a
/// cocycle on T because β(e_j, ·) is killed by the order of e_j.
pub fn graded_division_from_pair(beta: &Bichar) -> Result<(Structure, Grading), BrauerError> {
    beta.validate()?;
    let g = &beta.group;
    let f = beta.field.clone();
    let els = g.elements()?;
    let index: BTreeMap<GroupElem, usize> = els.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let tau = |s: &GroupElem, t: &GroupElem| {
        let mut out = Cyc::one(&f);
        for i in 0..s.0.len() {
            for j in (i + 1)..s.0.len() {
                let e = s.0[j] * t.0[i];
                if e != 0 {
                    out = &out * &beta.table[j][i].pow(e);
                }
            }
        }
        out
    };
    let table = els
        .iter()
        .map(|s| els.iter().map(|t| vec![(index[&g.add(s, t)], tau(s, t))]).collect())
        .collect();
    let labels = els.iter().map(|s| format!("X{:?}", s.0)).collect();
    let st = Structure::algebra(&f, Kind::Associative, labels, table);
    let gr = Grading::on_algebra(&st, g, els);
    Ok((st, gr))
}

/// The field itself, trivially graded by `group`.
pub fn trivial_division(f: &Field, group: &AbGroup) -> (Structure, Grading) {
    let st = Structure::algebra(f, Kind::Associative, vec!["1".into()], vec![vec![vec![(0, Cyc::one(f))]]]);
    let gr = Grading::on_algebra(&st, group, vec![group.zero()]);
    (st, gr)
}

/// A graded algebra of n×n matrices: components by degree, and the unit
/// (which need not be the identity matrix).
#[derive(Debug, Clone)]
pub struct MatGraded {
    pub field: Field,
    pub n: usize,
    pub unit: Mat,
    pub group: AbGroup,
    pub components: BTreeMap<GroupElem, Vec<Mat>>,
}

impl MatGraded {
    pub fn dim(&self) -> usize {
        self.components.values().map(|b| b.len()).sum()
    }

    pub fn component(&self, g: &GroupElem) -> &[Mat] {
        self.components.get(g).map_or(&[], |b| b.as_slice())
    }

    pub fn support(&self) -> Vec<GroupElem> {
        self.components.iter().filter(|(_, b)| !b.is_empty()).map(|(g, _)| g.clone()).collect()
    }

    fn basis(&self) -> impl Iterator<Item = (&GroupElem, &Mat)> {
        self.components.iter().flat_map(|(g, b)| b.iter().map(move |m| (g, m)))
    }

    /// Left regular representation of a unital graded associative algebra.
    pub fn from_structure(s: &Structure, g: &Grading) -> Result<MatGraded, BrauerError> {
        let f = s.field.clone();
        let n = s.dim(0);
        let lmat = |x: &SVec| {
            let cols: Vec<SVec> = (0..n).map(|j| s.product(x, &crate::linalg::sv_unit(j, &f))).collect();
            Mat::from_columns(&f, n, &cols)
        };
        let mut components: BTreeMap<GroupElem, Vec<Mat>> = BTreeMap::new();
        for (i, d) in g.main().iter().enumerate() {
            components.entry(d.clone()).or_default().push(lmat(&crate::linalg::sv_unit(i, &f)));
        }
        // the unit is the solution of L_u = I among the degree-e elements
        let e = g.group.zero();
        let idx = g.basis_of(0, &e);
        let eqs: Vec<(SVec, Cyc)> = (0..n * n)
            .map(|k| {
                let row: SVec = idx
                    .iter()
                    .enumerate()
                    .filter_map(|(a, &i)| {
                        let m = lmat(&crate::linalg::sv_unit(i, &f));
                        let v = m.get(k / n, k % n).clone();
                        (!v.is_zero()).then_some((a, v))
                    })
                    .collect();
                let rhs = if k / n == k % n { Cyc::one(&f) } else { Cyc::zero(&f) };
                (row, rhs)
            })
            .collect();
        solve(&f, &eqs, idx.len()).ok_or_else(|| BrauerError::NotDivision("no unit in degree e".into()))?;
        Ok(MatGraded { field: f.clone(), n, unit: Mat::identity(&f, n), group: g.group.clone(), components })
    }

    /// Products of basis elements land in the right component, and the sum
    /// of the components is direct.
    pub fn verify(&self) -> Report {
        let mut r = Report::new();
        let n2 = self.n * self.n;
        let mut all = Echelon::new(&self.field, n2);
        let mut ech: BTreeMap<&GroupElem, Echelon> = BTreeMap::new();
        for (g, b) in &self.components {
            let mut e = Echelon::new(&self.field, n2);
            for m in b {
                e.insert(&m.flat());
                all.insert(&m.flat());
            }
            ech.insert(g, e);
        }
        r.check(all.rank() == self.dim(), || format!("components not independent: rank {} of {}", all.rank(), self.dim()));
        let unit_e = ech.get(&self.group.zero()).is_some_and(|e| e.contains(&self.unit.flat()));
        r.check(unit_e, || "unit not in degree e".into());
        for (g, a) in self.basis() {
            for (h, b) in self.basis() {
                let p = a.mul(b);
                if p.is_zero() {
                    continue;
                }
                let d = self.group.add(g, h);
                let ok = ech.get(&d).is_some_and(|e| e.contains(&p.flat()));
                r.check(ok, || format!("product of degrees {:?}, {:?} leaves degree {:?}", g.0, h.0, d.0));
            }
        }
        r
    }

    /// Coarsening along a group homomorphism.
    pub fn coarsen(&self, hom: &GroupHom) -> MatGraded {
        let mut components: BTreeMap<GroupElem, Vec<Mat>> = BTreeMap::new();
        for (g, b) in &self.components {
            components.entry(hom.apply(g)).or_default().extend(b.iter().cloned());
        }
        MatGraded { field: self.field.clone(), n: self.n, unit: self.unit.clone(), group: hom.codomain.clone(), components }
    }
}

fn span_rref(f: &Field, mats: &[Mat], n: usize) -> Vec<Mat> {
    let mut e = Echelon::new(f, n * n);
    for m in mats {
        e.insert(&m.flat());
    }
    e.rref().iter().map(|v| Mat::from_flat(f, n, n, v)).collect()
}

/// B·y as a subspace.
fn left_ideal(f: &Field, b: &[Mat], y: &Mat, n: usize) -> Vec<Mat> {
    let prods: Vec<Mat> = b.iter().map(|a| a.mul(y)).collect();
    span_rref(f, &prods, n)
}

/// Scalars tried as eigenvalues when no sparse element has a proper ideal.
fn eigen_candidates(f: &Field) -> Vec<Cyc> {
    let n = f.conductor() as i64;
    let mut out = vec![Cyc::zero(f)];
    for (p, q) in [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (4, 1), (1, 4)] {
        for k in 0..n {
            out.push(&Cyc::from_ratio(f, p, q) * &Cyc::zeta_pow(f, k));
        }
    }
    out
}

/// A smaller left ideal of B inside `l`, if one is visible.
fn shrink(f: &Field, b: &[Mat], l: &[Mat], unit: &Mat, n: usize, deep: bool) -> Option<Vec<Mat>> {
    let mut cands: Vec<Mat> = l.to_vec();
    for x in l.iter().take(8) {
        for y in l.iter().take(8) {
            cands.push(x.mul(y));
        }
    }
    let mut best: Option<Vec<Mat>> = None;
    for y in &cands {
        if y.is_zero() {
            continue;
        }
        let id = left_ideal(f, b, y, n);
        if !id.is_empty() && id.len() < l.len() && best.as_ref().is_none_or(|bb| id.len() < bb.len()) {
            best = Some(id);
        }
    }
    if best.is_some() || !deep {
        return best;
    }
    // l = B here: look for a zero divisor x − λ·1
    for x in l {
        for lam in eigen_candidates(f) {
            let y = x.sub(&unit.scale(&lam));
            if y.is_zero() {
                continue;
            }
            let id = left_ideal(f, b, &y, n);
            if !id.is_empty() && id.len() < l.len() {
                return Some(id);
            }
        }
    }
    None
}

/// A primitive idempotent of the semisimple algebra spanned by `ae` (with
/// unit `unit`), found by cutting down minimal left ideals.
pub fn primitive_idempotent(f: &Field, unit: &Mat, ae: &[Mat]) -> Result<Mat, BrauerError> {
    let n = unit.rows;
    let mut b = span_rref(f, ae, n);
    let mut u = unit.clone();
    loop {
        if b.len() == 1 {
            return Ok(u);
        }
        let mut l = b.clone();
        while let Some(smaller) = shrink(f, &b, &l, &u, n, l.len() == b.len()) {
            l = smaller;
        }
        if l.len() == b.len() {
            return Err(BrauerError::Idempotent(b.len()));
        }
        // e ∈ l with x e = x for x ∈ l
        let k = l.len();
        let mut eqs: Vec<(SVec, Cyc)> = Vec::new();
        for x in &l {
            let prods: Vec<SVec> = l.iter().map(|c| x.mul(c).flat()).collect();
            let xf = x.flat();
            for p in 0..n * n {
                let row: SVec = prods
                    .iter()
                    .enumerate()
                    .filter_map(|(j, v)| crate::linalg::sv_get(v, p).map(|c| (j, c.clone())))
                    .collect();
                let rhs = crate::linalg::sv_get(&xf, p).cloned().unwrap_or_else(|| Cyc::zero(f));
                if !row.is_empty() || !rhs.is_zero() {
                    eqs.push((row, rhs));
                }
            }
        }
        let c = solve(f, &eqs, k).ok_or(BrauerError::Idempotent(b.len()))?;
        let mut e = Mat::zeros(f, n, n);
        for (j, x) in c {
            e = e.add(&l[j].scale(&x));
        }
        if e.mul(&e) != e {
            return Err(BrauerError::Idempotent(b.len()));
        }
        let cut: Vec<Mat> = b.iter().map(|x| e.mul(x).mul(&e)).collect();
        b = span_rref(f, &cut, n);
        u = e;
    }
}

/// Support T ⊆ G and commutation bicharacter β of a graded division algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionParams {
    pub group: AbGroup,
    pub support: Vec<GroupElem>,
    /// β(s,t) for s, t ∈ T.
    pub beta: BTreeMap<(GroupElem, GroupElem), Cyc>,
}

impl DivisionParams {
    pub fn is_trivial(&self) -> bool {
        self.support.len() == 1
    }

    /// Abstract isomorphism type of T.
    pub fn t_type(&self) -> Result<AbGroup, GroupError> {
        Ok(subgroup_generated(&self.group, &self.support)?.0.iso_type())
    }

    /// β(s,·) ≡ 1.
    pub fn radical(&self) -> Vec<GroupElem> {
        self.support.iter().filter(|s| self.support.iter().all(|t| self.beta[&((*s).clone(), t.clone())].is_one())).cloned().collect()
    }

    pub fn to_json(&self) -> Value {
        let t = self.t_type().map(|g| g.to_string()).unwrap_or_default();
        let beta: Vec<Value> = self
            .beta
            .iter()
            .filter(|(_, c)| !c.is_one())
            .map(|((s, t), c)| json!({"s": s.0, "t": t.0, "beta": c.to_strings()}))
            .collect();
        json!({"T": t, "support": self.support.iter().map(|s| s.0.clone()).collect::<Vec<_>>(), "beta_nontrivial": beta})
    }
}

/// D = εAε for a primitive idempotent ε of A_e, checked to be a graded
/// division algebra; its support and commutation factors.
pub fn division_params(a: &MatGraded) -> Result<DivisionParams, BrauerError> {
    let f = &a.field;
    let n = a.n;
    let zero = a.group.zero();
    let eps = primitive_idempotent(f, &a.unit, a.component(&zero))?;
    let mut x: BTreeMap<GroupElem, Mat> = BTreeMap::new();
    for (g, b) in &a.components {
        let cut: Vec<Mat> = b.iter().map(|m| eps.mul(m).mul(&eps)).collect();
        let d = span_rref(f, &cut, n);
        match d.len() {
            0 => {}
            1 => {
                x.insert(g.clone(), d.into_iter().next().unwrap());
            }
            k => return Err(BrauerError::NotDivision(format!("component {:?} of εAε has dim {k}", g.0))),
        }
    }
    let support: Vec<GroupElem> = x.keys().cloned().collect();
    for s in &support {
        let inv = x.get(&a.group.neg(s)).ok_or_else(|| BrauerError::NotDivision(format!("support not closed at {:?}", s.0)))?;
        if x[s].mul(inv).is_zero() {
            return Err(BrauerError::NotDivision(format!("X{:?} not invertible", s.0)));
        }
        for t in &support {
            if !x.contains_key(&a.group.add(s, t)) {
                return Err(BrauerError::NotDivision("support not a subgroup".into()));
            }
        }
    }
    let mut beta = BTreeMap::new();
    for s in &support {
        for t in &support {
            let p = x[s].mul(&x[t]);
            let q = x[t].mul(&x[s]);
            let c = ratio(&p, &q).ok_or_else(|| BrauerError::NotDivision(format!("X{:?}, X{:?} do not commute up to scalar", s.0, t.0)))?;
            beta.insert((s.clone(), t.clone()), c);
        }
    }
    Ok(DivisionParams { group: a.group.clone(), support, beta })
}

/// c with p = c·q, if any (q ≠ 0).
fn ratio(p: &Mat, q: &Mat) -> Option<Cyc> {
    let (i, j) = (0..q.rows * q.cols).map(|k| (k / q.cols, k % q.cols)).find(|&(i, j)| !q.get(i, j).is_zero())?;
    let c = p.get(i, j).checked_div(q.get(i, j)).ok()?;
    (*p == q.scale(&c)).then_some(c)
}

/// Invertible u with u·a = χ(deg a)·a·u on every homogeneous a.
fn intertwiner(a: &MatGraded, chi: &Character) -> Result<Mat, BrauerError> {
    let f = &a.field;
    let n = a.n;
    if a.dim() != n * n {
        return Err(BrauerError::NotFullMatrix { dim: a.dim(), n });
    }
    let mut eqs: Vec<SVec> = Vec::new();
    for (g, b) in &a.components {
        let c = chi.eval(&a.group, f, g);
        for m in b {
            for r in 0..n {
                for col in 0..n {
                    // (u m)_{r,col} − c (m u)_{r,col}
                    let mut acc = crate::linalg::Acc::new();
                    for q in 0..n {
                        let v = m.get(q, col);
                        if !v.is_zero() {
                            acc.add(r * n + q, v);
                        }
                        let w = m.get(r, q);
                        if !w.is_zero() {
                            acc.add(q * n + col, &-(&c * w));
                        }
                    }
                    let row = acc.finish();
                    if !row.is_empty() {
                        eqs.push(row);
                    }
                }
            }
        }
    }
    for v in kernel(f, &eqs, n * n) {
        let u = Mat::from_flat(f, n, n, &v);
        if u.inverse().is_some() {
            return Ok(u);
        }
    }
    Err(BrauerError::NoIntertwiner)
}

/// The scalar c with u_{χ₁}u_{χ₂} = c·u_{χ₂}u_{χ₁}.
pub fn commutation_factor(a: &MatGraded, chi1: &Character, chi2: &Character) -> Result<Cyc, BrauerError> {
    let u1 = intertwiner(a, chi1)?;
    let u2 = intertwiner(a, chi2)?;
    ratio(&u1.mul(&u2), &u2.mul(&u1)).ok_or(BrauerError::NoIntertwiner)
}

/// All commutation factors, u_χ computed once per character.
pub fn commutation_table(a: &MatGraded, chars: &[Character]) -> Result<Vec<Vec<Cyc>>, BrauerError> {
    let us: Vec<Mat> = chars.iter().map(|c| intertwiner(a, c)).collect::<Result<_, _>>()?;
    us.iter()
        .map(|u1| us.iter().map(|u2| ratio(&u1.mul(u2), &u2.mul(u1)).ok_or(BrauerError::NoIntertwiner)).collect())
        .collect()
}

/// Gradings Γ₁, Γ₂, Γ₃ on End_F(S) making the three 8-dimensional
/// representations of tri(S) graded.
#[derive(Debug, Clone)]
pub struct RelatedTriple {
    pub gradings: [MatGraded; 3],
    pub report: Report,
}

/// Propagates the degrees of the i-th projections of the homogeneous
/// elements of tri(S) through products (breadth first, generators in the
/// order of the components) until End_F(S) is exhausted.
pub fn related_triple(tri: &Tri, tg: &TriGrading) -> Result<RelatedTriple, BrauerError> {
    let f = tri.field().clone();
    let n = tri.s.dim();
    let gram = &tri.s.polar;
    let gram_inv = gram.inverse().ok_or_else(|| BrauerError::NotDivision("degenerate form".into()))?;
    let mut out = Vec::new();
    let mut report = Report::new();
    for i in 0..3 {
        let gens: Vec<(GroupElem, Mat)> = tg
            .components
            .iter()
            .flat_map(|(g, b)| b.iter().map(move |c| (g.clone(), c)))
            .map(|(g, c)| (g, tri.element(c)[i].clone()))
            .collect();
        let mut st = Propagation { f: f.clone(), n, factor: i, comps: BTreeMap::new(), all: Echelon::new(&f, n * n), queue: VecDeque::new() };
        st.insert(tg.group.zero(), Mat::identity(&f, n))?;
        for (g, m) in &gens {
            st.insert(g.clone(), m.clone())?;
        }
        while let Some((d, y)) = st.queue.pop_front() {
            if st.all.rank() == n * n {
                break;
            }
            for (g, p) in &gens {
                st.insert(tg.group.add(g, &d), p.mul(&y))?;
            }
        }
        if st.all.rank() != n * n {
            return Err(BrauerError::NotGenerating { got: st.all.rank(), want: n * n });
        }
        let comps = st.comps;
        let components: BTreeMap<GroupElem, Vec<Mat>> = comps.into_iter().map(|(g, (_, b))| (g, b)).collect();
        let mg = MatGraded { field: f.clone(), n, unit: Mat::identity(&f, n), group: tg.group.clone(), components };
        report.merge(&format!("Γ{}", i + 1), mg.verify());
        // σ_n(a) = G⁻¹ aᵀ G keeps degrees
        for (g, b) in &mg.components {
            let ech = span_echelon(&f, b, n);
            for a in b {
                let s = gram_inv.mul(&a.transpose()).mul(gram);
                report.check(ech.contains(&s.flat()), || format!("Γ{}: σ moves degree {:?}", i + 1, g.0));
            }
        }
        for (g, m) in &gens {
            let ok = mg.components.get(g).is_some_and(|b| span_echelon(&f, b, n).contains(&m.flat()));
            report.check(ok, || format!("Γ{}: projection of degree {:?} not homogeneous", i + 1, g.0));
        }
        out.push(mg);
    }
    let gradings: [MatGraded; 3] = out.try_into().expect("three factors");
    Ok(RelatedTriple { gradings, report })
}

struct Propagation {
    f: Field,
    n: usize,
    factor: usize,
    comps: BTreeMap<GroupElem, (Echelon, Vec<Mat>)>,
    all: Echelon,
    queue: VecDeque<(GroupElem, Mat)>,
}

impl Propagation {
    /// Adds m to degree d; m outside its component but inside the sum of all
    /// components means two degrees were assigned to one element.
    fn insert(&mut self, d: GroupElem, m: Mat) -> Result<(), BrauerError> {
        if m.is_zero() {
            return Ok(());
        }
        let flat = m.flat();
        let (f, n) = (&self.f, self.n);
        let entry = self.comps.entry(d.clone()).or_insert_with(|| (Echelon::new(f, n * n), Vec::new()));
        if entry.0.contains(&flat) {
            return Ok(());
        }
        if self.all.contains(&flat) {
            return Err(BrauerError::Propagation { factor: self.factor, degree: format!("{:?}", d.0) });
        }
        entry.0.insert(&flat);
        entry.1.push(m.clone());
        self.all.insert(&flat);
        self.queue.push_back((d, m));
        Ok(())
    }
}

fn span_echelon(f: &Field, b: &[Mat], n: usize) -> Echelon {
    let mut e = Echelon::new(f, n * n);
    for m in b {
        e.insert(&m.flat());
    }
    e
}

/// Projection of G onto its torsion coordinates.
pub fn torsion_projection(g: &AbGroup) -> Result<GroupHom, BrauerError> {
    let t = AbGroup::presented(0, &g.torsion)?;
    let images = (0..g.ngens()).map(|i| if i < g.free_rank { t.zero() } else { t.gen(i - g.free_rank) }).collect();
    Ok(GroupHom::new(g, &t, images)?)
}

#[derive(Debug, Clone)]
pub struct BrauerVerdict {
    pub params: Vec<DivisionParams>,
    pub report: Report,
}

impl BrauerVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "factors": self.params.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "ok": self.report.ok(),
            "checks": self.report.checks,
            "violations": self.report.violations,
        })
    }
}

/// [E_i]² = 1 and [E₁] = [E₂][E₃], through division data and commutation
/// factors.
pub fn verify_brauer_relations(t: &RelatedTriple) -> Result<BrauerVerdict, BrauerError> {
    let proj = torsion_projection(&t.gradings[0].group)?;
    let gs: Vec<MatGraded> = t.gradings.iter().map(|g| g.coarsen(&proj)).collect();
    let group = &proj.codomain;
    let f = &gs[0].field;
    let mut report = Report::new();
    let mut params = Vec::new();
    for (i, g) in gs.iter().enumerate() {
        let p = division_params(g)?;
        for s in &p.support {
            report.check(group.is_zero(&group.times(2, s)), || format!("T{} has an element {:?} of order > 2", i + 1, s.0));
        }
        for (k, c) in &p.beta {
            report.check(c.is_one() || (-c).is_one(), || format!("β{}({:?},{:?}) ∉ {{±1}}", i + 1, k.0 .0, k.1 .0));
        }
        params.push(p);
    }
    let chars = characters(group, f)?;
    let tables: Vec<Vec<Vec<Cyc>>> = gs.iter().map(|g| commutation_table(g, &chars)).collect::<Result<_, _>>()?;
    for a in 0..chars.len() {
        for b in 0..chars.len() {
            let (c1, c2, c3) = (&tables[0][a][b], &tables[1][a][b], &tables[2][a][b]);
            report.check(*c1 == c2 * c3, || format!("c1 ≠ c2·c3 at characters {:?}, {:?}", chars[a].a, chars[b].a));
            for (i, c) in [c1, c2, c3].iter().enumerate() {
                report.check((*c * *c).is_one(), || format!("c{}² ≠ 1 at characters {:?}, {:?}", i + 1, chars[a].a, chars[b].a));
            }
        }
    }
    Ok(BrauerVerdict { params, report })
}

/// The decomposition of a graded division algebra whose center has support
/// H into k = |H| mutually isomorphic G/H-graded division algebras, each
/// with parameters (T/H, β̄).
pub fn check_beta_bar(d: &MatGraded) -> Result<Report, BrauerError> {
    let f = &d.field;
    let n = d.n;
    let g = &d.group;
    let p = division_params(d)?;
    let mut r = Report::new();
    let x: BTreeMap<GroupElem, Mat> = p.support.iter().map(|s| (s.clone(), d.component(s)[0].clone())).collect();
    // center support H
    let h: Vec<GroupElem> = p.support.iter().filter(|s| p.support.iter().all(|t| x[*s].mul(&x[t]) == x[t].mul(&x[*s]))).cloned().collect();
    r.check(h == p.radical(), || "radical of β differs from the center's support".into());
    let (habs, inc) = subgroup_generated(g, &h)?;
    let helts = habs.elements()?;
    // Y_h multiplicative: normalize generators so that Y^{ord} = 1
    let mut ygen = Vec::new();
    for i in 0..habs.ngens() {
        let e = inc.apply(&habs.gen(i));
        let m = habs.modulus(i);
        let xp = (1..m).fold(x[&e].clone(), |acc, _| acc.mul(&x[&e]));
        let c = ratio(&xp, &d.unit).ok_or_else(|| BrauerError::NotDivision("central power not scalar".into()))?;
        let root = (0..f.conductor() as i64)
            .map(|k| Cyc::zeta_pow(f, k))
            .find(|z| z.pow(m) == c.inv().unwrap_or_else(|_| Cyc::one(f)))
            .ok_or_else(|| BrauerError::NotDivision("no root of unity normalizes the center".into()))?;
        ygen.push(x[&e].scale(&root));
    }
    let y = |a: &GroupElem| -> Mat {
        let mut m = d.unit.clone();
        for (i, &k) in a.0.iter().enumerate() {
            for _ in 0..k {
                m = m.mul(&ygen[i]);
            }
        }
        m
    };
    let order = Cyc::from_i64(f, helts.len() as i64);
    let inv_order = order.inv().expect("nonzero");
    let hchars = characters(&habs, f)?;
    let idems: Vec<Mat> = hchars
        .iter()
        .map(|chi| {
            let mut e = Mat::zeros(f, n, n);
            for a in &helts {
                let c = chi.eval(&habs, f, a).inv().expect("root of unity");
                e = e.add(&y(a).scale(&c));
            }
            e.scale(&inv_order)
        })
        .collect();
    r.check(idems.len() == helts.len(), || "number of components differs from |H|".into());
    let mut sum = Mat::zeros(f, n, n);
    for (i, e) in idems.iter().enumerate() {
        r.check(e.mul(e) == *e, || format!("e{i} not idempotent"));
        for (j, e2) in idems.iter().enumerate() {
            if i != j {
                r.check(e.mul(e2).is_zero(), || format!("e{i}e{j} ≠ 0"));
            }
        }
        for m in x.values() {
            r.check(e.mul(m) == m.mul(e), || format!("e{i} not central"));
        }
        sum = sum.add(e);
    }
    r.check(sum == d.unit, || "idempotents do not sum to 1".into());
    // D_i = e_i D graded by G/H
    let (gbar, proj) = quotient(g, &h)?;
    let factors: Vec<MatGraded> = idems
        .iter()
        .map(|e| {
            let mut comps: BTreeMap<GroupElem, Vec<Mat>> = BTreeMap::new();
            for (s, m) in &x {
                comps.entry(proj.apply(s)).or_default().push(e.mul(m));
            }
            let comps = comps.into_iter().map(|(k, b)| (k, span_rref(f, &b, n))).collect();
            MatGraded { field: f.clone(), n, unit: e.clone(), group: gbar.clone(), components: comps }
        })
        .collect();
    // expected (T/H, β̄)
    let tbar: BTreeSet<GroupElem> = p.support.iter().map(|s| proj.apply(s)).collect();
    let lift: BTreeMap<GroupElem, GroupElem> = p.support.iter().rev().map(|s| (proj.apply(s), s.clone())).collect();
    for (i, fac) in factors.iter().enumerate() {
        r.merge(&format!("D{i}"), fac.verify());
        let q = division_params(fac)?;
        r.check(q.support.iter().cloned().collect::<BTreeSet<_>>() == tbar, || format!("D{i}: support differs from T/H"));
        for ((a, b), c) in &q.beta {
            if let (Some(la), Some(lb)) = (lift.get(a), lift.get(b)) {
                let want = &p.beta[&(la.clone(), lb.clone())];
                r.check(c == want, || format!("D{i}: β̄({:?},{:?}) differs", a.0, b.0));
            }
        }
    }
    // character-permutation isomorphisms D_0 → D_i: a ↦ χ(deg a)·a
    let gchars = characters(g, f)?;
    for (i, target) in idems.iter().enumerate() {
        let found = gchars.iter().any(|chi| {
            // α_χ applied to e0 = |H|⁻¹ Σ ψ0(a)⁻¹ Y_a
            let mut e0 = Mat::zeros(f, n, n);
            for a in &helts {
                let c = &hchars[0].eval(&habs, f, a).inv().expect("root of unity") * &chi.eval(g, f, &inc.apply(a));
                e0 = e0.add(&y(a).scale(&c));
            }
            e0.scale(&inv_order) == *target
        });
        r.check(found, || format!("no character maps e0 to e{i}"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::make_field;

    fn pauli(f: &Field) -> Bichar {
        let g = AbGroup::presented(0, &[2, 2]).unwrap();
        let mut b = Bichar::trivial(f, &g);
        b.set(0, 1, &-Cyc::one(f)).unwrap();
        b
    }

    #[test]
    fn pauli_pair() {
        let f = make_field(12).unwrap();
        let (s, g) = graded_division_from_pair(&pauli(&f)).unwrap();
        let a = MatGraded::from_structure(&s, &g).unwrap();
        assert!(a.verify().ok());
        let p = division_params(&a).unwrap();
        assert_eq!(p.support.len(), 4);
        assert!(p.radical().len() == 1);
        let chars = characters(&a.group, &f).unwrap();
        // 4 = dim < n² = 16: not all of M_4, so no intertwiner is unique
        assert!(matches!(commutation_table(&a, &chars), Err(BrauerError::NotFullMatrix { .. })));
        // the same pair realized on M_2
        let (o, z, m) = (Cyc::one(&f), Cyc::zero(&f), -Cyc::one(&f));
        let x = Mat::from_rows(&f, &[vec![o.clone(), z.clone()], vec![z.clone(), m.clone()]]);
        let y = Mat::from_rows(&f, &[vec![z.clone(), o.clone()], vec![o, z]]);
        let g = a.group.clone();
        let mut components = BTreeMap::new();
        components.insert(g.zero(), vec![Mat::identity(&f, 2)]);
        components.insert(g.gen(0), vec![x.clone()]);
        components.insert(g.gen(1), vec![y.clone()]);
        components.insert(g.add(&g.gen(0), &g.gen(1)), vec![x.mul(&y)]);
        let m2 = MatGraded { field: f.clone(), n: 2, unit: Mat::identity(&f, 2), group: g, components };
        let c = commutation_table(&m2, &chars).unwrap();
        assert!(c.iter().flatten().any(|x| *x == m));
    }

    #[test]
    fn group_algebra_z3() {
        let f = make_field(12).unwrap();
        let g = AbGroup::presented(0, &[3]).unwrap();
        let (s, gr) = graded_division_from_pair(&Bichar::trivial(&f, &g)).unwrap();
        let a = MatGraded::from_structure(&s, &gr).unwrap();
        let r = check_beta_bar(&a).unwrap();
        assert!(r.ok(), "{:?}", r.violations);
    }

    #[test]
    fn bad_bichar() {
        let f = make_field(12).unwrap();
        let g = AbGroup::presented(0, &[2, 2]).unwrap();
        let mut b = Bichar::trivial(&f, &g);
        b.table[0][1] = Cyc::zeta_pow(&f, 4);
        assert!(graded_division_from_pair(&b).is_err());
    }
}
