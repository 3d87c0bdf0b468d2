//! The Albert algebra J(L,V) = L ⊕ V of a rank-8 cyclic composition algebra.
//!
//! Norm, trace form and adjoint extend those of L:
//!   N(ℓ,v) = N(ℓ) + b_Q(v, v∗v) − T(ℓQ(v))
//!   T((ℓ₁,v₁),(ℓ₂,v₂)) = T(ℓ₁ℓ₂) + T(b_Q(v₁,v₂))
//!   (ℓ,v)^# = (ℓ^# − Q(v), v∗v − ℓv)
//! and the product is the linearization of X^# = X² − T(X)X + S(X)1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::classify::GradedCyclic;
use crate::cyclic::{l_add, l_adj, l_mul, l_scale, l_zero, CyclicAlgebra, LElem, DIM};
use crate::grading::{verify_grading, Grading, Kind, Structure};
use crate::linalg::{sv_add, sv_scale, sv_sub, sv_unit, Acc, Mat, SVec};
use crate::{Cyc, Field, Report};

pub const ALBERT_DIM: usize = 27;
/// L occupies coordinates 0..3 (basis 1, ξ, ξ²), V the rest (homogeneous basis).
pub const L_OFFSET: usize = 0;
pub const V_OFFSET: usize = 3;

#[derive(Debug, Error)]
pub enum AlbertError {
    #[error("V has rank {0}, need 8")]
    Rank(usize),
    #[error("b_Q(v, v∗v) is not a scalar")]
    NotScalar,
    #[error("the grading on L is trivial (need Type III)")]
    NotTypeIII,
    #[error("grading verification failed: {0}")]
    Grading(String),
}

/// (ℓ, v) with ℓ in slot coordinates and v in slot coordinates of V.
#[derive(Debug, Clone, PartialEq)]
pub struct AlbertElement {
    pub l: LElem,
    pub v: SVec,
}

#[derive(Debug, Clone)]
pub struct AlbertAlgebra {
    pub v: CyclicAlgebra,
    pub structure: Structure,
}

fn scalar_of(l: &LElem) -> Option<Cyc> {
    (l[0] == l[1] && l[1] == l[2]).then(|| l[0].clone())
}

fn l_sum(l: &LElem) -> Cyc {
    &(&l[0] + &l[1]) + &l[2]
}

impl AlbertAlgebra {
    pub fn field(&self) -> &Field {
        self.v.field()
    }

    pub fn zero(&self) -> AlbertElement {
        AlbertElement { l: l_zero(self.field()), v: vec![] }
    }

    pub fn one(&self) -> AlbertElement {
        let f = self.field();
        AlbertElement { l: [Cyc::one(f), Cyc::one(f), Cyc::one(f)], v: vec![] }
    }

    pub fn add(&self, x: &AlbertElement, y: &AlbertElement) -> AlbertElement {
        AlbertElement { l: l_add(&x.l, &y.l), v: sv_add(&x.v, &y.v) }
    }

    pub fn sub(&self, x: &AlbertElement, y: &AlbertElement) -> AlbertElement {
        let m = -Cyc::one(self.field());
        AlbertElement { l: l_add(&x.l, &l_scale(&m, &y.l)), v: sv_sub(&x.v, &y.v) }
    }

    pub fn scale(&self, c: &Cyc, x: &AlbertElement) -> AlbertElement {
        AlbertElement { l: l_scale(c, &x.l), v: sv_scale(c, &x.v) }
    }

    /// T(X) = T(ℓ).
    pub fn trace(&self, x: &AlbertElement) -> Cyc {
        l_sum(&x.l)
    }

    pub fn trace_form(&self, x: &AlbertElement, y: &AlbertElement) -> Cyc {
        &l_sum(&l_mul(&x.l, &y.l)) + &l_sum(&self.v.bq(&x.v, &y.v))
    }

    pub fn norm(&self, x: &AlbertElement) -> Result<Cyc, AlbertError> {
        let nl = &(&x.l[0] * &x.l[1]) * &x.l[2];
        let vv = self.v.mul(&x.v, &x.v);
        let b = scalar_of(&self.v.bq(&x.v, &vv)).ok_or(AlbertError::NotScalar)?;
        let t = l_sum(&l_mul(&x.l, &self.v.q(&x.v)));
        Ok(&(&nl + &b) - &t)
    }

    pub fn adjoint(&self, x: &AlbertElement) -> AlbertElement {
        let m = -Cyc::one(self.field());
        let l = l_add(&l_adj(&x.l), &l_scale(&m, &self.v.q(&x.v)));
        let v = sv_sub(&self.v.mul(&x.v, &x.v), &self.v.l_act(&x.l, &x.v));
        AlbertElement { l, v }
    }

    /// X × Y = (X+Y)^# − X^# − Y^#.
    pub fn cross(&self, x: &AlbertElement, y: &AlbertElement) -> AlbertElement {
        let s = self.adjoint(&self.add(x, y));
        self.sub(&self.sub(&s, &self.adjoint(x)), &self.adjoint(y))
    }

    /// X∘Y = ½(X×Y + T(X)Y + T(Y)X − (T(X)T(Y) − T(X,Y))·1).
    pub fn jordan(&self, x: &AlbertElement, y: &AlbertElement) -> AlbertElement {
        let f = self.field();
        let (tx, ty) = (self.trace(x), self.trace(y));
        let mut acc = self.cross(x, y);
        acc = self.add(&acc, &self.scale(&tx, y));
        acc = self.add(&acc, &self.scale(&ty, x));
        let c = &(&tx * &ty) - &self.trace_form(x, y);
        acc = self.sub(&acc, &self.scale(&c, &self.one()));
        self.scale(&Cyc::from_ratio(f, 1, 2), &acc)
    }

    /// S(X) = ½(T(X)² − T(X²)).
    pub fn s_form(&self, x: &AlbertElement) -> Cyc {
        let t = self.trace(x);
        let t2 = self.trace(&self.jordan(x, x));
        &Cyc::from_ratio(self.field(), 1, 2) * &(&(&t * &t) - &t2)
    }

    pub fn coords(&self, x: &AlbertElement) -> SVec {
        let mut out: SVec = self.v.l.coords(&x.l).into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (L_OFFSET + j, c)).collect();
        out.extend(self.v.to_homogeneous(&x.v).into_iter().map(|(i, c)| (V_OFFSET + i, c)));
        out
    }

    pub fn element(&self, c: &[(usize, Cyc)]) -> AlbertElement {
        let f = self.field();
        let mut l = l_zero(f);
        let mut h = Acc::new();
        for (i, x) in c {
            if *i < V_OFFSET {
                l = l_add(&l, &l_scale(x, &self.v.l.xi_pow((*i - L_OFFSET) as i64)));
            } else {
                h.add(*i - V_OFFSET, x);
            }
        }
        AlbertElement { l, v: self.v.to_slot(&h.finish()) }
    }

    pub fn basis(&self, i: usize) -> AlbertElement {
        self.element(&sv_unit(i, self.field()))
    }

    /// Random element with rational coordinates in [−b, b].
    pub fn random<R: Rng>(&self, rng: &mut R, b: i64) -> AlbertElement {
        let f = self.field();
        let c: SVec = (0..ALBERT_DIM).map(|i| (i, Cyc::from_i64(f, rng.gen_range(-b..=b)))).filter(|(_, c)| !c.is_zero()).collect();
        self.element(&c)
    }

    /// X³ − T(X)X² + S(X)X − N(X)1.
    pub fn degree3(&self, x: &AlbertElement) -> Result<AlbertElement, AlbertError> {
        let x2 = self.jordan(x, x);
        let x3 = self.jordan(&x2, x);
        let mut r = self.sub(&x3, &self.scale(&self.trace(x), &x2));
        r = self.add(&r, &self.scale(&self.s_form(x), x));
        Ok(self.sub(&r, &self.scale(&self.norm(x)?, &self.one())))
    }

    pub fn is_zero(&self, x: &AlbertElement) -> bool {
        x.l.iter().all(|c| c.is_zero()) && x.v.is_empty()
    }

    pub fn trace_gram(&self) -> Mat {
        let f = self.field().clone();
        let b: Vec<AlbertElement> = (0..ALBERT_DIM).map(|i| self.basis(i)).collect();
        let rows: Vec<Vec<Cyc>> = b.iter().map(|x| b.iter().map(|y| self.trace_form(x, y)).collect()).collect();
        Mat::from_rows(&f, &rows)
    }
}

pub fn albert(v: &CyclicAlgebra) -> Result<AlbertAlgebra, AlbertError> {
    if v.s.dim() != 8 || DIM != 24 {
        return Err(AlbertError::Rank(v.s.dim()));
    }
    let f = v.field().clone();
    let mut j = AlbertAlgebra { v: v.clone(), structure: Structure::algebra(&f, Kind::Jordan, vec![], vec![]) };
    let basis: Vec<AlbertElement> = (0..ALBERT_DIM).map(|i| j.basis(i)).collect();
    let table: Vec<Vec<SVec>> = basis.iter().map(|x| basis.iter().map(|y| j.coords(&j.jordan(x, y))).collect()).collect();
    let mut labels: Vec<String> = ["1", "ξ", "ξ²"].iter().map(|s| s.to_string()).collect();
    labels.extend((0..DIM).map(|a| format!("s{}⊗ξ^{}", a % 8, a / 8)));
    j.structure = Structure::algebra(&f, Kind::Jordan, labels, table);
    // norm must be scalar-valued on every basis element
    for x in &basis {
        j.norm(x)?;
    }
    Ok(j)
}

/// Commutativity, unit and the Jordan identity (X²∘Y)∘X = X²∘(Y∘X) on all
/// basis pairs, on the structure constants.
pub fn verify_jordan(s: &Structure) -> Report {
    let mut r = Report::new();
    let n = s.dim(0);
    let f = s.field.clone();
    let e = |i: usize| sv_unit(i, &f);
    let unit = e(L_OFFSET);
    for a in 0..n {
        for b in 0..n {
            r.check(s.product(&e(a), &e(b)) == s.product(&e(b), &e(a)), || format!("e{a}∘e{b} ≠ e{b}∘e{a}"));
        }
        r.check(s.product(&unit, &e(a)) == e(a), || format!("1∘e{a} ≠ e{a}"));
    }
    let sq: Vec<SVec> = (0..n).map(|a| s.product(&e(a), &e(a))).collect();
    for a in 0..n {
        for b in 0..n {
            let lhs = s.product(&s.product(&sq[a], &e(b)), &e(a));
            let rhs = s.product(&sq[a], &s.product(&e(b), &e(a)));
            r.check(lhs == rhs, || format!("Jordan identity fails for (e{a}, e{b})"));
        }
    }
    r
}

/// The degree-3 identity on `count` seeded random elements and on the basis.
pub fn verify_degree3(j: &AlbertAlgebra, count: usize, seed: u64) -> Report {
    let mut r = Report::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<AlbertElement> = (0..ALBERT_DIM).map(|i| j.basis(i)).collect();
    xs.extend((0..count).map(|_| j.random(&mut rng, 3)));
    for (k, x) in xs.iter().enumerate() {
        match j.degree3(x) {
            Ok(d) => r.check(j.is_zero(&d), || format!("degree-3 identity fails on sample {k}")),
            Err(e) => r.check(false, || format!("sample {k}: {e}")),
        }
    }
    r
}

/// J_g = L_g ⊕ V_g.
pub fn grade_albert(j: &AlbertAlgebra, gc: &GradedCyclic) -> Result<(Grading, Report), AlbertError> {
    let g = &gc.grading;
    if g.group.is_zero(&g.degrees[1][1]) {
        return Err(AlbertError::NotTypeIII);
    }
    let mut degs: Vec<_> = g.degrees[1].clone();
    degs.extend(g.degrees[0].iter().cloned());
    let gr = Grading::on_algebra(&j.structure, &g.group, degs);
    let mut r = verify_grading(&j.structure, &gr);
    let gram = j.trace_gram();
    for a in 0..ALBERT_DIM {
        for b in 0..ALBERT_DIM {
            if !gram.get(a, b).is_zero() {
                let d = g.group.add(&gr.main()[a], &gr.main()[b]);
                r.check(g.group.is_zero(&d), || format!("T(e{a}, e{b}) ≠ 0 across degrees"));
            }
        }
    }
    if !r.ok() {
        return Err(AlbertError::Grading(r.violations.join("; ")));
    }
    Ok((gr, r))
}
