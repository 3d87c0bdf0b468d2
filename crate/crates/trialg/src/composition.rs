//! Hurwitz algebras, para-Hurwitz algebras and the Okubo algebra, with the
//! gradings used as building blocks of the cyclic models.

use crate::fgab::{AbGroup, GroupElem};
use crate::grading::{Grading, Kind, LinearMap, Structure};
use crate::linalg::{sv_dot, sv_from_dense, sv_scale, sv_sub, sv_to_dense, sv_unit, Acc, Mat, SVec};
use crate::scalars::{Cyc, Field, ScalarError};
use crate::Report;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompError {
    #[error("Cayley-Dickson doubling needs dimension 1, 2 or 4, got {0}")]
    DoublingDim(usize),
    #[error("the doubling parameter must be nonzero")]
    ZeroMu,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("no nonzero idempotent found by the structured search in {0}")]
    Exhausted(String),
    #[error("{0} is not a Hurwitz algebra (no unit)")]
    NotUnital(String),
}

/// A composition algebra by structure constants: product table, Gram matrix
/// of the polar form n(x,y) = n(x+y) − n(x) − n(y), optional unit.
#[derive(Debug, Clone)]
pub struct CompAlgebra {
    pub name: String,
    pub field: Field,
    pub labels: Vec<String>,
    pub mult: Vec<Vec<SVec>>,
    pub polar: Mat,
    pub unit: Option<SVec>,
    /// 3×3 matrix realization of the basis (Okubo model only).
    pub matrices: Option<Vec<Mat>>,
}

pub type HurwitzAlgebra = CompAlgebra;
pub type SymCompAlgebra = CompAlgebra;

impl CompAlgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, a: &[(usize, Cyc)], b: &[(usize, Cyc)]) -> SVec {
        let mut acc = Acc::new();
        for (i, x) in a {
            for (j, y) in b {
                acc.add_scaled(&(x * y), &self.mult[*i][*j]);
            }
        }
        acc.finish()
    }

    pub fn polar_form(&self, a: &[(usize, Cyc)], b: &[(usize, Cyc)]) -> Cyc {
        let gb = self.polar.apply_sv(b);
        sv_dot(a, &gb, &self.field)
    }

    pub fn norm(&self, a: &[(usize, Cyc)]) -> Cyc {
        self.polar_form(a, a) * Cyc::from_ratio(&self.field, 1, 2)
    }

    pub fn basis(&self, i: usize) -> SVec {
        sv_unit(i, &self.field)
    }

    /// x̄ = n(x,1)1 − x.
    pub fn conj(&self, a: &[(usize, Cyc)]) -> Result<SVec, CompError> {
        let one = self.unit.as_ref().ok_or_else(|| CompError::NotUnital(self.name.clone()))?;
        Ok(sv_sub(&sv_scale(&self.polar_form(a, one), one), a))
    }

    pub fn structure(&self) -> Structure {
        let mut s = Structure::algebra(&self.field, Kind::Composition, self.labels.clone(), self.mult.clone());
        s.add_form("n", 0, &self.polar);
        if self.unit.is_some() {
            let cols = (0..self.dim()).map(|i| self.conj(&self.basis(i)).expect("unital")).collect();
            s.linear.push(LinearMap { name: "conjugation".into(), sort: 0, cols });
        }
        s
    }

    fn from_dense_product(name: &str, field: &Field, labels: Vec<String>, polar: Mat, unit: Option<SVec>, prod: impl Fn(&[Cyc], &[Cyc]) -> Vec<Cyc>) -> CompAlgebra {
        let n = labels.len();
        let e = |i: usize| sv_to_dense(&sv_unit(i, field), n, field);
        let mult = (0..n).map(|i| (0..n).map(|j| sv_from_dense(&prod(&e(i), &e(j)))).collect()).collect();
        CompAlgebra { name: name.into(), field: field.clone(), labels, mult, polar, unit, matrices: None }
    }
}

fn dot3(a: &[Cyc], b: &[Cyc]) -> Cyc {
    &(&a[0] * &b[0]) + &(&(&a[1] * &b[1]) + &(&a[2] * &b[2]))
}

fn cross3(a: &[Cyc], b: &[Cyc]) -> [Cyc; 3] {
    [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

/// Split Cayley algebra in the vector-matrix model: the element with
/// coordinates (a, b, u, v) is [[a, v], [u, b]].
pub fn zorn_cayley(f: &Field) -> HurwitzAlgebra {
    let labels = ["e1", "e2", "u1", "u2", "u3", "v1", "v2", "v3"].iter().map(|s| s.to_string()).collect();
    let mut polar = Mat::zeros(f, 8, 8);
    polar.set(0, 1, Cyc::one(f));
    polar.set(1, 0, Cyc::one(f));
    for i in 0..3 {
        polar.set(2 + i, 5 + i, -Cyc::one(f));
        polar.set(5 + i, 2 + i, -Cyc::one(f));
    }
    let unit = vec![(0, Cyc::one(f)), (1, Cyc::one(f))];
    CompAlgebra::from_dense_product("split Cayley", f, labels, polar, Some(unit), |x, y| {
        let (a, b, u, v) = (&x[0], &x[1], &x[2..5], &x[5..8]);
        let (a2, b2, u2, v2) = (&y[0], &y[1], &y[2..5], &y[5..8]);
        let na = &(a * a2) + &dot3(v, u2);
        let nb = &(b * b2) + &dot3(u, v2);
        let uu = cross3(u, u2);
        let vv = cross3(v, v2);
        let mut out = vec![na, nb];
        for i in 0..3 {
            out.push(&(&(a2 * &u[i]) + &(b * &u2[i])) + &vv[i]);
        }
        for i in 0..3 {
            out.push(&(&(a * &v2[i]) + &(b2 * &v[i])) - &uu[i]);
        }
        out
    })
}

/// The ground field as a 1-dimensional Hurwitz algebra, n(x) = x².
pub fn field_algebra(f: &Field) -> HurwitzAlgebra {
    let mut polar = Mat::zeros(f, 1, 1);
    polar.set(0, 0, Cyc::from_i64(f, 2));
    CompAlgebra { name: "F".into(), field: f.clone(), labels: vec!["e0".into()], mult: vec![vec![sv_unit(0, f)]], polar, unit: Some(sv_unit(0, f)), matrices: None }
}

/// F×F with componentwise product and n(x) = x₁x₂.
pub fn split_quadratic(f: &Field) -> HurwitzAlgebra {
    let mut polar = Mat::zeros(f, 2, 2);
    polar.set(0, 1, Cyc::one(f));
    polar.set(1, 0, Cyc::one(f));
    let mult = vec![vec![sv_unit(0, f), vec![]], vec![vec![], sv_unit(1, f)]];
    let unit = vec![(0, Cyc::one(f)), (1, Cyc::one(f))];
    CompAlgebra { name: "FxF".into(), field: f.clone(), labels: vec!["p1".into(), "p2".into()], mult, polar, unit: Some(unit), matrices: None }
}

/// (a,b)(c,d) = (ac + μ d̄b, da + bc̄), n(a,b) = n(a) − μ n(b).
pub fn cayley_dickson(a: &HurwitzAlgebra, mu: &Cyc) -> Result<HurwitzAlgebra, CompError> {
    let d = a.dim();
    if ![1, 2, 4].contains(&d) {
        return Err(CompError::DoublingDim(d));
    }
    if mu.is_zero() {
        return Err(CompError::ZeroMu);
    }
    let f = &a.field;
    let conj: Vec<SVec> = (0..d).map(|i| a.conj(&a.basis(i))).collect::<Result<_, _>>()?;
    let shift = |v: &SVec| v.iter().map(|(i, x)| (i + d, x.clone())).collect::<SVec>();
    let mut mult = vec![vec![vec![]; 2 * d]; 2 * d];
    for i in 0..d {
        for j in 0..d {
            // (e_i,0)(e_j,0) = (e_i e_j, 0)
            mult[i][j] = a.mult[i][j].clone();
            // (e_i,0)(0,e_j) = (0, e_j e_i)
            mult[i][d + j] = shift(&a.mult[j][i]);
            // (0,e_i)(e_j,0) = (0, e_i ē_j)
            mult[d + i][j] = shift(&a.mul(&a.basis(i), &conj[j]));
            // (0,e_i)(0,e_j) = (μ ē_j e_i, 0)
            mult[d + i][d + j] = sv_scale(mu, &a.mul(&conj[j], &a.basis(i)));
        }
    }
    let mut polar = Mat::zeros(f, 2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            polar.set(i, j, a.polar.get(i, j).clone());
            polar.set(d + i, d + j, -(mu * a.polar.get(i, j)));
        }
    }
    let labels = (0..2 * d).map(|m| format!("e{m}")).collect();
    let unit = a.unit.clone();
    Ok(CompAlgebra { name: format!("CD{}", 2 * d), field: f.clone(), labels, mult, polar, unit, matrices: None })
}

/// The thrice-doubled split Cayley algebra (μ = 1 at every step).
pub fn doubled_cayley(f: &Field) -> HurwitzAlgebra {
    let one = Cyc::one(f);
    let mut a = field_algebra(f);
    for _ in 0..3 {
        a = cayley_dickson(&a, &one).expect("dimensions 1, 2, 4");
    }
    a.name = "doubled Cayley".into();
    a
}

/// Para-Hurwitz algebra: x∙y = x̄ȳ.
pub fn para(a: &HurwitzAlgebra) -> Result<SymCompAlgebra, CompError> {
    let n = a.dim();
    let conj: Vec<SVec> = (0..n).map(|i| a.conj(&a.basis(i))).collect::<Result<_, _>>()?;
    let mult = (0..n).map(|i| (0..n).map(|j| a.mul(&conj[i], &conj[j])).collect()).collect();
    Ok(CompAlgebra { name: format!("para-{}", a.name), field: a.field.clone(), labels: a.labels.clone(), mult, polar: a.polar.clone(), unit: a.unit.clone(), matrices: None })
}

/// Exponent pairs (a,b) ≠ (0,0) of the Okubo basis X^aY^b, in basis order.
pub fn okubo_exponents() -> Vec<(i64, i64)> {
    (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).filter(|&p| p != (0, 0)).collect()
}

/// X = diag(1, ω, ω²) and the cyclic permutation Y: e_i ↦ e_{i+1}.
pub fn okubo_generators(f: &Field) -> Result<(Mat, Mat), ScalarError> {
    let w = Cyc::omega(f)?;
    let mut x = Mat::zeros(f, 3, 3);
    let mut y = Mat::zeros(f, 3, 3);
    for i in 0..3 {
        x.set(i, i, w.pow(i as i64));
        y.set((i + 1) % 3, i, Cyc::one(f));
    }
    Ok((x, y))
}

fn mat_pow(m: &Mat, k: i64) -> Mat {
    let mut r = Mat::identity(m.field(), m.rows);
    for _ in 0..k {
        r = r.mul(m);
    }
    r
}

/// Okubo algebra on traceless 3×3 matrices:
/// x⋆y = μxy + (1−μ)yx − ⅓tr(xy)·1 with μ = (2+ω)/3, n(x) = tr(x²)/6.
pub fn okubo_sl3(f: &Field) -> Result<SymCompAlgebra, CompError> {
    let w = Cyc::omega(f)?;
    let (x, y) = okubo_generators(f)?;
    let exps = okubo_exponents();
    let basis: Vec<Mat> = exps.iter().map(|&(a, b)| mat_pow(&x, a).mul(&mat_pow(&y, b))).collect();
    // Coordinates of a 3×3 matrix in the basis {I} ∪ {X^aY^b}.
    let mut cols = vec![Mat::identity(f, 3).flat()];
    cols.extend(basis.iter().map(|m| m.flat()));
    let coord = Mat::from_columns(f, 9, &cols).inverse().expect("X^aY^b span M3");
    let mu = (&Cyc::from_i64(f, 2) + &w) * Cyc::from_ratio(f, 1, 3);
    let one_minus = &Cyc::one(f) - &mu;
    let third = Cyc::from_ratio(f, 1, 3);
    let star = |p: &Mat, q: &Mat| -> Mat {
        let pq = p.mul(q);
        let t = pq.trace() * &third;
        pq.scale(&mu).add(&q.mul(p).scale(&one_minus)).sub(&Mat::identity(f, 3).scale(&t))
    };
    let to_coords = |m: &Mat| -> SVec {
        let c = coord.apply_sv(&m.flat());
        debug_assert!(c.first().is_none_or(|e| e.0 != 0), "traceless");
        c.into_iter().filter(|(i, _)| *i > 0).map(|(i, v)| (i - 1, v)).collect()
    };
    let n = basis.len();
    let mult = (0..n).map(|i| (0..n).map(|j| to_coords(&star(&basis[i], &basis[j]))).collect()).collect();
    let mut polar = Mat::zeros(f, n, n);
    for i in 0..n {
        for j in 0..n {
            polar.set(i, j, basis[i].mul(&basis[j]).trace() * &third);
        }
    }
    let labels = exps.iter().map(|(a, b)| format!("X{a}Y{b}")).collect();
    Ok(CompAlgebra { name: "Okubo".into(), field: f.clone(), labels, mult, polar, unit: None, matrices: Some(basis) })
}

/// The coordinates of a 3×3 matrix in the Okubo basis (model must be present).
pub fn okubo_coords(s: &SymCompAlgebra, m: &Mat) -> Option<SVec> {
    let basis = s.matrices.as_ref()?;
    let f = &s.field;
    let mut cols = vec![Mat::identity(f, 3).flat()];
    cols.extend(basis.iter().map(|b| b.flat()));
    let c = Mat::from_columns(f, 9, &cols).inverse()?.apply_sv(&m.flat());
    if c.first().is_some_and(|e| e.0 == 0) {
        return None;
    }
    Some(c.into_iter().map(|(i, v)| (i - 1, v)).collect())
}

fn linear_comb(vs: &[(Cyc, &SVec)]) -> SVec {
    let mut acc = Acc::new();
    for (c, v) in vs {
        acc.add_scaled(c, v);
    }
    acc.finish()
}

/// Axioms of a symmetric composition algebra plus (x*y)*x = n(x)y = x*(y*x),
/// each also checked in fully linearized form on basis triples/quadruples.
pub fn is_symmetric_composition(s: &SymCompAlgebra) -> Report {
    let mut r = Report::new();
    let f = &s.field;
    let n = s.dim();
    r.check(!s.polar.det().is_zero(), || "polar form is singular".into());
    let e: Vec<SVec> = (0..n).map(|i| s.basis(i)).collect();
    let g = |i: usize, j: usize| s.polar.get(i, j).clone();
    let nrm = |i: usize| g(i, i) * Cyc::from_ratio(f, 1, 2);
    for x in 0..n {
        for y in 0..n {
            let xy = &s.mult[x][y];
            r.check(s.norm(xy) == nrm(x) * nrm(y), || format!("n({0}*{1}) != n({0})n({1})", s.labels[x], s.labels[y]));
            let lhs = s.mul(xy, &e[x]);
            let rhs = sv_scale(&nrm(x), &e[y]);
            r.check(lhs == rhs, || format!("({0}*{1})*{0} != n({0}){1}", s.labels[x], s.labels[y]));
            let lhs2 = s.mul(&e[x], &s.mult[y][x]);
            r.check(lhs2 == rhs, || format!("{0}*({1}*{0}) != n({0}){1}", s.labels[x], s.labels[y]));
            for z in 0..n {
                r.check(s.polar_form(xy, &e[z]) == s.polar_form(&e[x], &s.mult[y][z]), || {
                    format!("n({}*{}, {}) != n({}, {}*{})", s.labels[x], s.labels[y], s.labels[z], s.labels[x], s.labels[y], s.labels[z])
                });
                let one = Cyc::one(f);
                let l1 = linear_comb(&[(one.clone(), &s.mul(xy, &e[z])), (one.clone(), &s.mul(&s.mult[z][y], &e[x]))]);
                r.check(l1 == sv_scale(&g(x, z), &e[y]), || format!("linearized (x*y)*x identity fails at {},{},{}", s.labels[x], s.labels[y], s.labels[z]));
                let l2 = linear_comb(&[(one.clone(), &s.mul(&e[x], &s.mult[y][z])), (one, &s.mul(&e[z], &s.mult[y][x]))]);
                r.check(l2 == sv_scale(&g(x, z), &e[y]), || format!("linearized x*(y*x) identity fails at {},{},{}", s.labels[x], s.labels[y], s.labels[z]));
            }
        }
    }
    check_linearized_multiplicativity(s, &mut r);
    r
}

/// n(xy, zw) + n(xw, zy) = n(x,z) n(y,w) on all basis quadruples.
fn check_linearized_multiplicativity(s: &CompAlgebra, r: &mut Report) {
    let n = s.dim();
    // P[a][b] = polar form of products, via Gram-applied products
    let gp: Vec<Vec<SVec>> = s.mult.iter().map(|row| row.iter().map(|v| s.polar.apply_sv(v)).collect()).collect();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let lhs = sv_dot(&s.mult[x][y], &gp[z][w], &s.field) + sv_dot(&s.mult[x][w], &gp[z][y], &s.field);
                    let rhs = s.polar.get(x, z) * s.polar.get(y, w);
                    r.check(lhs == rhs, || format!("linearized multiplicativity fails at {},{},{},{}", s.labels[x], s.labels[y], s.labels[z], s.labels[w]));
                }
            }
        }
    }
}

/// Unit, multiplicativity, and the standard involution.
pub fn is_hurwitz(a: &HurwitzAlgebra) -> Report {
    let mut r = Report::new();
    let n = a.dim();
    r.check(!a.polar.det().is_zero(), || "polar form is singular".into());
    let Some(one) = a.unit.clone() else {
        r.check(false, || format!("{} has no unit", a.name));
        return r;
    };
    r.check(a.norm(&one).is_one(), || "n(1) != 1".into());
    let g = |i: usize| a.polar.get(i, i) * Cyc::from_ratio(&a.field, 1, 2);
    for x in 0..n {
        let ex = a.basis(x);
        r.check(a.mul(&one, &ex) == ex && a.mul(&ex, &one) == ex, || format!("1 is not a unit on {}", a.labels[x]));
        let c = a.conj(&ex).expect("unital");
        r.check(a.conj(&c).expect("unital") == ex, || format!("conjugation is not an involution on {}", a.labels[x]));
        for y in 0..n {
            r.check(a.norm(&a.mult[x][y]) == g(x) * g(y), || format!("n({0}{1}) != n({0})n({1})", a.labels[x], a.labels[y]));
            let cy = a.conj(&a.basis(y)).expect("unital");
            r.check(a.polar_form(&c, &cy) == a.polar.get(x, y).clone(), || format!("conjugation does not preserve n on {},{}", a.labels[x], a.labels[y]));
        }
    }
    check_linearized_multiplicativity(a, &mut r);
    r
}

/// deg e_i = 0; deg u = (1,0), (0,1), (−1,−1); deg v_i = −deg u_i.
pub fn cartan_degrees(group: &AbGroup, g1: &GroupElem, g2: &GroupElem) -> Vec<GroupElem> {
    let g3 = group.neg(&group.add(g1, g2));
    let us = [g1.clone(), g2.clone(), g3];
    let mut d = vec![group.zero(), group.zero()];
    d.extend(us.iter().cloned());
    d.extend(us.iter().map(|g| group.neg(g)));
    d
}

/// The Cartan Z²-grading of the split Cayley algebra.
pub fn cartan_grading_cayley(c: &HurwitzAlgebra) -> Grading {
    let z2 = AbGroup::presented(2, &[]).expect("free group");
    let degs = cartan_degrees(&z2, &z2.gen(0), &z2.gen(1));
    Grading::on_algebra(&c.structure(), &z2, degs)
}

/// Z₂³-grading of the doubled model: basis index = bitmask of doublings.
pub fn z2cubed_degrees(group: &AbGroup, k: &[GroupElem; 3]) -> Vec<GroupElem> {
    (0..8)
        .map(|m: usize| (0..3).filter(|b| m >> b & 1 == 1).fold(group.zero(), |acc, b| group.add(&acc, &k[b])))
        .collect()
}

pub fn z2cubed_grading_cayley(c: &HurwitzAlgebra) -> Grading {
    let g = AbGroup::presented(0, &[2, 2, 2]).expect("Z2^3");
    let k = [g.gen(0), g.gen(1), g.gen(2)];
    Grading::on_algebra(&c.structure(), &g, z2cubed_degrees(&g, &k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// "+": deg X^aY^b = a k₁ + b k₂; "−": the two generators swapped.
pub fn okubo_degrees(group: &AbGroup, k1: &GroupElem, k2: &GroupElem, sign: Sign) -> Vec<GroupElem> {
    let (p, q) = match sign {
        Sign::Plus => (k1, k2),
        Sign::Minus => (k2, k1),
    };
    okubo_exponents().into_iter().map(|(a, b)| group.add(&group.times(a, p), &group.times(b, q))).collect()
}

pub fn okubo_grading(o: &SymCompAlgebra, sign: Sign) -> Grading {
    let g = AbGroup::presented(0, &[3, 3]).expect("Z3^2");
    Grading::on_algebra(&o.structure(), &g, okubo_degrees(&g, &g.gen(0), &g.gen(1), sign))
}

/// A nonzero idempotent (all para-units for 2-dimensional inputs), found by
/// structured search: para-unit, then the diagonal ansatz diag(p,p,−2p) in
/// the matrix model, then sparse root-of-unity combinations of basis vectors.
pub fn nonzero_idempotent(s: &SymCompAlgebra) -> Result<Vec<SVec>, CompError> {
    let f = &s.field;
    let n = s.dim();
    let ok = |x: &SVec| !x.is_empty() && s.mul(x, x) == *x && s.norm(x).is_one();
    let nroots = f.conductor() as i64;
    if n == 2 {
        let coeffs: Vec<Option<Cyc>> = std::iter::once(None).chain((0..nroots).map(|k| Some(Cyc::zeta_pow(f, k)))).collect();
        let mut found = Vec::new();
        for a in coeffs.iter().skip(1).chain(std::iter::once(&coeffs[0])) {
            for b in coeffs.iter().skip(1).chain(std::iter::once(&coeffs[0])) {
                let mut x = Vec::new();
                if let Some(a) = a {
                    x.push((0, a.clone()));
                }
                if let Some(b) = b {
                    x.push((1, b.clone()));
                }
                if ok(&x) {
                    found.push(x);
                }
            }
        }
        return if found.is_empty() { Err(CompError::Exhausted(s.name.clone())) } else { Ok(found) };
    }
    if let Some(u) = &s.unit {
        if ok(u) {
            return Ok(vec![u.clone()]);
        }
    }
    if s.matrices.is_some() {
        for pos in (0..3).rev() {
            let mut d0 = Mat::identity(f, 3);
            d0.set(pos, pos, Cyc::from_i64(f, -2));
            let Some(v) = okubo_coords(s, &d0) else { continue };
            let sq = s.mul(&v, &v);
            // sq = c·v forces p = 1/c
            let (i0, x0) = &v[0];
            let Some(c) = crate::linalg::sv_get(&sq, *i0).map(|y| y / x0) else { continue };
            if c.is_zero() || sq != sv_scale(&c, &v) {
                continue;
            }
            let eps = sv_scale(&c.inv()?, &v);
            if ok(&eps) {
                return Ok(vec![eps]);
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            for a in 0..nroots {
                for b in 0..nroots {
                    let x = if i == j {
                        if b > 0 {
                            break;
                        }
                        vec![(i, Cyc::zeta_pow(f, a))]
                    } else {
                        vec![(i, Cyc::zeta_pow(f, a)), (j, Cyc::zeta_pow(f, b))]
                    };
                    if ok(&x) {
                        return Ok(vec![x]);
                    }
                }
            }
        }
    }
    Err(CompError::Exhausted(s.name.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::verify_grading;
    use crate::scalars::make_field;

    #[test]
    fn zorn_is_hurwitz() {
        let f = make_field(12).unwrap();
        let c = zorn_cayley(&f);
        let r = is_hurwitz(&c);
        assert!(r.ok(), "{:?}", r.violations);
        assert!(!is_symmetric_composition(&c).ok());
    }

    #[test]
    fn doubling_chain() {
        let f = make_field(12).unwrap();
        let two = cayley_dickson(&field_algebra(&f), &Cyc::one(&f)).unwrap();
        assert_eq!(two.dim(), 2);
        // n((a,b)) = a² − b²
        assert_eq!(two.norm(&[(0, Cyc::from_i64(&f, 3)), (1, Cyc::from_i64(&f, 2))]), Cyc::from_i64(&f, 5));
        let eight = doubled_cayley(&f);
        assert!(is_hurwitz(&eight).ok());
        assert!(cayley_dickson(&eight, &Cyc::one(&f)).is_err());
    }

    #[test]
    fn para_and_okubo_are_symmetric() {
        let f = make_field(12).unwrap();
        let p = para(&zorn_cayley(&f)).unwrap();
        assert!(is_symmetric_composition(&p).ok());
        let o = okubo_sl3(&f).unwrap();
        let r = is_symmetric_composition(&o);
        assert!(r.ok(), "{:?}", &r.violations[..r.violations.len().min(5)]);
    }

    #[test]
    fn gradings_verify() {
        let f = make_field(12).unwrap();
        let c = zorn_cayley(&f);
        assert!(verify_grading(&c.structure(), &cartan_grading_cayley(&c)).ok());
        let d = doubled_cayley(&f);
        assert!(verify_grading(&d.structure(), &z2cubed_grading_cayley(&d)).ok());
        let o = okubo_sl3(&f).unwrap();
        assert!(verify_grading(&o.structure(), &okubo_grading(&o, Sign::Plus)).ok());
        assert!(verify_grading(&o.structure(), &okubo_grading(&o, Sign::Minus)).ok());
    }

    #[test]
    fn idempotents() {
        let f = make_field(12).unwrap();
        let o = okubo_sl3(&f).unwrap();
        let eps = nonzero_idempotent(&o).unwrap();
        let mut d = Mat::identity(&f, 3).scale(&Cyc::from_i64(&f, -1));
        d.set(2, 2, Cyc::from_i64(&f, 2));
        assert_eq!(eps[0], okubo_coords(&o, &d).unwrap());
        let k = para(&split_quadratic(&f)).unwrap();
        let units = nonzero_idempotent(&k).unwrap();
        let w = Cyc::omega(&f).unwrap();
        let one = Cyc::one(&f);
        assert_eq!(
            units,
            vec![vec![(0, one.clone()), (1, one.clone())], vec![(0, w.clone()), (1, &w * &w)], vec![(0, &w * &w), (1, w.clone())]]
        );
    }
}
