//! Cyclic composition algebras over L = F×F×F in the triple model V = S³.
//!
//! Vectors of V are kept in slot coordinates: index 8k+i is basis vector i of
//! S in slot k. The homogeneous basis s_i⊗ξ^j (index 8j+i) is used whenever a
//! grading is involved.

use crate::composition::{CompAlgebra, SymCompAlgebra};
use crate::grading::{BilinearMap, Kind, Structure};
use crate::linalg::{kernel, sv_scale, sv_sub, sv_unit, Acc, Echelon, Mat, SVec};
use crate::scalars::{Cyc, Field, ScalarError};
use crate::Report;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CyclicError {
    #[error("the symmetric composition algebra must have dimension 8, got {0}")]
    Dim(usize),
    #[error("{0} is not invertible in L")]
    NotInvertible(String),
    #[error("the element is not a nonzero idempotent")]
    NotIdempotent,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// An element of L = F³.
pub type LElem = [Cyc; 3];

pub fn l_const(c: &Cyc) -> LElem {
    [c.clone(), c.clone(), c.clone()]
}

pub fn l_one(f: &Field) -> LElem {
    l_const(&Cyc::one(f))
}

pub fn l_zero(f: &Field) -> LElem {
    l_const(&Cyc::zero(f))
}

/// ρ^k: (ℓ₁,ℓ₂,ℓ₃) ↦ (ℓ₂,ℓ₃,ℓ₁) applied k times.
pub fn rho(l: &LElem, k: usize) -> LElem {
    std::array::from_fn(|m| l[(m + k) % 3].clone())
}

pub fn l_mul(a: &LElem, b: &LElem) -> LElem {
    std::array::from_fn(|m| &a[m] * &b[m])
}

pub fn l_add(a: &LElem, b: &LElem) -> LElem {
    std::array::from_fn(|m| &a[m] + &b[m])
}

pub fn l_scale(c: &Cyc, a: &LElem) -> LElem {
    std::array::from_fn(|m| c * &a[m])
}

pub fn l_inv(a: &LElem) -> Result<LElem, CyclicError> {
    if a.iter().any(|x| x.is_zero()) {
        return Err(CyclicError::NotInvertible(format!("{a:?}")));
    }
    Ok(std::array::from_fn(|m| a[m].inv().expect("nonzero")))
}

pub fn l_norm(a: &LElem) -> LElem {
    l_mul(a, &l_adj(a))
}

pub fn l_trace(a: &LElem) -> LElem {
    l_add(&l_add(a, &rho(a, 1)), &rho(a, 2))
}

/// ℓ^# = ρ(ℓ)ρ²(ℓ).
pub fn l_adj(a: &LElem) -> LElem {
    l_mul(&rho(a, 1), &rho(a, 2))
}

pub fn l_is_scalar(a: &LElem) -> bool {
    a[0] == a[1] && a[1] == a[2]
}

/// The idempotent with 1 in slot k.
pub fn l_slot(f: &Field, k: usize) -> LElem {
    std::array::from_fn(|m| if m == k { Cyc::one(f) } else { Cyc::zero(f) })
}

/// L with ρ, and ξ = (1, ω, ω²).
#[derive(Debug, Clone)]
pub struct CubicEtale {
    pub field: Field,
    pub omega: Cyc,
    pub xi: LElem,
}

pub fn make_l(f: &Field) -> Result<CubicEtale, CyclicError> {
    let w = Cyc::omega(f)?;
    let xi = [Cyc::one(f), w.clone(), &w * &w];
    Ok(CubicEtale { field: f.clone(), omega: w, xi })
}

impl CubicEtale {
    pub fn xi_pow(&self, j: i64) -> LElem {
        std::array::from_fn(|m| self.xi[m].pow(j))
    }

    /// Coordinates of ℓ in the basis 1, ξ, ξ²: c_j = ⅓ Σ_k ω^{−jk} ℓ_k.
    pub fn coords(&self, l: &LElem) -> [Cyc; 3] {
        let third = Cyc::from_ratio(&self.field, 1, 3);
        std::array::from_fn(|j| {
            let mut s = Cyc::zero(&self.field);
            for (k, lk) in l.iter().enumerate() {
                s = &s + &(&self.omega.pow((-((j * k) as i64)).rem_euclid(3)) * lk);
            }
            &s * &third
        })
    }

    pub fn verify(&self) -> Report {
        let f = &self.field;
        let mut r = Report::new();
        r.check(rho(&rho(&rho(&self.xi, 1), 1), 1) == self.xi, || "ρ³ != id on ξ".into());
        r.check(l_norm(&self.xi) == l_one(f), || "N(ξ) != 1".into());
        r.check(rho(&self.xi, 1) == l_scale(&self.omega, &self.xi), || "ρ(ξ) != ωξ".into());
        r.check(l_adj(&self.xi) == l_mul(&self.xi, &self.xi), || "ξ^# != ξ²".into());
        r
    }
}

/// V = S³ with ∗ and Q given by structure constants in slot coordinates.
#[derive(Debug, Clone)]
pub struct CyclicAlgebra {
    pub name: String,
    pub s: SymCompAlgebra,
    pub l: CubicEtale,
    /// 1 for ρ, 2 for ρ² (opposite algebras).
    pub twist: usize,
    pub mult: Vec<Vec<SVec>>,
    /// Gram matrix of b_Q restricted to each slot.
    pub qgram: [Mat; 3],
}

pub const RANK: usize = 8;
pub const DIM: usize = 24;

pub fn slot_of(i: usize) -> usize {
    i / RANK
}

/// (x₁,x₂,x₃)∗(y₁,y₂,y₃) = (x₂⋆y₃, x₃⋆y₁, x₁⋆y₂), Q = (n,n,n).
pub fn cyclic_from_symmetric(s: &SymCompAlgebra) -> Result<CyclicAlgebra, CyclicError> {
    if s.dim() != RANK {
        return Err(CyclicError::Dim(s.dim()));
    }
    let f = &s.field;
    let l = make_l(f)?;
    let mut mult = vec![vec![vec![]; DIM]; DIM];
    for m in 0..3 {
        let (a, b) = ((m + 1) % 3, (m + 2) % 3);
        for i in 0..RANK {
            for j in 0..RANK {
                mult[RANK * a + i][RANK * b + j] = s.mult[i][j].iter().map(|(k, c)| (RANK * m + k, c.clone())).collect();
            }
        }
    }
    let qgram = [s.polar.clone(), s.polar.clone(), s.polar.clone()];
    Ok(CyclicAlgebra { name: format!("{}⊗L", s.name), s: s.clone(), l, twist: 1, mult, qgram })
}

impl CyclicAlgebra {
    pub fn field(&self) -> &Field {
        &self.s.field
    }

    pub fn mul(&self, x: &[(usize, Cyc)], y: &[(usize, Cyc)]) -> SVec {
        let mut acc = Acc::new();
        for (i, a) in x {
            for (j, b) in y {
                let t = &self.mult[*i][*j];
                if !t.is_empty() {
                    acc.add_scaled(&(a * b), t);
                }
            }
        }
        acc.finish()
    }

    /// ℓ·x, acting slotwise.
    pub fn l_act(&self, l: &LElem, x: &[(usize, Cyc)]) -> SVec {
        x.iter().filter_map(|(i, c)| {
            let v = &l[slot_of(*i)] * c;
            (!v.is_zero()).then_some((*i, v))
        }).collect()
    }

    /// Gram-applied vector: (G x)_i, slot by slot.
    fn gram_apply(&self, x: &[(usize, Cyc)]) -> SVec {
        let mut acc = Acc::new();
        for (i, c) in x {
            let k = slot_of(*i);
            let col = self.qgram[k].col_sv(i % RANK);
            for (j, g) in col {
                acc.add(RANK * k + j, &(c * &g));
            }
        }
        acc.finish()
    }

    pub fn bq(&self, x: &[(usize, Cyc)], y: &[(usize, Cyc)]) -> LElem {
        pair_l(self.field(), x, &self.gram_apply(y))
    }

    pub fn q(&self, x: &[(usize, Cyc)]) -> LElem {
        l_scale(&Cyc::from_ratio(self.field(), 1, 2), &self.bq(x, x))
    }

    /// V^op: x ∗op y = y ∗ x, over (L, ρ²).
    pub fn opposite(&self) -> CyclicAlgebra {
        let mult = (0..DIM).map(|i| (0..DIM).map(|j| self.mult[j][i].clone()).collect()).collect();
        let name = match self.name.strip_suffix("^op") {
            Some(n) => n.to_string(),
            None => format!("{}^op", self.name),
        };
        CyclicAlgebra { name, mult, twist: 3 - self.twist, ..self.clone() }
    }

    /// New product λ(x∗y) and form λ^#Q.
    pub fn scale(&self, lambda: &LElem) -> Result<CyclicAlgebra, CyclicError> {
        l_inv(lambda)?;
        let mult = self.mult.iter().map(|row| row.iter().map(|v| self.l_act(lambda, v)).collect()).collect();
        let mu = l_adj(lambda);
        let qgram = std::array::from_fn(|k| self.qgram[k].scale(&mu[k]));
        Ok(CyclicAlgebra { name: format!("scaled {}", self.name), mult, qgram, ..self.clone() })
    }

    /// Slot coordinates of s_i ⊗ ξ^j.
    pub fn homogeneous_vector(&self, i: usize, j: usize) -> SVec {
        (0..3).map(|k| (RANK * k + i, self.l.omega.pow(((j * k) % 3) as i64))).collect()
    }

    pub fn to_slot(&self, h: &[(usize, Cyc)]) -> SVec {
        let mut acc = Acc::new();
        for (a, c) in h {
            acc.add_scaled(c, &self.homogeneous_vector(a % RANK, a / RANK));
        }
        acc.finish()
    }

    pub fn to_homogeneous(&self, x: &[(usize, Cyc)]) -> SVec {
        let f = self.field();
        let mut acc = Acc::new();
        for i in 0..RANK {
            let l: LElem = std::array::from_fn(|k| crate::linalg::sv_get(x, RANK * k + i).cloned().unwrap_or_else(|| Cyc::zero(f)));
            for (j, c) in self.l.coords(&l).iter().enumerate() {
                acc.add(RANK * j + i, c);
            }
        }
        acc.finish()
    }

    /// Three sorts: V on the homogeneous basis, L on {1, ξ, ξ²}, and F.
    /// Maps: product, L-action, L-product and b_Q.
    pub fn structure(&self) -> Structure {
        let f = self.field();
        let labels = (0..DIM).map(|a| format!("{}⊗ξ{}", self.s.labels[a % RANK], a / RANK)).collect();
        let hv: Vec<SVec> = (0..DIM).map(|a| self.homogeneous_vector(a % RANK, a / RANK)).collect();
        let product = (0..DIM).map(|a| (0..DIM).map(|b| self.to_homogeneous(&self.mul(&hv[a], &hv[b]))).collect()).collect();
        let mut st = Structure::algebra(f, Kind::Module, labels, product);
        let ls = st.add_sort("L", vec!["1".into(), "ξ".into(), "ξ2".into()]);
        let lcoords = |l: &LElem| -> SVec { self.l.coords(l).iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.clone())).collect() };
        let act = (0..3).map(|a| (0..DIM).map(|b| vec![(RANK * ((a + b / RANK) % 3) + b % RANK, Cyc::one(f))]).collect()).collect();
        st.add_map(BilinearMap { name: "L-action".into(), left: ls, right: 0, out: 0, table: act });
        let lprod = (0..3).map(|a| (0..3).map(|b| vec![((a + b) % 3, Cyc::one(f))]).collect()).collect();
        st.add_map(BilinearMap { name: "L-product".into(), left: ls, right: ls, out: ls, table: lprod });
        let bq = (0..DIM).map(|a| (0..DIM).map(|b| lcoords(&self.bq(&hv[a], &hv[b]))).collect()).collect();
        st.add_map(BilinearMap { name: "b_Q".into(), left: 0, right: 0, out: ls, table: bq });
        st
    }

    /// C_ε = {X : X∗ε = b_Q(X,ε)ε − X}, with its para-Hurwitz structure.
    pub fn para_subalgebra_from_idempotent(&self, eps: &[(usize, Cyc)]) -> Result<ParaSubalgebra, CyclicError> {
        let f = self.field();
        if eps.is_empty() || self.mul(eps, eps) != eps {
            return Err(CyclicError::NotIdempotent);
        }
        let mut report = Report::new();
        report.check(self.q(eps) == l_one(f), || "Q(ε) != 1".into());
        let image = |x: &SVec| -> SVec {
            let t = sv_sub(&self.mul(x, eps), &self.l_act(&self.bq(x, eps), eps));
            crate::linalg::sv_add(&t, x)
        };
        let cols: Vec<SVec> = (0..DIM).map(|i| image(&sv_unit(i, f))).collect();
        let m = Mat::from_columns(f, DIM, &cols);
        let eqs: Vec<SVec> = (0..DIM).map(|r| m.row_sv(r)).filter(|r| !r.is_empty()).collect();
        let basis = kernel(f, &eqs, DIM);
        report.check(basis.len() == RANK, || format!("C_ε has dimension {} instead of 8", basis.len()));
        let mut ech = Echelon::tracking(f, DIM);
        for b in &basis {
            ech.insert(b);
        }
        let n = basis.len();
        let mut mult = vec![vec![vec![]; n]; n];
        for a in 0..n {
            for b in 0..n {
                let p = self.mul(&basis[a], &basis[b]);
                match ech.express(&p) {
                    Some(c) => mult[a][b] = c,
                    None => report.check(false, || format!("C_ε is not closed under ∗ at ({a}, {b})")),
                }
            }
        }
        let mut polar = Mat::zeros(f, n, n);
        for a in 0..n {
            for b in 0..n {
                let v = self.bq(&basis[a], &basis[b]);
                report.check(l_is_scalar(&v), || format!("b_Q is not F-valued on C_ε at ({a}, {b})"));
                polar.set(a, b, v[0].clone());
            }
        }
        let unit = ech.express(eps);
        report.check(unit.is_some(), || "ε is not in C_ε".into());
        let labels = (0..n).map(|a| format!("c{a}")).collect();
        let alg = CompAlgebra { name: "C_ε".into(), field: f.clone(), labels, mult, polar, unit: unit.clone(), matrices: None };
        if report.ok() {
            report.merge("restriction", crate::composition::is_symmetric_composition(&alg));
            let u = unit.expect("checked");
            for a in 0..n {
                let x = alg.basis(a);
                let bar = sv_sub(&sv_scale(&alg.polar_form(&x, &u), &u), &x);
                report.check(alg.mul(&x, &u) == bar && alg.mul(&u, &x) == bar, || format!("ε is not a para-unit on c{a}"));
            }
        }
        Ok(ParaSubalgebra { basis, algebra: alg, report })
    }
}

/// Slotwise pairing Σ x_i y_i collected into L.
fn pair_l(f: &Field, x: &[(usize, Cyc)], y: &[(usize, Cyc)]) -> LElem {
    let mut out = l_zero(f);
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let k = slot_of(x[i].0);
                out[k] = &out[k] + &(&x[i].1 * &y[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct ParaSubalgebra {
    /// Basis of C_ε in slot coordinates.
    pub basis: Vec<SVec>,
    pub algebra: SymCompAlgebra,
    pub report: Report,
}

/// Semilinearity, nonsingularity, the two composition identities and both
/// consequences (x∗y)∗x = ρ²(Q(x))y, x∗(y∗x) = ρ(Q(x))y, with ρ replaced by
/// ρ^twist. The linearized multiplicativity check only visits slot-compatible
/// quadruples; the semilinearity checks guarantee every other term vanishes.
pub fn verify_cyclic_axioms(v: &CyclicAlgebra) -> Report {
    let f = v.field();
    let t = v.twist;
    let mut r = Report::new();
    for k in 0..3 {
        r.check(!v.qgram[k].det().is_zero(), || format!("b_Q is singular in slot {k}"));
    }
    let e: Vec<SVec> = (0..DIM).map(|i| sv_unit(i, f)).collect();
    let lbl = |i: usize| format!("{}[{}]", v.s.labels[i % RANK], i / RANK);
    let mut test_l = vec![v.l.xi.clone()];
    test_l.extend((0..3).map(|k| l_slot(f, k)));
    for (li, l) in test_l.iter().enumerate() {
        let (r1, r2) = (rho(l, t), rho(l, 2 * t));
        for x in 0..DIM {
            let lx = v.l_act(l, &e[x]);
            for y in 0..DIM {
                let p = &v.mult[x][y];
                r.check(v.mul(&lx, &e[y]) == v.l_act(&r1, p), || format!("not ρ-semilinear in x at {},{} (test scalar {li})", lbl(x), lbl(y)));
                r.check(v.mul(&e[x], &v.l_act(l, &e[y])) == v.l_act(&r2, p), || format!("not ρ²-semilinear in y at {},{} (test scalar {li})", lbl(x), lbl(y)));
            }
        }
    }
    let g: Vec<SVec> = e.iter().map(|x| v.gram_apply(x)).collect();
    let bqb = |a: usize, b: usize| pair_l(f, &e[a], &g[b]);
    let gp: Vec<Vec<SVec>> = v.mult.iter().map(|row| row.iter().map(|p| v.gram_apply(p)).collect()).collect();
    for x in 0..DIM {
        for y in 0..DIM {
            let p = &v.mult[x][y];
            let lhs = v.q(p);
            let rhs = l_mul(&rho(&v.q(&e[x]), t), &rho(&v.q(&e[y]), 2 * t));
            r.check(lhs == rhs, || format!("Q({0}∗{1}) != ρ(Q({0}))ρ²(Q({1}))", lbl(x), lbl(y)));
            let qx = v.q(&e[x]);
            r.check(v.mul(p, &e[x]) == v.l_act(&rho(&qx, 2 * t), &e[y]), || format!("({0}∗{1})∗{0} != ρ²(Q({0})){1}", lbl(x), lbl(y)));
            r.check(v.mul(&e[x], &v.mult[y][x]) == v.l_act(&rho(&qx, t), &e[y]), || format!("{0}∗({1}∗{0}) != ρ(Q({0})){1}", lbl(x), lbl(y)));
            for z in 0..DIM {
                let a = pair_l(f, p, &g[z]);
                let b = rho(&pair_l(f, &v.mult[y][z], &g[x]), t);
                let c = rho(&pair_l(f, &v.mult[z][x], &g[y]), 2 * t);
                r.check(a == b && b == c, || format!("b_Q cyclic identity fails at {},{},{}", lbl(x), lbl(y), lbl(z)));
                let bxz = bqb(x, z);
                let l1 = crate::linalg::sv_add(&v.mul(p, &e[z]), &v.mul(&v.mult[z][y], &e[x]));
                r.check(l1 == v.l_act(&rho(&bxz, 2 * t), &e[y]), || format!("linearized (x∗y)∗x identity fails at {},{},{}", lbl(x), lbl(y), lbl(z)));
                let l2 = crate::linalg::sv_add(&v.mul(&e[x], &v.mult[y][z]), &v.mul(&e[z], &v.mult[y][x]));
                r.check(l2 == v.l_act(&rho(&bxz, t), &e[y]), || format!("linearized x∗(y∗x) identity fails at {},{},{}", lbl(x), lbl(y), lbl(z)));
            }
        }
    }
    for x in 0..DIM {
        for z in (0..DIM).filter(|z| slot_of(*z) == slot_of(x)) {
            let bxz = rho(&bqb(x, z), t);
            for y in 0..DIM {
                for w in (0..DIM).filter(|w| slot_of(*w) == slot_of(y)) {
                    let lhs = l_add(&pair_l(f, &v.mult[x][y], &gp[z][w]), &pair_l(f, &v.mult[x][w], &gp[z][y]));
                    let rhs = l_mul(&bxz, &rho(&bqb(y, w), 2 * t));
                    r.check(lhs == rhs, || format!("linearized Q-multiplicativity fails at {},{},{},{}", lbl(x), lbl(y), lbl(z), lbl(w)));
                }
            }
        }
    }
    r
}

/// φ₁(x) = ℓx as a similitude of V with parameter λ = ℓ⁻¹ℓ^#: it carries
/// (λ∗, λ^#Q) to (∗, Q), and the multiplier ℓ² equals λ^#.
pub fn check_self_similitude(v: &CyclicAlgebra, l: &LElem) -> Result<Report, CyclicError> {
    let f = v.field();
    let lambda = l_mul(&l_inv(l)?, &l_adj(l));
    let multiplier = l_mul(l, l);
    let mut r = Report::new();
    r.check(l_adj(&lambda) == multiplier, || "the multiplier is not the adjoint of the parameter".into());
    let tilde = v.scale(&lambda)?;
    for x in 0..DIM {
        let ex = sv_unit(x, f);
        let lx = v.l_act(l, &ex);
        for y in 0..DIM {
            let ey = sv_unit(y, f);
            r.check(v.l_act(l, &tilde.mul(&ex, &ey)) == v.mul(&lx, &v.l_act(l, &ey)), || format!("φ₁ is not multiplicative at ({x}, {y})"));
            r.check(v.bq(&lx, &v.l_act(l, &ey)) == tilde.bq(&ex, &ey), || format!("φ₁ does not carry Q̃ to Q at ({x}, {y})"));
        }
    }
    Ok(r)
}

/// The element (x, x, x) for x ∈ S.
pub fn diagonal(x: &[(usize, Cyc)]) -> SVec {
    let mut out: SVec = Vec::new();
    for k in 0..3 {
        out.extend(x.iter().map(|(i, c)| (RANK * k + i, c.clone())));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::{okubo_sl3, para, zorn_cayley};
    use crate::scalars::make_field;

    fn para_cayley_l() -> CyclicAlgebra {
        let f = make_field(12).unwrap();
        cyclic_from_symmetric(&para(&zorn_cayley(&f)).unwrap()).unwrap()
    }

    #[test]
    fn l_invariants() {
        let f = make_field(12).unwrap();
        assert!(make_l(&f).unwrap().verify().ok());
    }

    #[test]
    fn axioms_hold() {
        let v = para_cayley_l();
        let r = verify_cyclic_axioms(&v);
        assert!(r.ok(), "{:?}", &r.violations[..r.violations.len().min(5)]);
        let op = v.opposite();
        assert!(verify_cyclic_axioms(&op).ok());
        assert_eq!(op.opposite().mult, v.mult);
    }

    #[test]
    fn corruption_is_located() {
        let mut v = para_cayley_l();
        let f = v.field().clone();
        let (i, j) = (0, RANK + 2);
        let k = v.mult[i][j].first().map(|e| e.0).unwrap_or(2 * RANK);
        v.mult[i][j] = vec![(k, Cyc::from_i64(&f, 5))];
        assert!(!verify_cyclic_axioms(&v).ok());
    }

    #[test]
    fn unit_and_scale() {
        let v = para_cayley_l();
        let f = v.field().clone();
        let one = diagonal(&v.s.unit.clone().unwrap());
        assert_eq!(v.mul(&one, &one), one);
        let w = v.scale(&v.l.xi).unwrap();
        assert!(verify_cyclic_axioms(&w).ok());
        assert!(check_self_similitude(&v, &v.l.xi).unwrap().ok());
        assert_eq!(v.scale(&l_one(&f)).unwrap().mult, v.mult);
    }

    #[test]
    fn okubo_cut_by_idempotent() {
        let f = make_field(12).unwrap();
        let o = okubo_sl3(&f).unwrap();
        let v = cyclic_from_symmetric(&o).unwrap();
        let eps = crate::composition::nonzero_idempotent(&o).unwrap().remove(0);
        let c = v.para_subalgebra_from_idempotent(&diagonal(&eps)).unwrap();
        assert!(c.report.ok(), "{:?}", c.report.violations);
    }
}
