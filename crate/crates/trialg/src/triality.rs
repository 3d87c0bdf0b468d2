//! The triality Lie algebra tri(S) ⊂ so(S,n)³, its identification with
//! Der_L(V), the D4 root system, and gradings induced on it from V.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::composition::SymCompAlgebra;
use crate::cyclic::{l_slot, CyclicAlgebra, LElem, DIM, RANK};
use crate::fgab::{AbGroup, GroupElem};
use crate::grading::{Grading, Kind, Structure};
use crate::linalg::{kernel, same_span, sv_get, sv_scale, sv_sub, Acc, Echelon, Mat, SVec};
use crate::scalars::{Cyc, Field};
use crate::Report;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TriError {
    #[error("expected a 28-dimensional solution space, got {0}")]
    Dimension(usize),
    #[error("the polar form is not hyperbolic on the given basis")]
    NotHyperbolic,
    #[error("non-integral or inconsistent eigenvalue for {0}")]
    NonIntegral(String),
    #[error("the induced components do not span tri (dimension {0})")]
    NotGraded(usize),
    #[error("basis of V is singular")]
    SingularBasis,
}

/// (d₁, d₂, d₃), each an 8×8 matrix acting on column vectors.
pub type TriTriple = [Mat; 3];

pub const TRI_DIM: usize = 28;
const FLAT: usize = 3 * RANK * RANK;

pub fn flat_triple(t: &TriTriple) -> SVec {
    let mut out = Vec::new();
    for (a, m) in t.iter().enumerate() {
        out.extend(m.flat().into_iter().map(|(i, c)| (a * RANK * RANK + i, c)));
    }
    out
}

pub fn unflat_triple(f: &Field, v: &[(usize, Cyc)]) -> TriTriple {
    std::array::from_fn(|a| {
        let part: SVec = v.iter().filter(|(i, _)| i / (RANK * RANK) == a).map(|(i, c)| (i % (RANK * RANK), c.clone())).collect();
        Mat::from_flat(f, RANK, RANK, &part)
    })
}

fn bracket_triple(a: &TriTriple, b: &TriTriple) -> TriTriple {
    std::array::from_fn(|k| a[k].commutator(&b[k]))
}

/// Basis of so(n) = {d : n(dx,y) + n(x,dy) = 0} for the Gram matrix g.
pub fn so_basis(g: &Mat) -> Vec<Mat> {
    let f = g.field().clone();
    let n = g.rows;
    let mut eqs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // (G d + dᵀ G)_{ij} with unknown d[k][l] at index k*n + l
            let mut acc = Acc::new();
            for k in 0..n {
                acc.add(k * n + j, g.get(i, k));
                acc.add(k * n + i, g.get(k, j));
            }
            eqs.push(acc.finish());
        }
    }
    kernel(&f, &eqs, n * n).iter().map(|v| Mat::from_flat(&f, n, n, v)).collect()
}

fn mat_apply_basis(m: &Mat, i: usize) -> SVec {
    m.col_sv(i)
}

/// The linear system d₁(x*y) = d₂(x)*y + x*d₃(y) over so³, solved exactly.
#[derive(Debug, Clone)]
pub struct Tri {
    pub s: SymCompAlgebra,
    pub basis: Vec<TriTriple>,
    ech: Echelon,
    /// Bracket structure constants on `basis`.
    pub lie: Structure,
}

pub fn tri_basis(s: &SymCompAlgebra) -> Result<Tri, TriError> {
    let f = s.field.clone();
    let so = so_basis(&s.polar);
    let m = so.len();
    let e: Vec<SVec> = (0..RANK).map(|i| s.basis(i)).collect();
    // column u of the system: contribution of unknown u to every (x, y, k)
    let mut cols: Vec<SVec> = Vec::with_capacity(3 * m);
    for a in 0..3 {
        for d in &so {
            let mut acc = Acc::new();
            for x in 0..RANK {
                for y in 0..RANK {
                    let base = (x * RANK + y) * RANK;
                    let v = match a {
                        0 => d.apply_sv(&s.mult[x][y]),
                        1 => sv_scale(&-Cyc::one(&f), &s.mul(&mat_apply_basis(d, x), &e[y])),
                        _ => sv_scale(&-Cyc::one(&f), &s.mul(&e[x], &mat_apply_basis(d, y))),
                    };
                    for (k, c) in v {
                        acc.add(base + k, &c);
                    }
                }
            }
            cols.push(acc.finish());
        }
    }
    let rows = transpose_sparse(&cols, RANK * RANK * RANK);
    let ker = kernel(&f, &rows, 3 * m);
    if ker.len() != TRI_DIM {
        return Err(TriError::Dimension(ker.len()));
    }
    let basis: Vec<TriTriple> = ker
        .iter()
        .map(|c| {
            std::array::from_fn(|a| {
                let mut out = Mat::zeros(&f, RANK, RANK);
                for (u, x) in c.iter().filter(|(u, _)| u / m == a) {
                    out = out.add(&so[u % m].scale(x));
                }
                out
            })
        })
        .collect();
    Ok(Tri::from_basis(s, basis))
}

pub(crate) fn transpose_sparse(cols: &[SVec], nrows: usize) -> Vec<SVec> {
    let mut rows = vec![Vec::new(); nrows];
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            rows[*i].push((j, c.clone()));
        }
    }
    rows.into_iter().filter(|r| !r.is_empty()).collect()
}

impl Tri {
    fn from_basis(s: &SymCompAlgebra, basis: Vec<TriTriple>) -> Tri {
        let f = s.field.clone();
        let mut ech = Echelon::tracking(&f, FLAT);
        for t in &basis {
            ech.insert(&flat_triple(t));
        }
        let n = basis.len();
        let table = (0..n)
            .map(|a| (0..n).map(|b| ech.express(&flat_triple(&bracket_triple(&basis[a], &basis[b]))).expect("tri is closed under the bracket")).collect())
            .collect();
        let labels = (0..n).map(|a| format!("t{a}")).collect();
        let lie = Structure::algebra(&f, Kind::Lie, labels, table);
        Tri { s: s.clone(), basis, ech, lie }
    }

    pub fn field(&self) -> &Field {
        &self.s.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a triple in the basis, if it lies in tri.
    pub fn coords(&self, t: &TriTriple) -> Option<SVec> {
        self.ech.express(&flat_triple(t))
    }

    pub fn element(&self, c: &[(usize, Cyc)]) -> TriTriple {
        let f = self.field();
        let mut acc = Acc::new();
        for (a, x) in c {
            acc.add_scaled(x, &flat_triple(&self.basis[*a]));
        }
        unflat_triple(f, &acc.finish())
    }

    pub fn bracket(&self, a: &[(usize, Cyc)], b: &[(usize, Cyc)]) -> SVec {
        self.lie.product(a, b)
    }

    /// Block-diagonal L-linear operator on V (slot coordinates).
    pub fn on_v(&self, c: &[(usize, Cyc)]) -> Mat {
        block_diag(&self.element(c))
    }

    /// Preimage of d under the first projection.
    pub fn lift_first(&self, d: &Mat) -> Option<SVec> {
        let mut e = Echelon::tracking(self.field(), RANK * RANK);
        for t in &self.basis {
            e.insert(&t[0].flat());
        }
        e.express(&d.flat())
    }

    /// Rank of each coordinate projection.
    pub fn projection_ranks(&self) -> [usize; 3] {
        std::array::from_fn(|a| crate::linalg::rank_of(self.field(), &self.basis.iter().map(|t| t[a].flat()).collect::<Vec<_>>(), RANK * RANK))
    }
}

pub fn block_diag(t: &TriTriple) -> Mat {
    let f = t[0].field().clone();
    let mut m = Mat::zeros(&f, DIM, DIM);
    for k in 0..3 {
        for i in 0..RANK {
            for j in 0..RANK {
                let c = t[k].get(i, j);
                if !c.is_zero() {
                    m.set(RANK * k + i, RANK * k + j, c.clone());
                }
            }
        }
    }
    m
}

/// Skewness of each d_i and d₁(x⋆y) = d₂(x)⋆y + x⋆d₃(y) on all basis pairs.
pub fn check_tri_triple(s: &SymCompAlgebra, t: &TriTriple) -> Report {
    let mut r = Report::new();
    for (a, d) in t.iter().enumerate() {
        let skew = s.polar.mul(d).add(&d.transpose().mul(&s.polar));
        r.check(skew.is_zero(), || format!("d{} is not skew", a + 1));
    }
    for x in 0..RANK {
        for y in 0..RANK {
            let lhs = t[0].apply_sv(&s.mult[x][y]);
            let rhs = crate::linalg::sv_add(&s.mul(&t[1].col_sv(x), &s.basis(y)), &s.mul(&s.basis(x), &t[2].col_sv(y)));
            r.check(lhs == rhs, || format!("triality identity fails at ({}, {})", s.labels[x], s.labels[y]));
        }
    }
    r
}

/// (x n(y,·) − y n(x,·), ½(r_x l_y − r_y l_x), ½(l_x r_y − l_y r_x)).
pub fn spanning_triple(s: &SymCompAlgebra, x: &[(usize, Cyc)], y: &[(usize, Cyc)]) -> TriTriple {
    let f = &s.field;
    let half = Cyc::from_ratio(f, 1, 2);
    let op = |g: &dyn Fn(&SVec) -> SVec| -> Mat { Mat::from_columns(f, RANK, &(0..RANK).map(|i| g(&s.basis(i))).collect::<Vec<_>>()) };
    let d1 = op(&|z| sv_sub(&sv_scale(&s.polar_form(y, z), x), &sv_scale(&s.polar_form(x, z), y)));
    let l = |a: &[(usize, Cyc)]| op(&|z| s.mul(a, z));
    let rr = |a: &[(usize, Cyc)]| op(&|z| s.mul(z, a));
    let d2 = rr(x).mul(&l(y)).sub(&rr(y).mul(&l(x))).scale(&half);
    let d3 = l(x).mul(&rr(y)).sub(&l(y).mul(&rr(x))).scale(&half);
    [d1, d2, d3]
}

/// Antisymmetry and Jacobi on all basis pairs/triples.
pub fn check_lie(s: &Structure) -> Report {
    let mut r = Report::new();
    let n = s.dim(0);
    let t = &s.maps[0].table;
    for a in 0..n {
        for b in 0..n {
            r.check(t[a][b] == sv_scale(&-Cyc::one(&s.field), &t[b][a]), || format!("[{a},{b}] is not antisymmetric"));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let e = |i: usize| crate::linalg::sv_unit(i, &s.field);
                let mut acc = Acc::new();
                acc.add_vec(&s.product(&t[a][b], &e(c)));
                acc.add_vec(&s.product(&t[b][c], &e(a)));
                acc.add_vec(&s.product(&t[c][a], &e(b)));
                r.check(acc.finish().is_empty(), || format!("Jacobi fails at ({a},{b},{c})"));
            }
        }
    }
    r
}

/// L-linear derivations of (V, ∗) that are skew for b_Q, as block triples.
pub fn der_cyclic(v: &CyclicAlgebra) -> Result<Vec<TriTriple>, TriError> {
    let f = v.field().clone();
    let so: Vec<Vec<Mat>> = (0..3).map(|k| so_basis(&v.qgram[k])).collect();
    let unknowns: Vec<(usize, &Mat)> = (0..3).flat_map(|k| so[k].iter().map(move |d| (k, d))).collect();
    let e: Vec<SVec> = (0..DIM).map(|i| crate::linalg::sv_unit(i, &f)).collect();
    let lift = |k: usize, d: &Mat, x: &[(usize, Cyc)]| -> SVec {
        let part: SVec = x.iter().filter(|(i, _)| i / RANK == k).map(|(i, c)| (i % RANK, c.clone())).collect();
        d.apply_sv(&part).into_iter().map(|(i, c)| (RANK * k + i, c)).collect()
    };
    let mut cols = Vec::with_capacity(unknowns.len());
    for (k, d) in &unknowns {
        let mut acc = Acc::new();
        for x in 0..DIM {
            for y in 0..DIM {
                let base = (x * DIM + y) * DIM;
                let mut w = lift(*k, d, &v.mult[x][y]);
                w = sv_sub(&w, &v.mul(&lift(*k, d, &e[x]), &e[y]));
                w = sv_sub(&w, &v.mul(&e[x], &lift(*k, d, &e[y])));
                for (i, c) in w {
                    acc.add(base + i, &c);
                }
            }
        }
        cols.push(acc.finish());
    }
    let rows = transpose_sparse(&cols, DIM * DIM * DIM);
    let ker = kernel(&f, &rows, unknowns.len());
    if ker.len() != TRI_DIM {
        return Err(TriError::Dimension(ker.len()));
    }
    Ok(ker
        .iter()
        .map(|c| {
            let mut t: TriTriple = std::array::from_fn(|_| Mat::zeros(&f, RANK, RANK));
            for (u, x) in c {
                let (k, d) = unknowns[*u];
                t[k] = t[k].add(&d.scale(x));
            }
            t
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct RootDatum {
    /// Hyperbolic pairs (p_k, q_k) of the basis of S.
    pub pairs: Vec<(usize, usize)>,
    #[serde(skip)]
    pub cartan: Vec<SVec>,
    pub roots: Vec<Vec<i64>>,
    #[serde(skip)]
    pub root_vectors: Vec<SVec>,
    pub simple_roots: Vec<Vec<i64>>,
    pub cartan_matrix: Vec<Vec<i64>>,
    /// Killing form on the Cartan basis, Σ over roots of α_iα_j.
    pub killing_cartan: Vec<Vec<i64>>,
}

pub fn hyperbolic_pairs(g: &Mat) -> Result<Vec<(usize, usize)>, TriError> {
    let n = g.rows;
    let mut pairs = Vec::new();
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let partners: Vec<usize> = (0..n).filter(|&j| !g.get(i, j).is_zero()).collect();
        if partners.len() != 1 || partners[0] == i || seen[partners[0]] {
            return Err(TriError::NotHyperbolic);
        }
        seen[i] = true;
        seen[partners[0]] = true;
        pairs.push((i, partners[0]));
    }
    Ok(pairs)
}

fn as_int(c: &Cyc) -> Option<i64> {
    let q = c.to_rational()?;
    if !q.is_integer() {
        return None;
    }
    num_traits::ToPrimitive::to_i64(q.numer())
}

/// Cartan subalgebra: preimage under the first projection of the diagonal
/// skew maps in the hyperbolic basis. Roots are read off the preimages of the
/// elementary skew maps x n(y,·) − y n(x,·) on basis vectors.
pub fn root_datum(tri: &Tri) -> Result<RootDatum, TriError> {
    let f = tri.field().clone();
    let s = &tri.s;
    let pairs = hyperbolic_pairs(&s.polar)?;
    let rank = pairs.len();
    let mut cartan = Vec::new();
    for &(p, q) in &pairs {
        let mut d = Mat::zeros(&f, RANK, RANK);
        d.set(p, p, Cyc::one(&f));
        d.set(q, q, -Cyc::one(&f));
        cartan.push(tri.lift_first(&d).ok_or_else(|| TriError::NonIntegral("Cartan element".into()))?);
    }
    let mut roots = Vec::new();
    let mut root_vectors = Vec::new();
    for i in 0..RANK {
        for j in i + 1..RANK {
            if pairs.contains(&(i, j)) || pairs.contains(&(j, i)) {
                continue;
            }
            let t = spanning_elementary(s, i, j);
            let x = tri.lift_first(&t).ok_or_else(|| TriError::NonIntegral(format!("root vector ({i},{j})")))?;
            let mut alpha = Vec::with_capacity(rank);
            for h in &cartan {
                let hx = tri.bracket(h, &x);
                let (k0, c0) = &x[0];
                let c = sv_get(&hx, *k0).cloned().unwrap_or_else(|| Cyc::zero(&f)) / c0.clone();
                if hx != sv_scale(&c, &x) {
                    return Err(TriError::NonIntegral(format!("({i},{j}) is not an ad-eigenvector")));
                }
                alpha.push(as_int(&c).ok_or_else(|| TriError::NonIntegral(format!("({i},{j})")))?);
            }
            roots.push(alpha);
            root_vectors.push(x);
        }
    }
    let killing_cartan: Vec<Vec<i64>> = (0..rank).map(|a| (0..rank).map(|b| roots.iter().map(|r| r[a] * r[b]).sum()).collect()).collect();
    let w: Vec<i64> = (0..rank).map(|k| 1 << (rank - 1 - k)).collect();
    let height = |r: &[i64]| -> i64 { r.iter().zip(&w).map(|(a, b)| a * b).sum() };
    let positive: Vec<&Vec<i64>> = roots.iter().filter(|r| height(r) > 0).collect();
    let simple_roots: Vec<Vec<i64>> = positive
        .iter()
        .filter(|r| {
            !positive.iter().any(|a| positive.iter().any(|b| a.iter().zip(b.iter()).map(|(x, y)| x + y).eq(r.iter().copied())))
        })
        .map(|r| (*r).clone())
        .collect();
    let kmat = Mat::from_rows(&f, &killing_cartan.iter().map(|row| row.iter().map(|x| Cyc::from_i64(&f, *x)).collect()).collect::<Vec<_>>());
    let kinv = kmat.inverse().ok_or_else(|| TriError::NonIntegral("degenerate Killing form".into()))?;
    let ip = |a: &[i64], b: &[i64]| -> Cyc {
        let av: Vec<Cyc> = a.iter().map(|x| Cyc::from_i64(&f, *x)).collect();
        let bv: Vec<Cyc> = b.iter().map(|x| Cyc::from_i64(&f, *x)).collect();
        crate::linalg::sv_dot(&crate::linalg::sv_from_dense(&av), &kinv.apply_sv(&crate::linalg::sv_from_dense(&bv)), &f)
    };
    let mut cartan_matrix = Vec::new();
    for a in &simple_roots {
        let mut row = Vec::new();
        for b in &simple_roots {
            let v = Cyc::from_i64(&f, 2) * ip(a, b) / ip(b, b);
            row.push(as_int(&v).ok_or_else(|| TriError::NonIntegral("Cartan matrix entry".into()))?);
        }
        cartan_matrix.push(row);
    }
    Ok(RootDatum { pairs, cartan, roots, root_vectors, simple_roots, cartan_matrix, killing_cartan })
}

/// b_i n(b_j,·) − b_j n(b_i,·).
fn spanning_elementary(s: &SymCompAlgebra, i: usize, j: usize) -> Mat {
    let f = &s.field;
    let mut d = Mat::zeros(f, RANK, RANK);
    for z in 0..RANK {
        let a = s.polar.get(j, z).clone();
        let b = s.polar.get(i, z).clone();
        d.set(i, z, &d.get(i, z).clone() + &a);
        d.set(j, z, d.get(j, z) - &b);
    }
    d
}

/// Whether a Cartan matrix is of type D4: 2 on the diagonal, symmetric,
/// a tree on four nodes with one node of valence 3.
pub fn is_d4(cm: &[Vec<i64>]) -> bool {
    if cm.len() != 4 {
        return false;
    }
    let mut edges = 0;
    let mut valence = [0; 4];
    for i in 0..4 {
        if cm[i][i] != 2 {
            return false;
        }
        for j in 0..4 {
            if i != j {
                if cm[i][j] != cm[j][i] || !(cm[i][j] == 0 || cm[i][j] == -1) {
                    return false;
                }
                if cm[i][j] == -1 {
                    valence[i] += 1;
                    if i < j {
                        edges += 1;
                    }
                }
            }
        }
    }
    let mut v = valence.to_vec();
    v.sort_unstable();
    edges == 3 && v == vec![1, 1, 1, 3]
}

/// Killing form tr(ad a ad b) on the basis of a Lie structure.
pub fn killing_matrix(lie: &Structure) -> Mat {
    let f = lie.field.clone();
    let n = lie.dim(0);
    let t = &lie.maps[0].table;
    let mut k = Mat::zeros(&f, n, n);
    for a in 0..n {
        for b in a..n {
            // Σ_d Σ_c [a,d]_c [b,c]_d
            let mut s = Cyc::zero(&f);
            for d in 0..n {
                for (c, x) in &t[a][d] {
                    if let Some(y) = sv_get(&t[b][*c], d) {
                        s += &(x * y);
                    }
                }
            }
            k.set(a, b, s.clone());
            k.set(b, a, s);
        }
    }
    k
}

/// A grading of V given by an arbitrary basis (slot coordinates) and degrees.
#[derive(Debug, Clone)]
pub struct BasisGrading {
    pub basis: Vec<SVec>,
    pub group: AbGroup,
    pub degrees: Vec<GroupElem>,
}

impl BasisGrading {
    /// From a grading of V's structure on the homogeneous basis s_i⊗ξ^j.
    pub fn homogeneous(v: &CyclicAlgebra, g: &Grading) -> BasisGrading {
        let basis = (0..DIM).map(|a| v.homogeneous_vector(a % RANK, a / RANK)).collect();
        BasisGrading { basis, group: g.group.clone(), degrees: g.main().to_vec() }
    }

    pub fn coarsen(&self, hom: &crate::fgab::GroupHom) -> BasisGrading {
        BasisGrading { basis: self.basis.clone(), group: hom.codomain.clone(), degrees: self.degrees.iter().map(|d| hom.apply(d)).collect() }
    }

    pub fn component(&self, d: &GroupElem) -> Vec<SVec> {
        self.degrees.iter().zip(&self.basis).filter(|(g, _)| *g == d).map(|(_, b)| b.clone()).collect()
    }

    pub fn support(&self) -> Vec<GroupElem> {
        let mut s: Vec<GroupElem> = self.degrees.clone();
        s.sort();
        s.dedup();
        s
    }

    /// Same subspace for every degree.
    pub fn same_components(&self, o: &BasisGrading, f: &Field) -> bool {
        let mut all = self.support();
        all.extend(o.support());
        all.sort();
        all.dedup();
        self.group == o.group && all.iter().all(|d| same_span(f, &self.component(d), &o.component(d), DIM))
    }

    fn matrix(&self, f: &Field) -> Mat {
        Mat::from_columns(f, DIM, &self.basis)
    }
}

/// The center of the spin group, C = {(ε₁,ε₂,ε₃) : ε_i = ±1, ε₁ε₂ε₃ = 1}.
pub fn spin_center(f: &Field) -> Vec<LElem> {
    let one = Cyc::one(f);
    let m = -Cyc::one(f);
    vec![
        [one.clone(), one.clone(), one.clone()],
        [one.clone(), m.clone(), m.clone()],
        [m.clone(), one.clone(), m.clone()],
        [m.clone(), m, one],
    ]
}

/// The four gradings ℓ·Γ (components ℓV_g), ℓ ∈ C.
pub fn center_orbit(v: &CyclicAlgebra, g: &BasisGrading) -> Vec<(LElem, BasisGrading)> {
    spin_center(v.field())
        .into_iter()
        .map(|l| {
            let basis = g.basis.iter().map(|b| v.l_act(&l, b)).collect();
            (l, BasisGrading { basis, group: g.group.clone(), degrees: g.degrees.clone() })
        })
        .collect()
}

/// tri_g = {d : d(V_a) ⊆ V_{g+a}} as subspaces in tri coordinates.
#[derive(Debug, Clone)]
pub struct TriGrading {
    pub group: AbGroup,
    pub components: BTreeMap<GroupElem, Vec<SVec>>,
}

impl TriGrading {
    pub fn dims(&self) -> BTreeMap<GroupElem, usize> {
        self.components.iter().map(|(g, b)| (g.clone(), b.len())).collect()
    }

    pub fn identity_dim(&self) -> usize {
        self.components.get(&self.group.zero()).map_or(0, |b| b.len())
    }

    pub fn same_as(&self, o: &TriGrading, f: &Field) -> bool {
        self.group == o.group
            && self.components.len() == o.components.len()
            && self.components.iter().all(|(g, b)| o.components.get(g).is_some_and(|c| same_span(f, b, c, TRI_DIM)))
    }

    /// The graded Lie algebra on the homogeneous basis (components concatenated).
    pub fn to_structure(&self, tri: &Tri) -> (Structure, Grading) {
        let f = tri.field().clone();
        let mut basis = Vec::new();
        let mut degs = Vec::new();
        for (g, b) in &self.components {
            for x in b {
                basis.push(x.clone());
                degs.push(g.clone());
            }
        }
        let mut ech = Echelon::tracking(&f, TRI_DIM);
        for x in &basis {
            ech.insert(x);
        }
        let n = basis.len();
        let table = (0..n).map(|a| (0..n).map(|b| ech.express(&tri.bracket(&basis[a], &basis[b])).expect("closed")).collect()).collect();
        let labels = (0..n).map(|a| format!("d{a}")).collect();
        let s = Structure::algebra(&f, Kind::Lie, labels, table);
        let g = Grading::on_algebra(&s, &self.group, degs);
        (s, g)
    }
}

/// Operators on V in the grading's basis: B⁻¹ d B, flattened.
fn in_basis(tri: &Tri, bmat: &Mat, binv: &Mat) -> Vec<Mat> {
    (0..tri.dim()).map(|a| binv.mul(&tri.on_v(&crate::linalg::sv_unit(a, tri.field()))).mul(bmat)).collect()
}

pub fn induce_tri_grading(tri: &Tri, g: &BasisGrading) -> Result<TriGrading, TriError> {
    let f = tri.field().clone();
    let bmat = g.matrix(&f);
    let binv = bmat.inverse().ok_or(TriError::SingularBasis)?;
    let mats = in_basis(tri, &bmat, &binv);
    let mut ech = Echelon::tracking(&f, DIM * DIM);
    for m in &mats {
        ech.insert(&m.flat());
    }
    let mut parts: BTreeMap<GroupElem, Echelon> = BTreeMap::new();
    for m in &mats {
        let mut split: BTreeMap<GroupElem, SVec> = BTreeMap::new();
        for (idx, c) in m.flat() {
            let (r, col) = (idx / DIM, idx % DIM);
            let d = g.group.sub(&g.degrees[r], &g.degrees[col]);
            split.entry(d).or_default().push((idx, c));
        }
        for (d, piece) in split {
            let coords = ech.express(&piece).ok_or(TriError::NotGraded(0))?;
            parts.entry(d).or_insert_with(|| Echelon::new(&f, TRI_DIM)).insert(&coords);
        }
    }
    let components: BTreeMap<GroupElem, Vec<SVec>> = parts.into_iter().map(|(d, e)| (d, e.rref())).collect();
    let total: usize = components.values().map(|b| b.len()).sum();
    if total != tri.dim() {
        return Err(TriError::NotGraded(total));
    }
    Ok(TriGrading { group: g.group.clone(), components })
}

/// tri_g · V_a ⊆ V_{g+a} for every component and basis vector.
pub fn check_graded_module(tri: &Tri, g: &BasisGrading, tg: &TriGrading) -> Report {
    let f = tri.field().clone();
    let mut r = Report::new();
    let bmat = g.matrix(&f);
    let Some(binv) = bmat.inverse() else {
        r.check(false, || "singular basis".into());
        return r;
    };
    for (d, b) in &tg.components {
        for x in b {
            let m = binv.mul(&tri.on_v(x)).mul(&bmat);
            for (idx, _) in m.flat() {
                let (row, col) = (idx / DIM, idx % DIM);
                r.check(g.degrees[row] == g.group.add(d, &g.degrees[col]), || format!("tri component {d} maps V[{col}] outside degree {}", g.group.add(d, &g.degrees[col])));
            }
        }
    }
    r
}

/// Slot idempotents as elements of L (used by callers building ℓ-actions).
pub fn slot_idempotents(f: &Field) -> [LElem; 3] {
    std::array::from_fn(|k| l_slot(f, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::{okubo_sl3, para, zorn_cayley};
    use crate::scalars::make_field;

    #[test]
    fn para_cayley_tri() {
        let f = make_field(12).unwrap();
        let s = para(&zorn_cayley(&f)).unwrap();
        assert_eq!(so_basis(&s.polar).len(), 28);
        let tri = tri_basis(&s).unwrap();
        assert_eq!(tri.dim(), 28);
        assert_eq!(tri.projection_ranks(), [28, 28, 28]);
        for t in &tri.basis {
            assert!(check_tri_triple(&s, t).ok());
            let shifted = [t[2].clone(), t[0].clone(), t[1].clone()];
            assert!(tri.coords(&shifted).is_some());
        }
        let rd = root_datum(&tri).unwrap();
        assert_eq!(rd.roots.len(), 24);
        assert!(is_d4(&rd.cartan_matrix), "{:?}", rd.cartan_matrix);
    }

    #[test]
    fn spanning_triples_lie_in_tri() {
        let f = make_field(12).unwrap();
        let s = para(&zorn_cayley(&f)).unwrap();
        for (x, y) in [(0, 1), (2, 5), (2, 3), (0, 4), (6, 7)] {
            let t = spanning_triple(&s, &s.basis(x), &s.basis(y));
            let r = check_tri_triple(&s, &t);
            assert!(r.ok(), "({x},{y}): {:?}", &r.violations[..r.violations.len().min(3)]);
        }
    }

    #[test]
    fn okubo_tri() {
        let f = make_field(12).unwrap();
        let s = okubo_sl3(&f).unwrap();
        let tri = tri_basis(&s).unwrap();
        assert_eq!(tri.dim(), 28);
    }
}
