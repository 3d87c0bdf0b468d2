//! E = End_L(V) with its involution σ, the even Clifford algebra Cl₀(V,Q),
//! the maps κ: E → Cl₀ and α: Cl₀ → ρE × ρ²E, the Lie algebra L(E), and
//! gradings transported from V to E.
//!
//! E is stored blockwise: coordinate 64k + 8i + j is the (i,j) entry of the
//! block acting on slot k. Cl₀ is stored slotwise over even monomials:
//! coordinate 128k + (index of the even bitmask).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::cyclic::{rho, CyclicAlgebra, LElem, DIM, RANK};
use crate::fgab::{AbGroup, GroupElem};
use crate::linalg::{intersection, kernel, rank_of, same_span, sv_add, sv_get, sv_scale, sv_sub, sv_unit, Acc, Echelon, Mat, SVec};
use crate::scalars::{Cyc, Field};
use crate::triality::{flat_triple, so_basis, unflat_triple, BasisGrading, TriGrading, TriTriple};
use crate::Report;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrialitarianError {
    #[error("basis of V is singular")]
    SingularBasis,
    #[error("the transported components do not span E (dimension {0})")]
    NotGraded(usize),
    #[error("malformed grading on the center: {0}")]
    Center(String),
}

pub const E_DIM: usize = 3 * RANK * RANK;
pub const CL_L_DIM: usize = 128;
pub const CL_DIM: usize = 3 * CL_L_DIM;

/// Three 8×8 blocks, one per slot.
pub type Blocks = TriTriple;

pub fn e_index(k: usize, i: usize, j: usize) -> usize {
    RANK * RANK * k + RANK * i + j
}

/// Product of two elements of E in block coordinates.
pub fn e_mul(a: &[(usize, Cyc)], b: &[(usize, Cyc)]) -> SVec {
    let mut acc = Acc::new();
    for (ia, x) in a {
        let (k, i, j) = (ia / 64, (ia / 8) % 8, ia % 8);
        for (ib, y) in b {
            let (k2, j2, l) = (ib / 64, (ib / 8) % 8, ib % 8);
            if k == k2 && j == j2 {
                acc.add(e_index(k, i, l), &(x * y));
            }
        }
    }
    acc.finish()
}

#[derive(Debug, Clone)]
pub struct EndAlgebra {
    pub v: CyclicAlgebra,
    pub gram_inv: [Mat; 3],
    /// σ of each basis element.
    sigma_basis: Vec<SVec>,
}

pub fn end_algebra(v: &CyclicAlgebra) -> EndAlgebra {
    let gram_inv: [Mat; 3] = std::array::from_fn(|k| v.qgram[k].inverse().expect("b_Q is nonsingular"));
    let mut sigma_basis = Vec::with_capacity(E_DIM);
    for k in 0..3 {
        let (g, gi) = (&v.qgram[k], &gram_inv[k]);
        for i in 0..RANK {
            for j in 0..RANK {
                // σ(E_ij) = G⁻¹ E_ji G
                let mut acc = Acc::new();
                for r in 0..RANK {
                    let a = gi.get(r, j);
                    if a.is_zero() {
                        continue;
                    }
                    for c in 0..RANK {
                        let b = g.get(i, c);
                        if !b.is_zero() {
                            acc.add(e_index(k, r, c), &(a * b));
                        }
                    }
                }
                sigma_basis.push(acc.finish());
            }
        }
    }
    EndAlgebra { v: v.clone(), gram_inv, sigma_basis }
}

impl EndAlgebra {
    pub fn field(&self) -> &Field {
        self.v.field()
    }

    pub fn dim(&self) -> usize {
        E_DIM
    }

    pub fn sigma(&self, a: &[(usize, Cyc)]) -> SVec {
        let mut acc = Acc::new();
        for (i, c) in a {
            acc.add_scaled(c, &self.sigma_basis[*i]);
        }
        acc.finish()
    }

    pub fn identity(&self) -> SVec {
        let f = self.field();
        (0..3).flat_map(|k| (0..RANK).map(move |i| (e_index(k, i, i), Cyc::one(f)))).collect()
    }

    /// ℓ ∈ L as a central element of E.
    pub fn central(&self, l: &LElem) -> SVec {
        (0..3).flat_map(|k| (0..RANK).map(move |i| (e_index(k, i, i), l[k].clone()))).filter(|(_, c)| !c.is_zero()).collect()
    }

    /// a applied to a vector of V (slot coordinates).
    pub fn apply(&self, a: &[(usize, Cyc)], x: &[(usize, Cyc)]) -> SVec {
        let mut acc = Acc::new();
        for (ia, c) in a {
            let (k, i, j) = (ia / 64, (ia / 8) % 8, ia % 8);
            if let Some(y) = sv_get(x, RANK * k + j) {
                acc.add(RANK * k + i, &(c * y));
            }
        }
        acc.finish()
    }

    /// The operator z ↦ x b_Q(y, z).
    pub fn phi(&self, x: &[(usize, Cyc)], y: &[(usize, Cyc)]) -> SVec {
        let mut acc = Acc::new();
        for k in 0..3 {
            for (ix, a) in x.iter().filter(|(i, _)| i / RANK == k) {
                for (iy, b) in y.iter().filter(|(i, _)| i / RANK == k) {
                    for z in 0..RANK {
                        let g = self.v.qgram[k].get(iy % RANK, z);
                        if !g.is_zero() {
                            acc.add(e_index(k, ix % RANK, z), &(&(a * b) * g));
                        }
                    }
                }
            }
        }
        acc.finish()
    }

    pub fn to_blocks(&self, a: &[(usize, Cyc)]) -> Blocks {
        unflat_triple(self.field(), a)
    }
}

/// σ² = id, σ(ab) = σ(b)σ(a) and b_Q(ax, y) = b_Q(x, σ(a)y) on bases.
pub fn verify_end(e: &EndAlgebra) -> Report {
    let f = e.field().clone();
    let mut r = Report::new();
    r.check(e.sigma(&e.identity()) == e.identity(), || "σ(1) != 1".into());
    let basis: Vec<SVec> = (0..E_DIM).map(|i| sv_unit(i, &f)).collect();
    for a in 0..E_DIM {
        r.check(e.sigma(&e.sigma_basis[a]) == basis[a], || format!("σ² != id on basis element {a}"));
    }
    for a in 0..E_DIM {
        for b in (0..E_DIM).filter(|b| b / 64 == a / 64) {
            let lhs = e.sigma(&e_mul(&basis[a], &basis[b]));
            let rhs = e_mul(&e.sigma_basis[b], &e.sigma_basis[a]);
            r.check(lhs == rhs, || format!("σ is not an anti-automorphism at ({a}, {b})"));
        }
    }
    let vb: Vec<SVec> = (0..DIM).map(|i| sv_unit(i, &f)).collect();
    for a in 0..E_DIM {
        let k = a / 64;
        for x in (0..RANK).map(|i| RANK * k + i) {
            for y in (0..RANK).map(|i| RANK * k + i) {
                let lhs = e.v.bq(&e.apply(&basis[a], &vb[x]), &vb[y]);
                let rhs = e.v.bq(&vb[x], &e.apply(&e.sigma_basis[a], &vb[y]));
                r.check(lhs == rhs, || format!("σ is not adjoint to b_Q at ({a}, {x}, {y})"));
            }
        }
    }
    r
}

/// Clifford algebra of one slot, by bitmask monomials e_{i₁}⋯e_{i_k}, i₁ < ⋯ < i_k,
/// with e_ie_j + e_je_i = b(e_i,e_j).
#[derive(Debug, Clone)]
struct CliffordSlot {
    gram: Mat,
    q: Vec<Cyc>,
    right: Vec<Vec<SVec>>,
    left: Vec<Vec<SVec>>,
}

impl CliffordSlot {
    fn new(gram: &Mat) -> CliffordSlot {
        let f = gram.field().clone();
        let half = Cyc::from_ratio(&f, 1, 2);
        let q = (0..RANK).map(|i| gram.get(i, i) * &half).collect();
        let mut s = CliffordSlot { gram: gram.clone(), q, right: vec![], left: vec![] };
        s.right = (0..256u16).map(|m| (0..RANK).map(|j| s.mono_times_gen(m, j)).collect()).collect();
        s.left = (0..RANK).map(|j| (0..256u16).map(|m| s.gen_times_mono(j, m)).collect()).collect();
        s
    }

    fn one(&self) -> Cyc {
        Cyc::one(self.gram.field())
    }

    fn mono_times_gen(&self, m: u16, j: usize) -> SVec {
        if m == 0 {
            return vec![(1 << j, self.one())];
        }
        let top = 15 - m.leading_zeros() as usize;
        if j > top {
            return vec![((m | 1 << j) as usize, self.one())];
        }
        let rest = m & !(1 << top);
        if j == top {
            return if self.q[j].is_zero() { vec![] } else { vec![(rest as usize, self.q[j].clone())] };
        }
        // rest·e_top·e_j = −(rest·e_j)·e_top + b(top, j)·rest
        let mut acc = Acc::new();
        for (m2, c) in self.mono_times_gen(rest, j) {
            acc.add(m2 | 1 << top, &-c);
        }
        acc.add(rest as usize, self.gram.get(top, j));
        acc.finish()
    }

    fn gen_times_mono(&self, j: usize, m: u16) -> SVec {
        if m == 0 {
            return vec![(1 << j, self.one())];
        }
        let low = m.trailing_zeros() as usize;
        if j < low {
            return vec![((m | 1 << j) as usize, self.one())];
        }
        let rest = m & !(1 << low);
        if j == low {
            return if self.q[j].is_zero() { vec![] } else { vec![(rest as usize, self.q[j].clone())] };
        }
        // e_j·e_low·rest = −e_low·(e_j·rest) + b(j, low)·rest
        let mut acc = Acc::new();
        for (m2, c) in self.gen_times_mono(j, rest) {
            acc.add(m2 | 1 << low, &-c);
        }
        acc.add(rest as usize, self.gram.get(j, low));
        acc.finish()
    }

    fn times_gen(&self, v: &[(usize, Cyc)], j: usize) -> SVec {
        let mut acc = Acc::new();
        for (m, c) in v {
            acc.add_scaled(c, &self.right[*m][j]);
        }
        acc.finish()
    }

    fn gen_times(&self, j: usize, v: &[(usize, Cyc)]) -> SVec {
        let mut acc = Acc::new();
        for (m, c) in v {
            acc.add_scaled(c, &self.left[j][*m]);
        }
        acc.finish()
    }

    fn mul(&self, a: &[(usize, Cyc)], b: &[(usize, Cyc)]) -> SVec {
        let mut acc = Acc::new();
        for (m, c) in b {
            let mut cur = a.to_vec();
            for j in (0..RANK).filter(|j| m >> j & 1 == 1) {
                cur = self.times_gen(&cur, j);
            }
            acc.add_scaled(c, &cur);
        }
        acc.finish()
    }

    /// Standard involution: e_{i₁}⋯e_{i_k} ↦ e_{i_k}⋯e_{i₁}.
    fn reverse_mono(&self, m: u16) -> SVec {
        let mut cur = vec![(0usize, self.one())];
        for j in (0..RANK).rev().filter(|j| m >> j & 1 == 1) {
            cur = self.times_gen(&cur, j);
        }
        cur
    }
}

/// Cl₀(V, Q) over L = F³: one even Clifford algebra per slot.
#[derive(Debug, Clone)]
pub struct CliffordEven {
    field: Field,
    slots: Vec<CliffordSlot>,
    pub even: Vec<u16>,
    index: Vec<Option<usize>>,
}

pub fn clifford_even(v: &CyclicAlgebra) -> CliffordEven {
    let even: Vec<u16> = (0..256u16).filter(|m| m.count_ones() % 2 == 0).collect();
    let mut index = vec![None; 256];
    for (i, m) in even.iter().enumerate() {
        index[*m as usize] = Some(i);
    }
    CliffordEven { field: v.field().clone(), slots: (0..3).map(|k| CliffordSlot::new(&v.qgram[k])).collect(), even, index }
}

impl CliffordEven {
    pub fn dim(&self) -> usize {
        CL_DIM
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn to_global(&self, k: usize, local: &[(usize, Cyc)]) -> SVec {
        let mut out: SVec = local.iter().map(|(m, c)| (CL_L_DIM * k + self.index[*m].expect("even monomial"), c.clone())).collect();
        out.sort_by_key(|e| e.0);
        out
    }

    fn to_local(&self, g: &[(usize, Cyc)], k: usize) -> SVec {
        let mut out: SVec = g.iter().filter(|(i, _)| i / CL_L_DIM == k).map(|(i, c)| (self.even[i % CL_L_DIM] as usize, c.clone())).collect();
        out.sort_by_key(|e| e.0);
        out
    }

    pub fn one(&self) -> SVec {
        (0..3).map(|k| (CL_L_DIM * k, Cyc::one(&self.field))).collect()
    }

    /// x·y for x, y in V (slot coordinates).
    pub fn pair(&self, x: &[(usize, Cyc)], y: &[(usize, Cyc)]) -> SVec {
        let mut out = Vec::new();
        for k in 0..3 {
            let s = &self.slots[k];
            let mut acc = Acc::new();
            for (ix, a) in x.iter().filter(|(i, _)| i / RANK == k) {
                let ex = vec![(1usize << (ix % RANK), a.clone())];
                for (iy, b) in y.iter().filter(|(i, _)| i / RANK == k) {
                    acc.add_scaled(b, &s.times_gen(&ex, iy % RANK));
                }
            }
            out.extend(self.to_global(k, &acc.finish()));
        }
        out
    }

    pub fn mul(&self, a: &[(usize, Cyc)], b: &[(usize, Cyc)]) -> SVec {
        let mut out = Vec::new();
        for k in 0..3 {
            let p = self.slots[k].mul(&self.to_local(a, k), &self.to_local(b, k));
            out.extend(self.to_global(k, &p));
        }
        out
    }

    /// c·e_i·e_j inside slot k.
    fn times_pair(&self, c: &[(usize, Cyc)], k: usize, i: usize, j: usize) -> SVec {
        let s = &self.slots[k];
        self.to_global(k, &s.times_gen(&s.times_gen(&self.to_local(c, k), i), j))
    }

    fn pair_times(&self, k: usize, i: usize, j: usize, c: &[(usize, Cyc)]) -> SVec {
        let s = &self.slots[k];
        self.to_global(k, &s.gen_times(i, &s.gen_times(j, &self.to_local(c, k))))
    }

    pub fn tau(&self, c: &[(usize, Cyc)]) -> SVec {
        let mut acc = Acc::new();
        for (i, x) in c {
            let k = i / CL_L_DIM;
            let m = self.even[i % CL_L_DIM];
            acc.add_scaled(x, &self.to_global(k, &self.slots[k].reverse_mono(m)));
        }
        acc.finish()
    }

    /// Center, by [z, e_ie_j] = 0 for all generator pairs.
    pub fn center(&self) -> Vec<SVec> {
        let f = &self.field;
        let mut eqs: Vec<SVec> = Vec::new();
        for k in 0..3 {
            for i in 0..RANK {
                for j in i + 1..RANK {
                    let cols: Vec<SVec> = (0..CL_DIM)
                        .map(|u| {
                            let m = sv_unit(u, f);
                            if u / CL_L_DIM != k {
                                return vec![];
                            }
                            sv_sub(&self.times_pair(&m, k, i, j), &self.pair_times(k, i, j, &m))
                        })
                        .collect();
                    eqs.extend(crate::triality::transpose_sparse(&cols, CL_DIM));
                }
            }
        }
        kernel(f, &eqs, CL_DIM)
    }
}

/// Clifford relations, and associativity on all monomial triples of degree
/// ≤ 2 plus `samples` random triples of higher degree.
pub fn verify_clifford(cl: &CliffordEven, samples: usize, seed: u64) -> Report {
    let f = cl.field.clone();
    let mut r = Report::new();
    for k in 0..3 {
        let s = &cl.slots[k];
        for i in 0..RANK {
            for j in 0..RANK {
                let x = vec![(1usize << i, Cyc::one(&f))];
                let xy = s.times_gen(&x, j);
                let yx = s.times_gen(&[(1usize << j, Cyc::one(&f))], i);
                let anti = sv_add(&xy, &yx);
                let want = if s.gram.get(i, j).is_zero() { vec![] } else { vec![(0usize, s.gram.get(i, j).clone())] };
                r.check(anti == want, || format!("e{i}e{j} + e{j}e{i} != b(e{i},e{j}) in slot {k}"));
            }
        }
        let low: Vec<u16> = (0..256u16).filter(|m| m.count_ones() <= 2).collect();
        for &a in &low {
            for &b in &low {
                for &c in &low {
                    let (va, vb, vc) = (vec![(a as usize, Cyc::one(&f))], vec![(b as usize, Cyc::one(&f))], vec![(c as usize, Cyc::one(&f))]);
                    r.check(s.mul(&s.mul(&va, &vb), &vc) == s.mul(&va, &s.mul(&vb, &vc)), || format!("associativity fails at ({a:#b}, {b:#b}, {c:#b}) in slot {k}"));
                }
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
        for _ in 0..samples {
            let (a, b, c): (u16, u16, u16) = (rng.gen_range(0..256), rng.gen_range(0..256), rng.gen_range(0..256));
            let (va, vb, vc) = (vec![(a as usize, Cyc::one(&f))], vec![(b as usize, Cyc::one(&f))], vec![(c as usize, Cyc::one(&f))]);
            r.check(s.mul(&s.mul(&va, &vb), &vc) == s.mul(&va, &s.mul(&vb, &vc)), || format!("associativity fails at ({a:#b}, {b:#b}, {c:#b}) in slot {k}"));
        }
    }
    r
}

/// κ: E → Cl₀ on the basis: κ(E_iz) = Σ_j (G⁻¹)_{zj} e_i·e_j, which is the
/// linear extension of κ(x b_Q(y,·)) = x·y.
#[derive(Debug, Clone)]
pub struct Kappa {
    pub images: Vec<SVec>,
}

pub fn kappa(e: &EndAlgebra, cl: &CliffordEven) -> Kappa {
    let f = e.field().clone();
    let mut images = Vec::with_capacity(E_DIM);
    for k in 0..3 {
        for i in 0..RANK {
            for z in 0..RANK {
                let mut acc = Acc::new();
                for j in 0..RANK {
                    let g = e.gram_inv[k].get(z, j);
                    if !g.is_zero() {
                        acc.add_scaled(g, &cl.pair(&sv_unit(RANK * k + i, &f), &sv_unit(RANK * k + j, &f)));
                    }
                }
                images.push(acc.finish());
            }
        }
    }
    Kappa { images }
}

impl Kappa {
    pub fn apply(&self, a: &[(usize, Cyc)]) -> SVec {
        let mut acc = Acc::new();
        for (i, c) in a {
            acc.add_scaled(c, &self.images[*i]);
        }
        acc.finish()
    }
}

/// α on the even monomials: α(x·y) = (l_x r_y, r_x l_y), each component an
/// element of E in block coordinates.
#[derive(Debug, Clone)]
pub struct AlphaMap {
    pub images: Vec<(SVec, SVec)>,
}

fn full_to_e(m: &Mat) -> Option<SVec> {
    let mut out = Vec::new();
    for (idx, c) in m.flat() {
        let (r, col) = (idx / DIM, idx % DIM);
        if r / RANK != col / RANK {
            return None;
        }
        out.push((e_index(r / RANK, r % RANK, col % RANK), c));
    }
    out.sort_by_key(|e| e.0);
    Some(out)
}

/// l_x and r_x as 24×24 matrices for the basis vectors x of V.
fn mult_operators(v: &CyclicAlgebra) -> (Vec<Mat>, Vec<Mat>) {
    let f = v.field();
    let l = (0..DIM).map(|x| Mat::from_columns(f, DIM, &(0..DIM).map(|y| v.mult[x][y].clone()).collect::<Vec<_>>())).collect();
    let r = (0..DIM).map(|x| Mat::from_columns(f, DIM, &(0..DIM).map(|y| v.mult[y][x].clone()).collect::<Vec<_>>())).collect();
    (l, r)
}

pub fn alpha(v: &CyclicAlgebra, cl: &CliffordEven) -> AlphaMap {
    let (l, r) = mult_operators(v);
    let mut images = vec![(vec![], vec![]); CL_DIM];
    for k in 0..3 {
        let mut pair = vec![vec![None; RANK]; RANK];
        for i in 0..RANK {
            for j in i + 1..RANK {
                let (x, y) = (RANK * k + i, RANK * k + j);
                let a = full_to_e(&l[x].mul(&r[y])).expect("block diagonal");
                let b = full_to_e(&r[x].mul(&l[y])).expect("block diagonal");
                pair[i][j] = Some((a, b));
            }
        }
        let mut by_mask: BTreeMap<u16, (SVec, SVec)> = BTreeMap::new();
        for &m in &cl.even {
            let img = if m == 0 {
                let id: SVec = (0..3).flat_map(|kk| (0..RANK).map(move |i| (kk, i))).filter(|(kk, _)| *kk != k).map(|(kk, i)| (e_index(kk, i, i), Cyc::one(v.field()))).collect();
                // the unit of slot k goes to the identity of the two blocks it touches
                let (a, b) = &pair[0][1].clone().expect("pair");
                let blk = |s: &SVec| s.first().map(|e| e.0 / 64);
                let (ka, kb) = (blk(a).unwrap(), blk(b).unwrap());
                let ia: SVec = id.iter().filter(|(i, _)| i / 64 == ka).cloned().collect();
                let ib: SVec = id.iter().filter(|(i, _)| i / 64 == kb).cloned().collect();
                (ia, ib)
            } else {
                let top = 15 - m.leading_zeros() as usize;
                let rest = m & !(1 << top);
                let second = 15 - rest.leading_zeros() as usize;
                let prefix = rest & !(1 << second);
                let (pa, pb) = by_mask[&prefix].clone();
                let (qa, qb) = pair[second][top].clone().expect("pair");
                (e_mul(&pa, &qa), e_mul(&pb, &qb))
            };
            by_mask.insert(m, img.clone());
            images[CL_L_DIM * k + cl.index[m as usize].unwrap()] = img;
        }
    }
    AlphaMap { images }
}

impl AlphaMap {
    pub fn apply(&self, c: &[(usize, Cyc)]) -> (SVec, SVec) {
        let (mut a, mut b) = (Acc::new(), Acc::new());
        for (i, x) in c {
            a.add_scaled(x, &self.images[*i].0);
            b.add_scaled(x, &self.images[*i].1);
        }
        (a.finish(), b.finish())
    }

    pub fn flat(p: &(SVec, SVec)) -> SVec {
        let mut out = p.0.clone();
        out.extend(p.1.iter().map(|(i, c)| (E_DIM + i, c.clone())));
        out
    }
}

/// α multiplicative on (monomial × generator pair), bijective, compatible
/// with the involutions, and α_V(x)² = (ρ(Q(x)), ρ²(Q(x))) on basis vectors
/// and their pairwise sums.
pub fn verify_alpha(e: &EndAlgebra, cl: &CliffordEven, al: &AlphaMap) -> Report {
    let f = e.field().clone();
    let mut r = Report::new();
    for k in 0..3 {
        for u in (0..CL_L_DIM).map(|u| CL_L_DIM * k + u) {
            let m = sv_unit(u, &f);
            let am = al.apply(&m);
            for i in 0..RANK {
                for j in i + 1..RANK {
                    let lhs = al.apply(&cl.times_pair(&m, k, i, j));
                    let pij = al.apply(&cl.pair(&sv_unit(RANK * k + i, &f), &sv_unit(RANK * k + j, &f)));
                    let rhs = (e_mul(&am.0, &pij.0), e_mul(&am.1, &pij.1));
                    r.check(lhs == rhs, || format!("α is not multiplicative at monomial {u} times e{i}e{j} (slot {k})"));
                }
            }
            let lhs = al.apply(&cl.tau(&m));
            r.check(lhs.0 == e.sigma(&am.0) && lhs.1 == e.sigma(&am.1), || format!("α does not intertwine the involutions at monomial {u}"));
        }
    }
    let flats: Vec<SVec> = (0..CL_DIM).map(|u| AlphaMap::flat(&al.images[u])).collect();
    r.check(rank_of(&f, &flats, 2 * E_DIM) == CL_DIM, || "α is not bijective".into());
    let (l, rr) = mult_operators(&e.v);
    let t = e.v.twist;
    let one = Cyc::one(&f);
    for x in 0..DIM {
        for y in x..DIM {
            if x / RANK != y / RANK {
                continue;
            }
            let xv: SVec = if x == y { sv_unit(x, &f) } else { vec![(x, one.clone()), (y, one.clone())] };
            let lx = if x == y { l[x].clone() } else { l[x].add(&l[y]) };
            let rx = if x == y { rr[x].clone() } else { rr[x].add(&rr[y]) };
            let q = e.v.q(&xv);
            let lr = full_to_e(&lx.mul(&rx));
            let rl = full_to_e(&rx.mul(&lx));
            r.check(lr == Some(e.central(&rho(&q, t))), || format!("l_x r_x != ρ(Q(x)) at ({x}, {y})"));
            r.check(rl == Some(e.central(&rho(&q, 2 * t))), || format!("r_x l_x != ρ²(Q(x)) at ({x}, {y})"));
        }
    }
    r
}

/// κ(φ_{x,y}) = x·y on basis pairs and sums, κσ = τκ on a basis.
pub fn verify_kappa(e: &EndAlgebra, cl: &CliffordEven, kp: &Kappa) -> Report {
    let f = e.field().clone();
    let mut r = Report::new();
    let one = Cyc::one(&f);
    for k in 0..3 {
        for i in 0..RANK {
            for j in 0..RANK {
                let (x, y) = (sv_unit(RANK * k + i, &f), sv_unit(RANK * k + j, &f));
                r.check(kp.apply(&e.phi(&x, &y)) == cl.pair(&x, &y), || format!("κ(φ(e{i},e{j})) != e{i}·e{j} in slot {k}"));
                let xs = vec![(RANK * k + i, one.clone()), (RANK * k + (i + 1) % RANK, Cyc::from_i64(&f, 2))];
                let ys = vec![(RANK * k + j, one.clone()), (RANK * k + (j + 3) % RANK, Cyc::from_i64(&f, -1))];
                r.check(kp.apply(&e.phi(&xs, &ys)) == cl.pair(&xs, &ys), || format!("κ is inconsistent on sums at ({i}, {j}) in slot {k}"));
            }
        }
    }
    for a in 0..E_DIM {
        let ea = sv_unit(a, &f);
        r.check(kp.apply(&e.sigma(&ea)) == cl.tau(&kp.apply(&ea)), || format!("κσ != σ̲κ on basis element {a}"));
    }
    r
}

/// A pair (a, b) with κ(ab) ≠ κ(a)κ(b), searched among rank-one operators.
pub fn kappa_non_multiplicative_witness(e: &EndAlgebra, cl: &CliffordEven, kp: &Kappa) -> Option<(SVec, SVec)> {
    let f = e.field().clone();
    for i in 0..RANK {
        for j in 0..RANK {
            let a = e.phi(&sv_unit(i, &f), &sv_unit(j, &f));
            for k in 0..RANK {
                for l in 0..RANK {
                    let b = e.phi(&sv_unit(k, &f), &sv_unit(l, &f));
                    if kp.apply(&e_mul(&a, &b)) != cl.mul(&kp.apply(&a), &kp.apply(&b)) {
                        return Some((a, b));
                    }
                }
            }
        }
    }
    None
}

/// Skew(E, σ) as the blockwise so(b_Q).
pub fn skew_basis(e: &EndAlgebra) -> Vec<SVec> {
    let mut out = Vec::new();
    for k in 0..3 {
        for d in so_basis(&e.v.qgram[k]) {
            out.push(d.flat().into_iter().map(|(i, c)| (64 * k + i, c)).collect());
        }
    }
    out
}

/// L(E) = {x ∈ Skew(E,σ) : α(κ(x)) = c·(x, x)}.
pub fn lie_of_e(e: &EndAlgebra, kp: &Kappa, al: &AlphaMap, c: &Cyc) -> Vec<SVec> {
    let f = e.field().clone();
    let skew = skew_basis(e);
    let cols: Vec<SVec> = skew
        .iter()
        .map(|x| {
            let ak = AlphaMap::flat(&al.apply(&kp.apply(x)));
            let xx = AlphaMap::flat(&(sv_scale(c, x), sv_scale(c, x)));
            sv_sub(&ak, &xx)
        })
        .collect();
    let rows = crate::triality::transpose_sparse(&cols, 2 * E_DIM);
    let ker = kernel(&f, &rows, skew.len());
    ker.iter()
        .map(|k| {
            let mut acc = Acc::new();
            for (u, a) in k {
                acc.add_scaled(a, &skew[*u]);
            }
            acc.finish()
        })
        .collect()
}

/// Triples as elements of E (block k = d_k).
pub fn triples_in_e(ts: &[TriTriple]) -> Vec<SVec> {
    ts.iter().map(flat_triple).collect()
}

/// E_g = {a : a V_h ⊆ V_{g+h}}, in block coordinates.
#[derive(Debug, Clone)]
pub struct EGrading {
    pub group: AbGroup,
    pub components: BTreeMap<GroupElem, Vec<SVec>>,
}

pub fn induce_e_grading(e: &EndAlgebra, g: &BasisGrading) -> Result<EGrading, TrialitarianError> {
    let f = e.field().clone();
    let bmat = Mat::from_columns(&f, DIM, &g.basis);
    let binv = bmat.inverse().ok_or(TrialitarianError::SingularBasis)?;
    // B⁻¹ E_{(k,i),(k,z)} B = (column 8k+i of B⁻¹) ⊗ (row 8k+z of B)
    let images: Vec<SVec> = (0..E_DIM)
        .map(|a| {
            let (k, i, z) = (a / 64, (a / 8) % 8, a % 8);
            let col = binv.col_sv(RANK * k + i);
            let row = bmat.row_sv(RANK * k + z);
            let mut out = Vec::with_capacity(col.len() * row.len());
            for (rr, x) in &col {
                for (cc, y) in &row {
                    out.push((rr * DIM + cc, x * y));
                }
            }
            out
        })
        .collect();
    let mut ech = Echelon::tracking(&f, DIM * DIM);
    for im in &images {
        ech.insert(im);
    }
    let mut parts: BTreeMap<GroupElem, Echelon> = BTreeMap::new();
    for im in &images {
        let mut split: BTreeMap<GroupElem, SVec> = BTreeMap::new();
        for (idx, c) in im {
            let d = g.group.sub(&g.degrees[idx / DIM], &g.degrees[idx % DIM]);
            split.entry(d).or_default().push((*idx, c.clone()));
        }
        for (d, piece) in split {
            let coords = ech.express(&piece).ok_or(TrialitarianError::NotGraded(0))?;
            parts.entry(d).or_insert_with(|| Echelon::new(&f, E_DIM)).insert(&coords);
        }
    }
    let components: BTreeMap<GroupElem, Vec<SVec>> = parts.into_iter().map(|(d, e)| (d, e.rref())).collect();
    let total: usize = components.values().map(|b| b.len()).sum();
    if total != E_DIM {
        return Err(TrialitarianError::NotGraded(total));
    }
    Ok(EGrading { group: g.group.clone(), components })
}

impl EGrading {
    pub fn dims(&self) -> BTreeMap<GroupElem, usize> {
        self.components.iter().map(|(g, b)| (g.clone(), b.len())).collect()
    }

    pub fn degree_of(&self, f: &Field, a: &[(usize, Cyc)]) -> Option<GroupElem> {
        self.components.iter().find(|(_, b)| {
            let mut e = Echelon::new(f, E_DIM);
            for v in b.iter() {
                e.insert(v);
            }
            e.contains(a)
        }).map(|(g, _)| g.clone())
    }

    /// Components of span(sub) ∩ E_g.
    pub fn restrict(&self, f: &Field, sub: &[SVec]) -> BTreeMap<GroupElem, Vec<SVec>> {
        self.components
            .iter()
            .map(|(g, b)| (g.clone(), intersection(f, b, sub, E_DIM)))
            .filter(|(_, v)| !v.is_empty())
            .collect()
    }

    pub fn same_as(&self, o: &EGrading, f: &Field) -> bool {
        self.group == o.group
            && self.components.len() == o.components.len()
            && self.components.iter().all(|(g, b)| o.components.get(g).is_some_and(|c| same_span(f, b, c, E_DIM)))
    }
}

/// E_gE_h ⊆ E_{g+h}, σ(E_g) ⊆ E_g and α(κ(E_g)) ⊆ E_g × E_g.
pub fn verify_e_grading(e: &EndAlgebra, eg: &EGrading, kp: Option<(&Kappa, &AlphaMap)>) -> Report {
    let f = e.field().clone();
    let mut r = Report::new();
    let echs: BTreeMap<&GroupElem, Echelon> = eg
        .components
        .iter()
        .map(|(g, b)| {
            let mut ech = Echelon::new(&f, E_DIM);
            for v in b {
                ech.insert(v);
            }
            (g, ech)
        })
        .collect();
    let inside = |d: &GroupElem, v: &SVec| v.is_empty() || echs.get(d).is_some_and(|e| e.contains(v));
    for (g, a) in &eg.components {
        for (h, b) in &eg.components {
            let gh = eg.group.add(g, h);
            for x in a {
                for y in b {
                    r.check(inside(&gh, &e_mul(x, y)), || format!("E_{g} E_{h} is not inside E_{gh}"));
                }
            }
        }
        for x in a {
            r.check(inside(g, &e.sigma(x)), || format!("σ does not preserve E_{g}"));
            if let Some((k, al)) = kp {
                let (p, q) = al.apply(&k.apply(x));
                r.check(inside(g, &p) && inside(g, &q), || format!("ακ does not preserve E_{g}"));
            }
        }
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GradingType {
    I,
    II,
    /// With the distinguished element h.
    III(GroupElem),
}

/// Reads the type off the grading induced on the center L = Z(E). For
/// Type III, h is the degree of the ω-eigenvector of the orientation ρ^twist.
pub fn detect_type(e: &EndAlgebra, eg: &EGrading) -> Result<GradingType, TrialitarianError> {
    let f = e.field().clone();
    let l = &e.v.l;
    let center: Vec<SVec> = (0..3).map(|k| e.central(&crate::cyclic::l_slot(&f, k))).collect();
    let parts = eg.restrict(&f, &center);
    let total: usize = parts.values().map(|v| v.len()).sum();
    if total != 3 {
        return Err(TrialitarianError::Center(format!("components of the center have total dimension {total}")));
    }
    let zero = eg.group.zero();
    if parts.get(&zero).map(|v| v.len()) == Some(3) {
        return Ok(GradingType::I);
    }
    let mut dims: Vec<usize> = parts.values().map(|v| v.len()).collect();
    dims.sort_unstable();
    if dims == vec![1, 2] {
        let odd = parts.iter().find(|(g, _)| **g != zero).map(|(g, _)| g.clone()).unwrap();
        if eg.group.element_order(&odd) == Some(2) {
            return Ok(GradingType::II);
        }
        return Err(TrialitarianError::Center(format!("two components but the nontrivial degree {odd} does not have order 2")));
    }
    if dims == vec![1, 1, 1] {
        let xi = if e.v.twist == 1 { l.xi.clone() } else { l.xi_pow(2) };
        let x = e.central(&xi);
        let h = eg.degree_of(&f, &x).ok_or_else(|| TrialitarianError::Center("ξ is not homogeneous".into()))?;
        if eg.group.element_order(&h) != Some(3) {
            return Err(TrialitarianError::Center(format!("deg ξ = {h} does not have order 3")));
        }
        return Ok(GradingType::III(h));
    }
    Err(TrialitarianError::Center(format!("component dimensions {dims:?}")))
}

/// The restriction of the E-grading to L(E) agrees with the grading induced
/// on tri (tri coordinates converted to E).
pub fn restriction_matches_tri(e: &EndAlgebra, eg: &EGrading, tri: &crate::triality::Tri, tg: &TriGrading) -> bool {
    let f = e.field().clone();
    let lie: Vec<SVec> = triples_in_e(&tri.basis);
    let restricted = eg.restrict(&f, &lie);
    let from_tri: BTreeMap<GroupElem, Vec<SVec>> = tg
        .components
        .iter()
        .map(|(g, b)| (g.clone(), b.iter().map(|c| flat_triple(&tri.element(c))).collect()))
        .collect();
    restricted.len() == from_tri.len() && restricted.iter().all(|(g, b)| from_tri.get(g).is_some_and(|c| same_span(&f, b, c, E_DIM)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::{para, zorn_cayley};
    use crate::cyclic::cyclic_from_symmetric;
    use crate::scalars::make_field;

    #[test]
    fn clifford_and_alpha() {
        let f = make_field(12).unwrap();
        let v = cyclic_from_symmetric(&para(&zorn_cayley(&f)).unwrap()).unwrap();
        let e = end_algebra(&v);
        assert!(verify_end(&e).ok());
        let cl = clifford_even(&v);
        assert!(verify_clifford(&cl, 20, 7).ok());
        assert_eq!(cl.center().len(), 6);
        let al = alpha(&v, &cl);
        let r = verify_alpha(&e, &cl, &al);
        assert!(r.ok(), "{:?}", &r.violations[..r.violations.len().min(4)]);
        let kp = kappa(&e, &cl);
        assert!(verify_kappa(&e, &cl, &kp).ok());
        assert!(kappa_non_multiplicative_witness(&e, &cl, &kp).is_some());
        let lie = lie_of_e(&e, &kp, &al, &Cyc::from_i64(&f, 2));
        assert_eq!(lie.len(), 28);
        let der = triples_in_e(&crate::triality::der_cyclic(&v).unwrap());
        assert!(same_span(&f, &lie, &der, E_DIM));
    }
}
