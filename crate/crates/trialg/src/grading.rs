//! Multi-sorted structures given by structure constants, and gradings on
//! them by finitely generated abelian groups.
//!
//! A grading is always presented on a homogeneous basis: each basis vector
//! of each sort carries a degree.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::fgab::{AbGroup, GroupElem, GroupError, GroupHom, Presentation};
use crate::linalg::{Acc, Mat, SVec};
use crate::scalars::{Cyc, Field};
use crate::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Associative,
    Lie,
    Jordan,
    Composition,
    Module,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sort {
    pub name: String,
    pub labels: Vec<String>,
    /// The scalar sort F: always in degree e.
    pub fixed: bool,
}

/// table[i][j] = image of (basis i of `left`, basis j of `right`) in `out`.
#[derive(Debug, Clone)]
pub struct BilinearMap {
    pub name: String,
    pub left: usize,
    pub right: usize,
    pub out: usize,
    pub table: Vec<Vec<SVec>>,
}

/// A linear endomorphism of one sort (e.g. an involution), by columns.
#[derive(Debug, Clone)]
pub struct LinearMap {
    pub name: String,
    pub sort: usize,
    pub cols: Vec<SVec>,
}

#[derive(Debug, Clone)]
pub struct Structure {
    pub field: Field,
    pub kind: Kind,
    pub sorts: Vec<Sort>,
    pub maps: Vec<BilinearMap>,
    pub linear: Vec<LinearMap>,
}

pub type StructAlgebra = Structure;

impl Structure {
    /// One-sorted algebra whose product is map 0.
    pub fn algebra(field: &Field, kind: Kind, labels: Vec<String>, product: Vec<Vec<SVec>>) -> Structure {
        Structure {
            field: field.clone(),
            kind,
            sorts: vec![Sort { name: "A".into(), labels, fixed: false }],
            maps: vec![BilinearMap { name: "product".into(), left: 0, right: 0, out: 0, table: product }],
            linear: vec![],
        }
    }

    pub fn dim(&self, sort: usize) -> usize {
        self.sorts[sort].labels.len()
    }

    fn scalar_sort(&mut self) -> usize {
        if let Some(i) = self.sorts.iter().position(|s| s.fixed) {
            return i;
        }
        self.sorts.push(Sort { name: "F".into(), labels: vec!["1".into()], fixed: true });
        self.sorts.len() - 1
    }

    /// Adds an F-valued bilinear form on `sort` given by its Gram matrix.
    pub fn add_form(&mut self, name: &str, sort: usize, gram: &Mat) {
        let out = self.scalar_sort();
        let n = self.dim(sort);
        let table = (0..n)
            .map(|i| (0..n).map(|j| if gram.get(i, j).is_zero() { vec![] } else { vec![(0, gram.get(i, j).clone())] }).collect())
            .collect();
        self.maps.push(BilinearMap { name: name.into(), left: sort, right: sort, out, table });
    }

    pub fn add_map(&mut self, map: BilinearMap) {
        self.maps.push(map);
    }

    pub fn add_sort(&mut self, name: &str, labels: Vec<String>) -> usize {
        self.sorts.push(Sort { name: name.into(), labels, fixed: false });
        self.sorts.len() - 1
    }

    pub fn map_index(&self, name: &str) -> Option<usize> {
        self.maps.iter().position(|m| m.name == name)
    }

    /// Bilinear extension of map `m`.
    pub fn apply(&self, m: usize, a: &[(usize, Cyc)], b: &[(usize, Cyc)]) -> SVec {
        let map = &self.maps[m];
        let mut acc = Acc::new();
        for (i, x) in a {
            for (j, y) in b {
                let t = &map.table[*i][*j];
                if !t.is_empty() {
                    acc.add_scaled(&(x * y), t);
                }
            }
        }
        acc.finish()
    }

    pub fn product(&self, a: &[(usize, Cyc)], b: &[(usize, Cyc)]) -> SVec {
        self.apply(0, a, b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grading {
    pub group: AbGroup,
    /// degrees[sort][basis index]
    pub degrees: Vec<Vec<GroupElem>>,
}

impl Grading {
    pub fn trivial(s: &Structure, group: &AbGroup) -> Grading {
        Grading { group: group.clone(), degrees: s.sorts.iter().map(|so| vec![group.zero(); so.labels.len()]).collect() }
    }

    /// Grading of a one-sorted algebra (plus the scalar sort, if any).
    pub fn on_algebra(s: &Structure, group: &AbGroup, degrees: Vec<GroupElem>) -> Grading {
        let mut g = Grading::trivial(s, group);
        g.degrees[0] = degrees;
        g
    }

    pub fn main(&self) -> &[GroupElem] {
        &self.degrees[0]
    }

    /// dim of each component of a sort.
    pub fn components(&self, sort: usize) -> BTreeMap<GroupElem, usize> {
        let mut m = BTreeMap::new();
        for d in &self.degrees[sort] {
            *m.entry(d.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn basis_of(&self, sort: usize, deg: &GroupElem) -> Vec<usize> {
        self.degrees[sort].iter().enumerate().filter(|(_, d)| *d == deg).map(|(i, _)| i).collect()
    }
}

/// Checks every nonzero structure constant against the degrees.
pub fn verify_grading(s: &Structure, g: &Grading) -> Report {
    let mut r = Report::new();
    if g.degrees.len() != s.sorts.len() {
        r.check(false, || format!("{} sorts but {} degree lists", s.sorts.len(), g.degrees.len()));
        return r;
    }
    for (k, so) in s.sorts.iter().enumerate() {
        r.check(g.degrees[k].len() == so.labels.len(), || format!("sort {} has {} basis vectors but {} degrees", so.name, so.labels.len(), g.degrees[k].len()));
        for (i, d) in g.degrees[k].iter().enumerate() {
            r.check(g.group.contains(d), || format!("degree {d} of {}[{i}] is not in {}", so.name, g.group));
            if so.fixed {
                r.check(g.group.is_zero(d), || format!("scalar sort {} must have degree e", so.name));
            }
        }
    }
    if !r.ok() {
        return r;
    }
    for m in &s.maps {
        let (dl, dr, dout) = (&g.degrees[m.left], &g.degrees[m.right], &g.degrees[m.out]);
        for (i, row) in m.table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.is_empty() {
                    continue;
                }
                let want = g.group.add(&dl[i], &dr[j]);
                for (k, _) in v {
                    r.check(dout[*k] == want, || {
                        format!(
                            "{}({}, {}) has a component on {} of degree {} instead of {}",
                            m.name, s.sorts[m.left].labels[i], s.sorts[m.right].labels[j], s.sorts[m.out].labels[*k], dout[*k], want
                        )
                    });
                }
            }
        }
    }
    for lm in &s.linear {
        let d = &g.degrees[lm.sort];
        for (i, col) in lm.cols.iter().enumerate() {
            for (k, _) in col {
                r.check(d[*k] == d[i], || format!("{} sends {} to a component of degree {}", lm.name, s.sorts[lm.sort].labels[i], d[*k]));
            }
        }
    }
    r
}

pub fn coarsen(g: &Grading, alpha: &GroupHom) -> Result<Grading, GroupError> {
    if alpha.domain != g.group {
        return Err(GroupError::Mismatch(alpha.domain.to_string(), g.group.to_string()));
    }
    Ok(Grading { group: alpha.codomain.clone(), degrees: g.degrees.iter().map(|ds| ds.iter().map(|d| alpha.apply(d)).collect()).collect() })
}

/// deg(s_i ⊗ ξ^j) = deg s_i + j·h on the basis ordered by j then i.
pub fn tensor_degrees(group: &AbGroup, s_degrees: &[GroupElem], h: &GroupElem) -> Vec<GroupElem> {
    (0..3i64).flat_map(|j| s_degrees.iter().map(move |d| group.add(d, &group.times(j, h)))).collect()
}

/// A component label (sort, degree).
pub type Key = (usize, GroupElem);

/// The relations s₁s₂ = s₃ read off a graded structure, keyed by component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet {
    pub group: AbGroup,
    pub support: BTreeSet<Key>,
    /// (left, right, out); out = None for the scalar sort.
    pub triples: BTreeSet<(Key, Key, Option<Key>)>,
    pub unary: BTreeSet<(Key, Key)>,
}

pub fn relation_set(s: &Structure, g: &Grading) -> RelationSet {
    let key = |sort: usize, i: usize| -> Option<Key> { (!s.sorts[sort].fixed).then(|| (sort, g.degrees[sort][i].clone())) };
    let mut support = BTreeSet::new();
    for (k, so) in s.sorts.iter().enumerate() {
        if !so.fixed {
            support.extend(g.degrees[k].iter().map(|d| (k, d.clone())));
        }
    }
    let mut triples = BTreeSet::new();
    for m in &s.maps {
        for (i, row) in m.table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                for (k, _) in v {
                    let (Some(a), Some(b)) = (key(m.left, i), key(m.right, j)) else { continue };
                    triples.insert((a, b, key(m.out, *k)));
                }
            }
        }
    }
    let mut unary = BTreeSet::new();
    for lm in &s.linear {
        for (i, col) in lm.cols.iter().enumerate() {
            for (k, _) in col {
                if i != *k {
                    unary.insert(((lm.sort, g.degrees[lm.sort][i].clone()), (lm.sort, g.degrees[lm.sort][*k].clone())));
                }
            }
        }
    }
    RelationSet { group: g.group.clone(), support, triples, unary }
}

impl RelationSet {
    /// Relabels every component through α (the relations of the coarsening).
    pub fn coarsen(&self, alpha: &GroupHom) -> RelationSet {
        let f = |k: &Key| (k.0, alpha.apply(&k.1));
        RelationSet {
            group: alpha.codomain.clone(),
            support: self.support.iter().map(f).collect(),
            triples: self.triples.iter().map(|(a, b, c)| (f(a), f(b), c.as_ref().map(f))).collect(),
            unary: self.unary.iter().map(|(a, b)| (f(a), f(b))).collect(),
        }
    }

    /// Universal group: canonical group, label of each support key, and the
    /// natural map back to the grading group.
    pub fn universal(&self) -> (AbGroup, BTreeMap<Key, GroupElem>, GroupHom) {
        let keys: Vec<&Key> = self.support.iter().collect();
        let idx: HashMap<&Key, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let n = keys.len();
        let mut rels = BTreeSet::new();
        for (a, b, c) in &self.triples {
            let mut row = vec![0i64; n];
            row[idx[a]] += 1;
            row[idx[b]] += 1;
            if let Some(c) = c {
                row[idx[c]] -= 1;
            }
            if row.iter().any(|&x| x != 0) {
                rels.insert(row);
            }
        }
        for (a, b) in &self.unary {
            let mut row = vec![0i64; n];
            row[idx[a]] += 1;
            row[idx[b]] -= 1;
            if row.iter().any(|&x| x != 0) {
                rels.insert(row);
            }
        }
        let rels: Vec<Vec<i64>> = rels.into_iter().collect();
        let p = Presentation::new(n, &rels);
        let labels = keys
            .iter()
            .enumerate()
            .map(|(i, k)| {
                let mut e = vec![0i64; n];
                e[i] = 1;
                ((*k).clone(), p.map(&e))
            })
            .collect();
        let images = (0..p.group.ngens())
            .map(|i| {
                let c = p.lift_gen(i);
                let mut acc = self.group.zero();
                for (cj, k) in c.iter().zip(&keys) {
                    acc = self.group.add(&acc, &self.group.times(*cj, &k.1));
                }
                acc
            })
            .collect();
        let back = GroupHom { domain: p.group.clone(), codomain: self.group.clone(), images };
        (p.group, labels, back)
    }
}

#[derive(Debug, Clone)]
pub struct Universal {
    pub group: AbGroup,
    pub grading: Grading,
    /// U → G recovering the original degrees.
    pub to_original: GroupHom,
}

pub fn universal_group(s: &Structure, g: &Grading) -> Universal {
    let rs = relation_set(s, g);
    let (u, labels, back) = rs.universal();
    // When G is canonical and already universal, keep its coordinates so that
    // the construction is idempotent on the nose.
    if g.group == g.group.iso_type() && u == g.group && is_onto(&back) {
        return Universal { group: u, grading: g.clone(), to_original: GroupHom::identity(&g.group) };
    }
    let degrees = s
        .sorts
        .iter()
        .enumerate()
        .map(|(k, so)| g.degrees[k].iter().map(|d| if so.fixed { u.zero() } else { labels[&(k, d.clone())].clone() }).collect())
        .collect();
    Universal { group: u.clone(), grading: Grading { group: u, degrees }, to_original: back }
}

fn is_onto(h: &GroupHom) -> bool {
    crate::fgab::quotient(&h.codomain, &h.images).map(|(q, _)| q == AbGroup::trivial()).unwrap_or(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradingInvariants {
    pub support: Vec<GroupElem>,
    pub dims: BTreeMap<GroupElem, usize>,
    /// type_vector[i] = number of components of dimension i+1.
    pub type_vector: Vec<usize>,
    pub identity_dim: usize,
    pub universal_group: AbGroup,
}

pub fn type_vector(dims: &BTreeMap<GroupElem, usize>) -> Vec<usize> {
    let max = dims.values().copied().max().unwrap_or(0);
    let mut t = vec![0; max];
    for &d in dims.values() {
        t[d - 1] += 1;
    }
    t
}

fn invariants_from(g: &Grading, sort: usize, universal: AbGroup) -> GradingInvariants {
    let dims = g.components(sort);
    GradingInvariants {
        support: dims.keys().cloned().collect(),
        type_vector: type_vector(&dims),
        identity_dim: dims.get(&g.group.zero()).copied().unwrap_or(0),
        dims,
        universal_group: universal.iso_type(),
    }
}

/// Invariants on sort 0.
pub fn invariants(s: &Structure, g: &Grading) -> GradingInvariants {
    invariants_from(g, 0, universal_group(s, g).group)
}

/// Invariants of a coarsening computed from precomputed relations.
pub fn invariants_via(rel: &RelationSet, g: &Grading) -> GradingInvariants {
    invariants_from(g, 0, rel.universal().0)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("gradings live on different structures: {0}")]
pub struct Incomparable(pub String);

/// Whether every component of `fine` lies in a component of `coarse`.
pub fn is_refinement(s: &Structure, fine: &Grading, coarse: &Grading) -> Result<bool, Incomparable> {
    for k in 0..s.sorts.len() {
        if fine.degrees.get(k).map(|d| d.len()) != Some(s.dim(k)) || coarse.degrees.get(k).map(|d| d.len()) != Some(s.dim(k)) {
            return Err(Incomparable(format!("sort {} sizes differ", s.sorts[k].name)));
        }
    }
    if fine.degrees.len() != s.sorts.len() || coarse.degrees.len() != s.sorts.len() {
        return Err(Incomparable("sort counts differ".into()));
    }
    for k in 0..s.sorts.len() {
        let mut m: HashMap<&GroupElem, &GroupElem> = HashMap::new();
        for (a, b) in fine.degrees[k].iter().zip(&coarse.degrees[k]) {
            if *m.entry(a).or_insert(b) != b {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Necessary condition for `coarse` to be a coarsening of `fine`, from
/// invariants alone: the identity component can only grow and the universal
/// group of a coarsening is a quotient of the finer one.
pub fn coarsening_possible(fine: &GradingInvariants, coarse: &GradingInvariants) -> bool {
    if fine == coarse {
        return true;
    }
    coarse.identity_dim >= fine.identity_dim && fine.universal_group.surjects_onto(&coarse.universal_group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sv_unit;
    use crate::scalars::make_field;

    /// Group algebra of Z₃ with its natural grading.
    fn z3_group_algebra() -> (Structure, Grading) {
        let f = make_field(12).unwrap();
        let table = (0..3).map(|i| (0..3).map(|j| sv_unit((i + j) % 3, &f)).collect()).collect();
        let s = Structure::algebra(&f, Kind::Associative, vec!["1".into(), "x".into(), "x2".into()], table);
        let g = AbGroup::presented(0, &[3]).unwrap();
        let gr = Grading::on_algebra(&s, &g, (0..3).map(|i| g.reduce(&[i])).collect());
        (s, gr)
    }

    #[test]
    fn verifies_and_detects_corruption() {
        let (s, g) = z3_group_algebra();
        assert!(verify_grading(&s, &g).ok());
        let mut bad = g.clone();
        bad.degrees[0][1] = g.group.reduce(&[2]);
        bad.degrees[0][2] = g.group.reduce(&[2]);
        let r = verify_grading(&s, &bad);
        assert!(!r.ok());
        assert!(r.violations[0].contains("product"));
    }

    #[test]
    fn universal_group_of_group_algebra() {
        let (s, g) = z3_group_algebra();
        let u = universal_group(&s, &g);
        assert_eq!(u.group.to_string(), "Z3");
        assert!(verify_grading(&s, &u.grading).ok());
        assert_eq!(coarsen(&u.grading, &u.to_original).unwrap(), g);
        let again = universal_group(&s, &u.grading);
        assert_eq!(again.group, u.group);
        assert_eq!(again.grading, u.grading);
    }

    #[test]
    fn trivial_grading_has_trivial_universal_group() {
        let (s, _) = z3_group_algebra();
        let t = Grading::trivial(&s, &AbGroup::presented(1, &[]).unwrap());
        let inv = invariants(&s, &t);
        assert_eq!(inv.universal_group, AbGroup::trivial());
        assert_eq!(inv.identity_dim, 3);
        assert_eq!(inv.type_vector, vec![0, 0, 1]);
    }

    #[test]
    fn refinement() {
        let (s, g) = z3_group_algebra();
        let t = Grading::trivial(&s, &AbGroup::trivial());
        assert!(is_refinement(&s, &g, &t).unwrap());
        assert!(!is_refinement(&s, &t, &g).unwrap());
        let short = Grading { group: g.group.clone(), degrees: vec![vec![g.group.zero()]] };
        assert!(is_refinement(&s, &short, &g).is_err());
    }
}
