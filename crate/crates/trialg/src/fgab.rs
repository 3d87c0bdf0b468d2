//! Finitely generated abelian groups, homomorphisms, characters and the
//! Smith normal form.
//!
//! A group is carried in the coordinates it was presented with: `free_rank`
//! copies of Z followed by cyclic factors Z_{t_i}. `make_group` returns the
//! canonical (invariant factor) presentation; `AbGroup::presented` keeps the
//! user's factors, e.g. Z₂³×Z₃ as torsion [2,2,2,3].

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::scalars::{Cyc, Field};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("torsion orders must be at least 2, got {0}")]
    BadTorsion(i64),
    #[error("element {0:?} does not live in {1}")]
    NotInGroup(Vec<i64>, String),
    #[error("exponent {exp} of the group does not divide the conductor {n}")]
    Exponent { exp: u64, n: u32 },
    #[error("operation needs a finite group, got {0}")]
    Infinite(String),
    #[error("homomorphism not well defined on generator {0}")]
    NotWellDefined(usize),
    #[error("group mismatch: {0} vs {1}")]
    Mismatch(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbGroup {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElem(pub Vec<i64>);

impl GroupElem {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Canonical group Z^r × Z_{d_1} × … with d_1 | d_2 | ….
pub fn make_group(free_rank: usize, torsion: &[i64]) -> Result<AbGroup, GroupError> {
    if let Some(&t) = torsion.iter().find(|&&t| t < 2) {
        return Err(GroupError::BadTorsion(t));
    }
    Ok(AbGroup { free_rank, torsion: torsion.to_vec() }.iso_type())
}

impl AbGroup {
    /// Keeps the given cyclic factors as coordinates.
    pub fn presented(free_rank: usize, torsion: &[i64]) -> Result<AbGroup, GroupError> {
        if let Some(&t) = torsion.iter().find(|&&t| t < 2) {
            return Err(GroupError::BadTorsion(t));
        }
        Ok(AbGroup { free_rank, torsion: torsion.to_vec() })
    }

    pub fn trivial() -> AbGroup {
        AbGroup { free_rank: 0, torsion: vec![] }
    }

    /// Number of coordinates.
    pub fn ngens(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Modulus of coordinate i, 0 for free coordinates.
    pub fn modulus(&self, i: usize) -> i64 {
        if i < self.free_rank {
            0
        } else {
            self.torsion[i - self.free_rank]
        }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().map(|&t| t as u64).product())
    }

    pub fn exponent(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().fold(1u64, |a, &t| a.lcm(&(t as u64))))
    }

    pub fn reduce(&self, v: &[i64]) -> GroupElem {
        assert_eq!(v.len(), self.ngens(), "coordinate count mismatch for {self}");
        GroupElem(v.iter().enumerate().map(|(i, &x)| if i < self.free_rank { x } else { x.rem_euclid(self.modulus(i)) }).collect())
    }

    pub fn elem(&self, v: &[i64]) -> Result<GroupElem, GroupError> {
        if v.len() != self.ngens() {
            return Err(GroupError::NotInGroup(v.to_vec(), self.to_string()));
        }
        Ok(self.reduce(v))
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        g.0.len() == self.ngens() && self.reduce(&g.0) == *g
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem(vec![0; self.ngens()])
    }

    pub fn gen(&self, i: usize) -> GroupElem {
        let mut v = vec![0; self.ngens()];
        v[i] = 1;
        self.reduce(&v)
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        let v: Vec<i64> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        self.reduce(&v)
    }

    pub fn sub(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        let v: Vec<i64> = a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect();
        self.reduce(&v)
    }

    pub fn neg(&self, a: &GroupElem) -> GroupElem {
        let v: Vec<i64> = a.0.iter().map(|x| -x).collect();
        self.reduce(&v)
    }

    pub fn times(&self, k: i64, a: &GroupElem) -> GroupElem {
        let v: Vec<i64> = a.0.iter().map(|x| k * x).collect();
        self.reduce(&v)
    }

    pub fn is_zero(&self, a: &GroupElem) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    /// Order of an element; None means infinite.
    pub fn element_order(&self, a: &GroupElem) -> Option<u64> {
        let mut ord = 1u64;
        for (i, &x) in a.0.iter().enumerate() {
            if i < self.free_rank {
                if x != 0 {
                    return None;
                }
            } else {
                let t = self.modulus(i);
                ord = ord.lcm(&((t / x.gcd(&t)) as u64));
            }
        }
        Some(ord)
    }

    /// All elements in lexicographic coordinate order (finite groups only).
    pub fn elements(&self) -> Result<Vec<GroupElem>, GroupError> {
        if !self.is_finite() {
            return Err(GroupError::Infinite(self.to_string()));
        }
        let mut out = vec![vec![]];
        for &t in &self.torsion {
            out = out.into_iter().flat_map(|p: Vec<i64>| (0..t).map(move |x| [p.clone(), vec![x]].concat())).collect();
        }
        Ok(out.into_iter().map(GroupElem).collect())
    }

    /// Elements of the finite subgroup generated by `gens`, or None once it
    /// exceeds `limit` elements.
    pub fn span(&self, gens: &[GroupElem], limit: usize) -> Option<BTreeSet<GroupElem>> {
        let mut set = BTreeSet::from([self.zero()]);
        let mut frontier = vec![self.zero()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if set.insert(y.clone()) {
                    if set.len() > limit {
                        return None;
                    }
                    frontier.push(y);
                }
            }
        }
        Some(set)
    }

    /// Invariant-factor form of this group.
    pub fn iso_type(&self) -> AbGroup {
        let n = self.torsion.len();
        let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { self.torsion[i] } else { 0 }).collect()).collect();
        let p = Presentation::new(n, &m);
        AbGroup { free_rank: self.free_rank + p.group.free_rank, torsion: p.group.torsion }
    }

    /// Elementary-divisor form, e.g. Z2^3 x Z3 rather than Z2^2 x Z6.
    pub fn primary_form(&self) -> AbGroup {
        let mut parts = Vec::new();
        for &t in &self.iso_type().torsion {
            let (mut t, mut p) = (t, 2);
            while t > 1 {
                let mut q = 1;
                while t % p == 0 {
                    t /= p;
                    q *= p;
                }
                if q > 1 {
                    parts.push((p, q));
                }
                p += 1;
            }
        }
        parts.sort();
        AbGroup { free_rank: self.free_rank, torsion: parts.into_iter().map(|(_, q)| q).collect() }
    }

    pub fn is_isomorphic(&self, o: &AbGroup) -> bool {
        self.iso_type() == o.iso_type()
    }

    /// Whether some surjection from `self` onto `target` exists.
    pub fn surjects_onto(&self, target: &AbGroup) -> bool {
        let a = self.iso_type();
        let b = target.iso_type();
        if b.free_rank > a.free_rank {
            return false;
        }
        let spare = a.free_rank - b.free_rank;
        let mut primes = BTreeSet::new();
        for &t in a.torsion.iter().chain(&b.torsion) {
            let mut t = t;
            let mut p = 2;
            while t > 1 {
                while t % p == 0 {
                    primes.insert(p);
                    t /= p;
                }
                p += 1;
            }
        }
        for p in primes {
            let mut pk = p;
            loop {
                let cnt = |g: &AbGroup| g.torsion.iter().filter(|&&t| t % pk == 0).count();
                let (ca, cb) = (cnt(&a), cnt(&b));
                if ca == 0 && cb == 0 {
                    break;
                }
                if cb > ca + spare {
                    return false;
                }
                pk *= p;
            }
        }
        true
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == t {
                j += 1;
            }
            parts.push(if j - i > 1 { format!("Z{}^{}", t, j - i) } else { format!("Z{t}") });
            i = j;
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Smith normal form U·M·V = D, with V⁻¹ carried along.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: Vec<Vec<i64>>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub v_inv: Vec<Vec<i64>>,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i64> {
        let k = self.d.len().min(self.v.len());
        (0..k).map(|i| self.d[i][i]).collect()
    }
}

fn ident(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn narrow(m: Vec<Vec<i128>>) -> Vec<Vec<i64>> {
    m.into_iter().map(|r| r.into_iter().map(|x| i64::try_from(x).expect("Smith form entry overflow")).collect()).collect()
}

/// Smith normal form of an r×c integer matrix (`cols` given so that r = 0 works).
pub fn smith_normal_form(m: &[Vec<i64>], cols: usize) -> Snf {
    let r = m.len();
    let c = cols;
    let mut d: Vec<Vec<i128>> = m.iter().map(|row| row.iter().map(|&x| x as i128).collect()).collect();
    let mut u = ident(r);
    let mut v = ident(c);
    let mut vi = ident(c);

    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            vi.swap(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                let q = d[i][t] / d[t][t];
                if q != 0 {
                    for j in 0..c {
                        d[i][j] -= q * d[t][j];
                    }
                    for j in 0..r {
                        u[i][j] -= q * u[t][j];
                    }
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..c {
                let q = d[t][j] / d[t][t];
                if q != 0 {
                    for row in d.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for k in 0..c {
                        vi[t][k] += q * vi[j][k];
                    }
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| d[i][j] % d[t][t] != 0));
            match bad {
                Some(i) => {
                    for j in 0..c {
                        d[t][j] += d[i][j];
                    }
                    for j in 0..r {
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for j in 0..c {
                d[t][j] = -d[t][j];
            }
            for j in 0..r {
                u[t][j] = -u[t][j];
            }
        }
    }
    Snf { d: narrow(d), u: narrow(u), v: narrow(v), v_inv: narrow(vi) }
}

/// The group Z^n / ⟨relations⟩ in canonical form, with the coordinate change.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub group: AbGroup,
    pub v: Vec<Vec<i64>>,
    pub v_inv: Vec<Vec<i64>>,
    /// Columns of xV kept as free coordinates, then as torsion coordinates.
    pub kept: Vec<usize>,
}

impl Presentation {
    pub fn new(n: usize, relations: &[Vec<i64>]) -> Presentation {
        let snf = smith_normal_form(relations, n);
        let diag = snf.diagonal();
        let dval = |i: usize| if i < diag.len() { diag[i] } else { 0 };
        let free: Vec<usize> = (0..n).filter(|&i| dval(i) == 0).collect();
        let tors: Vec<usize> = (0..n).filter(|&i| dval(i) > 1).collect();
        let group = AbGroup { free_rank: free.len(), torsion: tors.iter().map(|&i| dval(i)).collect() };
        let kept = free.into_iter().chain(tors).collect();
        Presentation { group, v: snf.v, v_inv: snf.v_inv, kept }
    }

    /// Image of x ∈ Z^n in the canonical group.
    pub fn map(&self, x: &[i64]) -> GroupElem {
        let n = self.v.len();
        let y: Vec<i64> = self.kept.iter().map(|&k| (0..n).map(|i| x[i] * self.v[i][k]).sum()).collect();
        self.group.reduce(&y)
    }

    /// A preimage in Z^n of the canonical generator i.
    pub fn lift_gen(&self, i: usize) -> Vec<i64> {
        self.v_inv[self.kept[i]].clone()
    }
}

/// Homomorphism given by the images of the domain's coordinate generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    pub domain: AbGroup,
    pub codomain: AbGroup,
    pub images: Vec<GroupElem>,
}

impl GroupHom {
    pub fn new(domain: &AbGroup, codomain: &AbGroup, images: Vec<GroupElem>) -> Result<GroupHom, GroupError> {
        if images.len() != domain.ngens() {
            return Err(GroupError::Mismatch(domain.to_string(), format!("{} images", images.len())));
        }
        for (i, g) in images.iter().enumerate() {
            if !codomain.contains(g) {
                return Err(GroupError::NotInGroup(g.0.clone(), codomain.to_string()));
            }
            let m = domain.modulus(i);
            if m != 0 && !codomain.is_zero(&codomain.times(m, g)) {
                return Err(GroupError::NotWellDefined(i));
            }
        }
        Ok(GroupHom { domain: domain.clone(), codomain: codomain.clone(), images })
    }

    pub fn identity(g: &AbGroup) -> GroupHom {
        GroupHom { domain: g.clone(), codomain: g.clone(), images: (0..g.ngens()).map(|i| g.gen(i)).collect() }
    }

    pub fn apply(&self, x: &GroupElem) -> GroupElem {
        let mut acc = vec![0i64; self.codomain.ngens()];
        for (c, img) in x.0.iter().zip(&self.images) {
            for (a, b) in acc.iter_mut().zip(&img.0) {
                *a += c * b;
            }
        }
        self.codomain.reduce(&acc)
    }

    pub fn compose(&self, after: &GroupHom) -> GroupHom {
        GroupHom { domain: self.domain.clone(), codomain: after.codomain.clone(), images: self.images.iter().map(|g| after.apply(g)).collect() }
    }
}

/// Relation rows of the presentation coordinates of G.
fn torsion_rows(g: &AbGroup) -> Vec<Vec<i64>> {
    (g.free_rank..g.ngens())
        .map(|i| {
            let mut r = vec![0; g.ngens()];
            r[i] = g.modulus(i);
            r
        })
        .collect()
}

/// The subgroup generated by `elems`, canonically presented, with its inclusion.
pub fn subgroup_generated(g: &AbGroup, elems: &[GroupElem]) -> Result<(AbGroup, GroupHom), GroupError> {
    for e in elems {
        if !g.contains(e) {
            return Err(GroupError::NotInGroup(e.0.clone(), g.to_string()));
        }
    }
    let k = elems.len();
    let mut s: Vec<Vec<i64>> = elems.iter().map(|e| e.0.clone()).collect();
    s.extend(torsion_rows(g));
    let snf = smith_normal_form(&s, g.ngens());
    let rank = snf.diagonal().iter().filter(|&&x| x != 0).count();
    let rels: Vec<Vec<i64>> = snf.u[rank..].iter().map(|row| row[..k].to_vec()).collect();
    let p = Presentation::new(k, &rels);
    let images = (0..p.group.ngens())
        .map(|i| {
            let c = p.lift_gen(i);
            let mut acc = vec![0i64; g.ngens()];
            for (cj, e) in c.iter().zip(elems) {
                for (a, b) in acc.iter_mut().zip(&e.0) {
                    *a += cj * b;
                }
            }
            g.reduce(&acc)
        })
        .collect();
    let inc = GroupHom { domain: p.group.clone(), codomain: g.clone(), images };
    Ok((p.group, inc))
}

/// G / ⟨elems⟩ with the projection.
pub fn quotient(g: &AbGroup, elems: &[GroupElem]) -> Result<(AbGroup, GroupHom), GroupError> {
    for e in elems {
        if !g.contains(e) {
            return Err(GroupError::NotInGroup(e.0.clone(), g.to_string()));
        }
    }
    let mut rels = torsion_rows(g);
    rels.extend(elems.iter().map(|e| e.0.clone()));
    let p = Presentation::new(g.ngens(), &rels);
    let images = (0..g.ngens()).map(|i| p.map(&g.gen(i).0)).collect();
    let proj = GroupHom { domain: g.clone(), codomain: p.group.clone(), images };
    Ok((p.group, proj))
}

/// χ(e_i) = ζ_N^((N/t_i)·a_i) in presentation coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    pub a: Vec<i64>,
}

impl Character {
    /// Exponent k with χ(x) = ζ_N^k, in [0, N).
    pub fn exponent(&self, g: &AbGroup, n: u32, x: &GroupElem) -> i64 {
        let n = n as i64;
        let mut k = 0i64;
        for (i, (&ai, &xi)) in self.a.iter().zip(&x.0).enumerate() {
            k += (n / g.modulus(i)) * ai * xi;
        }
        k.rem_euclid(n)
    }

    pub fn eval(&self, g: &AbGroup, f: &Field, x: &GroupElem) -> Cyc {
        Cyc::zeta_pow(f, self.exponent(g, f.conductor(), x))
    }

    pub fn mul(&self, g: &AbGroup, o: &Character) -> Character {
        Character { a: g.reduce(&self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect::<Vec<_>>()).0 }
    }
}

/// All characters of a finite group with values in Q(ζ_N).
pub fn characters(g: &AbGroup, f: &Field) -> Result<Vec<Character>, GroupError> {
    if !g.is_finite() {
        return Err(GroupError::Infinite(g.to_string()));
    }
    let n = f.conductor();
    if g.torsion.iter().any(|&t| n as i64 % t != 0) {
        return Err(GroupError::Exponent { exp: g.exponent().unwrap_or(0), n });
    }
    Ok(g.elements()?.into_iter().map(|e| Character { a: e.0 }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&[vec![2, 4], vec![6, 8]], 2);
        assert_eq!(s.diagonal(), vec![2, 4]);
        let z = smith_normal_form(&[vec![0, 0], vec![0, 0]], 2);
        assert_eq!(z.diagonal(), vec![0, 0]);
        let e = smith_normal_form(&[vec![1, 0], vec![0, 1]], 2);
        assert_eq!(e.u, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn canonical_groups() {
        assert_eq!(make_group(0, &[3, 3]).unwrap().to_string(), "Z3^2");
        assert_eq!(make_group(0, &[2, 2, 2, 3]).unwrap().torsion, vec![2, 2, 6]);
        assert_eq!(make_group(0, &[]).unwrap(), AbGroup::trivial());
        assert!(make_group(0, &[1]).is_err());
    }

    #[test]
    fn orders() {
        let g = AbGroup::presented(1, &[3]).unwrap();
        assert_eq!(g.element_order(&g.reduce(&[1, 0])), None);
        let h = AbGroup::presented(0, &[4, 6]).unwrap();
        assert_eq!(h.element_order(&h.reduce(&[2, 3])), Some(2));
    }

    #[test]
    fn subgroups_and_quotients() {
        let g = AbGroup::presented(0, &[3, 3, 3]).unwrap();
        let (h, inc) = subgroup_generated(&g, &[g.gen(2)]).unwrap();
        assert_eq!(h.to_string(), "Z3");
        assert_eq!(inc.apply(&h.gen(0)), g.gen(2));
        let (q, _) = quotient(&g, &[g.gen(2)]).unwrap();
        assert_eq!(q.to_string(), "Z3^2");
        let g2 = AbGroup::presented(0, &[4, 2]).unwrap();
        let (h2, _) = subgroup_generated(&g2, &[g2.reduce(&[2, 0])]).unwrap();
        assert_eq!(h2.to_string(), "Z2");
    }

    #[test]
    fn surjections() {
        let z3c = make_group(0, &[3, 3, 3]).unwrap();
        let z2c3 = make_group(0, &[2, 2, 2, 3]).unwrap();
        let zz3 = make_group(2, &[3]).unwrap();
        assert!(!z3c.surjects_onto(&z2c3));
        assert!(!z2c3.surjects_onto(&zz3));
        assert!(zz3.surjects_onto(&z3c));
        assert!(z3c.surjects_onto(&make_group(0, &[3, 3]).unwrap()));
    }
}
