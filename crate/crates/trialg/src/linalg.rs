//! Exact linear algebra over a cyclotomic field: sparse vectors, small dense
//! matrices and an incremental echelon builder.

use std::collections::{BTreeMap, HashMap};

use crate::scalars::{Cyc, Field};

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SVec = Vec<(usize, Cyc)>;

pub fn sv_get(v: &[(usize, Cyc)], i: usize) -> Option<&Cyc> {
    v.binary_search_by_key(&i, |e| e.0).ok().map(|k| &v[k].1)
}

/// a + c·b
pub fn sv_axpy(a: &[(usize, Cyc)], c: &Cyc, b: &[(usize, Cyc)]) -> SVec {
    if c.is_zero() {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let s = &a[i].1 + &(c * &b[j].1);
            if !s.is_zero() {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sv_add(a: &[(usize, Cyc)], b: &[(usize, Cyc)]) -> SVec {
    match a.first().or(b.first()) {
        None => Vec::new(),
        Some((_, x)) => sv_axpy(a, &Cyc::one(x.field()), b),
    }
}

pub fn sv_sub(a: &[(usize, Cyc)], b: &[(usize, Cyc)]) -> SVec {
    match a.first().or(b.first()) {
        None => Vec::new(),
        Some((_, x)) => sv_axpy(a, &-Cyc::one(x.field()), b),
    }
}

pub fn sv_scale(c: &Cyc, a: &[(usize, Cyc)]) -> SVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, x)| (*i, c * x)).collect()
}

pub fn sv_from_dense(v: &[Cyc]) -> SVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn sv_to_dense(v: &[(usize, Cyc)], n: usize, f: &Field) -> Vec<Cyc> {
    let mut d = vec![Cyc::zero(f); n];
    for (i, x) in v {
        d[*i] = x.clone();
    }
    d
}

pub fn sv_unit(i: usize, f: &Field) -> SVec {
    vec![(i, Cyc::one(f))]
}

pub fn sv_dot(a: &[(usize, Cyc)], b: &[(usize, Cyc)], f: &Field) -> Cyc {
    let mut s = Cyc::zero(f);
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].0 < b[j].0 {
            i += 1;
        } else if b[j].0 < a[i].0 {
            j += 1;
        } else {
            s += &(&a[i].1 * &b[j].1);
            i += 1;
            j += 1;
        }
    }
    s
}

/// Accumulator for sums of many sparse terms.
#[derive(Default)]
pub struct Acc {
    m: BTreeMap<usize, Cyc>,
}

impl Acc {
    pub fn new() -> Acc {
        Acc { m: BTreeMap::new() }
    }
    pub fn add(&mut self, i: usize, c: &Cyc) {
        if c.is_zero() {
            return;
        }
        match self.m.get_mut(&i) {
            Some(x) => *x += c,
            None => {
                self.m.insert(i, c.clone());
            }
        }
    }
    pub fn add_scaled(&mut self, c: &Cyc, v: &[(usize, Cyc)]) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v {
            self.add(*i, &(c * x));
        }
    }
    pub fn add_vec(&mut self, v: &[(usize, Cyc)]) {
        for (i, x) in v {
            self.add(*i, x);
        }
    }
    pub fn finish(self) -> SVec {
        self.m.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }
}

/// Dense matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Cyc>,
}

impl Mat {
    pub fn zeros(f: &Field, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Cyc::zero(f); rows * cols] }
    }

    pub fn identity(f: &Field, n: usize) -> Mat {
        let mut m = Mat::zeros(f, n, n);
        for i in 0..n {
            m.data[i * n + i] = Cyc::one(f);
        }
        m
    }

    pub fn from_rows(f: &Field, rows: &[Vec<Cyc>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Mat::zeros(f, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            m.data[i * c..(i + 1) * c].clone_from_slice(row);
        }
        m
    }

    /// Matrix whose columns are the given sparse vectors.
    pub fn from_columns(f: &Field, rows: usize, cols: &[SVec]) -> Mat {
        let mut m = Mat::zeros(f, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        self.data[0].field()
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyc {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyc) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn row_sv(&self, i: usize) -> SVec {
        sv_from_dense(&self.data[i * self.cols..(i + 1) * self.cols])
    }

    pub fn col_sv(&self, j: usize) -> SVec {
        (0..self.rows).filter(|&i| !self.get(i, j).is_zero()).map(|i| (i, self.get(i, j).clone())).collect()
    }

    /// Row-major flattening as a sparse vector.
    pub fn flat(&self) -> SVec {
        sv_from_dense(&self.data)
    }

    pub fn from_flat(f: &Field, rows: usize, cols: usize, v: &[(usize, Cyc)]) -> Mat {
        let mut m = Mat::zeros(f, rows, cols);
        for (i, x) in v {
            m.data[*i] = x.clone();
        }
        m
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let f = self.field().clone();
        let mut out = Mat::zeros(&f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.data[i * o.cols + j] += &(a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Cyc) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn commutator(&self, o: &Mat) -> Mat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn transpose(&self) -> Mat {
        let f = self.field().clone();
        let mut t = Mat::zeros(&f, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn trace(&self) -> Cyc {
        let mut s = Cyc::zero(self.field());
        for i in 0..self.rows.min(self.cols) {
            s += self.get(i, i);
        }
        s
    }

    pub fn apply(&self, v: &[Cyc]) -> Vec<Cyc> {
        let f = self.field().clone();
        (0..self.rows)
            .map(|i| {
                let mut s = Cyc::zero(&f);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        s += &(a * x);
                    }
                }
                s
            })
            .collect()
    }

    pub fn apply_sv(&self, v: &[(usize, Cyc)]) -> SVec {
        let mut acc = Acc::new();
        for (j, x) in v {
            for i in 0..self.rows {
                let a = self.get(i, *j);
                if !a.is_zero() {
                    acc.add(i, &(a * x));
                }
            }
        }
        acc.finish()
    }

    /// Reduced row echelon form; returns pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in 0..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let m = self.get(i, c).clone();
                for j in 0..self.cols {
                    let rj = self.get(r, j);
                    if rj.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j) - &(&m * rj);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    pub fn det(&self) -> Cyc {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let f = self.field().clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut d = Cyc::one(&f);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return Cyc::zero(&f) };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                d = -d;
            }
            let piv = m.get(c, c).clone();
            d *= &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let k = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &(&k * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        d
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let f = self.field().clone();
        let mut aug = Mat::zeros(&f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Cyc::one(&f));
        }
        let piv = aug.rref_in_place();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        let mut inv = Mat::zeros(&f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Basis of the right null space.
    pub fn kernel(&self) -> Vec<SVec> {
        let rows: Vec<SVec> = (0..self.rows).map(|i| self.row_sv(i)).collect();
        kernel(self.field(), &rows, self.cols)
    }
}

/// Semi-echelon basis of a growing subspace of F^dim. Each stored row has a
/// leading 1 at its pivot and no entries before it; optionally records every
/// row as a combination of the inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    dim: usize,
    rows: Vec<SVec>,
    pivot_of: HashMap<usize, usize>,
    track: Option<Vec<SVec>>,
    inserted: usize,
}

impl Echelon {
    pub fn new(field: &Field, dim: usize) -> Echelon {
        Echelon { field: field.clone(), dim, rows: Vec::new(), pivot_of: HashMap::new(), track: None, inserted: 0 }
    }

    pub fn tracking(field: &Field, dim: usize) -> Echelon {
        let mut e = Echelon::new(field, dim);
        e.track = Some(Vec::new());
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Residual of v after reduction, and the combination of stored rows used.
    fn reduce_with(&self, v: &[(usize, Cyc)]) -> (SVec, Vec<(usize, Cyc)>) {
        let mut v = v.to_vec();
        let mut used = Vec::new();
        let mut pos = 0;
        while pos < v.len() {
            let (k, c) = (v[pos].0, v[pos].1.clone());
            if let Some(&r) = self.pivot_of.get(&k) {
                v = sv_axpy(&v, &-&c, &self.rows[r]);
                used.push((r, c));
            } else {
                pos += 1;
            }
        }
        (v, used)
    }

    pub fn reduce(&self, v: &[(usize, Cyc)]) -> SVec {
        self.reduce_with(v).0
    }

    pub fn contains(&self, v: &[(usize, Cyc)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts v; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &[(usize, Cyc)]) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (res, used) = self.reduce_with(v);
        if res.is_empty() {
            return false;
        }
        let lead = res[0].1.inv().expect("nonzero lead");
        let row = sv_scale(&lead, &res);
        if let Some(t) = &mut self.track {
            let mut acc = Acc::new();
            acc.add(idx, &Cyc::one(&self.field));
            for (r, c) in &used {
                acc.add_scaled(&-c, &t[*r]);
            }
            let combo = sv_scale(&lead, &acc.finish());
            t.push(combo);
        }
        self.pivot_of.insert(row[0].0, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Coefficients of v in terms of the inserted vectors (tracking only).
    pub fn express(&self, v: &[(usize, Cyc)]) -> Option<SVec> {
        let t = self.track.as_ref().expect("express needs a tracking echelon");
        let (res, used) = self.reduce_with(v);
        if !res.is_empty() {
            return None;
        }
        let mut acc = Acc::new();
        for (r, c) in &used {
            acc.add_scaled(c, &t[*r]);
        }
        Some(acc.finish())
    }

    pub fn rows(&self) -> &[SVec] {
        &self.rows
    }

    /// Fully reduced basis sorted by pivot.
    pub fn rref(&self) -> Vec<SVec> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r][0].0));
        let mut done: HashMap<usize, SVec> = HashMap::new();
        for r in order {
            let mut v = self.rows[r].clone();
            let mut pos = 1;
            while pos < v.len() {
                let (k, c) = (v[pos].0, v[pos].1.clone());
                if let Some(w) = done.get(&k) {
                    v = sv_axpy(&v, &-&c, w);
                } else {
                    pos += 1;
                }
            }
            done.insert(v[0].0, v);
        }
        let mut out: Vec<SVec> = done.into_values().collect();
        out.sort_by_key(|v| v[0].0);
        out
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r[0].0).collect();
        p.sort_unstable();
        p
    }
}

/// Null space of the system whose equations are the given rows.
pub fn kernel(f: &Field, equations: &[SVec], n: usize) -> Vec<SVec> {
    let mut e = Echelon::new(f, n);
    for row in equations {
        if !row.is_empty() {
            e.insert(row);
        }
    }
    let rref = e.rref();
    let pivots: HashMap<usize, usize> = rref.iter().enumerate().map(|(i, r)| (r[0].0, i)).collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains_key(c)) {
        let mut acc = Acc::new();
        acc.add(free, &Cyc::one(f));
        for r in &rref {
            if let Some(c) = sv_get(r, free) {
                acc.add(r[0].0, &-c);
            }
        }
        basis.push(acc.finish());
    }
    basis
}

/// One solution x of A x = b, equations given as (row, rhs) pairs.
pub fn solve(f: &Field, equations: &[(SVec, Cyc)], n: usize) -> Option<SVec> {
    let aug: Vec<SVec> = equations
        .iter()
        .map(|(r, b)| {
            let mut r = r.clone();
            if !b.is_zero() {
                r.push((n, -b));
            }
            r
        })
        .collect();
    let ker = kernel(f, &aug, n + 1);
    let w = ker.into_iter().find(|v| sv_get(v, n).is_some())?;
    let s = sv_get(&w, n).unwrap().inv().ok()?;
    Some(sv_scale(&s, &w).into_iter().filter(|(i, _)| *i < n).collect())
}

/// Rank of a family of sparse vectors.
pub fn rank_of(f: &Field, vecs: &[SVec], dim: usize) -> usize {
    let mut e = Echelon::new(f, dim);
    for v in vecs {
        e.insert(v);
    }
    e.rank()
}

/// Whether two families span the same subspace.
pub fn same_span(f: &Field, a: &[SVec], b: &[SVec], dim: usize) -> bool {
    let mut ea = Echelon::new(f, dim);
    for v in a {
        ea.insert(v);
    }
    let mut eb = Echelon::new(f, dim);
    for v in b {
        eb.insert(v);
    }
    ea.rank() == eb.rank() && b.iter().all(|v| ea.contains(v))
}

/// Basis of span(a) ∩ span(b).
pub fn intersection(f: &Field, a: &[SVec], b: &[SVec], dim: usize) -> Vec<SVec> {
    let mut ea = Echelon::new(f, dim);
    for v in a {
        ea.insert(v);
    }
    let mut eb = Echelon::new(f, dim);
    for v in b {
        eb.insert(v);
    }
    let (ra, rb) = (ea.rows().to_vec(), eb.rows().to_vec());
    // Σ c_i ra_i − Σ d_j rb_j = 0, unknowns (c, d)
    let mut cols: Vec<SVec> = ra.clone();
    cols.extend(rb.iter().map(|v| sv_scale(&-Cyc::one(f), v)));
    let mut rows = vec![Vec::new(); dim];
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            rows[*i].push((j, c.clone()));
        }
    }
    let ker = kernel(f, &rows, cols.len());
    let mut out = Echelon::new(f, dim);
    for k in ker {
        let mut acc = Acc::new();
        for (j, c) in k.iter().filter(|(j, _)| *j < ra.len()) {
            acc.add_scaled(c, &ra[*j]);
        }
        out.insert(&acc.finish());
    }
    out.rref()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::make_field;

    fn q(f: &Field, v: i64) -> Cyc {
        Cyc::from_i64(f, v)
    }

    #[test]
    fn inverse_and_det() {
        let f = make_field(12).unwrap();
        let m = Mat::from_rows(&f, &[vec![q(&f, 2), q(&f, 1)], vec![q(&f, 7), q(&f, 4)]]);
        assert_eq!(m.det(), q(&f, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(&f, 2));
        let sing = Mat::from_rows(&f, &[vec![q(&f, 1), q(&f, 2)], vec![q(&f, 2), q(&f, 4)]]);
        assert!(sing.inverse().is_none());
        assert_eq!(sing.rank(), 1);
    }

    #[test]
    fn kernel_and_solve() {
        let f = make_field(12).unwrap();
        let m = Mat::from_rows(&f, &[vec![q(&f, 1), q(&f, 1), q(&f, 1)]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply_sv(v).is_empty());
        }
        let eqs = vec![(vec![(0, q(&f, 1)), (1, q(&f, 1))], q(&f, 3)), (vec![(1, q(&f, 2))], q(&f, 4))];
        let x = solve(&f, &eqs, 2).unwrap();
        assert_eq!(x, vec![(0, q(&f, 1)), (1, q(&f, 2))]);
    }

    #[test]
    fn tracking_expresses_inputs() {
        let f = make_field(3).unwrap();
        let w = Cyc::omega(&f).unwrap();
        let mut e = Echelon::tracking(&f, 3);
        let a = vec![(0, q(&f, 1)), (2, w.clone())];
        let b = vec![(1, q(&f, 1)), (2, q(&f, 1))];
        assert!(e.insert(&a));
        assert!(e.insert(&b));
        assert!(!e.insert(&sv_add(&a, &b)));
        let target = sv_axpy(&sv_scale(&q(&f, 3), &a), &w, &b);
        let c = e.express(&target).unwrap();
        let mut back = Acc::new();
        if let Some(x) = sv_get(&c, 0) {
            back.add_scaled(x, &a);
        }
        if let Some(x) = sv_get(&c, 1) {
            back.add_scaled(x, &b);
        }
        if let Some(x) = sv_get(&c, 2) {
            back.add_scaled(x, &sv_add(&a, &b));
        }
        assert_eq!(back.finish(), target);
        assert!(e.express(&[(0, q(&f, 1))]).is_none());
    }
}
