//! Exact dense matrices and an incremental sparse row echelon form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::scalar::{Field, Scalar};

/// Dense row-major matrix over a fixed field. Vectors act from the left: `x * M`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Matrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix {
            field,
            rows: n,
            cols,
            data,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Scalar> {
        self.row(i).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![self.field.zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let m = self.get(i, j);
                if !m.is_zero() {
                    *o += &(xi * m);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend(self.row(i).iter().cloned());
            data.extend(other.row(i).iter().cloned());
        }
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    pub fn from_sparse_rows(field: Field, cols: usize, rows: &[SparseVec]) -> Matrix {
        Matrix::from_rows(field, cols, rows.iter().map(|r| r.to_dense(field, cols)).collect())
    }

    /// Rows `idx` of `self`, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_rows(self.field, self.cols, idx.iter().map(|i| self.row_vec(*i)).collect())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inverse().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let sub = &factor * m.get(r, j);
                    if !sub.is_zero() {
                        let v = m.get(i, j) - &sub;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Basis (as rows) of `{ x : M x^T = 0 }`.
    pub fn right_kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f);
            }
            basis.push(v);
        }
        Matrix::from_rows(self.field, self.cols, basis)
    }

    /// Basis (as rows) of `{ x : x M = 0 }`.
    pub fn left_kernel(&self) -> Matrix {
        self.transpose().right_kernel()
    }

    /// Basis of the row space in reduced echelon form.
    pub fn row_space(&self) -> Matrix {
        let (r, pivots) = self.rref();
        r.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Sparse vector: sorted `(index, nonzero value)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec::default()
    }

    pub fn from_map(map: BTreeMap<usize, Scalar>) -> SparseVec {
        SparseVec {
            entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_dense(v: &[Scalar]) -> SparseVec {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn unit(i: usize, one: Scalar) -> SparseVec {
        SparseVec {
            entries: vec![(i, one)],
        }
    }

    pub fn to_dense(&self, field: Field, n: usize) -> Vec<Scalar> {
        let mut v = vec![field.zero(); n];
        for (i, x) in &self.entries {
            v[*i] = x.clone();
        }
        v
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        let v = c * y;
                        if !v.is_zero() {
                            out.push((*j, v));
                        }
                        b.next();
                    } else {
                        let v = x + &(c * y);
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    let v = c * y;
                    if !v.is_zero() {
                        out.push((*j, v));
                    }
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    /// Reindexes entries through `map`, summing collisions.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, x) in &self.entries {
            let j = map(*i);
            match acc.get_mut(&j) {
                Some(v) => *v += x,
                None => {
                    acc.insert(j, x.clone());
                }
            }
        }
        SparseVec::from_map(acc)
    }
}

/// Incrementally maintained row echelon form of a subspace of `k^n`.
///
/// Every stored row has a leading coefficient 1 at its pivot, and no row has a
/// nonzero entry at the pivot of an earlier row. Reduction against the stored
/// rows yields coordinates in terms of those rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(field: Field) -> Echelon {
        Echelon {
            field,
            rows: Vec::new(),
            pivot_row: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.leading().expect("nonzero row"))
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Returns `(coefficients by row, remainder)` with `v = sum c_r row_r + remainder`
    /// and the remainder vanishing at every pivot.
    pub fn reduce(&self, v: &SparseVec) -> (Vec<(usize, Scalar)>, SparseVec) {
        let mut work = v.clone();
        let mut coeffs = Vec::new();
        let mut cursor = 0;
        loop {
            let next = work
                .entries
                .iter()
                .find(|(i, _)| *i >= cursor && self.pivot_row.contains_key(i))
                .map(|(i, x)| (*i, x.clone()));
            let Some((col, c)) = next else { break };
            let r = self.pivot_row[&col];
            work = work.axpy(&-&c, &self.rows[r]);
            coeffs.push((r, c));
            cursor = col + 1;
        }
        (coeffs, work)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).1.is_zero()
    }

    /// Adds `v` to the span. Returns the new row index when `v` was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let (_, rem) = self.reduce(v);
        let lead = rem.leading()?;
        let inv = rem.entries[0].1.inverse().expect("nonzero");
        let row = rem.scale(&inv);
        let idx = self.rows.len();
        self.rows.push(row);
        self.pivot_row.insert(lead, idx);
        Some(idx)
    }

    /// Coordinates of `v` in terms of the stored rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let (coeffs, rem) = self.reduce(v);
        if !rem.is_zero() {
            return None;
        }
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (r, c) in coeffs {
            match acc.get_mut(&r) {
                Some(x) => *x += &c,
                None => {
                    acc.insert(r, c);
                }
            }
        }
        Some(SparseVec::from_map(acc))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// The stored rows brought to reduced form, sorted by pivot.
    pub fn reduced_rows(&self) -> Vec<SparseVec> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r].leading()));
        let mut done: HashMap<usize, SparseVec> = HashMap::new();
        for r in order {
            let lead = self.rows[r].leading().expect("nonzero row");
            let mut row = self.rows[r].clone();
            let hits: Vec<(usize, Scalar)> = row
                .entries
                .iter()
                .filter(|(i, _)| *i != lead && done.contains_key(i))
                .map(|(i, x)| (*i, x.clone()))
                .collect();
            for (col, c) in hits {
                row = row.axpy(&-&c, &done[&col]);
            }
            done.insert(lead, row);
        }
        let mut rows: Vec<SparseVec> = done.into_values().collect();
        rows.sort_by_key(|r| r.leading());
        rows
    }

    /// Basis of the solutions `x in k^n` of `r . x = 0` for every stored row `r`.
    pub fn nullspace(&self, n: usize) -> Vec<SparseVec> {
        let reduced = self.reduced_rows();
        let one = self.field.one();
        let mut basis = Vec::new();
        for f in (0..n).filter(|c| !self.is_pivot(*c)) {
            let mut acc = BTreeMap::new();
            acc.insert(f, one.clone());
            for row in &reduced {
                if let Some(x) = row.get(f) {
                    acc.insert(row.leading().expect("nonzero row"), -x);
                }
            }
            basis.push(SparseVec::from_map(acc));
        }
        basis
    }
}

/// Kernel of the linear map sending the `i`-th unit vector to `images[i]`,
/// where images live in `k^m`.
pub fn kernel_of(field: Field, images: &[SparseVec], m: usize) -> Vec<SparseVec> {
    let one = field.one();
    let mut ech = Echelon::new(field);
    let mut kernel = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let aug = img.axpy(&one, &SparseVec::unit(m + i, one.clone()));
        let (_, rem) = ech.reduce(&aug);
        if rem.leading().is_some_and(|l| l >= m) {
            kernel.push(rem.remap(|j| j - m));
        }
        ech.insert(&aug);
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Matrix {
        let f = Field::Rationals;
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            f,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|x| f.from_i64(*x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernels() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.right_kernel();
        assert_eq!(k.rows(), 1);
        assert!(m.mul(&k.transpose()).is_zero());
        let lk = m.left_kernel();
        assert_eq!(lk.rows(), 1);
        assert!(lk.mul(&m).is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let m = q(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(Field::Rationals, 2));
        assert!(q(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn echelon_coordinates() {
        let f = Field::prime(5).unwrap();
        let v = |xs: &[i64]| SparseVec::from_dense(&xs.iter().map(|x| f.from_i64(*x)).collect::<Vec<_>>());
        let mut e = Echelon::new(f);
        assert!(e.insert(&v(&[0, 1, 2, 0])).is_some());
        assert!(e.insert(&v(&[1, 1, 0, 3])).is_some());
        assert!(e.insert(&v(&[1, 2, 2, 3])).is_none());
        let target = v(&[2, 3, 2, 1]);
        let c = e.coordinates(&target).unwrap();
        let mut rebuilt = SparseVec::new();
        for (r, x) in c.entries() {
            rebuilt = rebuilt.axpy(x, &e.rows()[*r]);
        }
        assert_eq!(rebuilt, target);
        assert!(e.coordinates(&v(&[0, 0, 0, 1])).is_none());
    }

    #[test]
    fn nullspace_and_map_kernel() {
        let f = Field::Rationals;
        let v = |xs: &[i64]| SparseVec::from_dense(&xs.iter().map(|x| f.from_i64(*x)).collect::<Vec<_>>());
        let mut e = Echelon::new(f);
        e.insert(&v(&[1, 2, 0, 1]));
        e.insert(&v(&[0, 1, 1, 1]));
        let null = e.nullspace(4);
        assert_eq!(null.len(), 2);
        for x in &null {
            for r in e.rows() {
                let dot = r.entries().iter().fold(f.zero(), |acc, (i, c)| {
                    acc + c * &x.get(*i).cloned().unwrap_or(f.zero())
                });
                assert!(dot.is_zero());
            }
        }
        let images = [v(&[1, 0]), v(&[2, 0]), v(&[0, 1]), v(&[1, 1])];
        let ker = kernel_of(f, &images, 2);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            let mut img = SparseVec::new();
            for (i, c) in k.entries() {
                img = img.axpy(c, &images[*i]);
            }
            assert!(img.is_zero());
        }
    }
}
