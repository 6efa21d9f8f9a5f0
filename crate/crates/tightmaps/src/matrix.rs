//! Dense exact matrices and the linear algebra the rest of the crate needs.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_traits::Zero;

use crate::scalar::{Scalar, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    /// Integer matrix, convenient in tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_i64(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, cols: &[Vec<Scalar>]) -> Self {
        Self::from_fn(n, cols.len(), |r, c| cols[c][r].clone())
    }

    /// Single entry `E_rc` scaled by `v`.
    pub fn unit(n: usize, r: usize, c: usize, v: Scalar) -> Self {
        let mut m = Self::zeros(n, n);
        m[(r, c)] = v;
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.data.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in add");
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sub");
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Mat {
        self.map(|x| -x)
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        if s.is_zero() {
            return Mat::zeros(self.rows, self.cols);
        }
        self.map(|x| if x.is_zero() { Scalar::zero() } else { x * s })
    }

    pub fn scale_q(&self, s: &Q) -> Mat {
        self.map(|x| x.scale_q(s))
    }

    /// In-place `self += s * o`.
    pub fn axpy(&mut self, s: &Scalar, o: &Mat) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in axpy");
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                *a += &(s * b);
            }
        }
    }

    /// Product, skipping zero entries of the left factor.
    #[allow(clippy::needless_range_loop)]
    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        let mut out = Mat::zeros(self.rows, o.cols);
        let o_rows: Vec<Vec<(usize, &Scalar)>> = (0..o.rows)
            .map(|k| {
                (0..o.cols)
                    .filter_map(|c| {
                        let v = &o.data[k * o.cols + c];
                        (!v.is_zero()).then_some((c, v))
                    })
                    .collect()
            })
            .collect();
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[r * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for &(c, b) in &o_rows[k] {
                    let idx = r * o.cols + c;
                    out.data[idx] += &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|r| {
                let mut s = Scalar::zero();
                for c in 0..self.cols {
                    let a = &self[(r, c)];
                    if !a.is_zero() && !v[c].is_zero() {
                        s += &(a * &v[c]);
                    }
                }
                s
            })
            .collect()
    }

    pub fn commutator(&self, o: &Mat) -> Mat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj(&self) -> Mat {
        self.map(Scalar::conj)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Scalar {
        let mut s = Scalar::zero();
        for i in 0..self.rows.min(self.cols) {
            s += &self[(i, i)];
        }
        s
    }

    /// `tr(self * o)` without forming the product.
    pub fn trace_mul(&self, o: &Mat) -> Scalar {
        assert_eq!((self.cols, self.rows), (o.rows, o.cols), "shape mismatch in trace_mul");
        let mut s = Scalar::zero();
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                let b = &o[(k, r)];
                if !a.is_zero() && !b.is_zero() {
                    s += &(a * b);
                }
            }
        }
        s
    }

    /// Largest entrywise [`Scalar::l1`] norm; zero iff the matrix is zero.
    pub fn residual(&self) -> Q {
        let mut m = Q::zero();
        for x in &self.data {
            if !x.is_zero() {
                let v = x.l1();
                if v > m {
                    m = v;
                }
            }
        }
        m
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(Scalar::is_real)
    }

    pub fn block_diag(blocks: &[Mat]) -> Mat {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for (r, c, v) in b.entries() {
                out[(r0 + r, c0 + c)] = v.clone();
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * o.rows, self.cols * o.cols);
        for (r, c, a) in self.entries() {
            for (rr, cc, b) in o.entries() {
                out[(r * o.rows + rr, c * o.cols + cc)] = a * b;
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])].clone())
    }

    /// Writes `b` into `self` at offset `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)].clone();
            }
        }
    }

    /// `P^T M P` for the permutation sending basis vector `perm[k]` to slot `k`.
    pub fn permute(&self, perm: &[usize]) -> Mat {
        self.submatrix(perm, perm)
    }

    /// Columns reordered so that column `j` of the result is column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Mat {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, perm)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else { continue };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m[(row, col)].inv().expect("nonzero pivot");
            for c in col..m.cols {
                if !m[(row, c)].is_zero() {
                    m[(row, c)] = &m[(row, c)] * &inv;
                }
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for c in col..m.cols {
                        if !m[(row, c)].is_zero() {
                            let d = &f * &m[(row, c)];
                            m[(r, c)] -= &d;
                        }
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut prev = Scalar::one();
        let mut rank = 0;
        let mut col = 0;
        while rank < m.rows && col < m.cols {
            let Some(p) = (rank..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                col += 1;
                continue;
            };
            if p != rank {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, rank * m.cols + c);
                }
            }
            let piv = m[(rank, col)].clone();
            let prev_inv = prev.inv().expect("nonzero previous pivot");
            for r in rank + 1..m.rows {
                let f = m[(r, col)].clone();
                for c in col + 1..m.cols {
                    let v = &(&m[(r, c)] * &piv) - &(&f * &m[(rank, c)]);
                    m[(r, c)] = &v * &prev_inv;
                }
                m[(r, col)] = Scalar::zero();
            }
            prev = piv;
            rank += 1;
            col += 1;
        }
        rank
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(i, free)];
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Mat::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
    }

    /// One solution of `self x = b`, if any.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, v) in b.iter().enumerate() {
            aug[(i, self.cols)] = v.clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Incremental sparse row reduction over [`Scalar`].
///
/// Rows are reduced against existing pivots as they arrive, which keeps the
/// large but very sparse systems from commutant and intertwiner problems cheap.
#[derive(Clone, Debug)]
pub struct RowReducer {
    ncols: usize,
    rows: Vec<BTreeMap<usize, Scalar>>,
    pivot_row: BTreeMap<usize, usize>,
}

impl RowReducer {
    pub fn new(ncols: usize) -> Self {
        RowReducer { ncols, rows: Vec::new(), pivot_row: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut row: BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        let mut from = 0;
        loop {
            let next = row.range(from..).map(|(&c, _)| c).find(|c| self.pivot_row.contains_key(c));
            let Some(c) = next else { break };
            let f = row.remove(&c).expect("present");
            for (&cc, v) in &self.rows[self.pivot_row[&c]] {
                if cc == c {
                    continue;
                }
                let e = row.entry(cc).or_insert_with(Scalar::zero);
                *e -= &(&f * v);
                if e.is_zero() {
                    row.remove(&cc);
                }
            }
            from = c + 1;
        }
        row
    }

    /// Adds a row given as `(col, value)` pairs; returns true if it raised the rank.
    pub fn push(&mut self, entries: impl IntoIterator<Item = (usize, Scalar)>) -> bool {
        let mut row = BTreeMap::new();
        for (c, v) in entries {
            if v.is_zero() {
                continue;
            }
            let e = row.entry(c).or_insert_with(Scalar::zero);
            *e += &v;
            if e.is_zero() {
                row.remove(&c);
            }
        }
        let row = self.reduce(row);
        let Some((&p, lead)) = row.iter().next() else { return false };
        let inv = lead.inv().expect("nonzero lead");
        let row: BTreeMap<usize, Scalar> = row.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Whether a dense vector lies in the row span.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        let row: BTreeMap<usize, Scalar> =
            v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, x.clone())).collect();
        self.reduce(row).is_empty()
    }

    /// Basis of the common kernel of all pushed rows.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        // Back-substitute so each pivot row is free of other pivot columns.
        let mut order: Vec<usize> = self.pivot_row.keys().copied().collect();
        order.reverse();
        let mut full: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
        for p in order {
            let mut row = self.rows[self.pivot_row[&p]].clone();
            let later: Vec<usize> = row.keys().copied().filter(|c| *c != p && full.contains_key(c)).collect();
            for c in later {
                let f = row.remove(&c).expect("present");
                for (&cc, v) in &full[&c] {
                    if cc == c {
                        continue;
                    }
                    let e = row.entry(cc).or_insert_with(Scalar::zero);
                    *e -= &(&f * v);
                    if e.is_zero() {
                        row.remove(&cc);
                    }
                }
            }
            full.insert(p, row);
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|c| !self.pivot_row.contains_key(c)) {
            let mut v = vec![Scalar::zero(); self.ncols];
            v[free] = Scalar::one();
            for (&p, row) in &full {
                if let Some(x) = row.get(&free) {
                    v[p] = -x;
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Hermitian inner product `sum conj(a_i) b_i`.
pub fn hdot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut s = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &(&x.conj() * y);
        }
    }
    s
}

/// Column basis of the span of `vs` (a maximal independent subset, in order).
pub fn independent_subset(vs: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let Some(n) = vs.first().map(Vec::len) else { return Vec::new() };
    let mut red = RowReducer::new(n);
    let mut out = Vec::new();
    for v in vs {
        if red.push(v.iter().cloned().enumerate()) {
            out.push(v.clone());
        }
    }
    out
}

/// Congruence diagonalization of a Hermitian matrix: returns `P` and `d` with
/// `P* H P = diag(d)`, pivots in the order they were eliminated.
pub fn hermitian_diagonalize(h: &Mat) -> (Mat, Vec<Scalar>) {
    assert!(h.is_square(), "diagonalizing a non-square matrix");
    let n = h.rows();
    let mut a = h.clone();
    let mut p = Mat::identity(n);
    let mut active: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    // v_i <- v_i + c v_j
    let shear = |a: &mut Mat, p: &mut Mat, i: usize, j: usize, c: &Scalar| {
        for r in 0..n {
            let x = &a[(r, j)] * c;
            a[(r, i)] += &x;
            let y = &p[(r, j)] * c;
            p[(r, i)] += &y;
        }
        let cc = c.conj();
        for col in 0..n {
            let x = &a[(j, col)] * &cc;
            a[(i, col)] += &x;
        }
    };
    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !a[(i, i)].is_zero());
        let k = match pivot {
            Some(k) => k,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[(i, j)].is_zero());
                let Some((i, j)) = pair else { break };
                if a[(i, j)].re().is_zero() {
                    shear(&mut a, &mut p, i, j, &Scalar::i());
                } else {
                    shear(&mut a, &mut p, i, j, &Scalar::one());
                }
                i
            }
        };
        let dinv = a[(k, k)].inv().expect("nonzero pivot");
        for &r in &active {
            if r != k && !a[(k, r)].is_zero() {
                let t = &a[(k, r)] * &dinv;
                shear(&mut a, &mut p, r, k, &-t);
            }
        }
        order.push(k);
        active.retain(|&x| x != k);
    }
    order.extend(active);
    let d = order.iter().map(|&i| a[(i, i)].clone()).collect();
    (p.permute_columns(&order), d)
}

/// Inertia `(positive, negative, zero)` of a Hermitian matrix, by exact
/// congruence diagonalization.
pub fn hermitian_signature(h: &Mat) -> (usize, usize, usize) {
    let (_, d) = hermitian_diagonalize(h);
    let (mut pos, mut neg) = (0, 0);
    for x in &d {
        match x.sign() {
            Some(core::cmp::Ordering::Greater) => pos += 1,
            Some(core::cmp::Ordering::Less) => neg += 1,
            Some(core::cmp::Ordering::Equal) => {}
            None => panic!("hermitian_signature: non-real pivot"),
        }
    }
    (pos, neg, d.len() - pos - neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace_agree() {
        let m = Mat::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn inverse_round_trips() {
        let m = Mat::from_i64(&[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert!(Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        let h = Mat::from_rows(vec![
            vec![Scalar::zero(), Scalar::i(), Scalar::zero()],
            vec![-Scalar::i(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::zero()],
        ]);
        assert_eq!(hermitian_signature(&h), (1, 1, 1));
        assert_eq!(hermitian_signature(&Mat::from_i64(&[&[2, 1], &[1, 2]])), (2, 0, 0));
        let (p, d) = hermitian_diagonalize(&h);
        let diag = Mat::from_fn(3, 3, |r, c| if r == c { d[r].clone() } else { Scalar::zero() });
        assert_eq!(p.adjoint().mul(&h).mul(&p), diag);
    }

    #[test]
    fn row_reducer_kernel() {
        let mut red = RowReducer::new(4);
        red.push(vec![(0, Scalar::one()), (1, Scalar::one())]);
        red.push(vec![(1, Scalar::one()), (2, Scalar::from_i64(-1))]);
        let k = red.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((&v[0] + &v[1]).is_zero());
            assert!((&v[1] - &v[2]).is_zero());
        }
    }
}
