//! Dense matrices and subspaces over a [`GaloisField`].
//!
//! Vectors are rows; a [`Subspace`] keeps its basis in reduced row-echelon
//! form so that equality of subspaces is equality of bases.

use crate::field::{Elem, GaloisField};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<Elem>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, f: &GaloisField, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, other[(k, j)]);
                    out[(i, j)] = f.add(out[(i, j)], t);
                }
            }
        }
        out
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, f: &GaloisField, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn map(&self, op: impl Fn(Elem) -> Elem) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| op(v)).collect(),
        }
    }

    /// Coordinatewise `a -> a^p`.
    pub fn frobenius(&self, f: &GaloisField) -> Self {
        self.map(|a| f.frobenius(a))
    }

    pub fn frobenius_inv(&self, f: &GaloisField) -> Self {
        self.map(|a| f.frobenius_inv(a))
    }

    pub fn block_diagonal(a: &Self, b: &Self) -> Self {
        let mut out = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out[(i, j)] = a[(i, j)];
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out[(a.rows + i, a.cols + j)] = b[(i, j)];
            }
        }
        out
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// In-place reduced row-echelon form; returns the pivot columns.
    pub fn rref(&mut self, f: &GaloisField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self[(i, c)] != 0) else {
                continue;
            };
            self.swap_rows(pr, r);
            let inv = f.inv(self[(r, c)]);
            for j in 0..self.cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)] == 0 {
                    continue;
                }
                let factor = self[(i, c)];
                for j in 0..self.cols {
                    let t = f.mul(factor, self[(r, j)]);
                    self[(i, j)] = f.sub(self[(i, j)], t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, f: &GaloisField) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis (as rows) of `{v : self · v = 0}`.
    pub fn nullspace(&self, f: &GaloisField) -> Self {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            basis[(k, fc)] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                basis[(k, pc)] = f.neg(m[(r, fc)]);
            }
        }
        basis
    }

    pub fn inverse(&self, f: &GaloisField) -> Option<Self> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = 1;
        }
        let pivots = aug.rref(f);
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }
}

/// A subspace of `k^n`, stored as an RREF basis without zero rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    pub fn span(f: &GaloisField, mut vectors: Matrix) -> Self {
        let rank = vectors.rref(f).len();
        let cols = vectors.cols;
        vectors.data.truncate(rank * cols);
        vectors.rows = rank;
        Self { basis: vectors }
    }

    pub fn from_rows(f: &GaloisField, n: usize, rows: &[Vec<Elem>]) -> Self {
        Self::span(f, Matrix::from_rows(n, rows))
    }

    pub fn zero(n: usize) -> Self {
        Self {
            basis: Matrix::zeros(0, n),
        }
    }

    pub fn whole(n: usize) -> Self {
        Self {
            basis: Matrix::identity(n),
        }
    }

    /// `⟨e_1, ..., e_k⟩`.
    pub fn coordinate(n: usize, k: usize) -> Self {
        let mut basis = Matrix::zeros(k, n);
        for i in 0..k {
            basis[(i, i)] = 1;
        }
        Self { basis }
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, f: &GaloisField, v: &[Elem]) -> bool {
        let m = self.basis.vstack(&Matrix::from_rows(v.len(), &[v.to_vec()]));
        m.rank(f) == self.dim()
    }

    pub fn is_subspace_of(&self, f: &GaloisField, other: &Self) -> bool {
        self.sum(f, other).dim() == other.dim()
    }

    pub fn sum(&self, f: &GaloisField, other: &Self) -> Self {
        Self::span(f, self.basis.vstack(&other.basis))
    }

    /// Linear functionals vanishing on `self`, as rows.
    fn annihilator(&self, f: &GaloisField) -> Matrix {
        self.basis.nullspace(f)
    }

    pub fn intersection(&self, f: &GaloisField, other: &Self) -> Self {
        let ann = self.annihilator(f).vstack(&other.annihilator(f));
        Self::span(f, ann.nullspace(f))
    }

    /// `dim U + dim W - dim(U + W)`.
    pub fn intersection_dim(&self, f: &GaloisField, other: &Self) -> usize {
        self.dim() + other.dim() - self.sum(f, other).dim()
    }

    /// `{A u : u in U}`.
    pub fn image(&self, f: &GaloisField, a: &Matrix) -> Self {
        Self::span(f, self.basis.mul(f, &a.transpose()))
    }

    /// `{v : A v in U}`.
    pub fn preimage(&self, f: &GaloisField, a: &Matrix) -> Self {
        let ann = self.annihilator(f);
        Self::span(f, ann.mul(f, a).nullspace(f))
    }

    /// Coordinatewise Frobenius of every vector.
    pub fn frobenius(&self, f: &GaloisField) -> Self {
        Self::span(f, self.basis.frobenius(f))
    }

    pub fn frobenius_inv(&self, f: &GaloisField) -> Self {
        Self::span(f, self.basis.frobenius_inv(f))
    }

    /// `{v : ⟨u, v⟩ = 0 for all u in U}` where `⟨u, v⟩ = u^T P v`.
    pub fn perp(&self, f: &GaloisField, form: &Matrix) -> Self {
        Self::span(f, self.basis.mul(f, form).nullspace(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> GaloisField {
        GaloisField::prime(p).unwrap()
    }

    #[test]
    fn rref_and_rank() {
        let f = f(5);
        let m = Matrix::from_rows(3, &[vec![1, 2, 3], vec![0, 1, 1], vec![1, 3, 4]]);
        // row 3 = row 1 + row 2 mod 5
        assert_eq!(m.rank(&f), 2);
        let ns = m.nullspace(&f);
        assert_eq!(ns.rows(), 1);
        assert!(m.apply(&f, ns.row(0)).iter().all(|&v| v == 0));
    }

    #[test]
    fn inverse_round_trip() {
        let f = f(7);
        let m = Matrix::from_rows(3, &[vec![1, 2, 0], vec![0, 1, 4], vec![5, 0, 1]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv), Matrix::identity(3));
        let sing = Matrix::from_rows(2, &[vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse(&f).is_none());
    }

    #[test]
    fn subspace_operations() {
        let f = f(3);
        let u = Subspace::from_rows(&f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let w = Subspace::from_rows(&f, 4, &[vec![0, 1, 0, 0], vec![0, 0, 1, 0]]);
        assert_eq!(u.intersection(&f, &w), Subspace::from_rows(&f, 4, &[vec![0, 1, 0, 0]]));
        assert_eq!(u.intersection_dim(&f, &w), 1);
        assert_eq!(u.sum(&f, &w).dim(), 3);
        assert!(Subspace::coordinate(4, 1).is_subspace_of(&f, &u));
        assert!(!w.is_subspace_of(&f, &u));
        // projection onto the first two coordinates
        let mut proj = Matrix::zeros(4, 4);
        proj[(0, 0)] = 1;
        proj[(1, 1)] = 1;
        assert_eq!(w.image(&f, &proj).dim(), 1);
        assert_eq!(Subspace::zero(4).preimage(&f, &proj).dim(), 2);
        assert_eq!(u.preimage(&f, &proj), Subspace::whole(4));
    }
}
