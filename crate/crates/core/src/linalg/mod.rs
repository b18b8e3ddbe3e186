//! Dense exact linear algebra over any [`Field`].

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exactfield::{poly_lcm, Field, FieldElem, Poly, Rational, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("ragged rows: expected {expected} entries, found {got}")]
    Ragged { expected: usize, got: usize },
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

/// Reduced row echelon form together with its rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref<E> {
    pub matrix: Matrix<E>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl<E: FieldElem> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![f.zero(); rows * cols],
        }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Self::from_fn(f, n, n, |i, j| if i == j { f.one() } else { f.zero() })
    }

    pub fn from_fn<F: Field<Elem = E>>(
        _f: &F,
        rows: usize,
        cols: usize,
        mut g: impl FnMut(usize, usize) -> E,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(g(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Build from rows; `cols` is needed to shape a matrix with no rows.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::Ragged {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(cols: &[Vec<E>], rows: usize) -> Self {
        let mut data = Vec::with_capacity(rows * cols.len());
        for i in 0..rows {
            for c in cols {
                data.push(c[i].clone());
            }
        }
        Matrix {
            rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(f.zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        f.add(&acc, &f.mul(a, b))
                    }
                })
            })
            .collect()
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(f, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.cols * idx.len());
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut out = Self::zeros(f, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss–Jordan elimination.
    pub fn rref<F: Field<Elem = E>>(&self, f: &F) -> Rref<E> {
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
            let inv = f.inv(m.get(r, c)).unwrap();
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let prj = m.get(r, j);
                    if prj.is_zero() {
                        continue;
                    }
                    let v = f.sub(m.get(i, j), &f.mul(&factor, prj));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        self.rref(f).rank
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let Rref { matrix, pivots, .. } = self.rref(f);
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(matrix.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the left null space `{y : yᵀ·self = 0}`.
    pub fn left_kernel<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        self.transpose().kernel(f)
    }

    /// One solution of `self · x = b`, if any.
    pub fn solve<F: Field<Elem = E>>(&self, f: &F, b: &[E]) -> Option<Vec<E>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_cols(&[b.to_vec()], self.rows));
        let Rref { matrix, pivots, .. } = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = matrix.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn det<F: Field<Elem = E>>(&self, f: &F) -> E {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return f.zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = f.neg(&det);
            }
            let pivot = m.get(c, c).clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).unwrap();
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), &inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(f, n));
        let r = aug.rref(f);
        if r.pivots.iter().copied().ne(0..n) {
            return None;
        }
        Some(r.matrix.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// Evaluate a polynomial at a square matrix.
    pub fn eval_poly<F: Field<Elem = E>>(&self, f: &F, p: &Poly<E>) -> Self {
        let mut acc = Self::zeros(f, self.rows, self.cols);
        for c in p.coeffs().iter().rev() {
            acc = acc
                .mul(f, self)
                .add(f, &Self::identity(f, self.rows).scale(f, c));
        }
        acc
    }

    pub fn map<G: Field>(&self, mut m: impl FnMut(&E) -> G::Elem) -> Matrix<G::Elem> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut m).collect(),
        }
    }
}

/// Row-reduced basis of the span of `vectors` (the nonzero rows of the rref).
pub fn span_basis<F: Field>(f: &F, vectors: &[Vec<F::Elem>], dim: usize) -> Vec<Vec<F::Elem>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vectors.to_vec(), dim).expect("vectors of equal length");
    let r = m.rref(f);
    r.matrix.row_vecs().into_iter().take(r.rank).collect()
}

/// Coordinates over `K` of a vector over `F`, concatenated entry by entry.
pub fn k_expand<F: Field>(f: &F, v: &[F::Elem]) -> Vec<Rational> {
    v.iter().flat_map(|e| f.to_k_coords(e)).collect()
}

/// Inverse of [`k_expand`] for vectors of `len` entries.
pub fn k_collapse<F: Field>(f: &F, coords: &[Rational], len: usize) -> Vec<F::Elem> {
    let d = f.k_dim();
    (0..len)
        .map(|i| f.from_k_coords(&coords[i * d..(i + 1) * d]))
        .collect()
}

/// Canonical basis of the `K`-span of vectors over `F`: the nonzero rows of
/// the reduced echelon form of their `K`-expansions.
pub fn k_span_basis<F: Field>(f: &F, vectors: &[Vec<F::Elem>], len: usize) -> Vec<Vec<F::Elem>> {
    let rows: Vec<Vec<Rational>> = vectors.iter().map(|v| k_expand(f, v)).collect();
    span_basis(&Rationals, &rows, len * f.k_dim())
        .iter()
        .map(|r| k_collapse(f, r, len))
        .collect()
}

/// Dimension over `K` of the span of vectors over `F`.
pub fn k_rank<F: Field>(f: &F, vectors: &[Vec<F::Elem>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Rational>> = vectors.iter().map(|v| k_expand(f, v)).collect();
    Matrix::from_rows(rows, len * f.k_dim())
        .unwrap()
        .rank(&Rationals)
}

/// Whether `v` lies in the `K`-span of `basis`.
pub fn k_contains<F: Field>(f: &F, basis: &[Vec<F::Elem>], v: &[F::Elem]) -> bool {
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    k_rank(f, &all, v.len()) == k_rank(f, basis, v.len())
}

/// Rank over `F` itself of a list of vectors.
pub fn l_rank<F: Field>(f: &F, vectors: &[Vec<F::Elem>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors.to_vec(), len).unwrap().rank(f)
}

/// Monic minimal polynomial, as the lcm of the annihilators of the Krylov
/// sequences of the standard basis vectors.
pub fn matrix_min_poly<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<Poly<F::Elem>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut acc = Poly::one(f);
    for i in 0..n {
        let mut v = vec![f.zero(); n];
        v[i] = f.one();
        if acc.is_zero() {
            break;
        }
        // Skip vectors already killed by the running lcm.
        if m.eval_poly(f, &acc)
            .mul_vec(f, &v)
            .iter()
            .all(|e| e.is_zero())
        {
            continue;
        }
        let mut krylov = vec![v];
        loop {
            let next = m.mul_vec(f, krylov.last().unwrap());
            krylov.push(next);
            let k = Matrix::from_cols(&krylov, n);
            if let Some(rel) = k.kernel(f).into_iter().next() {
                acc = poly_lcm(f, &acc, &Poly::from_coeffs(rel).monic(f));
                break;
            }
        }
    }
    Ok(acc)
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<E: Serialize> Serialize for Matrix<E> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[E]> = (0..self.rows)
            .map(|i| &self.data[i * self.cols..(i + 1) * self.cols])
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de, E: FieldElem + Deserialize<'de>> Deserialize<'de> for Matrix<E> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<E>>::deserialize(deserializer)?;
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_rows(rows, cols).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
                .collect(),
            cols,
        )
        .unwrap()
    }

    #[test]
    fn rref_examples() {
        let q = Rationals;
        let id = Matrix::identity(&q, 3);
        let r = id.rref(&q);
        assert_eq!((r.matrix, r.rank, r.pivots), (id, 3, vec![0, 1, 2]));
        let r = Matrix::zeros(&q, 2, 2).rref(&q);
        assert_eq!((r.rank, r.pivots), (0, vec![]));
        let r = m(&[&[1, 2], &[2, 4]]).rref(&q);
        assert_eq!((r.rank, r.pivots), (1, vec![0]));
    }

    #[test]
    fn kernel_examples() {
        let q = Rationals;
        assert!(Matrix::identity(&q, 2).kernel(&q).is_empty());
        assert_eq!(Matrix::zeros(&q, 1, 3).kernel(&q).len(), 3);
        let a = m(&[&[1, 1, 0]]);
        let ker = a.kernel(&q);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.mul_vec(&q, v).iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn min_poly_examples() {
        let q = Rationals;
        let h = m(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(
            matrix_min_poly(&q, &h).unwrap(),
            Poly::from_i64(&[0, 0, 0, 1])
        );
        assert_eq!(
            matrix_min_poly(&q, &Matrix::identity(&q, 4)).unwrap(),
            Poly::from_i64(&[-1, 1])
        );
        assert_eq!(
            matrix_min_poly(&q, &m(&[&[1, 0], &[0, 2]])).unwrap(),
            Poly::from_i64(&[2, -3, 1])
        );
        assert_eq!(
            matrix_min_poly(&q, &m(&[&[1, 2, 3]])),
            Err(LinalgError::NonSquare { rows: 1, cols: 3 })
        );
    }

    #[test]
    fn det_and_inverse() {
        let q = Rationals;
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(a.det(&q), Rational::from_int(1));
        let inv = a.inverse(&q).unwrap();
        assert_eq!(a.mul(&q, &inv), Matrix::identity(&q, 2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse(&q).is_none());
    }

    #[test]
    fn solve_consistent_and_not() {
        let q = Rationals;
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = a
            .solve(&q, &[Rational::from_int(3), Rational::from_int(1)])
            .unwrap();
        assert_eq!(x, vec![Rational::from_int(2), Rational::from_int(1)]);
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(b
            .solve(&q, &[Rational::from_int(1), Rational::from_int(3)])
            .is_none());
    }
}
