//! Finite-dimensional associative K-algebras given as matrix algebras over
//! `L` with a K-basis: radical, idempotents and locality.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactfield::{
    poly_factor, poly_xgcd, ExtElem, Field, FieldElem, FieldTower, Poly, Rational, Rationals,
};
use crate::linalg::{matrix_min_poly, Matrix};

/// Number of random samples spent looking for a primitive element.
pub const PRIMITIVE_SAMPLES: usize = 64;
/// Draw budget of the randomized splitting search.
pub const SPLIT_DRAWS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("basis is empty")]
    Empty,
    #[error("basis matrix {index} is not {n}x{n}")]
    Shape { index: usize, n: usize },
    #[error("basis elements are K-linearly dependent")]
    Dependent,
    #[error("the identity matrix is not in the span")]
    NoUnit,
    #[error("product of basis elements {0} and {1} leaves the span")]
    NotClosed(usize, usize),
}

/// Whether an idempotent search was exhaustive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Certainty {
    Complete,
    Randomized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentSearch {
    pub idempotent: Option<Matrix<ExtElem>>,
    pub certainty: Certainty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalityVerdict {
    LocalCertified,
    NotLocal { witness: Matrix<ExtElem> },
    ProbablyLocal,
}

impl LocalityVerdict {
    pub fn is_local(&self) -> bool {
        !matches!(self, LocalityVerdict::NotLocal { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            LocalityVerdict::LocalCertified => "LocalCertified",
            LocalityVerdict::NotLocal { .. } => "NotLocal",
            LocalityVerdict::ProbablyLocal => "ProbablyLocal",
        }
    }

    /// Human-readable note on how the verdict was reached.
    pub fn note(&self) -> &'static str {
        match self {
            LocalityVerdict::LocalCertified => {
                "quotient by the radical is a field (primitive element with irreducible minimal polynomial)"
            }
            LocalityVerdict::NotLocal { .. } => "nontrivial idempotent found and verified",
            LocalityVerdict::ProbablyLocal => {
                "noncommutative semisimple quotient; randomized splitting search found nothing"
            }
        }
    }
}

/// Outcome of the randomized splitting search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSearch {
    pub draws: usize,
    /// Every sampled element had a primary minimal polynomial (a power of one
    /// irreducible), so none produced a splitting.
    pub all_primary: bool,
    pub idempotent: Option<Vec<Rational>>,
}

/// Unital associative K-algebra of `n × n` matrices over `L` with a fixed
/// K-basis and cached structure constants.
#[derive(Debug, Clone)]
pub struct FinDimAlgebra {
    tower: Arc<FieldTower>,
    n: usize,
    basis: Vec<Matrix<ExtElem>>,
    /// Flattened entry coordinates used to read off K-coordinates.
    pivots: Vec<usize>,
    pivot_inv: Matrix<Rational>,
    /// `structure[i][j]` = coordinates of `bᵢ·bⱼ`.
    structure: Vec<Vec<Vec<Rational>>>,
    unit: Vec<Rational>,
}

/// Quotient by the radical, in coordinates of a complement basis.
#[derive(Debug, Clone)]
pub struct SemisimpleQuotient {
    /// Complement basis elements, as coordinates in the parent algebra.
    pub lifts: Vec<Vec<Rational>>,
    pub structure: Vec<Vec<Vec<Rational>>>,
    /// Change of basis from parent coordinates to (complement, radical).
    to_split: Matrix<Rational>,
}

impl FinDimAlgebra {
    pub fn new(
        tower: Arc<FieldTower>,
        n: usize,
        basis: Vec<Matrix<ExtElem>>,
    ) -> Result<Self, AlgebraError> {
        if basis.is_empty() {
            return Err(AlgebraError::Empty);
        }
        for (index, b) in basis.iter().enumerate() {
            if b.rows() != n || b.cols() != n {
                return Err(AlgebraError::Shape { index, n });
            }
        }
        let q = Rationals;
        let flat: Vec<Vec<Rational>> = basis.iter().map(|b| flatten(&tower, b)).collect();
        let width = flat[0].len();
        let m = Matrix::from_rows(flat, width).expect("equal widths");
        let r = m.rref(&q);
        if r.rank < basis.len() {
            return Err(AlgebraError::Dependent);
        }
        let pivots = r.pivots.clone();
        let pivot_inv = m
            .select_cols(&pivots)
            .inverse(&q)
            .expect("pivot submatrix is invertible");
        let mut alg = FinDimAlgebra {
            tower,
            n,
            basis,
            pivots,
            pivot_inv,
            structure: Vec::new(),
            unit: Vec::new(),
        };
        let id = Matrix::identity(alg.tower.as_ref(), n);
        alg.unit = alg.coords(&id).ok_or(AlgebraError::NoUnit)?;
        let dim = alg.basis.len();
        let mut structure = vec![Vec::with_capacity(dim); dim];
        for i in 0..dim {
            for j in 0..dim {
                let prod = alg.basis[i].mul(alg.tower.as_ref(), &alg.basis[j]);
                let c = alg.coords(&prod).ok_or(AlgebraError::NotClosed(i, j))?;
                structure[i].push(c);
            }
        }
        alg.structure = structure;
        Ok(alg)
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Matrix<ExtElem>] {
        &self.basis
    }

    pub fn unit_coords(&self) -> &[Rational] {
        &self.unit
    }

    /// K-coordinates of a matrix, or `None` if it is not in the algebra.
    pub fn coords(&self, m: &Matrix<ExtElem>) -> Option<Vec<Rational>> {
        let q = Rationals;
        let flat = flatten(&self.tower, m);
        let picked: Vec<Rational> = self.pivots.iter().map(|&i| flat[i].clone()).collect();
        let row = Matrix::from_rows(vec![picked], self.pivots.len()).unwrap();
        let c = row.mul(&q, &self.pivot_inv).row(0).to_vec();
        (self.element(&c) == *m).then_some(c)
    }

    pub fn element(&self, coords: &[Rational]) -> Matrix<ExtElem> {
        let l = self.tower.as_ref();
        let mut acc = Matrix::zeros(l, self.n, self.n);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(l, &b.scale(l, &l.from_rational(c)));
            }
        }
        acc
    }

    pub fn contains(&self, m: &Matrix<ExtElem>) -> bool {
        m.rows() == self.n && m.cols() == self.n && self.coords(m).is_some()
    }

    /// Product in coordinates, via the structure constants.
    pub fn mul_coords(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        mul_with(&self.structure, a, b)
    }

    /// Left multiplication by `a` as a K-matrix on coordinate columns.
    pub fn left_mult(&self, a: &[Rational]) -> Matrix<Rational> {
        left_mult_with(&self.structure, a)
    }

    pub fn is_commutative(&self) -> bool {
        is_commutative_with(&self.structure)
    }

    /// Minimal polynomial over K of an element.
    pub fn min_poly(&self, a: &[Rational]) -> Poly<Rational> {
        matrix_min_poly(&Rationals, &self.left_mult(a)).expect("square")
    }

    /// Trace form `T(a, b) = Tr(L_{ab})` on the basis.
    pub fn trace_form(&self) -> Matrix<Rational> {
        trace_form_with(&self.structure)
    }

    /// K-basis (in coordinates) of the Jacobson radical: the radical of the
    /// trace form, valid in characteristic zero.
    pub fn radical(&self) -> Vec<Vec<Rational>> {
        self.trace_form().kernel(&Rationals)
    }

    pub fn radical_matrices(&self) -> Vec<Matrix<ExtElem>> {
        self.radical().iter().map(|c| self.element(c)).collect()
    }

    /// `A/J` with explicit structure constants on a complement of `J`.
    pub fn semisimple_quotient(&self) -> SemisimpleQuotient {
        let q = Rationals;
        let dim = self.dim();
        let rad = self.radical();
        let mut lifts = Vec::new();
        if rad.is_empty() {
            for i in 0..dim {
                lifts.push(unit_vec(dim, i));
            }
        } else {
            let r = Matrix::from_rows(rad.clone(), dim).unwrap().rref(&q);
            for i in 0..dim {
                if !r.pivots.contains(&i) {
                    lifts.push(unit_vec(dim, i));
                }
            }
        }
        let mut cols = lifts.clone();
        cols.extend(rad.iter().cloned());
        let to_split = Matrix::from_cols(&cols, dim)
            .inverse(&q)
            .expect("complement and radical span the algebra");
        let k = lifts.len();
        let structure = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let prod = self.mul_coords(&lifts[i], &lifts[j]);
                        to_split.mul_vec(&q, &prod)[..k].to_vec()
                    })
                    .collect()
            })
            .collect();
        SemisimpleQuotient {
            lifts,
            structure,
            to_split,
        }
    }

    /// Search for a nontrivial idempotent.
    ///
    /// When `A/J` is commutative the search is complete: a primitive element
    /// of `A/J` is split along the factors of its minimal polynomial and the
    /// resulting idempotent is lifted through the nilpotent radical. Otherwise
    /// a seeded search over small integer combinations is run with a budget of
    /// [`SPLIT_DRAWS`] draws.
    pub fn find_idempotent(&self, seed: u64) -> IdempotentSearch {
        let quo = self.semisimple_quotient();
        if is_commutative_with(&quo.structure) {
            if let Some(found) = self.commutative_split(&quo, seed) {
                return IdempotentSearch {
                    idempotent: found.map(|c| self.normalize_idempotent(&c)),
                    certainty: Certainty::Complete,
                };
            }
        }
        let search = self.split_search(seed, SPLIT_DRAWS);
        IdempotentSearch {
            idempotent: search.idempotent.map(|c| self.normalize_idempotent(&c)),
            certainty: Certainty::Randomized,
        }
    }

    pub fn is_local(&self, seed: u64) -> LocalityVerdict {
        match self.find_idempotent(seed) {
            IdempotentSearch {
                idempotent: Some(witness),
                ..
            } => LocalityVerdict::NotLocal { witness },
            IdempotentSearch {
                certainty: Certainty::Complete,
                ..
            } => LocalityVerdict::LocalCertified,
            _ => LocalityVerdict::ProbablyLocal,
        }
    }

    /// `Some(None)` when `A/J` is a field, `Some(Some(e))` with a nontrivial
    /// idempotent otherwise; `None` if no primitive element turned up.
    fn commutative_split(
        &self,
        quo: &SemisimpleQuotient,
        seed: u64,
    ) -> Option<Option<Vec<Rational>>> {
        let q = Rationals;
        let k = quo.lifts.len();
        if k == 1 {
            return Some(None);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut candidates: Vec<Vec<Rational>> = (0..PRIMITIVE_SAMPLES)
            .map(|_| random_coords(&mut rng, k))
            .collect();
        for i in 0..k {
            candidates.push(unit_vec(k, i));
        }
        for i in 0..k {
            for j in i + 1..k {
                let mut v = unit_vec(k, i);
                v[j] = Rational::one();
                candidates.push(v);
            }
        }
        let (z, m) = candidates.into_iter().find_map(|z| {
            let m = matrix_min_poly(&q, &left_mult_with(&quo.structure, &z)).unwrap();
            (m.degree() == Some(k)).then_some((z, m))
        })?;
        let fac = poly_factor(&m);
        if fac.factors.len() == 1 {
            return Some(None);
        }
        let g = fac.factors[0].0.clone();
        let h = m.div_exact(&q, &g).unwrap();
        let (_, u, _) = poly_xgcd(&q, &g, &h);
        let split = u.mul(&q, &g);
        // Lift z to the algebra and evaluate there; the result is idempotent
        // modulo the radical.
        let z_lift = quo
            .lifts
            .iter()
            .zip(&z)
            .fold(vec![Rational::zero(); self.dim()], |acc, (l, c)| {
                add_scaled(&acc, l, c)
            });
        let e0 = self.eval_poly(&split, &z_lift);
        Some(Some(self.lift_idempotent(e0)))
    }

    /// Randomized search for a non-primary minimal polynomial: basis elements
    /// first, then seeded combinations with coefficients in `[-3, 3]`.
    pub fn split_search(&self, seed: u64, budget: usize) -> SplitSearch {
        let q = Rationals;
        let dim = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
        for draw in 0..budget {
            let z = if draw < dim {
                unit_vec(dim, draw)
            } else {
                random_coords(&mut rng, dim)
            };
            let m = self.min_poly(&z);
            let fac = poly_factor(&m);
            if fac.factors.len() < 2 {
                continue;
            }
            let (p1, k1) = &fac.factors[0];
            let g = p1.pow(&q, *k1);
            let h = m.div_exact(&q, &g).unwrap();
            let (_, u, _) = poly_xgcd(&q, &g, &h);
            let e = self.eval_poly(&u.mul(&q, &g).rem(&q, &m), &z);
            debug_assert_eq!(self.mul_coords(&e, &e), e);
            return SplitSearch {
                draws: draw + 1,
                all_primary: false,
                idempotent: Some(e),
            };
        }
        SplitSearch {
            draws: budget,
            all_primary: true,
            idempotent: None,
        }
    }

    /// Evaluate a polynomial at an element, in coordinates.
    pub fn eval_poly(&self, p: &Poly<Rational>, z: &[Rational]) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.dim()];
        for c in p.coeffs().iter().rev() {
            acc = self.mul_coords(&acc, z);
            acc = add_scaled(&acc, &self.unit, c);
        }
        acc
    }

    /// Newton iteration `e ← 3e² − 2e³` turns an idempotent modulo a
    /// nilpotent ideal into an exact idempotent.
    pub fn lift_idempotent(&self, mut e: Vec<Rational>) -> Vec<Rational> {
        let three = Rational::from_int(3);
        let two = Rational::from_int(2);
        loop {
            let e2 = self.mul_coords(&e, &e);
            if e2 == e {
                return e;
            }
            let e3 = self.mul_coords(&e2, &e);
            e = e2
                .iter()
                .zip(&e3)
                .map(|(a, b)| &(&three * a) - &(&two * b))
                .collect();
        }
    }

    /// Pick between `e` and `1 − e`: lower L-rank first, then the earlier
    /// first nonzero entry in row-major order.
    fn normalize_idempotent(&self, e: &[Rational]) -> Matrix<ExtElem> {
        let l = self.tower.as_ref();
        let a = self.element(e);
        let b = Matrix::identity(l, self.n).sub(l, &a);
        let key = |m: &Matrix<ExtElem>| {
            let first = m.entries().iter().position(|x| !x.is_zero());
            (m.rank(l), first)
        };
        if key(&b) < key(&a) {
            b
        } else {
            a
        }
    }
}

impl SemisimpleQuotient {
    pub fn dim(&self) -> usize {
        self.lifts.len()
    }

    pub fn is_commutative(&self) -> bool {
        is_commutative_with(&self.structure)
    }

    pub fn trace_form(&self) -> Matrix<Rational> {
        trace_form_with(&self.structure)
    }

    /// Image of a parent-coordinate element in the quotient.
    pub fn project(&self, a: &[Rational]) -> Vec<Rational> {
        self.to_split.mul_vec(&Rationals, a)[..self.dim()].to_vec()
    }
}

fn flatten(l: &FieldTower, m: &Matrix<ExtElem>) -> Vec<Rational> {
    m.entries().iter().flat_map(|e| l.to_k_coords(e)).collect()
}

fn unit_vec(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn random_coords<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::from_int(rng.gen_range(-3..=3)))
        .collect()
}

fn add_scaled(a: &[Rational], b: &[Rational], c: &Rational) -> Vec<Rational> {
    if c.is_zero() {
        return a.to_vec();
    }
    a.iter().zip(b).map(|(x, y)| x + &(c * y)).collect()
}

fn mul_with(structure: &[Vec<Vec<Rational>>], a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let dim = structure.len();
    let mut out = vec![Rational::zero(); dim];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let c = ai * bj;
            for (o, s) in out.iter_mut().zip(&structure[i][j]) {
                if !s.is_zero() {
                    *o = &*o + &(&c * s);
                }
            }
        }
    }
    out
}

fn left_mult_with(structure: &[Vec<Vec<Rational>>], a: &[Rational]) -> Matrix<Rational> {
    let dim = structure.len();
    let cols: Vec<Vec<Rational>> = (0..dim)
        .map(|j| mul_with(structure, a, &unit_vec(dim, j)))
        .collect();
    Matrix::from_cols(&cols, dim)
}

fn is_commutative_with(structure: &[Vec<Vec<Rational>>]) -> bool {
    let dim = structure.len();
    (0..dim).all(|i| (i + 1..dim).all(|j| structure[i][j] == structure[j][i]))
}

fn trace_form_with(structure: &[Vec<Vec<Rational>>]) -> Matrix<Rational> {
    let dim = structure.len();
    // Tr(L_{b_k}) = Σ_j c_{kj}^j
    let traces: Vec<Rational> = (0..dim)
        .map(|k| (0..dim).fold(Rational::zero(), |acc, j| &acc + &structure[k][j][j]))
        .collect();
    Matrix::from_fn(&Rationals, dim, dim, |i, j| {
        structure[i][j]
            .iter()
            .zip(&traces)
            .fold(Rational::zero(), |acc, (c, t)| &acc + &(c * t))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> Arc<FieldTower> {
        Arc::new(FieldTower::theta7())
    }

    fn mat(l: &FieldTower, rows: &[&[i64]]) -> Matrix<ExtElem> {
        let n = rows.len();
        Matrix::from_fn(l, n, n, |i, j| l.from_int(rows[i][j]))
    }

    #[test]
    fn diagonal_algebra_splits_completely() {
        let t = l();
        let a = FinDimAlgebra::new(
            t.clone(),
            2,
            vec![mat(&t, &[&[1, 0], &[0, 1]]), mat(&t, &[&[1, 0], &[0, 0]])],
        )
        .unwrap();
        assert!(a.radical().is_empty());
        let s = a.find_idempotent(0);
        assert_eq!(s.certainty, Certainty::Complete);
        assert_eq!(s.idempotent.unwrap(), mat(&t, &[&[1, 0], &[0, 0]]));
    }

    #[test]
    fn truncated_polynomial_ring_is_local() {
        let t = l();
        let h = mat(&t, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let basis = vec![
            Matrix::identity(t.as_ref(), 3),
            h.clone(),
            h.mul(t.as_ref(), &h),
        ];
        let a = FinDimAlgebra::new(t.clone(), 3, basis).unwrap();
        assert_eq!(a.radical().len(), 2);
        assert_eq!(a.is_local(7), LocalityVerdict::LocalCertified);
    }

    #[test]
    fn full_matrix_algebra_needs_randomized_search() {
        let t = l();
        let basis = vec![
            mat(&t, &[&[1, 0], &[0, 0]]),
            mat(&t, &[&[0, 1], &[0, 0]]),
            mat(&t, &[&[0, 0], &[1, 0]]),
            mat(&t, &[&[0, 0], &[0, 1]]),
        ];
        let a = FinDimAlgebra::new(t.clone(), 2, basis).unwrap();
        let s = a.find_idempotent(3);
        assert_eq!(s.certainty, Certainty::Randomized);
        let e = s.idempotent.unwrap();
        assert_eq!(e.mul(t.as_ref(), &e), e);
        assert_eq!(e, mat(&t, &[&[1, 0], &[0, 0]]));
    }

    #[test]
    fn rejects_non_closed_and_missing_unit() {
        let t = l();
        let e12 = mat(&t, &[&[0, 1], &[0, 0]]);
        assert_eq!(
            FinDimAlgebra::new(t.clone(), 2, vec![e12.clone()]).unwrap_err(),
            AlgebraError::NoUnit
        );
        let e21 = mat(&t, &[&[0, 0], &[1, 0]]);
        let id = Matrix::identity(t.as_ref(), 2);
        assert!(matches!(
            FinDimAlgebra::new(t.clone(), 2, vec![id, e12, e21]).unwrap_err(),
            AlgebraError::NotClosed(..)
        ));
    }
}
