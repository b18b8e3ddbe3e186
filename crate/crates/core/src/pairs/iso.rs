//! Isomorphism of pairs: search for an invertible morphism.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{hom_pairs, hom_thetas, same_tower, theta_to_matrix, PairError, PairModule};
use crate::exactfield::{ExtElem, Field, FieldTower, Rational, Rationals};
use crate::linalg::Matrix;

const RANDOM_TRIES: usize = 8;

#[derive(Debug, Clone)]
pub struct IsoResult {
    pub isomorphic: bool,
    /// Invertible `A` with `A·V_p = V_q` when isomorphic.
    pub witness: Option<Matrix<ExtElem>>,
    /// Whether the answer came from the exact determinant polynomial.
    pub symbolic: bool,
}

impl IsoResult {
    fn no() -> Self {
        IsoResult {
            isomorphic: false,
            witness: None,
            symbolic: false,
        }
    }
}

/// Decide `p ≅ q`. Random combinations of a Hom basis are tried first; if none
/// is invertible, the determinant of the generic combination is expanded as a
/// polynomial in the combination coefficients, which is zero exactly when no
/// isomorphism exists.
pub fn is_isomorphic(p: &PairModule, q: &PairModule) -> Result<IsoResult, PairError> {
    same_tower(p, q)?;
    if p.n != q.n || p.dim_k() != q.dim_k() {
        return Ok(IsoResult::no());
    }
    let l = p.tower.as_ref();
    let kq = Rationals;
    let thetas = hom_thetas(p, q)?;
    if thetas.is_empty() {
        return Ok(IsoResult::no());
    }
    // A is invertible exactly when its matrix Θ on working bases is, and Θ
    // is rational, so random trials stay cheap.
    let m = p.dim_k();
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..RANDOM_TRIES {
        let theta = thetas.iter().fold(Matrix::zeros(&kq, m, m), |acc, t| {
            acc.add(
                &kq,
                &t.scale(&kq, &Rational::from_int(rng.gen_range(-6..=6))),
            )
        });
        if !theta.det(&kq).is_zero() {
            return Ok(IsoResult {
                isomorphic: true,
                witness: Some(theta_to_matrix(p, q, &theta)),
                symbolic: false,
            });
        }
    }

    let basis = hom_pairs(p, q)?;
    let det = generic_det(l, &basis, p.n);
    if det.is_empty() {
        return Ok(IsoResult {
            symbolic: true,
            ..IsoResult::no()
        });
    }
    let point = nonvanishing_point(l, det, basis.len(), p.n);
    let a = basis
        .iter()
        .zip(&point)
        .fold(Matrix::zeros(l, p.n, p.n), |acc, (b, c)| {
            acc.add(l, &b.scale(l, &l.from_rational(c)))
        });
    debug_assert!(!l.is_zero(&a.det(l)));
    Ok(IsoResult {
        isomorphic: true,
        witness: Some(a),
        symbolic: true,
    })
}

/// Sparse polynomial in the combination coefficients, keyed by exponent vector.
type MPoly = BTreeMap<Vec<u32>, ExtElem>;

fn add_term(l: &FieldTower, p: &mut MPoly, mono: Vec<u32>, c: ExtElem) {
    use std::collections::btree_map::Entry;
    match p.entry(mono) {
        Entry::Vacant(e) => {
            if !l.is_zero(&c) {
                e.insert(c);
            }
        }
        Entry::Occupied(mut e) => {
            let s = l.add(e.get(), &c);
            if l.is_zero(&s) {
                e.remove();
            } else {
                e.insert(s);
            }
        }
    }
}

/// `det(Σ t_k B_k)` by Laplace expansion along rows with memoized column sets.
fn generic_det(l: &FieldTower, basis: &[Matrix<ExtElem>], n: usize) -> MPoly {
    let m = basis.len();
    let mut dp: Vec<MPoly> = vec![MPoly::new(); 1 << n];
    dp[0].insert(vec![0; m], l.one());
    for mask in 0usize..(1 << n) {
        let row = mask.count_ones() as usize;
        if row >= n || dp[mask].is_empty() {
            continue;
        }
        let cur = std::mem::take(&mut dp[mask]);
        for j in (0..n).filter(|j| mask & (1 << j) == 0) {
            let above = (mask >> (j + 1)).count_ones();
            let mut target = std::mem::take(&mut dp[mask | (1 << j)]);
            for (mono, c) in &cur {
                for (k, b) in basis.iter().enumerate() {
                    let e = b.get(row, j);
                    if l.is_zero(e) {
                        continue;
                    }
                    let mut mm = mono.clone();
                    mm[k] += 1;
                    let mut v = l.mul(c, e);
                    if above % 2 == 1 {
                        v = l.neg(&v);
                    }
                    add_term(l, &mut target, mm, v);
                }
            }
            dp[mask | (1 << j)] = target;
        }
        dp[mask] = cur;
    }
    std::mem::take(&mut dp[(1 << n) - 1])
}

/// Integer point where a nonzero polynomial of total degree `deg` is nonzero,
/// fixing one variable at a time.
fn nonvanishing_point(l: &FieldTower, mut poly: MPoly, vars: usize, deg: usize) -> Vec<Rational> {
    let mut point = Vec::with_capacity(vars);
    for k in 0..vars {
        let mut chosen = None;
        for v in 0..=deg as i64 {
            let sub = substitute(l, &poly, k, v);
            if !sub.is_empty() {
                chosen = Some((v, sub));
                break;
            }
        }
        let (v, sub) =
            chosen.expect("a univariate slice of degree ≤ deg has a non-root in 0..=deg");
        point.push(Rational::from_int(v));
        poly = sub;
    }
    point
}

fn substitute(l: &FieldTower, poly: &MPoly, k: usize, v: i64) -> MPoly {
    let mut out = MPoly::new();
    let val = Rational::from_int(v);
    for (mono, c) in poly {
        let mut mm = mono.clone();
        let e = std::mem::replace(&mut mm[k], 0);
        let mut factor = Rational::one();
        for _ in 0..e {
            factor = &factor * &val;
        }
        add_term(l, &mut out, mm, l.mul(c, &l.from_rational(&factor)));
    }
    out
}
