//! Independent oracles and samplers shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use tfmodlab::exactfield::{ExtElem, Field, FieldTower, Rational, Rationals};
use tfmodlab::linalg::{k_expand, Matrix};
use tfmodlab::pairs::PairModule;

pub fn theta7() -> Arc<FieldTower> {
    Arc::new(FieldTower::theta7())
}

/// Dimension of `Hom(p, q)` by a direct K-linear solve: every K-coordinate of
/// every entry of `A` is an unknown, and `A·v` must be annihilated by the
/// K-linear forms vanishing on `V_q`.
pub fn brute_hom_dim(p: &PairModule, q: &PairModule) -> usize {
    let l = p.tower().as_ref();
    let kq = Rationals;
    let d = l.degree();
    let (np, nq) = (p.n(), q.n());
    let rows: Vec<Vec<Rational>> = q.v_basis().iter().map(|w| k_expand(l, w)).collect();
    let ann = Matrix::from_rows(rows, nq * d).unwrap().kernel(&kq);
    let unknowns = nq * np * d;
    let mut constraints = Vec::new();
    for v in p.v_basis() {
        let cols: Vec<Vec<Rational>> = (0..unknowns)
            .map(|u| {
                let (i, j, s) = (u / (np * d), (u / d) % np, u % d);
                let mut img = vec![l.zero(); nq];
                img[i] = l.mul(&l.theta_pow(s as u32), &v[j]);
                let ex = k_expand(l, &img);
                ann.iter()
                    .map(|a| {
                        a.iter()
                            .zip(&ex)
                            .fold(Rational::zero(), |acc, (x, y)| &acc + &(x * y))
                    })
                    .collect()
            })
            .collect();
        constraints.extend(Matrix::from_cols(&cols, ann.len()).row_vecs());
    }
    if constraints.is_empty() {
        return unknowns;
    }
    Matrix::from_rows(constraints, unknowns)
        .unwrap()
        .kernel(&kq)
        .len()
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    let num = rng.gen_range(-5i64..=5);
    let den = rng.gen_range(1i64..=3);
    &Rational::from_int(num) / &Rational::from_int(den)
}

pub fn random_elem(l: &FieldTower, rng: &mut impl Rng) -> ExtElem {
    l.elem((0..l.degree()).map(|_| small_rational(rng)).collect())
        .unwrap()
}

/// Random element with integer coordinates in `-b..=b`.
pub fn random_int_elem(l: &FieldTower, rng: &mut impl Rng, b: i64) -> ExtElem {
    let c: Vec<i64> = (0..l.degree()).map(|_| rng.gen_range(-b..=b)).collect();
    l.from_ints(&c)
}
