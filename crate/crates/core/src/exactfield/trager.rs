//! Factorization over the extension `L` by Trager's norm method.

use super::factor::{is_squarefree_q, squarefree_decomposition, Factorization};
use super::{poly_factor, ExtElem, Field, FieldTower, Poly, Rational, Rationals};
use crate::linalg::Matrix;

/// Factor a nonzero polynomial over `L` into monic irreducibles.
pub fn factor_over_tower(l: &FieldTower, f: &Poly<ExtElem>) -> Factorization<ExtElem> {
    let Some(lc) = f.lc() else {
        return Factorization {
            unit: l.zero(),
            factors: Vec::new(),
        };
    };
    let mut factors = Vec::new();
    if let Some(fq) = rational_coeffs(l, f) {
        // Factor over K first; only the nonlinear pieces can split further.
        for (q, mult) in poly_factor(&fq).factors {
            let ql = q.map::<FieldTower>(|c| l.from_rational(c));
            for g in factor_squarefree(l, &ql, None) {
                factors.push((g, mult));
            }
        }
    } else {
        factor_general(l, f, &mut factors);
    }
    factors.sort_by(|a, b| (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1)));
    Factorization {
        unit: lc.clone(),
        factors,
    }
}

fn rational_coeffs(l: &FieldTower, f: &Poly<ExtElem>) -> Option<Poly<Rational>> {
    let c: Option<Vec<Rational>> = f.coeffs().iter().map(|c| l.as_rational(c)).collect();
    c.map(Poly::from_coeffs)
}

fn factor_general(l: &FieldTower, f: &Poly<ExtElem>, factors: &mut Vec<(Poly<ExtElem>, u32)>) {
    // A squarefree norm certifies f squarefree and serves as the first shift.
    let monic = f.monic(l);
    let norm = (!monic.is_constant()).then(|| norm_poly(l, &monic));
    if let Some(norm) = norm.filter(is_squarefree_q) {
        for g in factor_squarefree(l, &monic, Some(norm)) {
            factors.push((g, 1));
        }
    } else {
        for (part, mult) in squarefree_decomposition(l, f) {
            for g in factor_squarefree(l, &part, None) {
                factors.push((g, mult));
            }
        }
    }
}

/// Whether a polynomial of positive degree is irreducible over `L`.
pub fn is_irreducible_over(l: &FieldTower, f: &Poly<ExtElem>) -> bool {
    let fac = factor_over_tower(l, f);
    fac.factors.len() == 1 && fac.factors[0].1 == 1
}

/// Trager's algorithm on a squarefree `g`; `norm0`, when given, is the
/// already verified squarefree norm of `g` itself.
fn factor_squarefree(
    l: &FieldTower,
    g: &Poly<ExtElem>,
    mut norm0: Option<Poly<Rational>>,
) -> Vec<Poly<ExtElem>> {
    let g = g.monic(l);
    if g.len() <= 2 {
        return vec![g];
    }
    let theta = l.theta();
    for s in shifts() {
        // g_s(x) = g(x - sθ)
        let shift = Poly::from_coeffs(vec![l.neg(&l.mul(&l.from_int(s), &theta)), l.one()]);
        let gs = g.compose(l, &shift);
        let norm = match norm0.take() {
            Some(n) if s == 0 => n,
            _ => norm_poly(l, &gs),
        };
        if !is_squarefree_q(&norm) {
            continue;
        }
        let parts = poly_factor(&norm).factors;
        // Each factor of the norm cuts out exactly one factor of g_s.
        if parts.len() == 1 {
            return vec![g];
        }
        let back = Poly::from_coeffs(vec![l.mul(&l.from_int(s), &theta), l.one()]);
        // Peel factors off a shrinking cofactor; the last one is what remains.
        let mut rest = gs;
        let mut out = Vec::with_capacity(parts.len());
        for (ni, _) in &parts[..parts.len() - 1] {
            let h = gcd_by_image(l, &rest, ni);
            rest = rest.div_exact(l, &h).expect("gcd divides");
            out.push(h.compose(l, &back).monic(l));
        }
        out.push(rest.compose(l, &back).monic(l));
        out.sort();
        return out;
    }
    unreachable!("some shift makes the norm squarefree")
}

/// `gcd(g, n)` for monic `g` over `L` and `n` over `K`, as the monic element
/// of least degree in the image of multiplication by `n` on `L[x]/(g)`.
/// Row reduction keeps coefficients far smaller than Euclid's remainders.
fn gcd_by_image(l: &FieldTower, g: &Poly<ExtElem>, n: &Poly<Rational>) -> Poly<ExtElem> {
    let d = g.degree().expect("nonzero modulus");
    let mut v = n.map::<FieldTower>(|c| l.from_rational(c)).rem(l, g);
    let mut rows = Vec::with_capacity(d);
    for _ in 0..d {
        // Highest degree first, so the last echelon row has the least degree.
        rows.push((0..d).rev().map(|k| v.coeff(l, k)).collect::<Vec<_>>());
        v = v.shift(l, 1).rem(l, g);
    }
    let r = Matrix::from_rows(rows, d).expect("square").rref(l);
    match r.pivots.last() {
        None => g.clone(),
        Some(&p) => {
            let row = r.matrix.row(r.rank - 1);
            Poly::from_coeffs(row[p..].iter().rev().cloned().collect())
        }
    }
}

fn shifts() -> impl Iterator<Item = i64> {
    (0i64..).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
}

/// `N_{L/K}` of a polynomial with coefficients in `L`: the determinant of its
/// multiplication matrix over `K[x]`, recovered by evaluation and
/// interpolation.
pub(crate) fn norm_poly(l: &FieldTower, g: &Poly<ExtElem>) -> Poly<Rational> {
    let q = Rationals;
    let deg = g.degree().expect("norm of zero polynomial") * l.degree();
    let mats: Vec<Matrix<Rational>> = g.coeffs().iter().map(|c| l.mul_matrix(c)).collect();
    let xs: Vec<Rational> = (0..=deg as i64).map(Rational::from_int).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x0| {
            let d = l.degree();
            let mut m = Matrix::zeros(&q, d, d);
            let mut pw = Rational::one();
            for mk in &mats {
                m = m.add(&q, &mk.scale(&q, &pw));
                pw = &pw * x0;
            }
            m.det(&q)
        })
        .collect();
    interpolate(&xs, &ys)
}

/// Newton interpolation through distinct points.
pub(crate) fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly<Rational> {
    let q = Rationals;
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = &(&coef[i] - &coef[i - 1]) / &(&xs[i] - &xs[i - j]);
        }
    }
    let mut p = Poly::zero();
    for i in (0..n).rev() {
        let lin = Poly::from_coeffs(vec![-&xs[i], Rational::one()]);
        p = p.mul(&q, &lin).add(&q, &Poly::constant(coef[i].clone()));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_linear_is_min_poly_shift() {
        let l = FieldTower::theta7();
        // N(x - θ) = θ's minimal polynomial in x
        let g = Poly::from_coeffs(vec![l.neg(&l.theta()), l.one()]);
        assert_eq!(norm_poly(&l, &g), *l.min_poly());
    }

    #[test]
    fn image_gcd_matches_euclid() {
        let l = FieldTower::theta7();
        let q = Rationals;
        // g = (x - θ)(x² + θx + 1)(x + 3), n = (x + 3)(x² - 2)·(x⁷ - 2)
        let g = Poly::from_coeffs(vec![l.neg(&l.theta()), l.one()])
            .mul(&l, &Poly::from_coeffs(vec![l.one(), l.theta(), l.one()]))
            .mul(&l, &Poly::from_ints(&l, &[3, 1]));
        let n = Poly::from_ints(&q, &[3, 1])
            .mul(&q, &Poly::from_ints(&q, &[-2, 0, 1]))
            .mul(&q, l.min_poly());
        let n_l = n.map::<FieldTower>(|c| l.from_rational(c));
        assert_eq!(gcd_by_image(&l, &g, &n), super::super::poly_gcd(&l, &g, &n_l));
        assert_eq!(gcd_by_image(&l, &g, &n).degree(), Some(2));
        let unit = Poly::from_ints(&q, &[5, 0, 1]);
        assert!(gcd_by_image(&l, &g, &unit).is_one(&l));
    }

    #[test]
    fn rational_input_factors_over_k_first() {
        let l = FieldTower::theta7();
        // (x + 1)² (x⁷ - 2): the septic splits off x - θ over L.
        let q = Rationals;
        let f = Poly::from_ints(&q, &[1, 2, 1]).mul(&q, l.min_poly());
        let fac = factor_over_tower(&l, &f.map::<FieldTower>(|c| l.from_rational(c)));
        let shape: Vec<(usize, u32)> = fac
            .factors
            .iter()
            .map(|(g, e)| (g.degree().unwrap(), *e))
            .collect();
        assert_eq!(shape, vec![(1, 1), (1, 2), (6, 1)]);
    }

    #[test]
    fn min_poly_splits_off_its_root() {
        let l = FieldTower::theta7();
        let f = l.min_poly().map::<FieldTower>(|c| l.from_rational(c));
        let fac = factor_over_tower(&l, &f);
        // x - θ and the degree-6 cofactor, irreducible since Q(θ) has no
        // other 7th root of 2.
        let degs: Vec<usize> = fac
            .factors
            .iter()
            .map(|(g, _)| g.degree().unwrap())
            .collect();
        assert_eq!(degs, vec![1, 6]);
        let prod = fac
            .factors
            .iter()
            .fold(Poly::one(&l), |acc, (g, _)| acc.mul(&l, g));
        assert_eq!(prod, f);
    }

    #[test]
    fn quadratic_splits_over_extension() {
        // x^2 - 2θ^2 ... with θ^7 = 2: (x - θ^4)(x + θ^4) = x^2 - θ^8 = x^2 - 2θ
        let l = FieldTower::theta7();
        let two_theta = l.mul(&l.from_int(2), &l.theta());
        let f = Poly::from_coeffs(vec![l.neg(&two_theta), l.zero(), l.one()]);
        let fac = factor_over_tower(&l, &f);
        assert_eq!(fac.factors.len(), 2);
        assert!(is_irreducible_over(
            &l,
            &Poly::from_coeffs(vec![l.one(), l.one(), l.one()])
        ));
    }
}
