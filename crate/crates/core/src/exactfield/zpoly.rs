//! Integer polynomials: the bridge between rational input and modular work.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Poly, Rational};

pub(crate) type ZPoly = Vec<BigInt>;

pub(crate) fn trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub(crate) fn content(a: &ZPoly) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive integer polynomial with positive leading coefficient, together
/// with the rational `c` such that `p = c · result`.
pub(crate) fn primitive_from_rational(p: &Poly<Rational>) -> (Rational, ZPoly) {
    let den = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: ZPoly = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let mut g = content(&ints);
    if ints.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    let prim = ints.iter().map(|c| c / &g).collect();
    (Rational::new(g, den).expect("nonzero denominator"), prim)
}

pub(crate) fn to_rational(a: &ZPoly) -> Poly<Rational> {
    Poly::from_coeffs(a.iter().map(|c| Rational::from_bigint(c.clone())).collect())
}

pub(crate) fn mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact division by a monic divisor; `None` if there is a remainder.
pub(crate) fn div_monic(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    if a.len() <= db {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        q[k] = c;
    }
    r[..db].iter().all(|c| c.is_zero()).then(|| trim(q))
}

/// Reduce modulo a small prime into `[0, p)`.
pub(crate) fn reduce(a: &ZPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    super::modp::trim(
        a.iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

pub(crate) fn from_modp(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Coefficients reduced into the symmetric range `(-m/2, m/2]`.
pub(crate) fn symmetric_mod(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

pub(crate) fn mod_floor(a: &ZPoly, m: &BigInt) -> ZPoly {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

/// A bound on the absolute value of every coefficient of every monic integer
/// factor of `a` (Mignotte: `2^deg · ||a||_2`, using the ceiling of the norm).
pub(crate) fn factor_coeff_bound(a: &ZPoly) -> BigInt {
    let norm_sq: BigInt = a.iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + 1;
    (BigInt::one() << (a.len().saturating_sub(1))) * norm
}
