use std::fmt;

use serde::{Deserialize, Serialize};

use super::{poly_factor, poly_xgcd, Field, FieldElem, FieldError, Poly, Rational, Rationals};
use crate::linalg::Matrix;

/// Identifier of the default tower `Q[θ]/(θ⁷ − 2)`.
pub const BUILTIN_THETA7: &str = "builtin:theta7";

/// Element of a simple extension, as its coordinate vector in the power
/// basis `1, θ, …, θ^(d-1)`. Always exactly `d` coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtElem(Vec<Rational>);

impl ExtElem {
    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }
}

impl FieldElem for ExtElem {
    fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = Poly::from_coeffs(self.0.clone());
        f.write_str(&p.render("θ", |c| c.to_string()))
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The field `L = K[θ]/(f)` over `K = Q`, with `f` monic and irreducible.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldTower {
    min_poly: Poly<Rational>,
    degree: usize,
    /// `θ^(d+k)` reduced modulo `f`, for `k < d - 1`.
    reductions: Vec<Vec<Rational>>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldTower({})",
            self.min_poly.render("θ", |c| c.to_string())
        )
    }
}

impl FieldTower {
    /// Build the extension defined by `min_poly`, certifying irreducibility.
    pub fn new(min_poly: Poly<Rational>) -> Result<Self, FieldError> {
        let q = Rationals;
        let degree = match min_poly.degree() {
            Some(d) if d >= 1 && min_poly.is_monic(&q) => d,
            _ => return Err(FieldError::NotMonic),
        };
        if !poly_factor(&min_poly).is_irreducible() {
            return Err(FieldError::Reducible(min_poly.to_string()));
        }
        let mut reductions = Vec::new();
        // θ^d = -(f_0 + f_1 θ + … + f_{d-1} θ^(d-1))
        let mut cur: Vec<Rational> = min_poly.coeffs()[..degree].iter().map(|c| -c).collect();
        for _ in 0..degree.saturating_sub(1) {
            reductions.push(cur.clone());
            let top = cur[degree - 1].clone();
            let mut next = vec![Rational::zero(); degree];
            for i in 1..degree {
                next[i] = cur[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, r) in reductions[0].iter().enumerate() {
                    next[i] = &next[i] + &(&top * r);
                }
            }
            cur = next;
        }
        Ok(FieldTower {
            min_poly,
            degree,
            reductions,
        })
    }

    /// `K` itself, as the degree-one tower `K[θ]/(θ)`.
    pub fn trivial() -> Self {
        Self::new(Poly::from_i64(&[0, 1])).expect("linear polynomials are irreducible")
    }

    /// The default tower `Q[θ]/(θ⁷ − 2)`.
    pub fn theta7() -> Self {
        Self::new(Poly::from_i64(&[-2, 0, 0, 0, 0, 0, 0, 1])).expect("θ⁷ − 2 is irreducible")
    }

    /// Parse `builtin:theta7` or `poly:c0,c1,…` (lowest degree first).
    pub fn from_id(id: &str) -> Result<Self, FieldError> {
        if id == BUILTIN_THETA7 {
            return Ok(Self::theta7());
        }
        let body = id
            .strip_prefix("poly:")
            .ok_or_else(|| FieldError::Parse(id.to_string()))?;
        let coeffs = body
            .split(',')
            .map(|s| s.parse::<Rational>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(Poly::from_coeffs(coeffs))
    }

    pub fn id(&self) -> String {
        if self.min_poly == Poly::from_i64(&[-2, 0, 0, 0, 0, 0, 0, 1]) {
            return BUILTIN_THETA7.to_string();
        }
        let cs: Vec<String> = self
            .min_poly
            .coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect();
        format!("poly:{}", cs.join(","))
    }

    pub fn min_poly(&self) -> &Poly<Rational> {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The generator θ (equal to `f`'s root; for degree 1 this is a rational).
    pub fn theta(&self) -> ExtElem {
        self.from_poly(&Poly::x(&Rationals))
    }

    /// `θ^k`.
    pub fn theta_pow(&self, k: u32) -> ExtElem {
        self.from_poly(&Poly::monomial(&Rationals, Rational::one(), k as usize))
    }

    pub fn elem(&self, coords: Vec<Rational>) -> Result<ExtElem, FieldError> {
        if coords.len() != self.degree {
            return Err(FieldError::BadLength {
                expected: self.degree,
                got: coords.len(),
            });
        }
        Ok(ExtElem(coords))
    }

    /// Element from integer coordinates, zero-padded to the degree.
    pub fn from_ints(&self, c: &[i64]) -> ExtElem {
        self.from_poly(&Poly::from_i64(c))
    }

    /// Image of a rational polynomial in θ.
    pub fn from_poly(&self, p: &Poly<Rational>) -> ExtElem {
        let r = p.rem(&Rationals, &self.min_poly);
        ExtElem((0..self.degree).map(|i| r.coeff(&Rationals, i)).collect())
    }

    pub fn to_poly(&self, a: &ExtElem) -> Poly<Rational> {
        Poly::from_coeffs(a.0.clone())
    }

    pub fn pow(&self, a: &ExtElem, mut e: u32) -> ExtElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Multiplication by an element, as a `d × d` rational matrix acting on
    /// coordinate columns.
    pub fn mul_matrix(&self, a: &ExtElem) -> Matrix<Rational> {
        let d = self.degree;
        let mut m = Matrix::zeros(&Rationals, d, d);
        let mut col = a.clone();
        let theta = self.theta();
        for j in 0..d {
            for i in 0..d {
                m.set(i, j, col.0[i].clone());
            }
            col = self.mul(&col, &theta);
        }
        m
    }

    pub fn trace(&self, a: &ExtElem) -> Rational {
        let m = self.mul_matrix(a);
        (0..self.degree).fold(Rational::zero(), |acc, i| &acc + m.get(i, i))
    }

    pub fn render(&self, a: &ExtElem) -> String {
        a.to_string()
    }
}

impl Field for FieldTower {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        ExtElem(vec![Rational::zero(); self.degree])
    }

    fn one(&self) -> ExtElem {
        let mut v = vec![Rational::zero(); self.degree];
        v[0] = Rational::one();
        ExtElem(v)
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|x| -x).collect())
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let d = self.degree;
        let mut full = vec![Rational::zero(); 2 * d - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    full[i + j] = &full[i + j] + &(x * y);
                }
            }
        }
        let mut out: Vec<Rational> = full.drain(..d).collect();
        for (k, c) in full.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.reductions[k]) {
                if !r.is_zero() {
                    *o = &*o + &(c * r);
                }
            }
        }
        ExtElem(out)
    }

    fn inv(&self, a: &ExtElem) -> Result<ExtElem, FieldError> {
        ext_inv(self, a)
    }

    fn from_rational(&self, q: &Rational) -> ExtElem {
        let mut v = vec![Rational::zero(); self.degree];
        v[0] = q.clone();
        ExtElem(v)
    }

    fn k_dim(&self) -> usize {
        self.degree
    }

    fn to_k_coords(&self, a: &ExtElem) -> Vec<Rational> {
        a.0.clone()
    }

    fn from_k_coords(&self, coords: &[Rational]) -> ExtElem {
        ExtElem(coords.to_vec())
    }

    fn is_one(&self, a: &ExtElem) -> bool {
        a.0[0].is_one() && a.0[1..].iter().all(Rational::is_zero)
    }
}

/// Inverse via extended Euclid against the minimal polynomial.
pub fn ext_inv(tower: &FieldTower, e: &ExtElem) -> Result<ExtElem, FieldError> {
    if e.is_zero() {
        return Err(FieldError::DivisionByZero);
    }
    let (g, s, _) = poly_xgcd(&Rationals, &tower.to_poly(e), tower.min_poly());
    debug_assert!(g.is_one(&Rationals));
    Ok(tower.from_poly(&s))
}

/// Minimal polynomial of `e` over `K`: the first linear dependency among
/// `1, e, e², …`.
pub fn ext_minpoly(tower: &FieldTower, e: &ExtElem) -> Poly<Rational> {
    let q = Rationals;
    let mut powers = vec![tower.one()];
    loop {
        let next = tower.mul(powers.last().unwrap(), e);
        powers.push(next);
        let k = powers.len();
        let d = tower.degree();
        let m = Matrix::from_fn(&q, d, k, |i, j| powers[j].0[i].clone());
        let ker = m.kernel(&q);
        if let Some(v) = ker.first() {
            return Poly::from_coeffs(v.clone()).monic(&q);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reductions_match_polynomial_remainder() {
        let l = FieldTower::new(Poly::from_i64(&[1, 1, 0, 1])).unwrap();
        let a = l.from_ints(&[1, 2, 3]);
        let b = l.from_ints(&[0, -1, 5]);
        let direct = l.from_poly(&l.to_poly(&a).mul(&Rationals, &l.to_poly(&b)));
        assert_eq!(l.mul(&a, &b), direct);
    }

    #[test]
    fn theta_inverse() {
        let l = FieldTower::theta7();
        let inv = ext_inv(&l, &l.theta()).unwrap();
        let mut expect = vec![Rational::zero(); 7];
        expect[6] = Rational::new(1, 2).unwrap();
        assert_eq!(inv.coords(), expect.as_slice());
        assert!(ext_inv(&l, &l.zero()).is_err());
    }

    #[test]
    fn reducible_rejected() {
        assert!(matches!(
            FieldTower::new(Poly::from_i64(&[-1, 0, 1])),
            Err(FieldError::Reducible(_))
        ));
        assert_eq!(
            FieldTower::new(Poly::from_i64(&[1, 2])),
            Err(FieldError::NotMonic)
        );
    }

    #[test]
    fn ids_round_trip() {
        let l = FieldTower::theta7();
        assert_eq!(l.id(), BUILTIN_THETA7);
        let m = FieldTower::from_id("poly:-3,0,1").unwrap();
        assert_eq!(m.id(), "poly:-3,0,1");
        assert_eq!(FieldTower::from_id(&m.id()).unwrap(), m);
    }
}
