use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Field, FieldElem, Rational, Rationals};

/// Dense univariate polynomial, coefficients lowest degree first.
///
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector. Arithmetic takes the coefficient field as an argument.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: FieldElem> Poly<E> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: E) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one<F: Field<Elem = E>>(f: &F) -> Self {
        Self::constant(f.one())
    }

    /// The indeterminate `x`.
    pub fn x<F: Field<Elem = E>>(f: &F) -> Self {
        Self::monomial(f, f.one(), 1)
    }

    pub fn monomial<F: Field<Elem = E>>(f: &F, c: E, deg: usize) -> Self {
        let mut v = vec![f.zero(); deg + 1];
        v[deg] = c;
        Self::from_coeffs(v)
    }

    pub fn from_ints<F: Field<Elem = E>>(f: &F, c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&n| f.from_int(n)).collect())
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn deg_i(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lc(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    /// Value at zero.
    pub fn constant_term<F: Field<Elem = E>>(&self, f: &F) -> E {
        self.coeff(f, 0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.coeffs.len() == 1 && f.is_one(&self.coeffs[0])
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => f.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(v)
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] = f.add(&v[i + j], &f.mul(a, b));
            }
        }
        Self::from_coeffs(v)
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift<F: Field<Elem = E>>(&self, f: &F, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![f.zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// Drop the `k` lowest coefficients: the quotient by `x^k`.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Truncation modulo `x^k`.
    pub fn truncate(&self, k: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(k).cloned().collect())
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(f);
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

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem<F: Field<Elem = E>>(&self, f: &F, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc_inv = f
            .inv(divisor.lc().unwrap())
            .expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = f.mul(&r[k + dd], &lc_inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    r[k + j] = f.sub(&r[k + j], &f.mul(&c, b));
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub fn rem<F: Field<Elem = E>>(&self, f: &F, divisor: &Self) -> Self {
        self.div_rem(f, divisor).1
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact<F: Field<Elem = E>>(&self, f: &F, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(f, divisor);
        r.is_zero().then_some(q)
    }

    pub fn divides<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        other.rem(f, self).is_zero()
    }

    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Self {
        match self.lc() {
            None => Self::zero(),
            Some(lc) => self.scale(f, &f.inv(lc).unwrap()),
        }
    }

    pub fn is_monic<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.lc().is_some_and(|c| f.is_one(c))
    }

    /// Horner evaluation in the coefficient field.
    pub fn eval<F: Field<Elem = E>>(&self, f: &F, x: &E) -> E {
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(c, &f.from_int(i as i64)))
                .collect(),
        )
    }

    /// `self(g(x))`.
    pub fn compose<F: Field<Elem = E>>(&self, f: &F, g: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(f, g).add(f, &Self::constant(c.clone()));
        }
        acc
    }

    /// Normalize so the constant term is one; `None` when it is zero.
    pub fn normalize_at_zero<F: Field<Elem = E>>(&self, f: &F) -> Option<Self> {
        let c0 = self.coeffs.first()?;
        if c0.is_zero() {
            return None;
        }
        Some(self.scale(f, &f.inv(c0).unwrap()))
    }

    /// Exponent of the largest power of `x` dividing `self`.
    pub fn x_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Map coefficients into another field.
    pub fn map<G: Field>(&self, mut m: impl FnMut(&E) -> G::Elem) -> Poly<G::Elem> {
        Poly::from_coeffs(self.coeffs.iter().map(&mut m).collect())
    }

    /// Write the polynomial with a named indeterminate, rendering coefficients
    /// with `show`.
    pub fn render(&self, var: &str, show: impl Fn(&E) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = show(c);
            let cs = if cs.contains(['+', ' ']) || (cs.contains('-') && !cs.starts_with('-')) {
                format!("({cs})")
            } else {
                cs
            };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (i, cs.as_str()) {
                (0, _) => cs,
                (_, "1") => mono,
                (_, "-1") => format!("-{mono}"),
                _ => format!("{cs}*{mono}"),
            });
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

impl Poly<Rational> {
    pub fn from_i64(c: &[i64]) -> Self {
        Self::from_ints(&Rationals, c)
    }
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x", |c| c.to_string()))
    }
}

impl<E: fmt::Debug> fmt::Debug for Poly<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<E: Serialize> Serialize for Poly<E> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de, E: FieldElem + Deserialize<'de>> Deserialize<'de> for Poly<E> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Poly::from_coeffs(Vec::<E>::deserialize(deserializer)?))
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn poly_gcd<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(f, &b);
        a = b;
        b = r;
    }
    a.monic(f)
}

/// Extended Euclid: `(g, s, t)` with `s·a + t·b = g`, `g` monic (or zero).
pub fn poly_xgcd<F: Field>(
    f: &F,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(f), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one(f));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(f, &r1);
        let s2 = s0.sub(f, &q.mul(f, &s1));
        let t2 = t0.sub(f, &q.mul(f, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.lc() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = f.inv(lc).unwrap();
            (r0.scale(f, &inv), s0.scale(f, &inv), t0.scale(f, &inv))
        }
    }
}

pub fn poly_lcm<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = poly_gcd(f, a, b);
    a.div_exact(f, &g).unwrap().mul(f, b).monic(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_i64(c)
    }

    #[test]
    fn gcd_examples() {
        let q = Rationals;
        assert_eq!(poly_gcd(&q, &p(&[-1, 0, 1]), &p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(poly_gcd(&q, &p(&[4, 2]), &Poly::zero()), p(&[2, 1]));
        assert_eq!(poly_gcd(&q, &Poly::zero(), &Poly::zero()), Poly::zero());
        // x^7 - 2 at x = -1 is -3, so x + 1 shares no factor with it.
        assert_eq!(
            poly_gcd(&q, &p(&[-2, 0, 0, 0, 0, 0, 0, 1]), &p(&[1, 1])),
            p(&[1])
        );
    }

    #[test]
    fn xgcd_identity() {
        let q = Rationals;
        let a = p(&[-2, 0, 0, 0, 0, 0, 0, 1]);
        let b = p(&[1, 1]);
        let (g, s, t) = poly_xgcd(&q, &a, &b);
        assert!(g.is_one(&q));
        assert_eq!(s.mul(&q, &a).add(&q, &t.mul(&q, &b)), g);
    }

    #[test]
    fn division_and_compose() {
        let q = Rationals;
        let (quo, rem) = p(&[1, 0, 0, 1]).div_rem(&q, &p(&[1, 1]));
        assert_eq!(quo, p(&[1, -1, 1]));
        assert!(rem.is_zero());
        assert_eq!(p(&[0, 0, 1]).compose(&q, &p(&[1, 1])), p(&[1, 2, 1]));
        assert_eq!(p(&[1, 2, 1]).derivative(&q), p(&[2, 2]));
    }

    #[test]
    fn render_is_readable() {
        assert_eq!(p(&[-2, 0, 0, 1]).to_string(), "-2 + x^3");
        assert_eq!(p(&[0, -1, 3]).to_string(), "-x + 3*x^2");
    }
}
