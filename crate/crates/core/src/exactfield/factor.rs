//! Factorization over the rationals: squarefree decomposition, then
//! Zassenhaus (modular factorization, Hensel lifting, subset recombination).

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::poly::poly_gcd;
use super::zpoly::{self, ZPoly};
use super::{modp, Field, Poly, Rational, Rationals};

/// `unit · ∏ fᵢ^mᵢ` with every `fᵢ` monic and irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization<E> {
    pub unit: E,
    pub factors: Vec<(Poly<E>, u32)>,
}

impl Factorization<Rational> {
    /// Multiply the factorization back out.
    pub fn expand(&self) -> Poly<Rational> {
        let q = Rationals;
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (f, m)| {
                acc.mul(&q, &f.pow(&q, *m))
            })
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Yun's algorithm: monic `(aᵢ, i)` with `monic(f) = ∏ aᵢ^i`, each `aᵢ`
/// squarefree and pairwise coprime. Constant inputs give an empty list.
pub fn squarefree_decomposition<F: Field>(f: &F, p: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, u32)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let p = p.monic(f);
    let dp = p.derivative(f);
    let a0 = poly_gcd(f, &p, &dp);
    let mut b = p.div_exact(f, &a0).unwrap();
    let mut c = dp.div_exact(f, &a0).unwrap();
    let mut d = c.sub(f, &b.derivative(f));
    let mut i = 1;
    while !b.is_constant() {
        let a = poly_gcd(f, &b, &d);
        b = b.div_exact(f, &a).unwrap();
        c = d.div_exact(f, &a).unwrap();
        d = c.sub(f, &b.derivative(f));
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Factor a nonzero rational polynomial into monic irreducibles. The zero
/// polynomial yields unit zero and no factors.
pub fn poly_factor(p: &Poly<Rational>) -> Factorization<Rational> {
    let q = Rationals;
    let Some(lc) = p.lc() else {
        return Factorization {
            unit: Rational::zero(),
            factors: Vec::new(),
        };
    };
    let mut factors = Vec::new();
    let (_, whole) = zpoly::primitive_from_rational(p);
    let parts = if squarefree_by_reduction(&whole) {
        vec![(p.clone(), 1)]
    } else {
        squarefree_decomposition(&q, p)
    };
    for (part, mult) in parts {
        let (_, prim) = zpoly::primitive_from_rational(&part);
        for g in factor_primitive_squarefree(&prim) {
            factors.push((zpoly::to_rational(&g).monic(&q), mult));
        }
    }
    factors.sort_by(|a, b| (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1)));
    Factorization {
        unit: lc.clone(),
        factors,
    }
}

/// Sufficient test for squarefreeness: a reduction modulo some small prime
/// keeps the degree and is squarefree. Avoids a rational Euclidean gcd,
/// whose coefficients swell badly at high degree.
pub(crate) fn squarefree_by_reduction(f: &ZPoly) -> bool {
    small_primes().take(12).any(|p| {
        let fp = zpoly::reduce(f, p);
        fp.len() == f.len() && modp::is_squarefree(&fp, p)
    })
}

/// Squarefreeness of a rational polynomial, trying the modular test first.
pub(crate) fn is_squarefree_q(p: &Poly<Rational>) -> bool {
    let q = Rationals;
    let (_, prim) = zpoly::primitive_from_rational(p);
    squarefree_by_reduction(&prim) || poly_gcd(&q, p, &p.derivative(&q)).is_one(&q)
}

/// Irreducible factors of a primitive squarefree integer polynomial with
/// positive leading coefficient.
fn factor_primitive_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    // g(x) = a^(n-1) f(x/a) is monic; its factors h give factors pp(h(a x)) of f.
    let a = f[n].clone();
    let mut g = Vec::with_capacity(n + 1);
    let mut pow = BigInt::one();
    for i in (0..n).rev() {
        g.push(&f[i] * &pow);
        pow *= &a;
    }
    g.reverse();
    g.push(BigInt::one());
    factor_monic(&g)
        .into_iter()
        .map(|h| {
            let mut pow = BigInt::one();
            let scaled: ZPoly = h
                .iter()
                .map(|c| {
                    let v = c * &pow;
                    pow *= &a;
                    v
                })
                .collect();
            let cont = zpoly::content(&scaled);
            let sign = if scaled.last().unwrap().is_negative() {
                -1
            } else {
                1
            };
            scaled.iter().map(|c| c * sign / &cont).collect()
        })
        .collect()
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| {
        (3..)
            .step_by(2)
            .take_while(|d| d * d <= n)
            .all(|d| n % d != 0)
    })
}

/// Zassenhaus on a monic squarefree integer polynomial of degree ≥ 2.
fn factor_monic(g: &ZPoly) -> Vec<ZPoly> {
    if g.len() <= 2 {
        return vec![g.clone()];
    }
    // Among the first few primes keeping g squarefree, take the one giving
    // the fewest modular factors.
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for p in small_primes().take(200) {
        let gp = zpoly::reduce(g, p);
        if gp.len() != g.len() || !modp::is_squarefree(&gp, p) {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let fs = modp::factor_squarefree(&gp, p, &mut rng);
        if fs.len() == 1 {
            return vec![g.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (p, modular) = best.expect("a squarefree polynomial has a good prime");

    let bound = zpoly::factor_coeff_bound(g) * 2;
    let pb = BigInt::from(p);
    let mut k = 1;
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_lift_all(g, &modular, p, k);
    recombine(g, lifted, &modulus)
}

/// Lift `t ≡ ∏ factors (mod p)` to a factorization modulo `p^k`, all monic.
fn hensel_lift_all(t: &ZPoly, factors: &[Vec<u64>], p: u64, k: u32) -> Vec<ZPoly> {
    let modulus = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        return vec![zpoly::mod_floor(t, &modulus)];
    }
    let g = &factors[0];
    let h = factors[1..]
        .iter()
        .fold(vec![1u64], |acc, f| modp::mul(&acc, f, p));
    let (gl, hl) = hensel_lift_pair(t, g, &h, p, k);
    let mut out = vec![gl];
    out.extend(hensel_lift_all(&hl, &factors[1..], p, k));
    out
}

/// Linear Hensel lifting of `t ≡ g·h (mod p)` to `t ≡ G·H (mod p^k)` with
/// `G ≡ g`, `H ≡ h` and both monic.
fn hensel_lift_pair(t: &ZPoly, g: &[u64], h: &[u64], p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, _s, tt) = modp::xgcd(&g.to_vec(), &h.to_vec(), p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut big_g = zpoly::from_modp(g);
    let mut big_h = zpoly::from_modp(h);
    let mut m = pb.clone();
    for _ in 1..k {
        let prod = zpoly::mul(&big_g, &big_h);
        let n = t.len().max(prod.len());
        let err: ZPoly = (0..n)
            .map(|i| {
                let a = t.get(i).cloned().unwrap_or_default();
                let b = prod.get(i).cloned().unwrap_or_default();
                (a - b) / &m
            })
            .collect();
        let e = zpoly::reduce(&err, p);
        let dg = modp::rem(&modp::mul(&tt, &e, p), &g.to_vec(), p);
        let dh = modp::div_rem(
            &modp::sub(&e, &modp::mul(&dg, &h.to_vec(), p), p),
            &g.to_vec(),
            p,
        )
        .0;
        add_scaled(&mut big_g, &dg, &m);
        add_scaled(&mut big_h, &dh, &m);
        m *= &pb;
        big_g = zpoly::mod_floor(&big_g, &m);
        big_h = zpoly::mod_floor(&big_h, &m);
    }
    (big_g, big_h)
}

fn add_scaled(a: &mut ZPoly, d: &[u64], m: &BigInt) {
    if a.len() < d.len() {
        a.resize(d.len(), BigInt::default());
    }
    for (x, &y) in a.iter_mut().zip(d) {
        *x += m * y;
    }
}

/// Subset recombination of modular factors into true integer factors.
fn recombine(g: &ZPoly, mut lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut rest = g.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for subset in (0..lifted.len()).combinations(size) {
            let prod = subset
                .iter()
                .fold(vec![BigInt::one()], |acc, &i| zpoly::mul(&acc, &lifted[i]));
            let cand = zpoly::symmetric_mod(&prod, modulus);
            if let Some(q) = zpoly::div_monic(&rest, &cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                rest = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if rest.len() > 1 {
        found.push(rest);
    }
    found
}
