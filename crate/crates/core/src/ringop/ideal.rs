//! Ideals of `R`: hull data, supports, comaximal splitting and CRT elements.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{MaximalIdealDesc, RModule, RingError};
use crate::exactfield::{
    factor_over_tower, poly_xgcd, ExtElem, Field, FieldTower, Poly, Rational, Rationals,
};
use crate::linalg::{k_contains, k_expand, k_span_basis, Matrix};
use crate::polymat::LPoly;

/// A finitely generated ideal `I = x^e·h·(W + xS)` of `R`, with `h(0) = 1`
/// and `W ⊆ L` a nonzero K-subspace.
#[derive(Clone)]
pub struct IdealOfR {
    module: RModule,
    gens: Vec<LPoly>,
}

impl PartialEq for IdealOfR {
    fn eq(&self, other: &Self) -> bool {
        self.module == other.module
    }
}

impl Eq for IdealOfR {}

impl std::fmt::Debug for IdealOfR {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.hull() {
            None => f.write_str("IdealOfR(0)"),
            Some((e, h, w)) => f
                .debug_struct("IdealOfR")
                .field("e", &e)
                .field("h", &h)
                .field("W", &w)
                .finish(),
        }
    }
}

/// Wire form `{"e", "h", "coeffspace", "gens"}`; the zero ideal has `e = -1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealJson {
    pub e: i64,
    pub h: LPoly,
    pub coeffspace: Vec<ExtElem>,
    pub gens: Vec<LPoly>,
}

impl IdealOfR {
    pub fn from_gens(tower: Arc<FieldTower>, gens: &[LPoly]) -> Result<Self, RingError> {
        let l = tower.as_ref();
        if gens
            .iter()
            .any(|g| l.as_rational(&g.constant_term(l)).is_none())
        {
            return Err(RingError::NotInR);
        }
        Ok(Self::from_gens_unchecked(tower, gens))
    }

    pub(crate) fn from_gens_unchecked(tower: Arc<FieldTower>, gens: &[LPoly]) -> Self {
        let cols: Vec<Vec<LPoly>> = gens.iter().map(|g| vec![g.clone()]).collect();
        IdealOfR {
            module: RModule::span(tower, 1, &cols),
            gens: gens.to_vec(),
        }
    }

    pub(crate) fn from_module(module: RModule) -> Self {
        let gens = module
            .generators()
            .into_iter()
            .map(|mut g| g.remove(0))
            .collect();
        IdealOfR { module, gens }
    }

    pub fn principal(tower: Arc<FieldTower>, r: LPoly) -> Result<Self, RingError> {
        Self::from_gens(tower, &[r])
    }

    pub(crate) fn principal_unchecked(tower: Arc<FieldTower>, r: LPoly) -> Self {
        Self::from_gens_unchecked(tower, &[r])
    }

    pub fn unit(tower: Arc<FieldTower>) -> Self {
        let one = Poly::one(tower.as_ref());
        Self::from_gens_unchecked(tower, &[one])
    }

    pub fn zero(tower: Arc<FieldTower>) -> Self {
        Self::from_gens_unchecked(tower, &[])
    }

    /// `M0 = xS`, which is also the conductor.
    pub fn maximal_m0(tower: Arc<FieldTower>) -> Self {
        let l = tower.as_ref();
        let gens: Vec<LPoly> = (0..l.degree())
            .map(|a| Poly::monomial(l, l.theta_pow(a as u32), 1))
            .collect();
        Self::from_gens_unchecked(tower, &gens)
    }

    /// `x^e·(W + xS)` for a K-spanning set of `W ⊆ L`.
    pub fn from_coeffspace(
        tower: Arc<FieldTower>,
        e: usize,
        w: &[ExtElem],
    ) -> Result<Self, RingError> {
        let l = tower.as_ref();
        let mut gens: Vec<LPoly> = w.iter().map(|c| Poly::monomial(l, c.clone(), e)).collect();
        gens.extend((0..l.degree()).map(|a| Poly::monomial(l, l.theta_pow(a as u32), e + 1)));
        Self::from_gens(tower, &gens)
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.module.tower()
    }

    pub fn module(&self) -> &RModule {
        &self.module
    }

    /// The generators this ideal was built from.
    pub fn original_gens(&self) -> &[LPoly] {
        &self.gens
    }

    /// Canonical R-generators.
    pub fn generators(&self) -> Vec<LPoly> {
        self.module
            .generators()
            .into_iter()
            .map(|mut g| g.remove(0))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.contains(&Poly::one(self.tower().as_ref()))
    }

    pub fn contains(&self, f: &LPoly) -> bool {
        self.module.contains(std::slice::from_ref(f))
    }

    pub fn contains_ideal(&self, other: &IdealOfR) -> bool {
        other.module.is_submodule_of(&self.module)
    }

    /// `(e, h, W)` with `I = x^e·h·(W + xS)`; `None` for the zero ideal.
    pub fn hull(&self) -> Option<(usize, LPoly, Vec<ExtElem>)> {
        if self.is_zero() {
            return None;
        }
        let l = self.tower().as_ref();
        let b = self.module.hull().get(0, 0);
        let e = b.x_valuation().unwrap_or(0);
        let b0 = b.shift_down(e);
        let c = b0.constant_term(l);
        let h = b0.normalize_at_zero(l).expect("b0(0) ≠ 0");
        let scaled: Vec<Vec<ExtElem>> = self
            .module
            .coefficient_space()
            .iter()
            .map(|v| vec![l.mul(&c, &v[0])])
            .collect();
        let w = k_span_basis(l, &scaled, 1)
            .into_iter()
            .map(|mut v| v.remove(0))
            .collect();
        Some((e, h, w))
    }

    pub fn add(&self, other: &IdealOfR) -> IdealOfR {
        IdealOfR::from_module(self.module.add(&other.module))
    }

    pub fn mul(&self, other: &IdealOfR) -> IdealOfR {
        IdealOfR::from_module(self.module.ideal_mul(other))
    }

    pub fn pow(&self, k: u32) -> IdealOfR {
        let mut acc = IdealOfR::unit(self.tower().clone());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Whether `a ≡ b` modulo this ideal.
    pub fn congruent(&self, a: &LPoly, b: &LPoly) -> bool {
        self.contains(&a.sub(self.tower().as_ref(), b))
    }

    pub fn to_json(&self) -> IdealJson {
        match self.hull() {
            None => IdealJson {
                e: -1,
                h: Poly::zero(),
                coeffspace: Vec::new(),
                gens: self.gens.clone(),
            },
            Some((e, h, w)) => IdealJson {
                e: e as i64,
                h,
                coeffspace: w,
                gens: self.gens.clone(),
            },
        }
    }

    /// Rebuild from the generator list of a wire record.
    pub fn from_json(tower: Arc<FieldTower>, j: &IdealJson) -> Result<Self, RingError> {
        Self::from_gens(tower, &j.gens)
    }
}

/// `r = unit·x^e·∏ qᵢ^mᵢ` with `qᵢ(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementFactorization {
    pub unit: ExtElem,
    pub e: usize,
    pub factors: Vec<(LPoly, u32)>,
}

impl ElementFactorization {
    pub fn expand(&self, l: &FieldTower) -> LPoly {
        self.factors.iter().fold(
            Poly::monomial(l, self.unit.clone(), self.e),
            |acc, (q, m)| acc.mul(l, &q.pow(l, *m)),
        )
    }
}

pub fn factor_element(l: &FieldTower, r: &LPoly) -> Result<ElementFactorization, RingError> {
    if r.is_zero() {
        return Err(RingError::ZeroElement);
    }
    if l.as_rational(&r.constant_term(l)).is_none() {
        return Err(RingError::NotInR);
    }
    let e = r.x_valuation().unwrap();
    let r0 = r.shift_down(e);
    let unit = r0.constant_term(l);
    let rest = r0.normalize_at_zero(l).unwrap();
    let mut factors: Vec<(LPoly, u32)> = if rest.is_constant() {
        Vec::new()
    } else {
        factor_over_tower(l, &rest)
            .factors
            .into_iter()
            .map(|(q, m)| (q.normalize_at_zero(l).unwrap(), m))
            .collect()
    };
    factors.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    Ok(ElementFactorization { unit, e, factors })
}

/// `(prime, exponent)` for every maximal ideal containing `I`.
fn prime_exponents(i: &IdealOfR) -> Result<Vec<(MaximalIdealDesc, usize)>, RingError> {
    let l = i.tower().as_ref();
    let (e, h, _) = i.hull().ok_or(RingError::ZeroIdeal)?;
    let mut out = Vec::new();
    if e > 0 {
        out.push((MaximalIdealDesc::M0, e));
    }
    if !h.is_constant() {
        let fac = factor_element(l, &h).expect("h(0) = 1");
        for (q, m) in fac.factors {
            out.push((MaximalIdealDesc::Poly(q), m as usize));
        }
    }
    Ok(out)
}

/// Maximal ideals containing `I`, with `M0` first.
pub fn support(i: &IdealOfR) -> Result<Vec<MaximalIdealDesc>, RingError> {
    Ok(prime_exponents(i)?.into_iter().map(|(p, _)| p).collect())
}

/// `I = ∏ Iₚ` with pairwise comaximal primary components: `x^e·(W + xS)` at
/// `M0` and `q^k·R` at `Poly(q)`.
pub fn comaximal_factorization(
    i: &IdealOfR,
) -> Result<Vec<(MaximalIdealDesc, IdealOfR)>, RingError> {
    let tower = i.tower().clone();
    let l = tower.as_ref();
    let primes = prime_exponents(i)?;
    if primes.is_empty() {
        return Err(RingError::UnitIdeal);
    }
    let (_, _, w) = i.hull().unwrap();
    let out: Vec<(MaximalIdealDesc, IdealOfR)> = primes
        .into_iter()
        .map(|(p, k)| {
            let comp = match &p {
                MaximalIdealDesc::M0 => {
                    IdealOfR::from_coeffspace(tower.clone(), k, &w).expect("e ≥ 1")
                }
                MaximalIdealDesc::Poly(q) => {
                    IdealOfR::principal_unchecked(tower.clone(), q.pow(l, k as u32))
                }
            };
            (p, comp)
        })
        .collect();
    debug_assert!(
        out.iter()
            .fold(IdealOfR::unit(tower.clone()), |acc, (_, c)| acc.mul(c))
            == *i
    );
    Ok(out)
}

/// Chinese-remainder elements for a modulus `I`: `bᵢ ≡ 1` modulo the
/// component at target `i` and `≡ 0` modulo every other component; the
/// complement `b` is `≡ 0` at targets and `≡ 1` elsewhere.
#[derive(Debug, Clone)]
pub struct CrtElements {
    pub targets: Vec<MaximalIdealDesc>,
    pub b: Vec<LPoly>,
    pub complement: LPoly,
    pub components: Vec<(MaximalIdealDesc, IdealOfR)>,
}

impl CrtElements {
    /// Check every congruence exactly.
    pub fn verify(&self) -> bool {
        let Some((_, first)) = self.components.first() else {
            return true;
        };
        let l = first.tower().as_ref();
        let one = Poly::one(l);
        let zero = Poly::zero();
        let expect = |hit: bool| if hit { &one } else { &zero };
        self.components.iter().all(|(p, comp)| {
            self.targets
                .iter()
                .zip(&self.b)
                .all(|(t, bi)| comp.congruent(bi, expect(t == p)))
                && comp.congruent(&self.complement, expect(!self.targets.contains(p)))
        })
    }

    /// Shift every target element by `k·m` for `m ∈ I`: another valid choice.
    pub fn perturb(&self, l: &FieldTower, m: &LPoly, k: i64) -> CrtElements {
        let delta = m.scale(l, &l.from_int(k));
        let b: Vec<LPoly> = self.b.iter().map(|bi| bi.add(l, &delta)).collect();
        let complement = if self.complement.is_zero() {
            Poly::zero()
        } else {
            b.iter().fold(Poly::one(l), |acc, bi| acc.sub(l, bi))
        };
        CrtElements {
            b,
            complement,
            ..self.clone()
        }
    }
}

pub fn crt_idempotents(
    targets: &[MaximalIdealDesc],
    modulus: &IdealOfR,
) -> Result<CrtElements, RingError> {
    let tower = modulus.tower().clone();
    let l = tower.as_ref();
    let primes = prime_exponents(modulus)?;
    if targets.iter().any(|t| !primes.iter().any(|(p, _)| p == t)) {
        return Err(RingError::SupportMismatch);
    }
    let components = if primes.is_empty() {
        Vec::new()
    } else {
        comaximal_factorization(modulus)?
    };
    let (e, h, w) = modulus.hull().unwrap();
    let xe = Poly::monomial(l, l.one(), e);

    let mut b = Vec::with_capacity(targets.len());
    for t in targets {
        let bi = match t {
            MaximalIdealDesc::M0 => crt_at_m0(l, e, &h, &w),
            MaximalIdealDesc::Poly(q) => {
                let k = primes.iter().find(|(p, _)| p == t).unwrap().1;
                let qk = q.pow(l, k as u32);
                let cof = h.div_exact(l, &qk).expect("q^k divides h");
                let a = xe.mul(l, &cof);
                let (g, mut u, _) = poly_xgcd(l, &a, &qk);
                debug_assert!(g.is_one(l));
                // b = a·u must lie in the M0 component; its x^e coefficient is u(0).
                let u0 = u.constant_term(l);
                let w_ok = if e == 0 {
                    l.as_rational(&u0).is_some()
                } else {
                    k_contains(
                        l,
                        &w.iter().map(|c| vec![c.clone()]).collect::<Vec<_>>(),
                        &[u0.clone()],
                    )
                };
                if !w_ok {
                    u = u.sub(l, &qk.scale(l, &u0));
                }
                a.mul(l, &u)
            }
        };
        b.push(bi);
    }
    let covered = primes.iter().all(|(p, _)| targets.contains(p));
    let complement = if covered {
        Poly::zero()
    } else {
        b.iter().fold(Poly::one(l), |acc, bi| acc.sub(l, bi))
    };
    Ok(CrtElements {
        targets: targets.to_vec(),
        b,
        complement,
        components,
    })
}

/// Least-degree `h·r` with `r ∈ R` and `1 − h·r ∈ x^e·(W + xS)`.
fn crt_at_m0(l: &FieldTower, e: usize, h: &LPoly, w: &[ExtElem]) -> LPoly {
    let d = l.degree();
    let kq = Rationals;
    let w_rows: Vec<Vec<Rational>> = w
        .iter()
        .map(|c| k_expand(l, std::slice::from_ref(c)))
        .collect();
    let ann = Matrix::from_rows(w_rows, d).unwrap().kernel(&kq);
    for j in 0..=e {
        // Unknowns: r₀ ∈ K, then r₁..r_j ∈ L in K-coordinates.
        let nvars = 1 + j * d;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut rhs: Vec<Rational> = Vec::new();
        // Column of unknown z: K-coordinates of the first e+1 coefficients of h·r.
        let effect = |z: usize| -> Vec<Vec<Rational>> {
            let (deg, c) = if z == 0 {
                (0, l.one())
            } else {
                (1 + (z - 1) / d, l.theta_pow(((z - 1) % d) as u32))
            };
            let r = Poly::monomial(l, c, deg);
            let hr = h.mul(l, &r);
            (0..=e).map(|i| l.to_k_coords(&hr.coeff(l, i))).collect()
        };
        let cols: Vec<Vec<Vec<Rational>>> = (0..nvars).map(effect).collect();
        for i in 0..e {
            for t in 0..d {
                rows.push(cols.iter().map(|c| c[i][t].clone()).collect());
                rhs.push(if i == 0 && t == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                });
            }
        }
        for a in &ann {
            rows.push(
                cols.iter()
                    .map(|c| {
                        a.iter()
                            .zip(&c[e])
                            .fold(Rational::zero(), |s, (x, y)| &s + &(x * y))
                    })
                    .collect(),
            );
            rhs.push(Rational::zero());
        }
        let m = Matrix::from_rows(rows, nvars).unwrap();
        if let Some(z) = m.solve(&kq, &rhs) {
            let mut coeffs = vec![l.from_rational(&z[0])];
            for k in 0..j {
                coeffs.push(l.from_k_coords(&z[1 + k * d..1 + (k + 1) * d]));
            }
            return h.mul(l, &Poly::from_coeffs(coeffs));
        }
    }
    unreachable!("the truncated inverse of h solves the system at degree e")
}

/// Minimal number of generators of `I_𝔭`.
pub fn min_generators(i: &IdealOfR, p: &MaximalIdealDesc) -> Result<usize, RingError> {
    let (e, _, w) = i.hull().ok_or(RingError::ZeroIdeal)?;
    Ok(match p {
        MaximalIdealDesc::M0 if e > 0 => w.len(),
        _ => 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceChainReport {
    pub valid: bool,
    /// 1-based index `n` of the first failing link `(Jₙ, Jₙ₊₁)`.
    pub first_violation: Option<usize>,
}

/// Check `Jₙ ⊆ Jₙ₊₁` and `Jₙ₊₁·Jₙ = Jₙ` along the chain.
pub fn validate_trace_chain(chain: &[IdealOfR]) -> Result<TraceChainReport, RingError> {
    if chain.is_empty() {
        return Err(RingError::EmptyChain);
    }
    for (n, pair) in chain.windows(2).enumerate() {
        let (jn, jnext) = (&pair[0], &pair[1]);
        if !jnext.contains_ideal(jn) || jnext.mul(jn) != *jn {
            return Ok(TraceChainReport {
                valid: false,
                first_violation: Some(n + 1),
            });
        }
    }
    Ok(TraceChainReport {
        valid: true,
        first_violation: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoprimeReport {
    pub gcd: u64,
    pub closure_fails: bool,
}

/// Direct-sum closure fails exactly when the two ranks share a factor.
pub fn coprime_obstruction(r1: u64, r2: u64) -> Result<CoprimeReport, RingError> {
    if r1 == 0 || r2 == 0 {
        return Err(RingError::ZeroRank);
    }
    let gcd = num_integer::gcd(r1, r2);
    Ok(CoprimeReport {
        gcd,
        closure_fails: gcd > 1,
    })
}
