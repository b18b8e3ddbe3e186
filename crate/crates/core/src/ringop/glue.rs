//! Building a module with prescribed localizations from CRT elements.

use super::{
    crt_idempotents, CrtElements, IdealOfR, LocalInvariant, MaximalIdealDesc, RModule, RingError,
};
use crate::exactfield::Poly;
use crate::pairs::{is_isomorphic, PairModule};
use crate::polymat::LPoly;

/// Search bound for the exponent of `d` at a single prime.
const MAX_LOCAL_EXPONENT: usize = 64;

/// Prescribed localization at one maximal ideal.
#[derive(Debug, Clone)]
pub enum LocalAssignment {
    /// A full-rank submodule `X` of the ambient module; only `X_𝔭` matters.
    Submodule(RModule),
    /// `q^k·M_𝔭` at a prime `Poly(q)`.
    Power(usize),
}

#[derive(Debug, Clone)]
pub struct GlueResult {
    pub module: RModule,
    /// The element `d` with `d·M_𝔭 ⊆ X(𝔭)` at every assigned prime.
    pub d: LPoly,
    pub crt: CrtElements,
}

/// `x·(V + x·Sⁿ)` inside `Rⁿ`: a submodule of the free module with pair `V`.
pub fn embed_pair(pair: &PairModule) -> RModule {
    RModule::from_pair(pair, 1)
}

/// `N = Σ bᵢ·Xᵢ' + b·M + d·M`, where `Xᵢ'` is the assigned submodule (or
/// `qᵏ·M`), `bᵢ` and `b` are CRT elements modulo `d·R`, and `variant`
/// shifts each `bᵢ` by `variant·d`, giving another valid choice.
pub fn glue_submodule(
    ambient: &RModule,
    assignments: &[(MaximalIdealDesc, LocalAssignment)],
    variant: i64,
) -> Result<GlueResult, RingError> {
    let tower = ambient.tower().clone();
    let l = tower.as_ref();
    let n = ambient.n();
    for (i, (p, _)) in assignments.iter().enumerate() {
        if assignments[..i].iter().any(|(q, _)| q == p) {
            return Err(RingError::DuplicateAssignment);
        }
    }

    let mut d = Poly::one(l);
    let mut parts: Vec<RModule> = Vec::with_capacity(assignments.len());
    for (p, a) in assignments {
        let (x, exp) = match a {
            LocalAssignment::Submodule(x) => {
                if x.n() != n {
                    return Err(RingError::RankMismatch {
                        expected: n,
                        got: x.n(),
                    });
                }
                if x.rank() != ambient.rank() {
                    return Err(RingError::NotFullRank);
                }
                if !x.is_submodule_of(ambient) {
                    return Err(RingError::NotSubmodule);
                }
                let exp = (0..=MAX_LOCAL_EXPONENT)
                    .find(|&a| {
                        ambient
                            .scale(&uniformizer(l, p).pow(l, a as u32))
                            .local_le(x, p)
                    })
                    .ok_or(RingError::NotFullRank)?;
                (x.clone(), exp)
            }
            LocalAssignment::Power(k) => {
                let MaximalIdealDesc::Poly(q) = p else {
                    return Err(RingError::SupportMismatch);
                };
                (ambient.scale(&q.pow(l, *k as u32)), *k)
            }
        };
        // The CRT modulus needs every assigned prime in its support.
        let exp = exp.max(1);
        d = d.mul(l, &uniformizer(l, p).pow(l, exp as u32));
        parts.push(x);
    }

    let targets: Vec<MaximalIdealDesc> = assignments.iter().map(|(p, _)| p.clone()).collect();
    let modulus = IdealOfR::principal_unchecked(tower.clone(), d.clone());
    let mut crt = crt_idempotents(&targets, &modulus)?;
    if variant != 0 {
        crt = crt.perturb(l, &d, variant);
    }

    let mut gens: Vec<Vec<LPoly>> = Vec::new();
    let scaled = |m: &RModule, f: &LPoly| -> Vec<Vec<LPoly>> {
        m.generators()
            .iter()
            .map(|g| g.iter().map(|c| c.mul(l, f)).collect())
            .collect()
    };
    for (x, bi) in parts.iter().zip(&crt.b) {
        gens.extend(scaled(x, bi));
    }
    if !crt.complement.is_zero() {
        gens.extend(scaled(ambient, &crt.complement));
    }
    gens.extend(scaled(ambient, &d));
    Ok(GlueResult {
        module: RModule::span(tower.clone(), n, &gens),
        d,
        crt,
    })
}

/// `x` at `M0`, `q` at `Poly(q)`.
fn uniformizer(l: &crate::exactfield::FieldTower, p: &MaximalIdealDesc) -> LPoly {
    match p {
        MaximalIdealDesc::M0 => Poly::x(l),
        MaximalIdealDesc::Poly(q) => q.clone(),
    }
}

/// Check the glued module against its assignments and against the ambient
/// module at extra probe primes.
pub fn verify_glue(
    ambient: &RModule,
    assignments: &[(MaximalIdealDesc, LocalAssignment)],
    glued: &RModule,
    probes: &[MaximalIdealDesc],
) -> bool {
    let l = ambient.tower().as_ref();
    let assigned_ok = assignments.iter().all(|(p, a)| match a {
        LocalAssignment::Submodule(x) => glued.local_eq(x, p),
        LocalAssignment::Power(k) => {
            let MaximalIdealDesc::Poly(q) = p else {
                return false;
            };
            glued.local_eq(&ambient.scale(&q.pow(l, *k as u32)), p)
        }
    });
    let probes_ok = probes
        .iter()
        .filter(|p| !assignments.iter().any(|(q, _)| q == *p))
        .all(|p| {
            glued.local_eq(ambient, p)
                && match (glued.localize(p), ambient.localize(p)) {
                    (LocalInvariant::Pair(Some(a)), LocalInvariant::Pair(Some(b))) => {
                        is_isomorphic(&a, &b).map(|r| r.isomorphic).unwrap_or(false)
                    }
                    (a, b) => a == b,
                }
        });
    assigned_ok && probes_ok
}
