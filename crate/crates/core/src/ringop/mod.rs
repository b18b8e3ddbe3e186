//! Ideals and torsion-free modules over `R = K + xL[x]`.
//!
//! A finitely generated submodule of `Sⁿ` (with `S = L[x]`) is stored as
//! `N = B·(V + x·Sʳ)`: `B` is the column Hermite basis of `N·S` and `V ⊆ Lʳ`
//! is a K-subspace with `L·V = Lʳ`. Both parts are canonical, so equality is
//! exact and needs no truncation.

mod genus;
mod glue;
mod ideal;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::{is_irreducible_over, ExtElem, Field, FieldTower, Poly};
use crate::linalg::{k_contains, k_span_basis};
use crate::pairs::{PairError, PairModule};
use crate::polymat::{self, LPoly, PolyMatrix};

pub use genus::{
    genus_of, genus_realizable, iso_from_genus, match_decompositions, same_genus, BlockMatch,
    CountClass, FreeRankLaw, GenusDescriptor, LocalDecomposition, RankClass, SymbolicFamily,
};
pub use glue::{embed_pair, glue_submodule, verify_glue, GlueResult, LocalAssignment};
pub use ideal::{
    comaximal_factorization, coprime_obstruction, crt_idempotents, factor_element, min_generators,
    support, validate_trace_chain, CoprimeReport, CrtElements, ElementFactorization, IdealJson,
    IdealOfR, TraceChainReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("element is zero")]
    ZeroElement,
    #[error("ideal is zero")]
    ZeroIdeal,
    #[error("ideal is the whole ring")]
    UnitIdeal,
    #[error("element has constant term outside K")]
    NotInR,
    #[error("polynomial is not irreducible over L with value 1 at 0")]
    BadPrime,
    #[error("targets are not contained in the support of the modulus")]
    SupportMismatch,
    #[error("local module has rank {got}, ambient has rank {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("assigned module is not of full rank")]
    NotFullRank,
    #[error("assigned module is not contained in the ambient module")]
    NotSubmodule,
    #[error("prime assigned twice")]
    DuplicateAssignment,
    #[error("modules are not in the same genus")]
    GenusMismatch,
    #[error("descriptor cannot be decided: {0}")]
    UnrepresentableDescriptor(String),
    #[error("trace chain is empty")]
    EmptyChain,
    #[error("ranks must be positive")]
    ZeroRank,
    #[error(transparent)]
    Pair(#[from] PairError),
}

/// The ring `R = K + xL[x]` with `S = L[x]` and conductor `𝔪 = xS`.
#[derive(Debug, Clone)]
pub struct RingR {
    tower: Arc<FieldTower>,
}

impl RingR {
    pub fn new(tower: Arc<FieldTower>) -> Self {
        RingR { tower }
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// Membership of a polynomial of `S` in `R`.
    pub fn contains(&self, f: &LPoly) -> bool {
        let l = self.tower.as_ref();
        l.as_rational(&f.constant_term(l)).is_some()
    }

    /// The conductor of `S` into `R`, which is also the maximal ideal `M0`.
    pub fn conductor(&self) -> IdealOfR {
        IdealOfR::maximal_m0(self.tower.clone())
    }

    pub fn unit_ideal(&self) -> IdealOfR {
        IdealOfR::unit(self.tower.clone())
    }
}

/// A maximal ideal of `R`: either `M0 = xS`, or `qS ∩ R` for `q` irreducible
/// over `L` with `q(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", content = "q")]
pub enum MaximalIdealDesc {
    M0,
    Poly(LPoly),
}

impl MaximalIdealDesc {
    /// Validated `Poly(q)` after normalizing `q(0) = 1`.
    pub fn poly(l: &FieldTower, q: &LPoly) -> Result<Self, RingError> {
        let q = q.normalize_at_zero(l).ok_or(RingError::BadPrime)?;
        if q.is_constant() || !is_irreducible_over(l, &q) {
            return Err(RingError::BadPrime);
        }
        Ok(MaximalIdealDesc::Poly(q))
    }

    /// `Poly(1 + c·x)` for an integer `c ≠ 0`.
    pub fn linear(l: &FieldTower, c: i64) -> Self {
        MaximalIdealDesc::Poly(Poly::from_coeffs(vec![l.one(), l.from_int(c)]))
    }

    pub fn ideal(&self, tower: Arc<FieldTower>) -> IdealOfR {
        match self {
            MaximalIdealDesc::M0 => IdealOfR::maximal_m0(tower),
            MaximalIdealDesc::Poly(q) => IdealOfR::principal_unchecked(tower, q.clone()),
        }
    }

    pub fn render(&self) -> String {
        match self {
            MaximalIdealDesc::M0 => "M0".to_string(),
            MaximalIdealDesc::Poly(q) => format!("({})", q.render("x", |c| format!("{c}"))),
        }
    }
}

impl fmt::Display for MaximalIdealDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Local invariant of a module at a maximal ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalInvariant {
    /// The artinian pair at `M0`; `None` for the zero module.
    Pair(Option<PairModule>),
    /// At `Poly(q)` the localization is free; `valuations` are the exponents
    /// of the local Smith form of `N` inside `Sⁿ`.
    Free { rank: usize, valuations: Vec<usize> },
}

/// A finitely generated R-submodule of `Sⁿ`, in canonical form.
#[derive(Clone)]
pub struct RModule {
    n: usize,
    tower: Arc<FieldTower>,
    b: PolyMatrix,
    pivots: Vec<usize>,
    v: Vec<Vec<ExtElem>>,
}

impl PartialEq for RModule {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.b == other.b && self.v == other.v
    }
}

impl Eq for RModule {}

impl fmt::Debug for RModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RModule")
            .field("n", &self.n)
            .field("rank", &self.rank())
            .field("B", &self.b)
            .field("V", &self.v)
            .finish()
    }
}

impl RModule {
    /// The R-span of the given vectors of `Sⁿ`.
    pub fn span(tower: Arc<FieldTower>, n: usize, gens: &[Vec<LPoly>]) -> Self {
        let l = tower.as_ref();
        let g = PolyMatrix::from_cols(gens, n);
        let (b, pivots) = polymat::column_hermite(l, &g);
        let r = b.cols();
        let coords: Vec<Vec<ExtElem>> = gens
            .iter()
            .map(|y| {
                let s = polymat::solve_exact(l, &b, &pivots, y)
                    .expect("generator lies in its own S-span");
                s.iter().map(|c| c.constant_term(l)).collect()
            })
            .collect();
        let v = if r == 0 {
            Vec::new()
        } else {
            k_span_basis(l, &coords, r)
        };
        RModule {
            n,
            tower,
            b,
            pivots,
            v,
        }
    }

    pub fn free(tower: Arc<FieldTower>, n: usize) -> Self {
        let l = tower.as_ref();
        let gens: Vec<Vec<LPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Poly::one(l) } else { Poly::zero() })
                    .collect()
            })
            .collect();
        Self::span(tower, n, &gens)
    }

    /// `x^shift·(V + x·Sⁿ)` for a pair `V ⊆ Lⁿ`.
    pub fn from_pair(pair: &PairModule, shift: usize) -> Self {
        let tower = pair.tower().clone();
        let l = tower.as_ref();
        let n = pair.n();
        let mut gens: Vec<Vec<LPoly>> = pair
            .v_basis()
            .iter()
            .map(|v| {
                v.iter()
                    .map(|c| Poly::monomial(l, c.clone(), shift))
                    .collect()
            })
            .collect();
        gens.extend(shifted_basis(l, n, shift + 1));
        Self::span(tower, n, &gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// Rank of `N` (the number of columns of `B`).
    pub fn rank(&self) -> usize {
        self.b.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.n
    }

    /// Column Hermite basis of `N·S`.
    pub fn hull(&self) -> &PolyMatrix {
        &self.b
    }

    /// K-basis of the coefficient space `V ⊆ Lʳ`.
    pub fn coefficient_space(&self) -> &[Vec<ExtElem>] {
        &self.v
    }

    /// R-generators `B·v` and `x·θᵃ·B·eⱼ`.
    pub fn generators(&self) -> Vec<Vec<LPoly>> {
        let l = self.tower.as_ref();
        let r = self.rank();
        let mut out: Vec<Vec<LPoly>> = self
            .v
            .iter()
            .map(|v| {
                let s: Vec<LPoly> = v.iter().map(|c| Poly::constant(c.clone())).collect();
                self.b.mul_vec(l, &s)
            })
            .collect();
        for col in shifted_basis(l, r, 1) {
            out.push(self.b.mul_vec(l, &col));
        }
        out
    }

    /// Coordinates `s` with `B·s = y`, when `y ∈ N·S`.
    fn coords(&self, y: &[LPoly]) -> Option<Vec<LPoly>> {
        polymat::solve_exact(self.tower.as_ref(), &self.b, &self.pivots, y)
    }

    pub fn contains(&self, y: &[LPoly]) -> bool {
        let l = self.tower.as_ref();
        if y.len() != self.n {
            return false;
        }
        if y.iter().all(|c| c.is_zero()) {
            return true;
        }
        match self.coords(y) {
            Some(s) => {
                let s0: Vec<ExtElem> = s.iter().map(|c| c.constant_term(l)).collect();
                k_contains(l, &self.v, &s0)
            }
            None => false,
        }
    }

    pub fn is_submodule_of(&self, other: &RModule) -> bool {
        self.generators().iter().all(|g| other.contains(g))
    }

    pub fn add(&self, other: &RModule) -> RModule {
        let mut gens = self.generators();
        gens.extend(other.generators());
        Self::span(self.tower.clone(), self.n, &gens)
    }

    /// `f·N` for a scalar `f ∈ S`.
    pub fn scale(&self, f: &LPoly) -> RModule {
        let l = self.tower.as_ref();
        let gens: Vec<Vec<LPoly>> = self
            .generators()
            .iter()
            .map(|g| g.iter().map(|c| c.mul(l, f)).collect())
            .collect();
        Self::span(self.tower.clone(), self.n, &gens)
    }

    /// `I·N`.
    pub fn ideal_mul(&self, ideal: &IdealOfR) -> RModule {
        let l = self.tower.as_ref();
        let mut gens = Vec::new();
        for a in ideal.generators() {
            for g in self.generators() {
                gens.push(g.iter().map(|c| c.mul(l, &a)).collect());
            }
        }
        Self::span(self.tower.clone(), self.n, &gens)
    }

    /// Whether `y ∈ N_𝔭`.
    pub fn local_contains(&self, y: &[LPoly], p: &MaximalIdealDesc) -> bool {
        let l = self.tower.as_ref();
        if y.iter().all(|c| c.is_zero()) {
            return true;
        }
        let Some((s, big_p)) = polymat::solve_scaled(l, &self.b, &self.pivots, y) else {
            return false;
        };
        match p {
            MaximalIdealDesc::M0 => {
                let a = big_p.x_valuation().unwrap_or(0);
                let p0 = big_p.shift_down(a);
                let p0_inv = l.inv(&p0.constant_term(l)).expect("P0(0) ≠ 0");
                let mut s0 = Vec::with_capacity(s.len());
                for c in &s {
                    if !c.is_zero() && c.x_valuation().unwrap_or(0) < a {
                        return false;
                    }
                    s0.push(l.mul(&c.shift_down(a).constant_term(l), &p0_inv));
                }
                k_contains(l, &self.v, &s0)
            }
            MaximalIdealDesc::Poly(q) => {
                let need = polymat::valuation(l, &big_p, q).unwrap_or(0);
                s.iter()
                    .all(|c| polymat::valuation(l, c, q).is_none_or(|v| v >= need))
            }
        }
    }

    /// `N_𝔭 ⊆ M_𝔭`.
    pub fn local_le(&self, other: &RModule, p: &MaximalIdealDesc) -> bool {
        self.generators().iter().all(|g| other.local_contains(g, p))
    }

    pub fn local_eq(&self, other: &RModule, p: &MaximalIdealDesc) -> bool {
        self.local_le(other, p) && other.local_le(self, p)
    }

    /// The artinian pair of `N`, i.e. its localization at `M0`.
    pub fn pair(&self) -> Option<PairModule> {
        if self.is_zero() {
            return None;
        }
        Some(
            PairModule::from_spanning(self.tower.clone(), self.rank(), self.v.clone())
                .expect("coefficient space spans Lʳ"),
        )
    }

    pub fn localize(&self, p: &MaximalIdealDesc) -> LocalInvariant {
        match p {
            MaximalIdealDesc::M0 => LocalInvariant::Pair(self.pair()),
            MaximalIdealDesc::Poly(q) => LocalInvariant::Free {
                rank: self.rank(),
                valuations: polymat::local_smith_exponents(self.tower.as_ref(), &self.b, q),
            },
        }
    }
}

/// `x^a·θ^b·eⱼ` for all `b < d` and `j < n`.
fn shifted_basis(l: &FieldTower, n: usize, a: usize) -> Vec<Vec<LPoly>> {
    let mut out = Vec::with_capacity(n * l.degree());
    for j in 0..n {
        for b in 0..l.degree() {
            out.push(
                (0..n)
                    .map(|i| {
                        if i == j {
                            Poly::monomial(l, l.theta_pow(b as u32), a)
                        } else {
                            Poly::zero()
                        }
                    })
                    .collect(),
            );
        }
    }
    out
}

/// `localize_check` over a module: the local invariant at `p`.
pub fn localize_check(n: &RModule, p: &MaximalIdealDesc) -> LocalInvariant {
    n.localize(p)
}

#[cfg(test)]
mod tests;
