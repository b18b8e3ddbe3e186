//! Artinian pairs `V ⊆ Lⁿ` with `VL = Lⁿ`: the finite-dimensional shadow of
//! a torsion-free module `M = V + (xS)ⁿ` over `T = K + xL[x]`.

mod iso;

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, FinDimAlgebra, LocalityVerdict};
use crate::exactfield::{ExtElem, Field, FieldError, FieldTower, Poly, Rational, Rationals};
use crate::linalg::{k_collapse, k_expand, k_rank, k_span_basis, l_rank, Matrix};
use crate::polymat::{self, LPoly, PolyMatrix};
use crate::ringop::RModule;

pub use iso::{is_isomorphic, IsoResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("generators are K-linearly dependent")]
    DependentGenerators,
    #[error("generators span an L-subspace of dimension {got}, need {n}")]
    NotFullLSpan { n: usize, got: usize },
    #[error("vector has {got} entries, expected {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("rank must be positive")]
    ZeroRank,
    #[error("pairs live over different field towers")]
    TowerMismatch,
    #[error("1, α, β, α², αβ, β² are not K-linearly independent")]
    IndependencePreconditionFailed,
    #[error("submodule is not saturated: the quotient has torsion")]
    NotSaturated,
    #[error("generator entries must have constant term in K")]
    NotOverR,
    #[error("a, b, c span a K-space of dimension {0}, need 3")]
    NotThreeGenerated(usize),
    #[error("some indecomposable factor is only probably local")]
    UncertifiedFactors,
    #[error("matrix is not invertible")]
    Singular,
    #[error("truncated span did not stabilize at degree {0}")]
    TruncationUnstable(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A finitely generated artinian pair `(V ⊆ Lⁿ)`.
///
/// `V` is stored twice: as the canonical reduced echelon basis of its
/// K-expansion, so two pairs over the same tower are equal exactly when their
/// subspaces coincide, and as a working basis taken from the generators,
/// whose coefficients stay as small as the input's.
#[derive(Clone)]
pub struct PairModule {
    n: usize,
    tower: Arc<FieldTower>,
    v: Vec<Vec<ExtElem>>,
    work: Vec<Vec<ExtElem>>,
}

impl PartialEq for PairModule {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.v == other.v && *self.tower == *other.tower
    }
}

impl Eq for PairModule {}

impl fmt::Debug for PairModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PairModule")
            .field("n", &self.n)
            .field("dim_k", &self.v.len())
            .field("V", &self.v)
            .finish()
    }
}

/// Wire form `{"n", "tower", "V"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairJson {
    pub n: usize,
    pub tower: String,
    #[serde(rename = "V")]
    pub v: Vec<Vec<ExtElem>>,
}

impl PairModule {
    /// Validate generators: K-independent, with L-span all of `Lⁿ`.
    pub fn new(
        tower: Arc<FieldTower>,
        n: usize,
        vectors: Vec<Vec<ExtElem>>,
    ) -> Result<Self, PairError> {
        check_shapes(&tower, n, &vectors)?;
        let l = tower.as_ref();
        if k_rank(l, &vectors, n) < vectors.len() {
            return Err(PairError::DependentGenerators);
        }
        Self::from_spanning(tower, n, vectors)
    }

    /// Pair spanned by possibly dependent vectors.
    pub fn from_spanning(
        tower: Arc<FieldTower>,
        n: usize,
        vectors: Vec<Vec<ExtElem>>,
    ) -> Result<Self, PairError> {
        check_shapes(&tower, n, &vectors)?;
        let l = tower.as_ref();
        let got = l_rank(l, &vectors, n);
        if got < n {
            return Err(PairError::NotFullLSpan { n, got });
        }
        let v = k_span_basis(l, &vectors, n);
        let cols: Vec<Vec<Rational>> = vectors.iter().map(|x| k_expand(l, x)).collect();
        let independent = Matrix::from_cols(&cols, n * l.degree())
            .rref(&Rationals)
            .pivots;
        let work = independent
            .into_iter()
            .map(|i| vectors[i].clone())
            .collect();
        Ok(PairModule { n, tower, v, work })
    }

    pub fn free(tower: Arc<FieldTower>, n: usize) -> Result<Self, PairError> {
        let l = tower.as_ref();
        let vectors = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { l.one() } else { l.zero() })
                    .collect()
            })
            .collect();
        Self::new(tower, n, vectors)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// Canonical K-basis of `V`.
    pub fn v_basis(&self) -> &[Vec<ExtElem>] {
        &self.v
    }

    /// K-basis of `V` drawn from the generators; the frame in which
    /// endomorphisms act as rational matrices.
    pub fn working_basis(&self) -> &[Vec<ExtElem>] {
        &self.work
    }

    pub fn dim_k(&self) -> usize {
        self.v.len()
    }

    /// Free exactly when some K-basis of `V` is an L-basis of `Lⁿ`.
    pub fn is_free(&self) -> bool {
        self.dim_k() == self.n && l_rank(self.tower.as_ref(), &self.v, self.n) == self.n
    }

    pub fn contains(&self, v: &[ExtElem]) -> bool {
        v.len() == self.n && crate::linalg::k_contains(self.tower.as_ref(), &self.v, v)
    }

    /// Whether `A·V ⊆ V'` for an `n' × n` matrix `A`.
    pub fn maps_into(&self, a: &Matrix<ExtElem>, target: &PairModule) -> bool {
        let l = self.tower.as_ref();
        a.rows() == target.n
            && a.cols() == self.n
            && self.v.iter().all(|v| target.contains(&a.mul_vec(l, v)))
    }

    /// The pair `A·V` for an invertible `A`.
    pub fn transform(&self, a: &Matrix<ExtElem>) -> Result<Self, PairError> {
        let l = self.tower.as_ref();
        if a.rows() != self.n || a.cols() != self.n || a.inverse(l).is_none() {
            return Err(PairError::Singular);
        }
        let vs = self.work.iter().map(|v| a.mul_vec(l, v)).collect();
        Self::from_spanning(self.tower.clone(), self.n, vs)
    }

    /// `V` as the `n × dim_K V` matrix of its canonical basis columns.
    pub fn v_matrix(&self) -> Matrix<ExtElem> {
        Matrix::from_cols(&self.v, self.n)
    }

    fn work_matrix(&self) -> Matrix<ExtElem> {
        Matrix::from_cols(&self.work, self.n)
    }

    /// Working-basis columns forming an L-basis of `Lⁿ`, and the L-linear
    /// relations among all working-basis vectors.
    fn l_frame(&self) -> (Vec<usize>, Vec<Vec<ExtElem>>) {
        let l = self.tower.as_ref();
        let w = self.work_matrix();
        (w.rref(l).pivots, w.kernel(l))
    }

    pub fn to_json(&self) -> PairJson {
        PairJson {
            n: self.n,
            tower: self.tower.id(),
            v: self.v.clone(),
        }
    }

    pub fn from_json(j: &PairJson, tower: Arc<FieldTower>) -> Result<Self, PairError> {
        if tower.id() != j.tower {
            return Err(PairError::TowerMismatch);
        }
        Self::from_spanning(tower, j.n, j.v.clone())
    }

    /// Lexicographic key used to order decomposition factors.
    fn sort_key(&self) -> (usize, usize, Vec<Vec<Rational>>) {
        let l = self.tower.as_ref();
        (
            self.n,
            self.dim_k(),
            self.v.iter().map(|v| k_expand(l, v)).collect(),
        )
    }
}

fn check_shapes(tower: &FieldTower, n: usize, vectors: &[Vec<ExtElem>]) -> Result<(), PairError> {
    if n == 0 {
        return Err(PairError::ZeroRank);
    }
    for v in vectors {
        if v.len() != n {
            return Err(PairError::BadLength {
                expected: n,
                got: v.len(),
            });
        }
        for e in v {
            if e.coords().len() != tower.degree() {
                return Err(PairError::Field(FieldError::BadLength {
                    expected: tower.degree(),
                    got: e.coords().len(),
                }));
            }
        }
    }
    Ok(())
}

pub fn make_pair(
    tower: Arc<FieldTower>,
    n: usize,
    vectors: Vec<Vec<ExtElem>>,
) -> Result<PairModule, PairError> {
    PairModule::new(tower, n, vectors)
}

pub fn free_pair(tower: Arc<FieldTower>, n: usize) -> Result<PairModule, PairError> {
    PairModule::free(tower, n)
}

pub fn is_free(p: &PairModule) -> bool {
    p.is_free()
}

fn same_tower(p: &PairModule, q: &PairModule) -> Result<(), PairError> {
    if Arc::ptr_eq(&p.tower, &q.tower) || *p.tower == *q.tower {
        Ok(())
    } else {
        Err(PairError::TowerMismatch)
    }
}

/// Block-diagonal sum `V_p ⊕ V_q ⊆ L^(n_p + n_q)`.
pub fn direct_sum(p: &PairModule, q: &PairModule) -> Result<PairModule, PairError> {
    same_tower(p, q)?;
    let l = p.tower.as_ref();
    let n = p.n + q.n;
    let mut vs = Vec::with_capacity(p.dim_k() + q.dim_k());
    for v in &p.work {
        let mut w = v.clone();
        w.extend(std::iter::repeat_n(l.zero(), q.n));
        vs.push(w);
    }
    for v in &q.work {
        let mut w = vec![l.zero(); p.n];
        w.extend(v.iter().cloned());
        vs.push(w);
    }
    PairModule::new(p.tower.clone(), n, vs)
}

/// Direct sum of a nonempty list.
pub fn direct_sum_all(parts: &[PairModule]) -> Result<PairModule, PairError> {
    let mut acc = parts.first().ok_or(PairError::ZeroRank)?.clone();
    for p in &parts[1..] {
        acc = direct_sum(&acc, p)?;
    }
    Ok(acc)
}

/// Morphisms `p → q` in the working frames: the rational matrices `Θ` with
/// `W_q·Θ = A·W_p` for some `A` over `L`, where `W` stacks the working basis.
///
/// Such an `A` exists exactly when `W_q·Θ` respects every L-linear relation
/// among the columns of `W_p`, which is a K-linear condition on `Θ`. The map
/// `A ↦ Θ` is injective and multiplicative, so `End(p)` is realized inside
/// `M_m(K)` with `m = dim_K V`.
pub fn hom_thetas(p: &PairModule, q: &PairModule) -> Result<Vec<Matrix<Rational>>, PairError> {
    same_tower(p, q)?;
    let l = p.tower.as_ref();
    let kq = Rationals;
    let (mp, mq) = (p.work.len(), q.work.len());
    let unknowns = mq * mp;
    let (_, rels) = p.l_frame();
    let mut constraints: Vec<Vec<Rational>> = Vec::new();
    for mu in &rels {
        // Column (k, i): the image of μᵢ·w_k.
        let cols: Vec<Vec<Rational>> = (0..unknowns)
            .map(|u| {
                let (k, i) = (u / mp, u % mp);
                let img: Vec<ExtElem> = q.work[k].iter().map(|e| l.mul(&mu[i], e)).collect();
                k_expand(l, &img)
            })
            .collect();
        constraints.extend(Matrix::from_cols(&cols, q.n * l.degree()).row_vecs());
    }
    let solutions = if constraints.is_empty() {
        (0..unknowns)
            .map(|i| {
                let mut v = vec![Rational::zero(); unknowns];
                v[i] = Rational::one();
                v
            })
            .collect()
    } else {
        Matrix::from_rows(constraints, unknowns)
            .unwrap()
            .kernel(&kq)
    };
    Ok(solutions
        .into_iter()
        .map(|z| Matrix::from_rows(z.chunks(mp).map(|c| c.to_vec()).collect(), mp).unwrap())
        .collect())
}

/// The matrix `A` over `L` acting as `Θ` on working bases.
pub fn theta_to_matrix(
    p: &PairModule,
    q: &PairModule,
    theta: &Matrix<Rational>,
) -> Matrix<ExtElem> {
    let l = p.tower.as_ref();
    let (sel, _) = p.l_frame();
    let p0_inv = p
        .work_matrix()
        .select_cols(&sel)
        .inverse(l)
        .expect("V spans Lⁿ");
    let lifted = theta
        .select_cols(&sel)
        .map::<FieldTower>(|c| l.from_rational(c));
    q.work_matrix().mul(l, &lifted).mul(l, &p0_inv)
}

/// K-basis of `{A ∈ L^(n_q × n_p) : A·V_p ⊆ V_q}`.
pub fn hom_pairs(p: &PairModule, q: &PairModule) -> Result<Vec<Matrix<ExtElem>>, PairError> {
    let l = p.tower.as_ref();
    let thetas = hom_thetas(p, q)?;
    if thetas.is_empty() {
        return Ok(Vec::new());
    }
    let (sel, _) = p.l_frame();
    let p0_inv = p
        .work_matrix()
        .select_cols(&sel)
        .inverse(l)
        .expect("V spans Lⁿ");
    let wq = q.work_matrix();
    Ok(thetas
        .iter()
        .map(|t| {
            let lifted = t
                .select_cols(&sel)
                .map::<FieldTower>(|c| l.from_rational(c));
            wq.mul(l, &lifted).mul(l, &p0_inv)
        })
        .collect())
}

/// `K` as a degree-one tower, for algebras of rational matrices.
pub(crate) fn base_tower() -> Arc<FieldTower> {
    Arc::new(FieldTower::trivial())
}

/// `End(p)` as a K-algebra of `m × m` rational matrices acting on the
/// working basis of `V`.
pub fn endo_algebra(p: &PairModule) -> Result<FinDimAlgebra, PairError> {
    let k = base_tower();
    let basis = hom_thetas(p, p)?
        .iter()
        .map(|t| t.map::<FieldTower>(|c| k.from_rational(c)))
        .collect();
    Ok(FinDimAlgebra::new(k.clone(), p.work.len(), basis)?)
}

fn lower(m: &Matrix<ExtElem>) -> Matrix<Rational> {
    m.map::<Rationals>(|c| c.coords()[0].clone())
}

/// Locality of `End(p)`, with a splitting idempotent both as an endomorphism
/// of `Lⁿ` and in the working frame.
fn endo_verdict(
    p: &PairModule,
    seed: u64,
) -> Result<(LocalityVerdict, Option<Matrix<Rational>>), PairError> {
    let verdict = endo_algebra(p)?.is_local(seed);
    Ok(match verdict {
        LocalityVerdict::NotLocal { witness } => {
            let theta = lower(&witness);
            let a = theta_to_matrix(p, p, &theta);
            (LocalityVerdict::NotLocal { witness: a }, Some(theta))
        }
        v => (v, None),
    })
}

/// Locality of `End(p)`; a `NotLocal` witness is an idempotent endomorphism
/// giving a genuine splitting.
pub fn is_indecomposable(p: &PairModule, seed: u64) -> Result<LocalityVerdict, PairError> {
    Ok(endo_verdict(p, seed)?.0)
}

/// Certificate level carried by each factor of a decomposition.
pub fn certificate_level(v: &LocalityVerdict) -> &'static str {
    match v {
        LocalityVerdict::LocalCertified => "complete",
        LocalityVerdict::ProbablyLocal => "randomized",
        LocalityVerdict::NotLocal { .. } => "split",
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub factors: Vec<PairModule>,
    pub verdicts: Vec<LocalityVerdict>,
    /// Partition of factor indices into isomorphism classes.
    pub iso_classes: Vec<Vec<usize>>,
    /// Invertible `W` with `W · (⊕ V_factors) = V`.
    pub witness: Matrix<ExtElem>,
}

impl DecompositionReport {
    pub fn all_certified(&self) -> bool {
        self.verdicts
            .iter()
            .all(|v| matches!(v, LocalityVerdict::LocalCertified))
    }

    /// Index of the isomorphism class of each factor.
    pub fn class_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (c, members) in self.iso_classes.iter().enumerate() {
            for &i in members {
                out[i] = c;
            }
        }
        out
    }
}

struct Leaf {
    pair: PairModule,
    verdict: LocalityVerdict,
    /// Columns embedding this factor's coordinates into the input's.
    embed: Matrix<ExtElem>,
}

/// Split along idempotents of the endomorphism algebra until every factor
/// has a local (or probably local) endomorphism ring.
pub fn decompose(p: &PairModule, seed: u64) -> Result<DecompositionReport, PairError> {
    let l = p.tower.as_ref();
    let mut leaves = split_rec(p, seed)?;
    leaves.sort_by(|a, b| a.pair.sort_key().cmp(&b.pair.sort_key()));
    let mut witness = leaves[0].embed.clone();
    for leaf in &leaves[1..] {
        witness = witness.hstack(&leaf.embed);
    }
    debug_assert!(witness.inverse(l).is_some());

    let mut iso_classes: Vec<Vec<usize>> = Vec::new();
    for (i, leaf) in leaves.iter().enumerate() {
        let hit = iso_classes.iter_mut().find(|cls| {
            is_isomorphic(&leaves[cls[0]].pair, &leaf.pair)
                .map(|r| r.isomorphic)
                .unwrap_or(false)
        });
        match hit {
            Some(cls) => cls.push(i),
            None => iso_classes.push(vec![i]),
        }
    }
    Ok(DecompositionReport {
        factors: leaves.iter().map(|x| x.pair.clone()).collect(),
        verdicts: leaves.iter().map(|x| x.verdict.clone()).collect(),
        iso_classes,
        witness,
    })
}

fn split_rec(p: &PairModule, seed: u64) -> Result<Vec<Leaf>, PairError> {
    let l = p.tower.as_ref();
    let (verdict, theta) = endo_verdict(p, seed)?;
    let Some(theta) = theta else {
        return Ok(vec![Leaf {
            pair: p.clone(),
            verdict,
            embed: Matrix::identity(l, p.n),
        }]);
    };
    // e·V and (1 - e)·V in the working frame.
    let kq = Rationals;
    let w = p.work_matrix();
    let comp = Matrix::identity(&kq, theta.rows()).sub(&kq, &theta);
    let lift = |t: &Matrix<Rational>| {
        w.mul(l, &t.map::<FieldTower>(|c| l.from_rational(c)))
            .col_vecs()
    };
    let (y1, y2) = (lift(&theta), lift(&comp));
    let pick = |ys: &[Vec<ExtElem>]| -> Matrix<ExtElem> {
        let m = Matrix::from_cols(ys, p.n);
        m.select_cols(&m.rref(l).pivots)
    };
    let (p1, p2) = (pick(&y1), pick(&y2));
    let r1 = p1.cols();
    let p_inv = p1
        .hstack(&p2)
        .inverse(l)
        .expect("images of e and 1 - e are complementary");
    let v1: Vec<Vec<ExtElem>> = y1
        .iter()
        .map(|y| p_inv.mul_vec(l, y)[..r1].to_vec())
        .collect();
    let v2: Vec<Vec<ExtElem>> = y2
        .iter()
        .map(|y| p_inv.mul_vec(l, y)[r1..].to_vec())
        .collect();
    let q1 = PairModule::from_spanning(p.tower.clone(), r1, v1)?;
    let q2 = PairModule::from_spanning(p.tower.clone(), p.n - r1, v2)?;
    let mut out = Vec::new();
    for (q, basis) in [(q1, p1), (q2, p2)] {
        for leaf in split_rec(&q, seed)? {
            out.push(Leaf {
                embed: basis.mul(l, &leaf.embed),
                ..leaf
            });
        }
    }
    Ok(out)
}

/// Whether `p` is isomorphic to a direct summand of `q`, by matching
/// indecomposable factors.
pub fn is_direct_summand(p: &PairModule, q: &PairModule, seed: u64) -> Result<bool, PairError> {
    same_tower(p, q)?;
    let dp = decompose(p, seed)?;
    let dq = decompose(q, seed)?;
    if dp
        .verdicts
        .iter()
        .chain(&dq.verdicts)
        .any(|v| matches!(v, LocalityVerdict::ProbablyLocal))
    {
        return Err(PairError::UncertifiedFactors);
    }
    let mut used = vec![false; dq.factors.len()];
    for a in &dp.factors {
        let mut matched = false;
        for (j, b) in dq.factors.iter().enumerate() {
            if !used[j] && is_isomorphic(a, b)?.isomorphic {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The matrix `Ψ_t = [I | αI + β(tI + H)]` with `H` the lower shift.
pub fn psi_matrix(
    l: &FieldTower,
    n: usize,
    t: &Rational,
    alpha: &ExtElem,
    beta: &ExtElem,
) -> Matrix<ExtElem> {
    let tl = l.from_rational(t);
    let right = Matrix::from_fn(l, n, n, |i, j| {
        if i == j {
            l.add(alpha, &l.mul(beta, &tl))
        } else if i == j + 1 {
            beta.clone()
        } else {
            l.zero()
        }
    });
    Matrix::identity(l, n).hstack(&right)
}

/// Whether `1, α, β, α², αβ, β²` are K-linearly independent.
pub fn psi_precondition(l: &FieldTower, alpha: &ExtElem, beta: &ExtElem) -> bool {
    let family = [
        l.one(),
        alpha.clone(),
        beta.clone(),
        l.mul(alpha, alpha),
        l.mul(alpha, beta),
        l.mul(beta, beta),
    ];
    let rows: Vec<Vec<ExtElem>> = family.iter().map(|e| vec![e.clone()]).collect();
    k_rank(l, &rows, 1) == 6
}

/// The pair `V_t` spanned by the columns of `Ψ_t`.
pub fn psi_pair(
    tower: Arc<FieldTower>,
    n: usize,
    t: &Rational,
    alpha: &ExtElem,
    beta: &ExtElem,
) -> Result<PairModule, PairError> {
    if n < 2 {
        return Err(PairError::ZeroRank);
    }
    let l = tower.as_ref();
    if !psi_precondition(l, alpha, beta) {
        return Err(PairError::IndependencePreconditionFailed);
    }
    let cols = psi_matrix(l, n, t, alpha, beta).col_vecs();
    PairModule::new(tower, n, cols)
}

/// `Ψ_t` with the default choice `α = θ`, `β = θ³`.
pub fn psi_default(tower: Arc<FieldTower>, n: usize, t: i64) -> Result<PairModule, PairError> {
    let alpha = tower.theta();
    let beta = tower.theta_pow(3);
    psi_pair(tower, n, &Rational::from_int(t), &alpha, &beta)
}

/// Text rendering of `Ψ_t` as a bracketed `n × 2n` matrix.
pub fn render_psi(
    l: &FieldTower,
    n: usize,
    t: &Rational,
    alpha: &ExtElem,
    beta: &ExtElem,
) -> String {
    render_matrix(&psi_matrix(l, n, t, alpha, beta))
}

pub fn render_matrix(m: &Matrix<ExtElem>) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| e.to_string()).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(1);
    cells
        .iter()
        .map(|row| {
            let padded: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            format!("[ {} ]", padded.join("  "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// The pair of `Rᵏ/H` for a saturated submodule `H ⊆ Rᵏ`, or `None` when the
/// quotient is zero.
///
/// A unimodular `U` over `S = L[x]` with `U·G` in echelon form gives
/// `Φ = U_tail`, a surjection `Sᵏ → Sʳ` whose kernel is the saturation of
/// `H·S`. For saturated `H` this identifies `Rᵏ/H` with `Φ(Rᵏ)`, whose pair
/// is the K-span of the columns of `Φ(0)`. Saturation is checked exactly,
/// and the K-dimension of the span truncated at two consecutive degrees is
/// compared against the predicted value.
pub fn quotient_pair(
    tower: Arc<FieldTower>,
    k: usize,
    h_gens: &[Vec<LPoly>],
) -> Result<Option<PairModule>, PairError> {
    let l = tower.as_ref();
    if k == 0 {
        return Err(PairError::ZeroRank);
    }
    for g in h_gens {
        if g.len() != k {
            return Err(PairError::BadLength {
                expected: k,
                got: g.len(),
            });
        }
        if g.iter()
            .any(|c| l.as_rational(&c.constant_term(l)).is_none())
        {
            return Err(PairError::NotOverR);
        }
    }
    let gens: Vec<Vec<LPoly>> = h_gens
        .iter()
        .filter(|g| g.iter().any(|c| !c.is_zero()))
        .cloned()
        .collect();
    let g = PolyMatrix::from_cols(&gens, k);
    let herm = polymat::row_hermite(l, &g, true);
    let (u, uinv) = herm.transform.expect("tracked");
    let rho = herm.rank;
    let r = k - rho;

    // Saturation: R^k ∩ X·S^ρ = X·(V_C + x S^ρ), X the head columns of U⁻¹.
    let x_cols: Vec<Vec<LPoly>> = (0..rho).map(|j| uinv.col(j)).collect();
    let x0: Vec<Vec<ExtElem>> = x_cols
        .iter()
        .map(|c| c.iter().map(|p| p.constant_term(l)).collect())
        .collect();
    let vc = coefficient_space_over_k(l, &x0, k);
    let mut sat_gens: Vec<Vec<LPoly>> = Vec::new();
    for c in &vc {
        let v: Vec<LPoly> = (0..k)
            .map(|i| {
                x_cols.iter().zip(c).fold(Poly::zero(), |acc, (col, ci)| {
                    acc.add(l, &col[i].scale(l, ci))
                })
            })
            .collect();
        sat_gens.push(v);
    }
    for col in &x_cols {
        for a in 0..l.degree() {
            let s = Poly::monomial(l, l.theta_pow(a as u32), 1);
            sat_gens.push(col.iter().map(|p| p.mul(l, &s)).collect());
        }
    }
    let h_mod = RModule::span(tower.clone(), k, &gens);
    let sat_mod = RModule::span(tower.clone(), k, &sat_gens);
    if h_mod != sat_mod {
        return Err(PairError::NotSaturated);
    }
    if r == 0 {
        return Ok(None);
    }

    let phi: Vec<Vec<LPoly>> = (0..k)
        .map(|j| (rho..k).map(|i| u.get(i, j).clone()).collect())
        .collect();
    let v0: Vec<Vec<ExtElem>> = phi
        .iter()
        .map(|c| c.iter().map(|p| p.constant_term(l)).collect())
        .collect();
    let pair = PairModule::from_spanning(tower.clone(), r, v0)?;

    let n0 = gens.iter().flatten().map(|p| p.len()).max().unwrap_or(0) + 2;
    for trunc in [n0, n0 + 1] {
        let got = truncated_k_dim(l, &phi, r, trunc);
        let expect = pair.dim_k() + (trunc - 1) * r * l.degree();
        if got != expect {
            return Err(PairError::TruncationUnstable(trunc));
        }
    }
    Ok(Some(pair))
}

/// `{c ∈ L^ρ : Σ cⱼ·colⱼ ∈ Kᵏ}` as a K-basis.
fn coefficient_space_over_k(l: &FieldTower, cols: &[Vec<ExtElem>], k: usize) -> Vec<Vec<ExtElem>> {
    let rho = cols.len();
    if rho == 0 {
        return Vec::new();
    }
    let d = l.degree();
    // Unknowns: K-coordinates of c (ρ·d). Conditions: θ^1..θ^(d-1)
    // coordinates of each entry of Σ cⱼ colⱼ vanish.
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..k {
        let blocks: Vec<Matrix<Rational>> = cols.iter().map(|c| l.mul_matrix(&c[i])).collect();
        for t in 1..d {
            let mut row = Vec::with_capacity(rho * d);
            for b in &blocks {
                row.extend_from_slice(b.row(t));
            }
            rows.push(row);
        }
    }
    let ker = Matrix::from_rows(rows, rho * d).unwrap().kernel(&Rationals);
    ker.iter().map(|c| k_collapse(l, c, rho)).collect()
}

/// K-dimension of the R-span of the given vectors in `Sʳ`, truncated modulo
/// `x^trunc`.
pub(crate) fn truncated_k_dim(
    l: &FieldTower,
    gens: &[Vec<LPoly>],
    r: usize,
    trunc: usize,
) -> usize {
    let d = l.degree();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let flatten = |v: &[LPoly]| -> Vec<Rational> {
        let mut out = Vec::with_capacity(r * trunc * d);
        for p in v {
            for a in 0..trunc {
                out.extend(l.to_k_coords(&p.coeff(l, a)));
            }
        }
        out
    };
    for g in gens {
        rows.push(flatten(g));
        for a in 1..trunc {
            for b in 0..d {
                let s = Poly::monomial(l, l.theta_pow(b as u32), a);
                let v: Vec<LPoly> = g.iter().map(|p| p.mul(l, &s).truncate(trunc)).collect();
                rows.push(flatten(&v));
            }
        }
    }
    Matrix::from_rows(rows, r * trunc * d)
        .unwrap()
        .rank(&Rationals)
}

/// Generators over `R` of `H = R³ ∩ Q·(a, b, c)`.
pub fn bass_relations(l: &FieldTower, a: &ExtElem, b: &ExtElem, c: &ExtElem) -> Vec<Vec<LPoly>> {
    let d = l.degree();
    let triple = [a, b, c];
    // F₀ = {f ∈ L : f·a, f·b, f·c ∈ K}
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for e in triple {
        let m = l.mul_matrix(e);
        for t in 1..d {
            rows.push(m.row(t).to_vec());
        }
    }
    let f0 = Matrix::from_rows(rows, d).unwrap().kernel(&Rationals);
    let mut gens = Vec::new();
    for f in f0 {
        let f = l.from_k_coords(&f);
        gens.push(
            triple
                .iter()
                .map(|e| Poly::constant(l.mul(&f, e)))
                .collect(),
        );
    }
    for j in 0..d {
        let s = l.theta_pow(j as u32);
        gens.push(
            triple
                .iter()
                .map(|e| Poly::monomial(l, l.mul(&s, e), 1))
                .collect(),
        );
    }
    gens
}

/// The rank-2 pair of `R³/H` for `H = R³ ∩ Q·(a, b, c)`.
pub fn bass_pair(
    tower: Arc<FieldTower>,
    a: &ExtElem,
    b: &ExtElem,
    c: &ExtElem,
) -> Result<PairModule, PairError> {
    let l = tower.as_ref();
    let dim = k_rank(l, &[vec![a.clone()], vec![b.clone()], vec![c.clone()]], 1);
    if dim != 3 {
        return Err(PairError::NotThreeGenerated(dim));
    }
    let gens = bass_relations(l, a, b, c);
    quotient_pair(tower, 3, &gens)?.ok_or(PairError::ZeroRank)
}

/// A random element of `SLₙ(ℤ[θ])`: a product of `2n` transvections
/// `I + c·E_ij` with `c` having coordinates in `{-1, 0, 1}`, followed by a
/// row permutation. Its inverse has the same shape, so coordinate changes
/// by it keep coefficients small.
pub fn random_invertible(l: &FieldTower, n: usize, seed: u64) -> Matrix<ExtElem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::identity(l, n);
    if n < 2 {
        return m;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let coords: Vec<i64> = (0..l.degree()).map(|_| rng.gen_range(-1..=1)).collect();
        let c = l.from_ints(&coords);
        let mut e = Matrix::identity(l, n);
        e.set(i, j, c);
        m = e.mul(l, &m);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        perm.swap(k, rng.gen_range(0..=k));
    }
    m.select_rows(&perm)
}
