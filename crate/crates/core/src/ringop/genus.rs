//! Genus data: local decompositions at every maximal ideal, plus symbolic
//! records for infinite families.

use serde::{Deserialize, Serialize};

use super::{MaximalIdealDesc, RModule, RingError};
use crate::algebra::LocalityVerdict;
use crate::exactfield::ExtElem;
use crate::linalg::Matrix;
use crate::pairs::{decompose, direct_sum_all, is_isomorphic, PairJson, PairModule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "value", rename_all = "snake_case")]
pub enum RankClass {
    Finite(usize),
    Countable,
}

/// Size of a set of maximal ideals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "value", rename_all = "snake_case")]
pub enum CountClass {
    Finite(usize),
    Countable,
    Uncountable,
}

/// How the number of free summands `r_𝔪` behaves across a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", content = "value", rename_all = "snake_case")]
pub enum FreeRankLaw {
    Constant(u64),
    /// Every value is taken only finitely often.
    Unbounded,
    Unknown,
}

/// Non-free summands (as pairs) and free rank of one localization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalDecomposition {
    pub nonfree: Vec<PairJson>,
    pub free_rank: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolicFamily {
    pub predicate: String,
    pub count: CountClass,
    pub free_rank: FreeRankLaw,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenusDescriptor {
    pub rank: RankClass,
    pub local: Vec<(MaximalIdealDesc, LocalDecomposition)>,
    pub free_elsewhere: bool,
    #[serde(default)]
    pub families: Vec<SymbolicFamily>,
}

/// Genus of a finitely generated full-rank module: only `M0` can carry a
/// non-free localization, since `R_𝔫` is a discrete valuation ring at every
/// other maximal ideal.
pub fn genus_of(m: &RModule, seed: u64) -> Result<GenusDescriptor, RingError> {
    let mut local = Vec::new();
    if let Some(pair) = m.pair() {
        if !pair.is_free() {
            let report = decompose(&pair, seed)?;
            if report
                .verdicts
                .iter()
                .any(|v| matches!(v, LocalityVerdict::ProbablyLocal))
            {
                return Err(RingError::Pair(crate::pairs::PairError::UncertifiedFactors));
            }
            let mut nonfree = Vec::new();
            let mut free_rank = 0;
            for f in &report.factors {
                if f.is_free() {
                    free_rank += f.n();
                } else {
                    nonfree.push(f.to_json());
                }
            }
            local.push((
                MaximalIdealDesc::M0,
                LocalDecomposition { nonfree, free_rank },
            ));
        }
    }
    Ok(GenusDescriptor {
        rank: RankClass::Finite(m.rank()),
        local,
        free_elsewhere: true,
        families: Vec::new(),
    })
}

pub fn same_genus(m: &RModule, n: &RModule) -> Result<bool, RingError> {
    Ok(iso_from_genus(m, n)?.is_some())
}

/// A matrix `A ∈ GL_r(L)` with `A·V_M = V_N` when `M` and `N` share a genus;
/// `B_N·A·B_M⁻¹` is then a global isomorphism.
pub fn iso_from_genus(m: &RModule, n: &RModule) -> Result<Option<Matrix<ExtElem>>, RingError> {
    if m.rank() != n.rank() {
        return Ok(None);
    }
    match (m.pair(), n.pair()) {
        (None, None) => Ok(Some(Matrix::zeros(m.tower().as_ref(), 0, 0))),
        (Some(a), Some(b)) => Ok(is_isomorphic(&a, &b)?.witness),
        _ => Ok(None),
    }
}

/// Whether a symbolic genus is realized by a countably generated module:
/// the non-free locus must be countable, and each bound on `r_𝔪` may hold
/// only finitely often across it.
pub fn genus_realizable(g: &GenusDescriptor) -> Result<bool, RingError> {
    if !g.free_elsewhere && g.families.is_empty() {
        return Err(RingError::UnrepresentableDescriptor(
            "non-free locus outside the listed primes is not described".into(),
        ));
    }
    for fam in &g.families {
        match fam.count {
            CountClass::Uncountable => return Ok(false),
            CountClass::Finite(_) => {}
            CountClass::Countable => match (&fam.free_rank, g.rank) {
                (_, RankClass::Finite(_)) => return Ok(false),
                (FreeRankLaw::Constant(_), _) => return Ok(false),
                (FreeRankLaw::Unbounded, _) => {}
                (FreeRankLaw::Unknown, _) => {
                    return Err(RingError::UnrepresentableDescriptor(format!(
                        "free-rank law of family '{}' is unknown",
                        fam.predicate
                    )))
                }
            },
        }
    }
    Ok(true)
}

/// Grouped blocks `⊕ A[a] ≅ ⊕ B[b]` with an isomorphism witness.
#[derive(Debug, Clone)]
pub struct BlockMatch {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub witness: Matrix<ExtElem>,
}

/// Pair up two finite decompositions of modules in one genus. Blocks are
/// matched one-to-one where possible; otherwise blocks sharing an
/// indecomposable class are merged and the merged sums compared.
pub fn match_decompositions(
    a: &[PairModule],
    b: &[PairModule],
    seed: u64,
) -> Result<Vec<BlockMatch>, RingError> {
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() {
            Ok(Vec::new())
        } else {
            Err(RingError::GenusMismatch)
        };
    }
    let sum_a = direct_sum_all(a)?;
    let sum_b = direct_sum_all(b)?;
    if !is_isomorphic(&sum_a, &sum_b)?.isomorphic {
        return Err(RingError::GenusMismatch);
    }

    // One-to-one matching first.
    let mut used = vec![false; b.len()];
    let mut direct = Vec::new();
    for (i, x) in a.iter().enumerate() {
        let hit = b.iter().enumerate().find_map(|(j, y)| {
            if used[j] {
                return None;
            }
            is_isomorphic(x, y).ok()?.witness.map(|w| (j, w))
        });
        match hit {
            Some((j, w)) => {
                used[j] = true;
                direct.push(BlockMatch {
                    a: vec![i],
                    b: vec![j],
                    witness: w,
                });
            }
            None => break,
        }
    }
    if direct.len() == a.len() && used.iter().all(|&u| u) {
        return Ok(direct);
    }

    // Merge blocks through shared indecomposable classes.
    let classes_a = block_classes(a, seed)?;
    let classes_b = block_classes(b, seed)?;
    let mut reps: Vec<PairModule> = Vec::new();
    let mut class_id = |p: &PairModule| -> Result<usize, RingError> {
        for (k, r) in reps.iter().enumerate() {
            if is_isomorphic(r, p)?.isomorphic {
                return Ok(k);
            }
        }
        reps.push(p.clone());
        Ok(reps.len() - 1)
    };
    let ids_a: Vec<Vec<usize>> = classes_a
        .iter()
        .map(|fs| fs.iter().map(&mut class_id).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let ids_b: Vec<Vec<usize>> = classes_b
        .iter()
        .map(|fs| fs.iter().map(&mut class_id).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;

    // Union-find over a-blocks (0..na) and b-blocks (na..na+nb).
    let na = a.len();
    let mut parent: Vec<usize> = (0..na + b.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (i, ia) in ids_a.iter().enumerate() {
        for (j, jb) in ids_b.iter().enumerate() {
            if ia.iter().any(|c| jb.contains(c)) {
                let (x, y) = (find(&mut parent, i), find(&mut parent, na + j));
                parent[x] = y;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> =
        Default::default();
    for i in 0..na {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().0.push(i);
    }
    for j in 0..b.len() {
        let r = find(&mut parent, na + j);
        groups.entry(r).or_default().1.push(j);
    }
    let mut out = Vec::new();
    for (_, (ga, gb)) in groups {
        if ga.is_empty() || gb.is_empty() {
            return Err(RingError::GenusMismatch);
        }
        let pa = direct_sum_all(&ga.iter().map(|&i| a[i].clone()).collect::<Vec<_>>())?;
        let pb = direct_sum_all(&gb.iter().map(|&j| b[j].clone()).collect::<Vec<_>>())?;
        let witness = is_isomorphic(&pa, &pb)?
            .witness
            .ok_or(RingError::GenusMismatch)?;
        out.push(BlockMatch {
            a: ga,
            b: gb,
            witness,
        });
    }
    out.sort_by_key(|m| m.a[0]);
    Ok(out)
}

fn block_classes(blocks: &[PairModule], seed: u64) -> Result<Vec<Vec<PairModule>>, RingError> {
    blocks
        .iter()
        .map(|p| Ok(decompose(p, seed)?.factors))
        .collect()
}
