//! Numerical semigroups `⟨a₁, …, aₖ⟩ ⊆ ℕ` and monomial checks on their
//! semigroup rings.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("no generators")]
    Empty,
    #[error("generators must be positive")]
    ZeroGenerator,
    #[error("generators have common divisor {0}")]
    NotCoprime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroup {
    gens: Vec<u64>,
    gcd: u64,
    /// `member[k]` for `k ≤ bound`.
    member: Vec<bool>,
}

impl NumericalSemigroup {
    pub fn new(gens: &[u64]) -> Result<Self, SemigroupError> {
        if gens.is_empty() {
            return Err(SemigroupError::Empty);
        }
        if gens.contains(&0) {
            return Err(SemigroupError::ZeroGenerator);
        }
        let mut gens = gens.to_vec();
        gens.sort_unstable();
        gens.dedup();
        let gcd = gens.iter().fold(0, |g, &a| num_integer::gcd(g, a));
        let bound = 2 * gens[0] * gens.get(1).copied().unwrap_or(gens[0]);
        let mut member = vec![false; bound as usize + 1];
        member[0] = true;
        for k in 1..member.len() {
            member[k] = gens
                .iter()
                .any(|&a| a as usize <= k && member[k - a as usize]);
        }
        Ok(NumericalSemigroup { gens, gcd, member })
    }

    pub fn generators(&self) -> &[u64] {
        &self.gens
    }

    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    fn require_coprime(&self) -> Result<(), SemigroupError> {
        if self.gcd == 1 {
            Ok(())
        } else {
            Err(SemigroupError::NotCoprime(self.gcd))
        }
    }

    pub fn contains(&self, k: u64) -> bool {
        match self.member.get(k as usize) {
            Some(&b) => b,
            // Past the table every multiple of the gcd is a member.
            None => k % self.gcd == 0 && self.gcd == 1,
        }
    }

    /// Least nonzero member.
    pub fn multiplicity(&self) -> u64 {
        self.gens[0]
    }

    pub fn frobenius(&self) -> Result<i64, SemigroupError> {
        self.require_coprime()?;
        Ok(self
            .member
            .iter()
            .rposition(|&m| !m)
            .map(|k| k as i64)
            .unwrap_or(-1))
    }

    pub fn gaps(&self) -> Result<Vec<u64>, SemigroupError> {
        let f = self.frobenius()?;
        Ok((1..=f.max(0) as u64)
            .filter(|&k| !self.contains(k))
            .collect())
    }

    /// Integral closure `K[t]` of the semigroup ring is local exactly when
    /// the generators are coprime.
    pub fn normalization_local(&self) -> bool {
        self.gcd == 1
    }

    /// Minimal generators of `(𝔪·K[t] + R)/R`, whose K-basis is `tʲ` for
    /// gaps `j ≥ multiplicity`; a basis monomial is decomposable when it is
    /// another basis monomial times `tˢ` with `s` a nonzero member.
    pub fn overmodule_min_gens(&self) -> Result<OvermoduleReport, SemigroupError> {
        let basis: Vec<u64> = self
            .gaps()?
            .into_iter()
            .filter(|&j| j >= self.multiplicity())
            .collect();
        let witnesses: Vec<u64> = basis
            .iter()
            .copied()
            .filter(|&j| !basis.iter().any(|&i| i < j && self.contains(j - i)))
            .collect();
        Ok(OvermoduleReport {
            count: witnesses.len(),
            witnesses,
        })
    }

    pub fn dr_check(&self) -> Result<DrReport, SemigroupError> {
        let over = self.overmodule_min_gens()?;
        let dr1 = self.multiplicity() <= 3;
        let dr2 = over.count <= 1;
        Ok(DrReport {
            multiplicity: self.multiplicity(),
            overmodule_min_gens: over.count,
            dr1,
            dr2,
            passes: dr1 && dr2,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OvermoduleReport {
    pub count: usize,
    pub witnesses: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DrReport {
    pub multiplicity: u64,
    pub overmodule_min_gens: usize,
    /// `μ(R̄) ≤ 3`, with `μ(R̄)` the multiplicity.
    pub dr1: bool,
    /// `(𝔪R̄ + R)/R` is cyclic.
    pub dr2: bool,
    pub passes: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Members up to `limit` by enumerating sums of generators.
    fn brute_members(gens: &[u64], limit: u64) -> Vec<bool> {
        let mut out = vec![false; limit as usize + 1];
        let mut stack = vec![0u64];
        while let Some(k) = stack.pop() {
            if k > limit || out[k as usize] {
                continue;
            }
            out[k as usize] = true;
            stack.extend(gens.iter().map(|g| k + g));
        }
        out
    }

    #[test]
    fn small_cases() {
        let s = NumericalSemigroup::new(&[2, 3]).unwrap();
        assert_eq!(s.frobenius().unwrap(), 1);
        assert_eq!(s.multiplicity(), 2);
        assert_eq!(s.gaps().unwrap(), vec![1]);
        let s = NumericalSemigroup::new(&[4, 6]).unwrap();
        assert_eq!(s.frobenius().unwrap_err(), SemigroupError::NotCoprime(2));
        assert!(!s.normalization_local());
    }

    #[test]
    fn frobenius_matches_enumeration() {
        for gens in [
            vec![3, 7],
            vec![5, 6],
            vec![3, 4, 5],
            vec![6, 9, 20],
            vec![7, 11],
        ] {
            let s = NumericalSemigroup::new(&gens).unwrap();
            let f = s.frobenius().unwrap();
            let table = brute_members(&gens, (2 * f + 2) as u64);
            let brute_f = table.iter().rposition(|&m| !m).unwrap() as i64;
            assert_eq!(f, brute_f, "{gens:?}");
            for (k, &m) in table.iter().enumerate() {
                assert_eq!(s.contains(k as u64), m);
            }
        }
        assert_eq!(
            NumericalSemigroup::new(&[3, 7])
                .unwrap()
                .frobenius()
                .unwrap(),
            11
        );
    }

    #[test]
    fn overmodule_generators() {
        let r = NumericalSemigroup::new(&[3, 7])
            .unwrap()
            .overmodule_min_gens()
            .unwrap();
        assert_eq!((r.count, r.witnesses), (2, vec![4, 5]));
        assert_eq!(
            NumericalSemigroup::new(&[2, 3])
                .unwrap()
                .overmodule_min_gens()
                .unwrap()
                .count,
            0
        );
        let r = NumericalSemigroup::new(&[3, 4])
            .unwrap()
            .overmodule_min_gens()
            .unwrap();
        assert_eq!(r.witnesses, vec![5]);
    }

    #[test]
    fn drozd_roiter() {
        assert!(
            NumericalSemigroup::new(&[2, 3])
                .unwrap()
                .dr_check()
                .unwrap()
                .passes
        );
        let r = NumericalSemigroup::new(&[3, 7])
            .unwrap()
            .dr_check()
            .unwrap();
        assert!(r.dr1 && !r.dr2);
        let r = NumericalSemigroup::new(&[5, 6])
            .unwrap()
            .dr_check()
            .unwrap();
        assert!(!r.dr1);
    }
}
