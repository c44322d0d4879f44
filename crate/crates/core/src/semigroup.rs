//! Numerical semigroups `G = r_0 N + ... + r_h N` as membership tables.

use serde::Serialize;
use thiserror::Error;

use crate::numeric::gcd;

/// Tables beyond this many entries are refused rather than allocated.
pub const MAX_TABLE: u64 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("no generators")]
    Empty,
    #[error("generators must be positive")]
    ZeroGenerator,
    #[error("generators have gcd {0} > 1, so the gap set is infinite")]
    NotNumerical(u64),
    #[error("{0} is not in the semigroup")]
    NotMember(u64),
    #[error("membership table of size {needed} exceeds bound {limit}")]
    TableTooLarge { needed: u64, limit: u64 },
    #[error("table bound {bound} is too small, need {needed}")]
    BoundTooSmall { bound: u64, needed: u64 },
}

/// The semigroup generated by `generators`, with membership tabulated on
/// `[0, bound]`.
///
/// When the generators are coprime the bound is at least
/// `conductor + max(generators)`, using `F <= (a - 1)(b - 1) - 1` for `a` the
/// smallest and `b` the largest generator. With gcd `g > 1` the table is `g`
/// times that bound for `G / g`, so every multiple of `g` above `bound` is a
/// member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    gcd: u64,
    bound: u64,
    member: Vec<bool>,
}

fn auto_bound(sorted: &[u64]) -> Option<u64> {
    let (lo, hi) = (sorted[0], *sorted.last()?);
    (lo - 1).checked_mul(hi - 1)?.checked_add(hi)
}

/// Members of `<gens>` on `[0, bound]` by unbounded-knapsack DP.
fn membership_table(gens: &[u64], bound: u64) -> Vec<bool> {
    let mut t = vec![false; bound as usize + 1];
    t[0] = true;
    for &g in gens {
        let g = g as usize;
        for s in g..t.len() {
            if t[s - g] {
                t[s] = true;
            }
        }
    }
    t
}

/// Semigroup generated by `gens`, with an automatically chosen bound.
pub fn generate(gens: &[u64]) -> Result<NumericalSemigroup, SemigroupError> {
    NumericalSemigroup::with_min_bound(gens, 0)
}

impl NumericalSemigroup {
    /// Like [`generate`], extending the table to at least `min_bound`.
    pub fn with_min_bound(gens: &[u64], min_bound: u64) -> Result<Self, SemigroupError> {
        if gens.is_empty() {
            return Err(SemigroupError::Empty);
        }
        if gens.contains(&0) {
            return Err(SemigroupError::ZeroGenerator);
        }
        let mut generators = gens.to_vec();
        generators.sort_unstable();
        generators.dedup();
        let g = generators.iter().fold(0, |acc, &x| gcd(acc, x));
        let reduced: Vec<u64> = generators.iter().map(|x| x / g).collect();
        let too_large = SemigroupError::TableTooLarge {
            needed: u64::MAX,
            limit: MAX_TABLE,
        };
        let auto = auto_bound(&reduced).and_then(|b| b.checked_mul(g)).ok_or(too_large)?;
        let bound = auto.max(min_bound);
        if bound > MAX_TABLE {
            return Err(SemigroupError::TableTooLarge {
                needed: bound,
                limit: MAX_TABLE,
            });
        }
        let member = membership_table(&generators, bound);
        let sg = NumericalSemigroup {
            generators,
            gcd: g,
            bound,
            member,
        };
        // the last `min` multiples of g below the bound must all be present,
        // otherwise the conductor is not captured
        let lo = sg.generators[0];
        debug_assert!((0..lo / g)
            .map(|i| sg.bound - sg.bound % g - i * g)
            .all(|s| sg.member[s as usize]));
        Ok(sg)
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    pub fn contains(&self, s: u64) -> bool {
        if s <= self.bound {
            self.member[s as usize]
        } else {
            s.is_multiple_of(self.gcd)
        }
    }

    pub fn members_up_to(&self, limit: u64) -> Vec<u64> {
        (0..=limit).filter(|&s| self.contains(s)).collect()
    }

    fn require_numerical(&self) -> Result<(), SemigroupError> {
        if self.gcd == 1 {
            Ok(())
        } else {
            Err(SemigroupError::NotNumerical(self.gcd))
        }
    }

    pub fn conductor(&self) -> Result<u64, SemigroupError> {
        self.require_numerical()?;
        Ok(self.member.iter().rposition(|&m| !m).map_or(0, |f| f as u64 + 1))
    }

    pub fn gaps(&self) -> Result<Vec<u64>, SemigroupError> {
        let c = self.conductor()?;
        Ok((0..c).filter(|&s| !self.member[s as usize]).collect())
    }

    pub fn invariants(&self) -> Result<SemigroupInvariants, SemigroupError> {
        let gaps = self.gaps()?;
        let conductor = self.conductor()?;
        Ok(SemigroupInvariants {
            genus: gaps.len() as u64,
            frobenius: conductor as i64 - 1,
            conductor,
            minimal_generators: self.minimal_generators(),
            gaps,
        })
    }

    /// Nonzero members that are not a sum of two nonzero members. Always a
    /// subset of the given generators.
    pub fn minimal_generators(&self) -> Vec<u64> {
        self.generators
            .iter()
            .copied()
            .filter(|&m| !(1..m).any(|a| self.contains(a) && self.contains(m - a)))
            .collect()
    }

    /// `s in G <=> c - 1 - s not in G` for `0 <= s < c`.
    pub fn is_symmetric(&self) -> Result<bool, SemigroupError> {
        let c = self.conductor()?;
        Ok((0..c).all(|s| self.contains(s) != self.contains(c - 1 - s)))
    }

    /// Recovers `(r_0, ..., r_h)` from `G` and `r_0` by repeatedly taking the
    /// least element of `G` not yet generated. Stops once the partial
    /// semigroup agrees with `G` on `[0, conductor + r_0]`.
    pub fn recover_sequence(&self, r0: u64) -> Result<Vec<u64>, SemigroupError> {
        self.require_numerical()?;
        if !self.contains(r0) {
            return Err(SemigroupError::NotMember(r0));
        }
        let c = self.conductor()?;
        let limit = c + r0;
        if limit > self.bound {
            return Err(SemigroupError::BoundTooSmall {
                bound: self.bound,
                needed: limit,
            });
        }
        let mut seq = vec![r0];
        let mut partial = membership_table(&[r0], limit);
        loop {
            let next = (0..=limit).find(|&s| self.member[s as usize] && !partial[s as usize]);
            let Some(rk) = next else { break };
            seq.push(rk);
            let g = rk as usize;
            for s in g..partial.len() {
                if partial[s - g] {
                    partial[s] = true;
                }
            }
        }
        Ok(seq)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupInvariants {
    pub gaps: Vec<u64>,
    pub genus: u64,
    pub frobenius: i64,
    pub conductor: u64,
    pub minimal_generators: Vec<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charseq::{am_from_chain, divisor_chains, DivisorChain};
    use proptest::prelude::*;

    /// Independent oracle: membership by trying every coefficient vector.
    fn brute_member(gens: &[u64], s: u64) -> bool {
        fn rec(gens: &[u64], s: u64) -> bool {
            match gens.split_first() {
                None => s == 0,
                Some((&g, rest)) => (0..=s / g).any(|k| rec(rest, s - k * g)),
            }
        }
        rec(gens, s)
    }

    #[test]
    fn generate_examples() {
        let g = generate(&[6, 4, 17]).unwrap();
        assert_eq!(g.members_up_to(19), vec![0, 4, 6, 8, 10, 12, 14, 16, 17, 18]);
        assert!((20..200).all(|s| g.contains(s)));

        let n = generate(&[1]).unwrap();
        assert_eq!(n.conductor().unwrap(), 0);

        let g = generate(&[3, 2]).unwrap();
        assert_eq!(g.gaps().unwrap(), vec![1]);
        assert_eq!(g.members_up_to(5), vec![0, 2, 3, 4, 5]);
        assert!(matches!(generate(&[]), Err(SemigroupError::Empty)));
        assert!(matches!(generate(&[3, 0]), Err(SemigroupError::ZeroGenerator)));
    }

    #[test]
    fn invariants_examples() {
        let inv = generate(&[6, 4, 17]).unwrap().invariants().unwrap();
        assert_eq!(inv.gaps, vec![1, 2, 3, 5, 7, 9, 11, 13, 15, 19]);
        assert_eq!((inv.genus, inv.conductor, inv.frobenius), (10, 20, 19));
        assert_eq!(inv.minimal_generators, vec![4, 6, 17]);

        let inv = generate(&[4, 2, 7]).unwrap().invariants().unwrap();
        assert_eq!(inv.gaps, vec![1, 3, 5]);
        assert_eq!((inv.genus, inv.conductor), (3, 6));
        assert_eq!(inv.minimal_generators, vec![2, 7]);

        let inv = generate(&[1]).unwrap().invariants().unwrap();
        assert!(inv.gaps.is_empty());
        assert_eq!((inv.genus, inv.conductor, inv.frobenius), (0, 0, -1));
    }

    #[test]
    fn non_numerical_semigroups() {
        let g = generate(&[4, 6]).unwrap();
        assert_eq!(g.gcd(), 2);
        assert!(matches!(g.conductor(), Err(SemigroupError::NotNumerical(2))));
        assert!(matches!(g.invariants(), Err(SemigroupError::NotNumerical(2))));
        assert!(!g.contains(2) && g.contains(4) && !g.contains(7) && g.contains(10));
        assert!(g.contains(1_000_000) && !g.contains(1_000_001));
    }

    #[test]
    fn recover_examples() {
        assert_eq!(
            generate(&[6, 4, 17]).unwrap().recover_sequence(6).unwrap(),
            vec![6, 4, 17]
        );
        assert_eq!(
            generate(&[4, 2, 7]).unwrap().recover_sequence(4).unwrap(),
            vec![4, 2, 7]
        );
        assert_eq!(generate(&[1]).unwrap().recover_sequence(1).unwrap(), vec![1]);
        assert!(matches!(
            generate(&[6, 4, 17]).unwrap().recover_sequence(5),
            Err(SemigroupError::NotMember(5))
        ));
        assert!(matches!(
            generate(&[1]).unwrap().recover_sequence(50),
            Err(SemigroupError::BoundTooSmall { .. })
        ));
    }

    #[test]
    fn am_semigroups_up_to_30() {
        for n in 2..=30u64 {
            for chain in divisor_chains(n) {
                let r = am_from_chain(&DivisorChain::from_u64s(&chain).unwrap()).unwrap();
                let r = r.to_u64s().unwrap();
                let g = generate(&r).unwrap();
                let inv = g.invariants().unwrap();
                assert_eq!(inv.conductor, (n - 1) * (n - 2), "{r:?}");
                assert_eq!(inv.genus, (n - 1) * (n - 2) / 2, "{r:?}");
                assert_eq!(g.recover_sequence(n).unwrap(), r);
                assert!(g.is_symmetric().unwrap(), "{r:?}");
                assert!(inv.minimal_generators.iter().all(|m| r.contains(m)));
                let regen = generate(&inv.minimal_generators).unwrap();
                let top = g.bound().max(regen.bound());
                assert_eq!(regen.members_up_to(top), g.members_up_to(top));
            }
        }
    }

    proptest! {
        #[test]
        fn table_matches_brute_force(gens in prop::collection::vec(1u64..12, 1..4)) {
            let g = generate(&gens).unwrap();
            for s in 0..=g.bound().min(150) {
                prop_assert_eq!(g.contains(s), brute_member(&gens, s), "s = {}", s);
            }
        }

        #[test]
        fn conductor_is_captured(gens in prop::collection::vec(1u64..40, 1..5)) {
            let g = generate(&gens).unwrap();
            if let Ok(c) = g.conductor() {
                prop_assert!(g.bound() >= c + g.generators().last().unwrap());
                for s in c..c + 3 * gens[0] {
                    prop_assert!(brute_member(&gens, s));
                }
                if c > 0 {
                    prop_assert!(!brute_member(&gens, c - 1));
                }
            }
        }
    }
}
