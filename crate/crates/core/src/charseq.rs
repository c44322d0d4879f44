//! Characteristic sequences `(r_0, ..., r_h)`, their gcd chains, the four
//! axioms, and the bijection between Abhyankar–Moh sequences and divisor
//! chains.
//!
//! Axioms, with `d_k = gcd(r_0, ..., r_{k-1})`:
//!
//! 1. `d_k > d_{k+1}` for `1 <= k <= h`, and `d_{h+1} = 1`;
//! 2. `d_k r_k < d_{k+1} r_{k+1}` for `1 <= k < h`;
//! 3. `d_h r_h < r_0^2`;
//! 4. `sum_k (d_k / d_{k+1} - 1) r_k = (r_0 - 1)^2`.
//!
//! A sequence satisfying all four is an Abhyankar–Moh (AM) sequence. AM
//! sequences with initial term `n` correspond one-to-one with chains
//! `n = d_1 > d_2 > ... > d_{h+1} = 1` under divisibility, via
//! `r_k = n^2 / d_k - d_{k+1}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{gcd_big, to_signed};
use crate::par::{self, ExecMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharSeqError {
    #[error("sequence is empty")]
    Empty,
    #[error("entry {index} is not positive")]
    NonPositive { index: usize },
    #[error("invalid integer '{0}'")]
    BadInteger(String),
    #[error("invalid divisor chain: {0}")]
    InvalidChain(String),
    #[error("not an Abhyankar-Moh sequence: axiom(s) {0} fail")]
    NotAbhyankarMoh(String),
    #[error("initial term must exceed 1, got {0}")]
    InitialTooSmall(BigUint),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// A sequence of positive integers `(r_0, ..., r_h)`, not yet certified.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharSequence {
    terms: Vec<BigUint>,
}

impl CharSequence {
    pub fn new(terms: Vec<BigUint>) -> Result<Self, CharSeqError> {
        if terms.is_empty() {
            return Err(CharSeqError::Empty);
        }
        if let Some(index) = terms.iter().position(Zero::is_zero) {
            return Err(CharSeqError::NonPositive { index });
        }
        Ok(CharSequence { terms })
    }

    pub fn from_u64s(terms: &[u64]) -> Result<Self, CharSeqError> {
        Self::new(terms.iter().map(|&r| BigUint::from(r)).collect())
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    /// `h`, the index of the last term.
    pub fn h(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn initial(&self) -> &BigUint {
        &self.terms[0]
    }

    /// `(d_1, ..., d_{h+1})`.
    pub fn gcd_chain(&self) -> Vec<BigUint> {
        let mut d = Vec::with_capacity(self.terms.len());
        let mut g = self.terms[0].clone();
        d.push(g.clone());
        for r in &self.terms[1..] {
            g = gcd_big(&g, r);
            d.push(g.clone());
        }
        d
    }

    /// `(n_1, ..., n_h)` with `n_k = d_k / d_{k+1}`.
    pub fn nratios(&self) -> Vec<BigUint> {
        self.gcd_chain().windows(2).map(|w| &w[0] / &w[1]).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.terms.iter().map(ToString::to_string).collect()
    }

    /// Entries as `u64`, if they all fit.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.terms.iter().map(|r| u64::try_from(r).ok()).collect()
    }

    /// True when all four axioms hold.
    pub fn is_abhyankar_moh(&self) -> bool {
        check_axioms(self).all()
    }
}

impl fmt::Display for CharSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_strings().join(","))
    }
}

/// Comma-separated decimal integers.
impl FromStr for CharSequence {
    type Err = CharSeqError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CharSequence::new(parse_list(s)?)
    }
}

impl Serialize for CharSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CharSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let terms = raw
            .iter()
            .map(|s| s.parse::<BigUint>().map_err(|_| CharSeqError::BadInteger(s.clone())))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        CharSequence::new(terms).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn parse_list(s: &str) -> Result<Vec<BigUint>, CharSeqError> {
    s.split(',')
        .map(|piece| {
            let piece = piece.trim();
            piece
                .parse::<BigUint>()
                .map_err(|_| CharSeqError::BadInteger(piece.to_string()))
        })
        .collect()
}

/// `gcd_chain` on a raw list, validating it first.
pub fn gcd_chain(r: &[BigUint]) -> Result<Vec<BigUint>, CharSeqError> {
    Ok(CharSequence::new(r.to_vec())?.gcd_chain())
}

/// Result of evaluating the four axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub ax1: bool,
    pub ax2: bool,
    pub ax3: bool,
    pub ax4: bool,
    pub dchain: Vec<BigUint>,
    /// `sum_k (d_k/d_{k+1} - 1) r_k`.
    pub conductor_lhs: BigUint,
    /// `(r_0 - 1)^2`.
    pub conductor_rhs: BigUint,
    /// `(d_h r_h, r_0^2)` for `h >= 1`.
    pub am_inequality: Option<(BigUint, BigUint)>,
    /// First `k` (1-based) where axiom (2) fails.
    pub ax2_violation: Option<usize>,
}

impl AxiomReport {
    pub fn all(&self) -> bool {
        self.ax1 && self.ax2 && self.ax3 && self.ax4
    }

    pub fn as_tuple(&self) -> (bool, bool, bool, bool) {
        (self.ax1, self.ax2, self.ax3, self.ax4)
    }

    /// Names of failing axioms, e.g. `"(3)"`.
    pub fn failing(&self) -> Vec<&'static str> {
        [
            (self.ax1, "(1)"),
            (self.ax2, "(2)"),
            (self.ax3, "(3)"),
            (self.ax4, "(4)"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

/// Evaluates axioms (1)–(4) exactly as written. For `h = 0`, (2) and (3) are
/// vacuous and the sum in (4) is empty, so (1) and (4) both reduce to `r_0 = 1`.
pub fn check_axioms(r: &CharSequence) -> AxiomReport {
    let d = r.gcd_chain();
    let h = r.h();
    let terms = r.terms();

    let ax1 = d.windows(2).all(|w| w[0] > w[1]) && d[h].is_one();

    let mut ax2_violation = None;
    for k in 1..h {
        if &d[k - 1] * &terms[k] >= &d[k] * &terms[k + 1] {
            ax2_violation = Some(k);
            break;
        }
    }
    let ax2 = ax2_violation.is_none();

    let r0_sq = &terms[0] * &terms[0];
    let am_inequality = (h >= 1).then(|| (&d[h - 1] * &terms[h], r0_sq.clone()));
    let ax3 = am_inequality.as_ref().is_none_or(|(lhs, rhs)| lhs < rhs);

    let mut conductor_lhs = BigUint::zero();
    for k in 1..=h {
        conductor_lhs += (&d[k - 1] / &d[k] - 1u32) * &terms[k];
    }
    let r0m1 = &terms[0] - 1u32;
    let conductor_rhs = &r0m1 * &r0m1;
    let ax4 = conductor_lhs == conductor_rhs;

    AxiomReport {
        ax1,
        ax2,
        ax3,
        ax4,
        dchain: d,
        conductor_lhs,
        conductor_rhs,
        am_inequality,
        ax2_violation,
    }
}

/// `n = d_1 > d_2 > ... > d_{h+1} = 1` with each term dividing its predecessor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorChain {
    d: Vec<BigUint>,
}

impl DivisorChain {
    pub fn new(d: Vec<BigUint>) -> Result<Self, CharSeqError> {
        if d.is_empty() {
            return Err(CharSeqError::Empty);
        }
        if !d.last().is_some_and(One::is_one) {
            return Err(CharSeqError::InvalidChain("last entry must be 1".into()));
        }
        for (k, w) in d.windows(2).enumerate() {
            if w[0] <= w[1] {
                return Err(CharSeqError::InvalidChain(format!(
                    "not strictly decreasing at position {}",
                    k + 1
                )));
            }
            if !(&w[0] % &w[1]).is_zero() {
                return Err(CharSeqError::InvalidChain(format!("{} does not divide {}", w[1], w[0])));
            }
        }
        Ok(DivisorChain { d })
    }

    pub fn from_u64s(d: &[u64]) -> Result<Self, CharSeqError> {
        Self::new(d.iter().map(|&x| BigUint::from(x)).collect())
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.d
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.d.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for DivisorChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_strings().join(","))
    }
}

impl FromStr for DivisorChain {
    type Err = CharSeqError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DivisorChain::new(parse_list(s)?)
    }
}

/// The AM sequence `r_0 = d_1`, `r_k = d_1^2 / d_k - d_{k+1}` with the given
/// gcd chain.
pub fn am_from_chain(chain: &DivisorChain) -> Result<CharSequence, CharSeqError> {
    let d = chain.entries();
    let n = &d[0];
    let n_sq = n * n;
    let mut r = Vec::with_capacity(d.len());
    r.push(n.clone());
    for k in 1..d.len() {
        r.push(&n_sq / &d[k - 1] - &d[k]);
    }
    let seq = CharSequence::new(r)?;
    if seq.gcd_chain() != d {
        return Err(CharSeqError::Invariant(format!(
            "gcd chain of {seq} differs from {chain}"
        )));
    }
    let report = check_axioms(&seq);
    if !report.all() {
        return Err(CharSeqError::Invariant(format!(
            "{seq} built from {chain} fails axiom(s) {}",
            report.failing().join(" ")
        )));
    }
    Ok(seq)
}

/// Inverse of [`am_from_chain`]: the gcd chain of a certified AM sequence,
/// after checking `r_k = d_1^2 / d_k - d_{k+1}` term by term.
pub fn chain_from_am(r: &CharSequence) -> Result<DivisorChain, CharSeqError> {
    let report = check_axioms(r);
    if !report.all() {
        return Err(CharSeqError::NotAbhyankarMoh(report.failing().join(" ")));
    }
    let d = report.dchain;
    let n_sq = r.initial() * r.initial();
    for k in 1..=r.h() {
        let expected = &n_sq / &d[k - 1] - &d[k];
        if r.terms()[k] != expected {
            return Err(CharSeqError::Invariant(format!(
                "r_{k} = {} but d_1^2/d_{k} - d_{} = {expected}",
                r.terms()[k],
                k + 1
            )));
        }
    }
    DivisorChain::new(d)
}

/// All divisor chains starting at `n`, in lexicographic order.
pub fn divisor_chains(n: u64) -> Vec<Vec<u64>> {
    fn rec(d: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        prefix.push(d);
        if d == 1 {
            out.push(prefix.clone());
        } else {
            for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
                rec(e, prefix, out);
            }
        }
        prefix.pop();
    }
    let mut out = Vec::new();
    if n >= 1 {
        rec(n, &mut Vec::new(), &mut out);
    }
    out
}

/// Every AM sequence with initial term `n > 1`, one per divisor chain,
/// ordered lexicographically by chain. No chain is a proper prefix of another
/// (all end in 1), so this order is total.
pub fn enumerate_am(n: u64) -> Result<Vec<CharSequence>, CharSeqError> {
    enumerate_am_with(n, ExecMode::default())
}

pub fn enumerate_am_with(n: u64, mode: ExecMode) -> Result<Vec<CharSequence>, CharSeqError> {
    if n <= 1 {
        return Err(CharSeqError::InitialTooSmall(BigUint::from(n)));
    }
    let chains = divisor_chains(n);
    par::map(&chains, mode, |c| am_from_chain(&DivisorChain::from_u64s(c)?))
        .into_iter()
        .collect()
}

/// Terms of the telescoping sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TelescopingReport {
    /// The full sum, zero for every AM sequence.
    pub total: BigInt,
    /// `(d_k/d_{k+1} - 1)(n^2/d_k - d_{k+1} - r_k)`, one per `k`.
    pub summands: Vec<BigInt>,
    /// `n^2/d_k - d_{k+1} - r_k`, each nonnegative for AM sequences.
    pub slacks: Vec<BigInt>,
}

impl TelescopingReport {
    pub fn holds(&self) -> bool {
        self.total.is_zero()
            && self.summands.iter().all(|s| *s >= BigInt::zero())
            && self.slacks.iter().all(|s| *s >= BigInt::zero())
    }
}

/// `sum_k (d_k/d_{k+1} - 1)(n^2/d_k - d_{k+1} - r_k)` for an AM sequence.
pub fn telescoping_identity_check(r: &CharSequence) -> Result<TelescopingReport, CharSeqError> {
    let report = check_axioms(r);
    if !report.all() {
        return Err(CharSeqError::NotAbhyankarMoh(report.failing().join(" ")));
    }
    Ok(telescoping_sum(r))
}

/// The telescoping sum without the axiom precondition. Whenever (4) holds the
/// total is zero; the slacks are only guaranteed nonnegative under (3).
pub fn telescoping_sum(r: &CharSequence) -> TelescopingReport {
    let d: Vec<BigInt> = r.gcd_chain().iter().map(to_signed).collect();
    let n = to_signed(r.initial());
    let n_sq = &n * &n;
    let mut summands = Vec::with_capacity(r.h());
    let mut slacks = Vec::with_capacity(r.h());
    for k in 1..=r.h() {
        let (dk, dk1) = (&d[k - 1], &d[k]);
        let slack = &n_sq / dk - dk1 - to_signed(&r.terms()[k]);
        summands.push((dk / dk1 - 1) * &slack);
        slacks.push(slack);
    }
    let total = summands.iter().sum();
    TelescopingReport {
        total,
        summands,
        slacks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(v: &[u64]) -> CharSequence {
        CharSequence::from_u64s(v).unwrap()
    }

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn gcd_chain_examples() {
        assert_eq!(seq(&[6, 4, 17]).gcd_chain(), big(&[6, 2, 1]));
        assert_eq!(seq(&[11]).gcd_chain(), big(&[11]));
        assert_eq!(seq(&[9, 3, 29]).gcd_chain(), big(&[9, 3, 1]));
        assert_eq!(gcd_chain(&[]), Err(CharSeqError::Empty));
        assert_eq!(gcd_chain(&big(&[3, 0])), Err(CharSeqError::NonPositive { index: 1 }));
    }

    #[test]
    fn axiom_examples() {
        let r = check_axioms(&seq(&[6, 4, 17]));
        assert_eq!(r.as_tuple(), (true, true, true, true));
        assert_eq!(r.conductor_lhs, BigUint::from(25u32));

        let r = check_axioms(&seq(&[6, 2, 21]));
        assert_eq!(r.as_tuple(), (true, true, false, true));
        assert_eq!(r.am_inequality, Some((BigUint::from(42u32), BigUint::from(36u32))));

        let r = check_axioms(&seq(&[4, 6]));
        assert!(!r.ax1);
        assert_eq!(r.dchain, big(&[4, 2]));
    }

    #[test]
    fn single_term_convention() {
        assert_eq!(check_axioms(&seq(&[1])).as_tuple(), (true, true, true, true));
        assert_eq!(check_axioms(&seq(&[5])).as_tuple(), (false, true, true, false));
    }

    #[test]
    fn ax2_reports_first_violation() {
        // d = (12, 4, 2, 1): d_1 r_1 = 48, d_2 r_2 = 4*2 = 8
        let r = check_axioms(&seq(&[12, 4, 2, 3]));
        assert!(r.ax1);
        assert_eq!(r.ax2_violation, Some(1));
    }

    #[test]
    fn am_from_chain_examples() {
        let am = |d: &[u64]| am_from_chain(&DivisorChain::from_u64s(d).unwrap()).unwrap();
        assert_eq!(am(&[6, 2, 1]), seq(&[6, 4, 17]));
        assert_eq!(am(&[4, 2, 1]), seq(&[4, 2, 7]));
        for n in 2..20 {
            assert_eq!(am(&[n, 1]), seq(&[n, n - 1]));
        }
    }

    #[test]
    fn chain_validation() {
        assert!(DivisorChain::from_u64s(&[6, 4, 1]).is_err());
        assert!(DivisorChain::from_u64s(&[6, 2]).is_err());
        assert!(DivisorChain::from_u64s(&[2, 2, 1]).is_err());
        assert!(DivisorChain::from_u64s(&[]).is_err());
        assert!("6,2,1".parse::<DivisorChain>().is_ok());
        assert!("6,x,1".parse::<DivisorChain>().is_err());
    }

    #[test]
    fn chain_from_am_examples() {
        let ch = |r: &[u64]| chain_from_am(&seq(r)).unwrap().entries().to_vec();
        assert_eq!(ch(&[6, 4, 17]), big(&[6, 2, 1]));
        assert_eq!(ch(&[4, 2, 7]), big(&[4, 2, 1]));
        assert_eq!(ch(&[7, 6]), big(&[7, 1]));
        assert!(matches!(
            chain_from_am(&seq(&[6, 2, 21])),
            Err(CharSeqError::NotAbhyankarMoh(_))
        ));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_am(4).unwrap(), vec![seq(&[4, 3]), seq(&[4, 2, 7])]);
        assert_eq!(
            enumerate_am(6).unwrap(),
            vec![seq(&[6, 5]), seq(&[6, 4, 17]), seq(&[6, 3, 11])]
        );
        for q in [2, 3, 5, 7, 13, 31] {
            assert_eq!(enumerate_am(q).unwrap(), vec![seq(&[q, q - 1])]);
        }
        assert!(enumerate_am(1).is_err());
        assert_eq!(
            enumerate_am_with(36, ExecMode::Sequential).unwrap(),
            enumerate_am_with(36, ExecMode::Parallel).unwrap()
        );
    }

    #[test]
    fn telescoping_examples() {
        for r in [&[6u64, 4, 17][..], &[4, 2, 7]] {
            let rep = telescoping_identity_check(&seq(r)).unwrap();
            assert_eq!(rep.total, BigInt::zero());
            assert!(rep.summands.iter().all(Zero::is_zero));
        }
        // (9,3,29) satisfies (4) but not (3): the sum still telescopes to 0,
        // yet one summand is negative, so the checked form refuses it.
        let nagata = seq(&[9, 3, 29]);
        assert!(telescoping_identity_check(&nagata).is_err());
        let rep = telescoping_sum(&nagata);
        assert_eq!(rep.total, BigInt::zero());
        assert_eq!(rep.summands, vec![BigInt::from(6), BigInt::from(-6)]);
        assert!(!rep.holds());
    }

    #[test]
    fn big_initial_terms_stay_exact() {
        let n: BigUint = "18446744073709551616".parse().unwrap(); // 2^64
        let chain = DivisorChain::new(vec![n.clone(), BigUint::from(2u32), BigUint::one()]).unwrap();
        let r = am_from_chain(&chain).unwrap();
        assert_eq!(r.terms()[2], &n * &n / 2u32 - 1u32);
        assert_eq!(chain_from_am(&r).unwrap(), chain);
    }

    #[test]
    fn json_uses_decimal_strings() {
        let r = seq(&[6, 4, 17]);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"["6","4","17"]"#);
        assert_eq!(serde_json::from_str::<CharSequence>(&s).unwrap(), r);
    }

    /// Brute-force oracle: all sequences with initial term n and entries below
    /// n^2 that satisfy the axioms, by exhaustive search over h <= 2.
    fn brute_force_am(n: u64) -> Vec<CharSequence> {
        let mut out = Vec::new();
        let lim = n * n;
        for r1 in 1..lim {
            let s = seq(&[n, r1]);
            if s.is_abhyankar_moh() {
                out.push(s);
            }
            for r2 in 1..lim {
                let s = seq(&[n, r1, r2]);
                if s.is_abhyankar_moh() {
                    out.push(s);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumeration_matches_brute_force_for_small_n() {
        // for these n every divisor chain has at most three entries
        for n in [2u64, 3, 4, 6, 9, 10] {
            let mut got = enumerate_am(n).unwrap();
            got.sort();
            assert_eq!(got, brute_force_am(n), "n = {n}");
        }
    }

    fn arb_chain() -> impl Strategy<Value = DivisorChain> {
        (2u64..=60).prop_flat_map(|n| {
            let chains = divisor_chains(n);
            prop::sample::select(chains).prop_map(|c| DivisorChain::from_u64s(&c).unwrap())
        })
    }

    proptest! {
        #[test]
        fn chain_round_trip(chain in arb_chain()) {
            let r = am_from_chain(&chain).unwrap();
            prop_assert_eq!(chain_from_am(&r).unwrap(), chain);
            prop_assert_eq!(am_from_chain(&chain_from_am(&r).unwrap()).unwrap(), r.clone());
            prop_assert!(telescoping_identity_check(&r).unwrap().holds());
        }

        #[test]
        fn weighted_terms_strictly_increase(chain in arb_chain()) {
            let r = am_from_chain(&chain).unwrap();
            let d = r.gcd_chain();
            let weighted: Vec<BigUint> = (1..=r.h()).map(|k| &d[k - 1] * &r.terms()[k]).collect();
            prop_assert!(weighted.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
