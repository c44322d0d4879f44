//! Coordinate lines realizing a characteristic sequence, and intersection
//! numbers at infinity by degree accounting.
//!
//! Every curve handled here has a single branch at infinity and a polynomial
//! parametrization `t -> (x(t), y(t))`. For such a curve of degree `n`, the
//! intersection number at infinity with `h = 0` is
//! `n * deg h - deg_t h(x(t), y(t))`, which is what all checks below use.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::automorph::{decompose_line, AutoWord, AutomorphError, ChainSkeleton, Move};
use crate::charseq::{check_axioms, enumerate_am_with, AxiomReport, CharSeqError, CharSequence};
use crate::numeric::{gcd, is_prime, CoeffDomain, NumericError, Scalar};
use crate::par::{self, ExecMode};
use crate::poly::{BiMono, BiPoly, Degree, PolyError, Substitution, UniMono, UniPoly};
use crate::semigroup::NumericalSemigroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error(transparent)]
    CharSeq(#[from] CharSeqError),
    #[error(transparent)]
    Automorph(#[from] AutomorphError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("sequence {0} is too large to realize")]
    TooLarge(String),
    #[error("chain invariant violated: {0}")]
    Invariant(String),
    #[error("invalid Nagata parameters: {0}")]
    NagataParams(String),
}

/// Intersection multiplicity; `Infinite` when the curves share a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Intersection {
    Finite(u64),
    Infinite,
}

impl Intersection {
    pub fn finite(self) -> Option<u64> {
        match self {
            Intersection::Finite(v) => Some(v),
            Intersection::Infinite => None,
        }
    }

    fn to_json(self) -> serde_json::Value {
        match self {
            Intersection::Finite(v) => v.into(),
            Intersection::Infinite => "inf".into(),
        }
    }
}

impl std::fmt::Display for Intersection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Intersection::Finite(v) => write!(f, "{v}"),
            Intersection::Infinite => f.write_str("inf"),
        }
    }
}

/// `curve_degree * deg h - deg_t h(param)`: intersection at infinity of `h = 0`
/// with the unique branch at infinity of the parametrized curve.
pub fn intersection_with(
    h: &BiPoly,
    param: &(UniPoly, UniPoly),
    curve_degree: u64,
) -> Result<Intersection, ChainError> {
    let image = h.substitute(&param.0, &param.1)?;
    intersection_from_image(h.degree(), image.degree(), curve_degree)
}

fn intersection_from_image(
    h_degree: Degree,
    image_degree: Degree,
    curve_degree: u64,
) -> Result<Intersection, ChainError> {
    let Some(dt) = image_degree.finite() else {
        return Ok(Intersection::Infinite);
    };
    let dh = h_degree.finite().expect("nonzero image means nonzero h") as u64;
    (curve_degree * dh)
        .checked_sub(dt as u64)
        .map(Intersection::Finite)
        .ok_or_else(|| ChainError::Invariant(format!("deg_t {dt} exceeds {curve_degree} * {dh}")))
}

/// The coordinate line `f_{h+1} = 0` together with the chain
/// `f_1, ..., f_{h+1}` and a parametrization of every `f_k = 0`.
#[derive(Debug, Clone)]
pub struct ChainAtInfinity {
    domain: CoeffDomain,
    polys: Vec<BiPoly>,
    pair_words: Vec<AutoWord>,
    nratios: Vec<u64>,
    dchain: Vec<u64>,
    params: Vec<(UniPoly, UniPoly)>,
}

/// The move `(x, y) -> (y, -x)`; followed by `ElemY(t^m)` it sends
/// `(f_k, f_{k+1})` to `(f_{k+1}, f_{k+1}^m - f_k)`.
fn rotate(domain: CoeffDomain) -> Move {
    Move::linear(domain, [0, 1, -1, 0]).expect("invertible")
}

/// Builds the chain `f_1 = y`, `f_2 = y^{n_1} - x`,
/// `f_{k+1} = f_k^{n_k} - f_{k-1}` for a certified sequence.
pub fn build_chain(r: &CharSequence, domain: CoeffDomain) -> Result<ChainAtInfinity, ChainError> {
    let report = check_axioms(r);
    if !report.all() {
        return Err(CharSeqError::NotAbhyankarMoh(report.failing().join(",")).into());
    }
    if *r.initial() <= num_bigint::BigUint::one() {
        return Err(CharSeqError::InitialTooSmall(r.initial().clone()).into());
    }
    let nratios: Vec<u32> = r
        .nratios()
        .iter()
        .map(|m| m.to_u32())
        .collect::<Option<_>>()
        .filter(|_| r.initial().to_u32().is_some())
        .ok_or_else(|| ChainError::TooLarge(r.to_string()))?;

    let mut polys = vec![BiPoly::y(domain)];
    let mut pair_words = Vec::with_capacity(nratios.len());
    let mut word = AutoWord::identity(domain);
    for &m in &nratios {
        word.push(rotate(domain))?;
        word.push(Move::ElemY(UniPoly::monomial(Scalar::one(domain), m)))?;
        polys.push(word.components().1.clone());
        pair_words.push(word.clone());
    }
    let skeleton = ChainSkeleton {
        polys,
        pair_words,
        base: rotate(domain),
    };
    let chain = ChainAtInfinity::from_skeleton(&skeleton)?;
    chain.check_invariants()?;
    Ok(chain)
}

impl ChainAtInfinity {
    /// Assembles a chain from a decomposition, parametrizing every curve
    /// `f_k = 0` as the image of `(0, t)` under the inverse of its pair word.
    pub fn from_skeleton(sk: &ChainSkeleton) -> Result<Self, ChainError> {
        let degrees = sk.degrees();
        let (&n, first) = (degrees.last().expect("nonempty"), degrees[0]);
        if first != 1 || sk.pair_words.len() + 1 != sk.polys.len() {
            return Err(ChainError::Invariant("skeleton must start at degree 1".into()));
        }
        let mut dchain = Vec::with_capacity(degrees.len());
        for &dk in &degrees {
            if n % dk != 0 {
                return Err(ChainError::Invariant(format!("deg {dk} does not divide {n}")));
            }
            dchain.push((n / dk) as u64);
        }
        let nratios: Vec<u64> = dchain.windows(2).map(|w| w[0] / w[1]).collect();
        let domain = sk.polys[0].domain();
        let origin = (UniPoly::zero(domain), UniPoly::t(domain));
        let mut params = Vec::with_capacity(sk.polys.len());
        for w in &sk.pair_words {
            params.push(w.inverse().apply((&origin.0, &origin.1))?);
        }
        let last = sk.pair_words.last().expect("n > 1").then(Move::swap(domain))?;
        params.push(last.inverse().apply((&origin.0, &origin.1))?);
        Ok(ChainAtInfinity {
            domain,
            polys: sk.polys.clone(),
            pair_words: sk.pair_words.clone(),
            nratios,
            dchain,
            params,
        })
    }

    pub fn domain(&self) -> CoeffDomain {
        self.domain
    }

    /// `n = d_1`, the degree of the coordinate line.
    pub fn degree(&self) -> u64 {
        self.dchain[0]
    }

    pub fn h(&self) -> usize {
        self.nratios.len()
    }

    pub fn polys(&self) -> &[BiPoly] {
        &self.polys
    }

    pub fn nratios(&self) -> &[u64] {
        &self.nratios
    }

    pub fn dchain(&self) -> &[u64] {
        &self.dchain
    }

    /// `pair_words()[k]` has components `(f_{k+1}, f_{k+2})`.
    pub fn pair_words(&self) -> &[AutoWord] {
        &self.pair_words
    }

    /// An automorphism with components `(f_{h+1}, f_h)`.
    pub fn line_word(&self) -> AutoWord {
        self.pair_words[self.h() - 1]
            .then(Move::swap(self.domain))
            .expect("same domain")
    }

    pub fn line(&self) -> &BiPoly {
        &self.polys[self.h()]
    }

    /// Parametrization of the coordinate line.
    pub fn param(&self) -> &(UniPoly, UniPoly) {
        &self.params[self.h()]
    }

    /// Parametrization of `f_k = 0`, `k` counted from 1.
    pub fn branch_param(&self, k: usize) -> &(UniPoly, UniPoly) {
        &self.params[k - 1]
    }

    /// `deg f_k = n / d_k`.
    pub fn curve_degrees(&self) -> Vec<u64> {
        self.dchain.iter().map(|d| self.degree() / d).collect()
    }

    pub fn check_invariants(&self) -> Result<(), ChainError> {
        let n = self.degree();
        let fail = |msg: String| Err(ChainError::Invariant(msg));
        for (k, (f, want)) in self.polys.iter().zip(self.curve_degrees()).enumerate() {
            if f.degree() != Degree::Finite(want as u32) {
                return fail(format!("deg f_{} = {}, expected {want}", k + 1, f.degree()));
            }
        }
        let (xt, yt) = self.param();
        if xt.degree().max(yt.degree()) != Degree::Finite(n as u32) {
            return fail(format!("parametrization degree is not {n}"));
        }
        let mut sub = Substitution::new(xt, yt)?;
        for (k, f) in self.polys.iter().enumerate() {
            let got = sub.apply(f)?.degree();
            let want = match self.dchain.get(k + 1) {
                Some(&d) => Degree::Finite(d as u32),
                None => Degree::NegInfinity,
            };
            if got != want {
                return fail(format!("deg_t f_{}(param) = {got}, expected {want}", k + 1));
            }
        }
        Ok(())
    }

    /// `(n, i(gamma_1, gamma), ..., i(gamma_h, gamma))`, read off the chain.
    pub fn sequence(&self) -> Result<Vec<Intersection>, ChainError> {
        let mut seq = vec![Intersection::Finite(self.degree())];
        for f in &self.polys[..self.h()] {
            seq.push(intersection_at_infinity(f, self)?);
        }
        Ok(seq)
    }

    /// `i(gamma_j, gamma_k)` for branches of `f_j = 0` and `f_k = 0`, 1-based.
    pub fn pairwise_intersection(&self, j: usize, k: usize) -> Result<Intersection, ChainError> {
        if j == k {
            return Ok(Intersection::Infinite);
        }
        let (lo, hi) = (j.min(k), j.max(k));
        let deg_hi = self.curve_degrees()[hi - 1];
        intersection_with(&self.polys[lo - 1], self.branch_param(hi), deg_hi)
    }
}

/// Intersection at infinity of `h = 0` with the coordinate line of `chain`.
pub fn intersection_at_infinity(h: &BiPoly, chain: &ChainAtInfinity) -> Result<Intersection, ChainError> {
    chain.domain.check_same(h.domain())?;
    intersection_with(h, chain.param(), chain.degree())
}

/// Decomposes the coordinate line of `chain` back into a chain, using
/// `f_h` as the partner.
pub fn redecompose(chain: &ChainAtInfinity) -> Result<ChainAtInfinity, ChainError> {
    let w = chain.line_word().then(Move::swap(chain.domain))?;
    let (g, f) = w.components();
    let sk = decompose_line(f, g, &w)?;
    ChainAtInfinity::from_skeleton(&sk)
}

/// Which of the four checks hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checks {
    /// `deg f_k = n / d_k`.
    pub lemma31_1: bool,
    /// `i(gamma_k, gamma) = r_k`.
    pub lemma31_2: bool,
    /// `i(gamma_k, gamma_{k+1}) = n^2 / (d_k d_{k+1}) - 1`.
    pub eq5: bool,
    /// Two smallest of every triple of `d_lambda` values agree, and the
    /// consecutive values match `1 - d_k d_{k+1} / n^2`.
    pub ultrametric: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.lemma31_1 && self.lemma31_2 && self.eq5 && self.ultrametric
    }

    pub fn failing(&self) -> Vec<&'static str> {
        [
            (self.lemma31_1, "lemma31_1"),
            (self.lemma31_2, "lemma31_2"),
            (self.eq5, "eq5"),
            (self.ultrametric, "ultrametric"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

#[derive(Debug, Clone)]
pub struct IntersectionReport {
    /// `(n, i(gamma_1, gamma), ..., i(gamma_h, gamma))`.
    pub sequence: Vec<Intersection>,
    pub dchain: Vec<u64>,
    pub degrees: Vec<u64>,
    /// `i(gamma_k, gamma)` for `k = 1..=h`.
    pub intersections: Vec<Intersection>,
    /// Full symmetric matrix of `i(gamma_j, gamma_k)`, infinite on the diagonal.
    pub pairwise: Vec<Vec<Intersection>>,
    /// `i(gamma_j, gamma_k) / (deg f_j * deg f_k)`; `None` on the diagonal.
    pub dlambda: Vec<Vec<Option<BigRational>>>,
    pub ultrametric_witness: Option<[usize; 3]>,
    pub checks: Checks,
}

impl IntersectionReport {
    /// `i(gamma_k, gamma_{k+1})` for `k = 1..=h`.
    pub fn consecutive(&self) -> Vec<Intersection> {
        (0..self.pairwise.len().saturating_sub(1))
            .map(|k| self.pairwise[k][k + 1])
            .collect()
    }

    pub fn sequence_u64(&self) -> Option<Vec<u64>> {
        self.sequence.iter().map(|i| i.finite()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let ints = |v: &[Intersection]| v.iter().map(|i| i.to_json()).collect::<Vec<_>>();
        let dl: Vec<Vec<String>> = self
            .dlambda
            .iter()
            .map(|row| {
                row.iter()
                    .map(|q| match q {
                        Some(q) => format!("{}/{}", q.numer(), q.denom()),
                        None => "inf".to_string(),
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({
            "sequence": ints(&self.sequence),
            "dchain": self.dchain,
            "degrees": self.degrees,
            "intersections": ints(&self.intersections),
            "pairwise": ints(&self.consecutive()),
            "dlambda": dl,
            "checks": {
                "lemma31_1": self.checks.lemma31_1,
                "lemma31_2": self.checks.lemma31_2,
                "eq5": self.checks.eq5,
                "ultrametric": self.checks.ultrametric,
            }
        })
    }
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Computes every intersection number of the chain and checks them against
/// `r`. Mismatches are reported through [`Checks`], not as errors.
pub fn verify_theorem(chain: &ChainAtInfinity, r: &CharSequence) -> Result<IntersectionReport, ChainError> {
    let n = chain.degree();
    let h = chain.h();
    let degrees = chain.curve_degrees();
    let sequence = chain.sequence()?;
    let intersections = sequence[1..].to_vec();

    let size = h + 1;
    let mut pairwise = vec![vec![Intersection::Infinite; size]; size];
    for j in 1..=size {
        for k in j + 1..=size {
            let v = chain.pairwise_intersection(j, k)?;
            pairwise[j - 1][k - 1] = v;
            pairwise[k - 1][j - 1] = v;
        }
    }
    let dlambda: Vec<Vec<Option<BigRational>>> = (0..size)
        .map(|j| {
            (0..size)
                .map(|k| pairwise[j][k].finite().map(|v| ratio(v, degrees[j] * degrees[k])))
                .collect()
        })
        .collect();

    let expected_d: Option<Vec<u64>> = r.gcd_chain().iter().map(|d| d.to_u64()).collect();
    let expected_r = r.to_u64s();
    let lemma31_1 = expected_d.as_ref().is_some_and(|d| {
        d.len() == size
            && d.iter()
                .zip(&degrees)
                .all(|(dk, &deg)| n.is_multiple_of(*dk) && n / dk == deg)
    });
    let lemma31_2 = expected_r.as_ref().is_some_and(|want| {
        want.len() == sequence.len()
            && want
                .iter()
                .zip(&sequence)
                .all(|(&w, got)| *got == Intersection::Finite(w))
    });
    let dc = chain.dchain();
    let eq5 = (0..h).all(|k| pairwise[k][k + 1] == Intersection::Finite(n * n / (dc[k] * dc[k + 1]) - 1));

    let witness = ultrametric_violation(&dlambda);
    let closed_form =
        (0..h).all(|k| dlambda[k][k + 1].as_ref() == Some(&(BigRational::one() - ratio(dc[k] * dc[k + 1], n * n))));
    let checks = Checks {
        lemma31_1,
        lemma31_2,
        eq5,
        ultrametric: witness.is_none() && closed_form,
    };
    Ok(IntersectionReport {
        sequence,
        dchain: dc.to_vec(),
        degrees,
        intersections,
        pairwise,
        dlambda,
        ultrametric_witness: witness,
        checks,
    })
}

/// First triple (1-based) whose two smallest `d_lambda` values differ.
fn ultrametric_violation(dlambda: &[Vec<Option<BigRational>>]) -> Option<[usize; 3]> {
    let m = dlambda.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let mut vals = [&dlambda[i][j], &dlambda[i][k], &dlambda[j][k]];
                vals.sort();
                if vals[0] != vals[1] {
                    return Some([i + 1, j + 1, k + 1]);
                }
            }
        }
    }
    None
}

/// Checks the two-smallest-equal rule; returns the first violating triple.
pub fn ultrametric_check(report: &IntersectionReport) -> (bool, Option<[usize; 3]>) {
    let w = ultrametric_violation(&report.dlambda);
    (w.is_none(), w)
}

/// Intersection numbers collected by [`semigroup_sampling_oracle`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSamples {
    /// Monomials by total degree, then random trials by index.
    pub values: Vec<u64>,
    /// Samples vanishing on the curve.
    pub infinite: usize,
}

impl OracleSamples {
    pub fn non_members(&self, g: &NumericalSemigroup) -> Vec<u64> {
        let mut bad: Vec<u64> = self.values.iter().copied().filter(|&v| !g.contains(v)).collect();
        bad.sort_unstable();
        bad.dedup();
        bad
    }

    pub fn contains_zero(&self) -> bool {
        self.values.contains(&0)
    }
}

/// Monomials `x^a y^b` with `a + b <= bound`, ordered by total degree then
/// by decreasing power of `x`.
fn monomials_up_to(bound: u32) -> Vec<BiMono> {
    (0..=bound)
        .flat_map(|d| (0..=d).rev().map(move |a| BiMono { x: a, y: d - a }))
        .collect()
}

const RANDOM_COEFFS: [i64; 4] = [-2, -1, 1, 2];

/// Intersection numbers of every monomial of total degree `<= degree_bound`
/// and of `trials` seeded random polynomials with the parametrized curve.
pub fn sample_intersections(
    param: &(UniPoly, UniPoly),
    curve_degree: u64,
    trials: usize,
    degree_bound: u32,
    seed: u64,
    mode: ExecMode,
) -> Result<OracleSamples, ChainError> {
    let domain = param.0.domain();
    let monos = monomials_up_to(degree_bound);
    let mut sub = Substitution::new(&param.0, &param.1)?;
    let images: Vec<UniPoly> = monos.iter().map(|m| sub.monomial_image(m.x, m.y)).collect();

    let mut outcomes: Vec<Option<u64>> = Vec::with_capacity(monos.len() + trials);
    for (m, img) in monos.iter().zip(&images) {
        let d = Degree::Finite(m.x + m.y);
        outcomes.push(intersection_from_image(d, img.degree(), curve_degree)?.finite());
    }
    let random = par::map_range(trials, mode, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut chosen: Vec<(usize, Scalar)> = Vec::new();
        for idx in 0..monos.len() {
            if rng.random_bool(0.5) {
                let c = RANDOM_COEFFS[rng.random_range(0..RANDOM_COEFFS.len())];
                let c = Scalar::from_i64(domain, c);
                if !c.is_zero() {
                    chosen.push((idx, c));
                }
            }
        }
        combination_intersection(&monos, &images, &chosen, curve_degree)
    });
    for v in random {
        outcomes.push(v?);
    }
    let infinite = outcomes.iter().filter(|v| v.is_none()).count();
    Ok(OracleSamples {
        values: outcomes.into_iter().flatten().collect(),
        infinite,
    })
}

/// Intersection number of `sum c_i m_i`, scanning the image from the top
/// `t`-degree down instead of forming it.
fn combination_intersection(
    monos: &[BiMono],
    images: &[UniPoly],
    chosen: &[(usize, Scalar)],
    curve_degree: u64,
) -> Result<Option<u64>, ChainError> {
    let Some(dh) = chosen.iter().map(|&(i, _)| monos[i].x + monos[i].y).max() else {
        return Ok(None);
    };
    let top = chosen.iter().filter_map(|&(i, _)| images[i].degree().finite()).max();
    let Some(top) = top else {
        return Ok(None);
    };
    for d in (0..=top).rev() {
        let mut acc: Option<Scalar> = None;
        for (i, c) in chosen {
            let coeff = images[*i].coeff(UniMono(d));
            if coeff.is_zero() {
                continue;
            }
            let term = c * &coeff;
            acc = Some(match acc {
                Some(a) => &a + &term,
                None => term,
            });
        }
        if acc.is_some_and(|a| !a.is_zero()) {
            let v = intersection_from_image(Degree::Finite(dh), Degree::Finite(d), curve_degree)?;
            return Ok(v.finite());
        }
    }
    Ok(None)
}

/// Samples intersection numbers with the coordinate line of `chain`; every
/// finite value must belong to the semigroup generated by its sequence.
pub fn semigroup_sampling_oracle(
    chain: &ChainAtInfinity,
    trials: usize,
    degree_bound: u32,
    seed: u64,
    mode: ExecMode,
) -> Result<OracleSamples, ChainError> {
    sample_intersections(chain.param(), chain.degree(), trials, degree_bound, seed, mode)
}

/// Outcome of verifying one sequence end to end.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub sequence: CharSequence,
    pub report: IntersectionReport,
    pub invariants: Result<(), ChainError>,
}

/// Builds and verifies the chain of every certified sequence with initial
/// term in `2..=max_n`, over `domain`.
pub fn verify_sweep(max_n: u64, domain: CoeffDomain, mode: ExecMode) -> Result<Vec<SweepRow>, ChainError> {
    let mut seqs = Vec::new();
    for n in 2..=max_n {
        seqs.extend(enumerate_am_with(n, mode)?);
    }
    par::map(&seqs, mode, |r| {
        let chain = build_chain(r, domain)?;
        Ok(SweepRow {
            sequence: r.clone(),
            report: verify_theorem(&chain, r)?,
            invariants: chain.check_invariants(),
        })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NagataCase {
    /// `a < p`: the curve meets the line at infinity at `(1:0:0)`.
    I,
    /// `a > p`: at `(0:1:0)`.
    II,
}

/// The embedded line `(y^p - x^a)^p - x = 0` over `F_p`, which is not a
/// coordinate line.
#[derive(Debug, Clone)]
pub struct NagataExample {
    pub p: u64,
    pub a: u64,
    pub case: NagataCase,
    pub f: BiPoly,
    pub g: BiPoly,
    pub param: (UniPoly, UniPoly),
    /// `f(x(t), y(t))`, expected `0`.
    pub f_on_param: UniPoly,
    /// `g(x(t), y(t))`, expected `t`.
    pub g_on_param: UniPoly,
    /// From the closed forms of the two cases.
    pub expected: CharSequence,
    /// From degree accounting on the parametrization.
    pub computed: CharSequence,
    pub axioms: AxiomReport,
}

impl NagataExample {
    pub fn identities_hold(&self) -> bool {
        self.f_on_param.is_zero() && self.g_on_param == UniPoly::t(self.f.domain())
    }

    pub fn sequence_matches(&self) -> bool {
        self.expected == self.computed
    }

    /// Exactly axioms (1), (2), (4) hold and (3) fails.
    pub fn axioms_as_expected(&self) -> bool {
        self.axioms.as_tuple() == (true, true, false, true)
    }

    pub fn all_ok(&self) -> bool {
        self.identities_hold() && self.sequence_matches() && self.axioms_as_expected()
    }
}

pub fn nagata(p: u64, a: u64) -> Result<NagataExample, ChainError> {
    if !is_prime(p) {
        return Err(ChainError::NagataParams(format!("p = {p} is not prime")));
    }
    if a <= 1 || gcd(a, p) != 1 {
        return Err(ChainError::NagataParams(format!(
            "need a > 1 coprime to p, got a = {a}"
        )));
    }
    let too_large = || ChainError::TooLarge(format!("p = {p}, a = {a}"));
    let (p32, a32) = (
        u32::try_from(p).map_err(|_| too_large())?,
        u32::try_from(a).map_err(|_| too_large())?,
    );
    p32.checked_mul(p32)
        .and_then(|pp| pp.checked_mul(a32.max(p32)))
        .and_then(|v| v.checked_mul(a32))
        .ok_or_else(too_large)?;
    let domain = CoeffDomain::prime_field(p)?;
    let (x, y) = (BiPoly::x(domain), BiPoly::y(domain));
    let inner = &y.pow(p32) - &x.pow(a32);
    let f = &inner.pow(p32) - &x;
    let g = &y - &inner.pow(a32);
    let t = UniPoly::t(domain);
    let param = (t.pow(p32 * p32), &t + &t.pow(a32 * p32));
    let f_on_param = f.substitute(&param.0, &param.1)?;
    let g_on_param = g.substitute(&param.0, &param.1)?;

    let case = if a < p { NagataCase::I } else { NagataCase::II };
    let expected = match case {
        NagataCase::I => [p * p, p * (p - a), p * p * p + p * (a - 1) - 1],
        NagataCase::II => [a * p, p * (a - p), a * a * p + p * (a - 1) - 1],
    };
    let expected = CharSequence::from_u64s(&expected)?;

    // r_0 = deg f; r_1 = multiplicity of the closure at its point at
    // infinity, i.e. the intersection there with the affine lines through
    // it (y = c in case I, x = c in case II); r_2 from the conductor formula
    // with d_3 = 1.
    let r0 = f.degree().finite().expect("nonzero") as u64;
    let deg_param = param.0.degree().max(param.1.degree());
    if deg_param != Degree::Finite(r0 as u32) {
        return Err(ChainError::Invariant(format!(
            "parametrization degree {deg_param} differs from deg f = {r0}"
        )));
    }
    let line = match case {
        NagataCase::I => y.clone(),
        NagataCase::II => x.clone(),
    };
    let r1 = intersection_with(&line, &param, r0)?
        .finite()
        .ok_or_else(|| ChainError::Invariant("line is a component".into()))?;
    let d2 = gcd(r0, r1);
    let lhs = (r0 - 1) * (r0 - 1);
    let used = (r0 / d2 - 1) * r1;
    if d2 <= 1 || lhs < used || !(lhs - used).is_multiple_of(d2 - 1) {
        return Err(ChainError::Invariant(format!(
            "conductor formula has no integral solution for ({r0}, {r1})"
        )));
    }
    let r2 = (lhs - used) / (d2 - 1);
    if gcd(d2, r2) != 1 {
        return Err(ChainError::Invariant(format!(
            "gcd(d_2, r_2) = gcd({d2}, {r2}) is not 1"
        )));
    }
    let computed = CharSequence::from_u64s(&[r0, r1, r2])?;
    let axioms = check_axioms(&computed);
    Ok(NagataExample {
        p,
        a,
        case,
        f,
        g,
        param,
        f_on_param,
        g_on_param,
        expected,
        computed,
        axioms,
    })
}

/// `1 - d_k d_{k+1} / n^2` with `k` counted from 0.
pub fn closed_form_dlambda(dchain: &[u64], k: usize) -> BigRational {
    let n = dchain[0];
    BigRational::one() - ratio(dchain[k] * dchain[k + 1], n * n)
}
