//! Plane polynomial automorphisms as words of affine and elementary moves.
//!
//! A word is applied left to right: the word `[m1, m2]` is the map
//! `p -> m2(m1(p))`. Its components are the pair of polynomials obtained by
//! pushing `(x, y)` through every move, so the inverse of a word is always
//! available as the reversed word of inverted moves.
//!
//! Degree reduction subtracts `c * f^N` from `g` until `deg g < deg f`. For a
//! genuine automorphism this always succeeds: one degree divides the other
//! and the leading forms agree up to a constant.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{CoeffDomain, NumericError, Scalar};
use crate::poly::{parse_bipoly, BiMono, BiPoly, Degree, PolyError, RingElement, UniMono, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomorphError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("affine part is singular (determinant 0)")]
    SingularAffine,
    #[error("witness components do not match the given pair")]
    WitnessMismatch,
    #[error("degree {0} must exceed 1")]
    DegreeTooSmall(Degree),
    #[error("neither degree divides the other ({0} and {1}); not an automorphism")]
    Divisibility(u32, u32),
    #[error("leading form of degree {deg_g} is not a constant times the partner's leading form to the power {power}; not an automorphism")]
    LeadingFormMismatch { deg_g: u32, power: u32 },
    #[error("component reduced to a constant; not an automorphism")]
    ConstantComponent,
    #[error("reduction did not terminate within {0} steps")]
    NoTermination(u32),
    #[error("invalid word: {0}")]
    InvalidWord(String),
}

/// One generator of the tame group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// `(x, y) -> (a x + b y + e, c x + d y + f)`, with `ad - bc != 0`.
    Affine {
        a: Scalar,
        b: Scalar,
        c: Scalar,
        d: Scalar,
        e: Scalar,
        f: Scalar,
    },
    /// `(x, y) -> (x + P(y), y)`.
    ElemX(UniPoly),
    /// `(x, y) -> (x, y + P(x))`.
    ElemY(UniPoly),
}

impl Move {
    pub fn affine(coeffs: [Scalar; 6]) -> Result<Self, AutomorphError> {
        let domain = coeffs[0].domain();
        for c in &coeffs[1..] {
            domain.check_same(c.domain())?;
        }
        let [a, b, c, d, e, f] = coeffs;
        if (&(&a * &d) - &(&b * &c)).is_zero() {
            return Err(AutomorphError::SingularAffine);
        }
        Ok(Move::Affine { a, b, c, d, e, f })
    }

    /// Linear part given by small integers, no translation.
    pub fn linear(domain: CoeffDomain, [a, b, c, d]: [i64; 4]) -> Result<Self, AutomorphError> {
        let s = |v| Scalar::from_i64(domain, v);
        Self::affine([s(a), s(b), s(c), s(d), s(0), s(0)])
    }

    /// `(x, y) -> (y, x)`.
    pub fn swap(domain: CoeffDomain) -> Self {
        Self::linear(domain, [0, 1, 1, 0]).expect("swap is invertible")
    }

    pub fn domain(&self) -> CoeffDomain {
        match self {
            Move::Affine { a, .. } => a.domain(),
            Move::ElemX(p) | Move::ElemY(p) => p.domain(),
        }
    }

    pub fn inverse(&self) -> Move {
        match self {
            Move::Affine { a, b, c, d, e, f } => {
                let det = &(a * d) - &(b * c);
                let inv = det.inverse().expect("affine moves are nonsingular");
                let (ia, ib, ic, id) = (d * &inv, -&(b * &inv), -&(c * &inv), a * &inv);
                let ie = -&(&(&ia * e) + &(&ib * f));
                let if_ = -&(&(&ic * e) + &(&id * f));
                Move::Affine {
                    a: ia,
                    b: ib,
                    c: ic,
                    d: id,
                    e: ie,
                    f: if_,
                }
            }
            Move::ElemX(p) => Move::ElemX(-p),
            Move::ElemY(p) => Move::ElemY(-p),
        }
    }

    /// Image of the pair `(X, Y)` under this move.
    pub fn act<R: RingElement>(&self, (px, py): (&R, &R)) -> (R, R) {
        match self {
            Move::Affine { a, b, c, d, e, f } => (
                px.scale(a).add(&py.scale(b)).add(&R::constant(e.clone(), px)),
                px.scale(c).add(&py.scale(d)).add(&R::constant(f.clone(), px)),
            ),
            Move::ElemX(p) => (px.add(&p.eval_in(py)), py.clone()),
            Move::ElemY(p) => (px.clone(), py.add(&p.eval_in(px))),
        }
    }
}

/// A composable, invertible polynomial automorphism of the plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutoWord {
    domain: CoeffDomain,
    moves: Vec<Move>,
    components: (BiPoly, BiPoly),
}

impl AutoWord {
    pub fn identity(domain: CoeffDomain) -> Self {
        AutoWord {
            domain,
            moves: Vec::new(),
            components: (BiPoly::x(domain), BiPoly::y(domain)),
        }
    }

    pub fn from_moves(domain: CoeffDomain, moves: impl IntoIterator<Item = Move>) -> Result<Self, AutomorphError> {
        let mut w = Self::identity(domain);
        for m in moves {
            w.push(m)?;
        }
        Ok(w)
    }

    pub fn push(&mut self, m: Move) -> Result<(), AutomorphError> {
        self.domain.check_same(m.domain())?;
        let next = m.act((&self.components.0, &self.components.1));
        self.components = next;
        self.moves.push(m);
        Ok(())
    }

    /// This word followed by `m`.
    pub fn then(&self, m: Move) -> Result<Self, AutomorphError> {
        let mut w = self.clone();
        w.push(m)?;
        Ok(w)
    }

    /// `self` followed by `other`, i.e. the map `other ∘ self`.
    pub fn compose(&self, other: &AutoWord) -> Result<Self, AutomorphError> {
        self.domain.check_same(other.domain)?;
        let mut w = self.clone();
        for m in &other.moves {
            w.push(m.clone())?;
        }
        Ok(w)
    }

    pub fn inverse(&self) -> Self {
        Self::from_moves(self.domain, self.moves.iter().rev().map(Move::inverse))
            .expect("inverted moves share the domain")
    }

    pub fn domain(&self) -> CoeffDomain {
        self.domain
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn components(&self) -> (&BiPoly, &BiPoly) {
        (&self.components.0, &self.components.1)
    }

    pub fn is_identity_map(&self) -> bool {
        self.components == (BiPoly::x(self.domain), BiPoly::y(self.domain))
    }

    /// Image of a point, or of a pair of polynomials such as a
    /// parametrization `(x(t), y(t))`.
    pub fn apply<R: RingElement>(&self, (px, py): (&R, &R)) -> Result<(R, R), AutomorphError> {
        self.domain.check_same(px.element_domain())?;
        self.domain.check_same(py.element_domain())?;
        let mut cur = (px.clone(), py.clone());
        for m in &self.moves {
            cur = m.act((&cur.0, &cur.1));
        }
        Ok(cur)
    }

    /// `det` of the Jacobian matrix of the components. A nonzero constant for
    /// every word; necessary for invertibility, not sufficient in char p.
    pub fn jacobian_determinant(&self) -> BiPoly {
        let (f, g) = self.components();
        &(&f.partial_x() * &g.partial_y()) - &(&f.partial_y() * &g.partial_x())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(WordRepr::from(self)).expect("word serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, AutomorphError> {
        let repr: WordRepr =
            serde_json::from_value(v.clone()).map_err(|e| AutomorphError::InvalidWord(e.to_string()))?;
        repr.into_word()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct WordRepr {
    characteristic: u64,
    moves: Vec<MoveRepr>,
}

/// One-variable polynomials are written in the variable they are evaluated
/// at: `y` for `elem_x`, `x` for `elem_y`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum MoveRepr {
    Affine { coeffs: [String; 6] },
    ElemX { poly: String },
    ElemY { poly: String },
}

fn uni_as_bi(p: &UniPoly, in_x: bool) -> BiPoly {
    BiPoly::from_terms(
        p.domain(),
        p.terms().map(|(m, c)| {
            let mono = if in_x {
                BiMono { x: m.0, y: 0 }
            } else {
                BiMono { x: 0, y: m.0 }
            };
            (mono, c.clone())
        }),
    )
    .expect("same domain")
}

fn bi_as_uni(p: &BiPoly, in_x: bool) -> Result<UniPoly, AutomorphError> {
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        let (used, other) = if in_x { (m.x, m.y) } else { (m.y, m.x) };
        if other != 0 {
            let var = if in_x { "x" } else { "y" };
            return Err(AutomorphError::InvalidWord(format!(
                "expected a polynomial in {var} only, got {p}"
            )));
        }
        terms.push((UniMono(used), c.clone()));
    }
    Ok(UniPoly::from_terms(p.domain(), terms)?)
}

impl From<&AutoWord> for WordRepr {
    fn from(w: &AutoWord) -> Self {
        let moves = w
            .moves
            .iter()
            .map(|m| match m {
                Move::Affine { a, b, c, d, e, f } => MoveRepr::Affine {
                    coeffs: [a, b, c, d, e, f].map(ToString::to_string),
                },
                Move::ElemX(p) => MoveRepr::ElemX {
                    poly: uni_as_bi(p, false).to_string(),
                },
                Move::ElemY(p) => MoveRepr::ElemY {
                    poly: uni_as_bi(p, true).to_string(),
                },
            })
            .collect();
        WordRepr {
            characteristic: w.domain.characteristic(),
            moves,
        }
    }
}

impl WordRepr {
    fn into_word(self) -> Result<AutoWord, AutomorphError> {
        let domain = match self.characteristic {
            0 => CoeffDomain::Rational,
            p => CoeffDomain::prime_field(p)?,
        };
        let scalar = |s: &str| -> Result<Scalar, AutomorphError> {
            parse_bipoly(s, domain)?
                .as_constant()
                .ok_or_else(|| AutomorphError::InvalidWord(format!("'{s}' is not a constant")))
        };
        let mut moves = Vec::with_capacity(self.moves.len());
        for m in self.moves {
            moves.push(match m {
                MoveRepr::Affine { coeffs } => {
                    let parsed: Vec<Scalar> = coeffs.iter().map(|s| scalar(s)).collect::<Result<_, _>>()?;
                    Move::affine(parsed.try_into().expect("six coefficients"))?
                }
                MoveRepr::ElemX { poly } => Move::ElemX(bi_as_uni(&parse_bipoly(&poly, domain)?, false)?),
                MoveRepr::ElemY { poly } => Move::ElemY(bi_as_uni(&parse_bipoly(&poly, domain)?, true)?),
            });
        }
        AutoWord::from_moves(domain, moves)
    }
}

fn finite_degree(p: &BiPoly) -> Result<u32, AutomorphError> {
    p.degree().finite().ok_or(AutomorphError::ConstantComponent)
}

/// The constant `c` with `lf(g) = c * lf(f)^N`, where `N = deg g / deg f`.
fn reduction_constant(g: &BiPoly, f: &BiPoly) -> Result<(Scalar, u32), AutomorphError> {
    let dg = finite_degree(g)?;
    let df = finite_degree(f)?;
    if df == 0 {
        return Err(AutomorphError::ConstantComponent);
    }
    if dg % df != 0 {
        return Err(AutomorphError::Divisibility(dg, df));
    }
    let power = dg / df;
    let target = g.leading_form()?;
    let base = f.leading_form()?.pow(power);
    let (m, bc) = base.terms().next_back().expect("leading form is nonzero");
    let c = target.coeff(*m).try_div(bc)?;
    if c.is_zero() || base.scale(&c) != target {
        return Err(AutomorphError::LeadingFormMismatch { deg_g: dg, power });
    }
    Ok((c, power))
}

/// `c * t^n` as a move polynomial.
fn power_poly(c: &Scalar, n: u32) -> UniPoly {
    UniPoly::monomial(c.clone(), n)
}

/// Replaces `g` by `g - c f^N` until `deg g < deg f`, given a witness whose
/// components are `(g, f)`. The witness is extended by the matching
/// elementary moves, so it always has components `(g~, f)`.
pub fn degree_reduce(g: &BiPoly, f: &BiPoly, witness: &AutoWord) -> Result<(BiPoly, AutoWord), AutomorphError> {
    let df = f.degree();
    if df <= Degree::Finite(1) {
        return Err(AutomorphError::DegreeTooSmall(df));
    }
    if witness.components() != (g, f) {
        return Err(AutomorphError::WitnessMismatch);
    }
    let (g, steps) = reduce_against(g, f)?;
    let mut w = witness.clone();
    for (c, n) in steps {
        w.push(Move::ElemX(power_poly(&-&c, n)))?;
    }
    debug_assert_eq!(w.components(), (&g, f));
    Ok((g, w))
}

/// The subtraction loop of [`degree_reduce`] without a witness: returns the
/// remainder and the `(c, N)` of every step `g <- g - c f^N`.
pub fn reduce_against(g: &BiPoly, f: &BiPoly) -> Result<(BiPoly, Vec<(Scalar, u32)>), AutomorphError> {
    let df = f.degree();
    if df <= Degree::Finite(0) {
        return Err(AutomorphError::ConstantComponent);
    }
    let bound = g.degree().finite().unwrap_or(0);
    let mut g = g.clone();
    let mut steps = Vec::new();
    while g.degree() >= df {
        if steps.len() as u32 > bound {
            return Err(AutomorphError::NoTermination(bound));
        }
        let before = g.degree();
        let (c, n) = reduction_constant(&g, f)?;
        g = &g - &f.pow(n).scale(&c);
        debug_assert!(g.degree() < before);
        steps.push((c, n));
    }
    Ok((g, steps))
}

/// Builds a word with components `(first, second)` from the bare pair, by
/// running the reduction down to an affine base. Fails exactly when the pair
/// is not an automorphism.
pub fn certify_pair(first: &BiPoly, second: &BiPoly) -> Result<AutoWord, AutomorphError> {
    first.domain().check_same(second.domain())?;
    let domain = first.domain();
    let (mut a, mut b) = (first.clone(), second.clone());
    let limit = finite_degree(&a)? + finite_degree(&b)? + 2;
    let mut undo: Vec<Move> = Vec::new();
    for _ in 0..limit {
        let da = finite_degree(&a)?;
        let db = finite_degree(&b)?;
        if da == 0 || db == 0 {
            return Err(AutomorphError::ConstantComponent);
        }
        if da <= 1 && db <= 1 {
            let base = affine_from_linear_pair(&a, &b)?;
            let word = AutoWord::from_moves(domain, std::iter::once(base).chain(undo.into_iter().rev()))?;
            debug_assert_eq!(word.components(), (first, second));
            return Ok(word);
        }
        if da >= db {
            let (c, n) = reduction_constant(&a, &b)?;
            a = &a - &b.pow(n).scale(&c);
            undo.push(Move::ElemX(power_poly(&c, n)));
        } else {
            let (c, n) = reduction_constant(&b, &a)?;
            b = &b - &a.pow(n).scale(&c);
            undo.push(Move::ElemY(power_poly(&c, n)));
        }
    }
    Err(AutomorphError::NoTermination(limit))
}

fn affine_from_linear_pair(a: &BiPoly, b: &BiPoly) -> Result<Move, AutomorphError> {
    let x = BiMono { x: 1, y: 0 };
    let y = BiMono { x: 0, y: 1 };
    let one = BiMono { x: 0, y: 0 };
    Move::affine([
        a.coeff(x),
        a.coeff(y),
        b.coeff(x),
        b.coeff(y),
        a.coeff(one),
        b.coeff(one),
    ])
}

/// Chain `f_1, ..., f_{h+1}` extracted from a coordinate line, with a witness
/// for every consecutive pair.
#[derive(Debug, Clone)]
pub struct ChainSkeleton {
    /// `deg f_1 = 1 < deg f_2 < ... < deg f_{h+1}`.
    pub polys: Vec<BiPoly>,
    /// `pair_words[k]` has components `(f_{k+1}, f_{k+2})` (0-based `k`).
    pub pair_words: Vec<AutoWord>,
    /// Affine map equal to `(f_1, l)` where `l` is the linear remainder of
    /// `f_2` after reducing by powers of `f_1`.
    pub base: Move,
}

impl ChainSkeleton {
    pub fn degrees(&self) -> Vec<u32> {
        self.polys
            .iter()
            .map(|p| p.degree().finite().expect("nonzero"))
            .collect()
    }
}

/// Decomposes the coordinate line `f = 0` into a chain of automorphism pairs,
/// given a partner `g` and a witness with components `(g, f)`.
pub fn decompose_line(f: &BiPoly, g: &BiPoly, witness: &AutoWord) -> Result<ChainSkeleton, AutomorphError> {
    let df = f.degree();
    if df <= Degree::Finite(1) {
        return Err(AutomorphError::DegreeTooSmall(df));
    }
    if witness.components() != (g, f) {
        return Err(AutomorphError::WitnessMismatch);
    }
    let domain = f.domain();
    let mut polys = vec![f.clone()];
    let mut pair_words = Vec::new();
    let (mut cur_g, mut cur_f, mut w) = (g.clone(), f.clone(), witness.clone());
    loop {
        let (reduced, rw) = degree_reduce(&cur_g, &cur_f, &w)?;
        let dr = finite_degree(&reduced)?;
        if dr == 0 {
            return Err(AutomorphError::ConstantComponent);
        }
        let df = finite_degree(&cur_f)?;
        debug_assert!(df % dr == 0, "deg f_k divides deg f_k+1");
        polys.push(reduced.clone());
        pair_words.push(rw.clone());
        if dr == 1 {
            break;
        }
        w = rw.then(Move::swap(domain))?;
        cur_g = cur_f;
        cur_f = reduced;
    }
    polys.reverse();
    pair_words.reverse();

    let f1 = &polys[0];
    let mut rest = polys[1].clone();
    let mut guard = finite_degree(&rest)?;
    while finite_degree(&rest)? > 1 {
        if guard == 0 {
            return Err(AutomorphError::NoTermination(finite_degree(&polys[1])?));
        }
        let (c, n) = reduction_constant(&rest, f1)?;
        rest = &rest - &f1.pow(n).scale(&c);
        guard -= 1;
    }
    let base = affine_from_linear_pair(f1, &rest)?;
    Ok(ChainSkeleton {
        polys,
        pair_words,
        base,
    })
}
