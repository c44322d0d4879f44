//! Sparse exact polynomials in `t` ([`UniPoly`]) and in `x, y` ([`BiPoly`]).
//!
//! Both are instances of [`Poly`], a map from monomials to nonzero scalars.
//! Terms with a zero coefficient are never stored, so structural equality is
//! polynomial equality.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::numeric::{CoeffDomain, NumericError, Scalar};

pub use parse::{parse_bipoly, parse_unipoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable '{name}' at position {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
}

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`,
/// which orders below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Exponent vector of a single term.
pub trait Monomial: Copy + Ord + Hash + fmt::Debug + Send + Sync {
    const ONE: Self;
    fn mul(self, other: Self) -> Self;
    fn total_degree(self) -> u32;
    /// The monomial for a variable name, if this ring has that variable.
    fn variable(name: &str) -> Option<Self>;
    /// Printing order: the term printed first compares `Less`.
    fn print_cmp(&self, other: &Self) -> Ordering;
    fn write_power_product(self, f: &mut fmt::Formatter<'_>) -> fmt::Result;
}

/// Power of `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UniMono(pub u32);

/// `x^x * y^y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BiMono {
    pub x: u32,
    pub y: u32,
}

impl Monomial for UniMono {
    const ONE: Self = UniMono(0);

    fn mul(self, other: Self) -> Self {
        UniMono(self.0 + other.0)
    }

    fn total_degree(self) -> u32 {
        self.0
    }

    fn variable(name: &str) -> Option<Self> {
        (name == "t").then_some(UniMono(1))
    }

    fn print_cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }

    fn write_power_product(self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_power(f, "t", self.0)
    }
}

impl Monomial for BiMono {
    const ONE: Self = BiMono { x: 0, y: 0 };

    fn mul(self, other: Self) -> Self {
        BiMono {
            x: self.x + other.x,
            y: self.y + other.y,
        }
    }

    fn total_degree(self) -> u32 {
        self.x + self.y
    }

    fn variable(name: &str) -> Option<Self> {
        match name {
            "x" => Some(BiMono { x: 1, y: 0 }),
            "y" => Some(BiMono { x: 0, y: 1 }),
            _ => None,
        }
    }

    // graded lex, x > y
    fn print_cmp(&self, other: &Self) -> Ordering {
        other
            .total_degree()
            .cmp(&self.total_degree())
            .then(other.x.cmp(&self.x))
    }

    fn write_power_product(self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x, self.y) {
            (0, b) => write_power(f, "y", b),
            (a, 0) => write_power(f, "x", a),
            (a, b) => {
                write_power(f, "x", a)?;
                write!(f, "*")?;
                write_power(f, "y", b)
            }
        }
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, var: &str, e: u32) -> fmt::Result {
    match e {
        1 => write!(f, "{var}"),
        e => write!(f, "{var}^{e}"),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<M: Monomial> {
    domain: CoeffDomain,
    terms: BTreeMap<M, Scalar>,
}

pub type UniPoly = Poly<UniMono>;
pub type BiPoly = Poly<BiMono>;

impl<M: Monomial> fmt::Debug for Poly<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.domain, self)
    }
}

impl<M: Monomial> Poly<M> {
    pub fn zero(domain: CoeffDomain) -> Self {
        Poly {
            domain,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(domain: CoeffDomain) -> Self {
        Self::constant(Scalar::one(domain))
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, M::ONE)
    }

    pub fn from_i64(domain: CoeffDomain, c: i64) -> Self {
        Self::constant(Scalar::from_i64(domain, c))
    }

    pub fn term(c: Scalar, m: M) -> Self {
        let mut p = Self::zero(c.domain());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms(domain: CoeffDomain, terms: impl IntoIterator<Item = (M, Scalar)>) -> Result<Self, PolyError> {
        let mut p = Self::zero(domain);
        for (m, c) in terms {
            domain.check_same(c.domain())?;
            p.add_term(m, &c);
        }
        Ok(p)
    }

    pub fn domain(&self) -> CoeffDomain {
        self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&M, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: M) -> Scalar {
        self.terms.get(&m).cloned().unwrap_or_else(|| Scalar::zero(self.domain))
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Constant value, if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.degree() {
            Degree::NegInfinity => Some(Scalar::zero(self.domain)),
            Degree::Finite(0) => Some(self.coeff(M::ONE)),
            _ => None,
        }
    }

    fn add_term(&mut self, m: M, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            let prod = c * d;
            self.add_term(*m, &prod);
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.domain.check_same(other.domain)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.domain.check_same(other.domain)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.domain.check_same(other.domain)?;
        let mut out = Self::zero(self.domain);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(*mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.domain);
        out.add_scaled(c, self);
        out
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut acc = Self::one(self.domain);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Homogeneous part of top total degree.
    pub fn leading_form(&self) -> Result<Self, PolyError> {
        let top = self.degree().finite().ok_or(PolyError::ZeroPolynomial)?;
        Ok(Poly {
            domain: self.domain,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == top)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        })
    }

    /// Terms in printing order.
    pub fn sorted_terms(&self) -> Vec<(M, Scalar)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by(|a, b| a.0.print_cmp(&b.0));
        v
    }
}

impl<M: Monomial> fmt::Display for Poly<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let magnitude = c.abs_display();
            if *m == M::ONE {
                write!(f, "{magnitude}")?;
            } else {
                if magnitude != "1" {
                    write!(f, "{magnitude}*")?;
                }
                m.write_power_product(f)?;
            }
        }
        Ok(())
    }
}

impl<M: Monomial> Add for &Poly<M> {
    type Output = Poly<M>;
    fn add(self, rhs: &Poly<M>) -> Poly<M> {
        self.checked_add(rhs).expect("polynomial domains agree")
    }
}

impl<M: Monomial> Sub for &Poly<M> {
    type Output = Poly<M>;
    fn sub(self, rhs: &Poly<M>) -> Poly<M> {
        self.checked_sub(rhs).expect("polynomial domains agree")
    }
}

impl<M: Monomial> Mul for &Poly<M> {
    type Output = Poly<M>;
    fn mul(self, rhs: &Poly<M>) -> Poly<M> {
        self.checked_mul(rhs).expect("polynomial domains agree")
    }
}

impl<M: Monomial> Neg for &Poly<M> {
    type Output = Poly<M>;
    fn neg(self) -> Poly<M> {
        Poly {
            domain: self.domain,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl UniPoly {
    /// The variable `t`.
    pub fn t(domain: CoeffDomain) -> Self {
        Self::term(Scalar::one(domain), UniMono(1))
    }

    /// `c * t^e`.
    pub fn monomial(c: Scalar, e: u32) -> Self {
        Self::term(c, UniMono(e))
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.domain);
        for (m, c) in &self.terms {
            acc = &acc + &(c * &at.pow(m.0 as u64));
        }
        acc
    }

    /// `self(arg)` for any target that supports ring operations; used to push
    /// one-variable move polynomials through points and polynomial pairs.
    pub fn eval_in<R: RingElement>(&self, arg: &R) -> R {
        let mut acc = R::constant(Scalar::zero(self.domain), arg);
        let mut power = R::constant(Scalar::one(self.domain), arg);
        let mut e = 0u32;
        for (m, c) in &self.terms {
            while e < m.0 {
                power = power.mul(arg);
                e += 1;
            }
            acc = acc.add(&power.scale(c));
        }
        acc
    }
}

impl BiPoly {
    pub fn x(domain: CoeffDomain) -> Self {
        Self::term(Scalar::one(domain), BiMono { x: 1, y: 0 })
    }

    pub fn y(domain: CoeffDomain) -> Self {
        Self::term(Scalar::one(domain), BiMono { x: 0, y: 1 })
    }

    /// `c * x^a * y^b`.
    pub fn monomial(c: Scalar, a: u32, b: u32) -> Self {
        Self::term(c, BiMono { x: a, y: b })
    }

    /// `h(x(t), y(t))`.
    pub fn substitute(&self, xt: &UniPoly, yt: &UniPoly) -> Result<UniPoly, PolyError> {
        Substitution::new(xt, yt)?.apply(self)
    }

    pub fn eval_point(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.domain);
        for (m, c) in &self.terms {
            acc = &acc + &(&(c * &x.pow(m.x as u64)) * &y.pow(m.y as u64));
        }
        acc
    }

    pub fn partial_x(&self) -> Self {
        let mut out = Self::zero(self.domain);
        for (m, c) in &self.terms {
            if m.x > 0 {
                let k = Scalar::from_i64(self.domain, m.x as i64);
                out.add_term(BiMono { x: m.x - 1, y: m.y }, &(c * &k));
            }
        }
        out
    }

    pub fn partial_y(&self) -> Self {
        let mut out = Self::zero(self.domain);
        for (m, c) in &self.terms {
            if m.y > 0 {
                let k = Scalar::from_i64(self.domain, m.y as i64);
                out.add_term(BiMono { x: m.x, y: m.y - 1 }, &(c * &k));
            }
        }
        out
    }
}

/// Substitution `(x, y) -> (x(t), y(t))` with cached powers, for evaluating
/// many polynomials on the same parametrization.
#[derive(Debug, Clone)]
pub struct Substitution {
    xt: UniPoly,
    yt: UniPoly,
    xpow: Vec<UniPoly>,
    ypow: Vec<UniPoly>,
}

impl Substitution {
    pub fn new(xt: &UniPoly, yt: &UniPoly) -> Result<Self, PolyError> {
        xt.domain.check_same(yt.domain)?;
        let one = UniPoly::one(xt.domain);
        Ok(Substitution {
            xt: xt.clone(),
            yt: yt.clone(),
            xpow: vec![one.clone()],
            ypow: vec![one],
        })
    }

    pub fn domain(&self) -> CoeffDomain {
        self.xt.domain
    }

    fn grow(pows: &mut Vec<UniPoly>, base: &UniPoly, e: u32) {
        while pows.len() <= e as usize {
            let next = pows.last().expect("power 0 present") * base;
            pows.push(next);
        }
    }

    pub fn x_power(&mut self, e: u32) -> &UniPoly {
        Self::grow(&mut self.xpow, &self.xt, e);
        &self.xpow[e as usize]
    }

    pub fn y_power(&mut self, e: u32) -> &UniPoly {
        Self::grow(&mut self.ypow, &self.yt, e);
        &self.ypow[e as usize]
    }

    /// Image of a single monomial `x^a y^b`.
    pub fn monomial_image(&mut self, a: u32, b: u32) -> UniPoly {
        let xa = self.x_power(a).clone();
        &xa * self.y_power(b)
    }

    /// Horner in `x` over the distinct `x`-exponents of `h`, with each
    /// coefficient a polynomial in `y` evaluated from cached powers.
    pub fn apply(&mut self, h: &BiPoly) -> Result<UniPoly, PolyError> {
        self.domain().check_same(h.domain)?;
        let domain = self.domain();
        let mut by_x: BTreeMap<u32, UniPoly> = BTreeMap::new();
        for (m, c) in &h.terms {
            let yb = self.y_power(m.y).clone();
            by_x.entry(m.x)
                .or_insert_with(|| UniPoly::zero(domain))
                .add_scaled(c, &yb);
        }
        let mut acc = UniPoly::zero(domain);
        let mut prev: Option<u32> = None;
        for (&a, coeff) in by_x.iter().rev() {
            if let Some(p) = prev {
                acc = &acc * self.x_power(p - a);
            }
            acc = &acc + coeff;
            prev = Some(a);
        }
        if let Some(p) = prev {
            if p > 0 {
                acc = &acc * self.x_power(p);
            }
        }
        Ok(acc)
    }
}

/// Minimal ring interface shared by scalars, univariate and bivariate
/// polynomials, so automorphism moves can act on any of them.
pub trait RingElement: Clone {
    /// Constant `c` in the same ring as `like`.
    fn constant(c: Scalar, like: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Scalar) -> Self;
    fn element_domain(&self) -> CoeffDomain;
}

impl RingElement for Scalar {
    fn constant(c: Scalar, _like: &Self) -> Self {
        c
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Scalar) -> Self {
        self * c
    }
    fn element_domain(&self) -> CoeffDomain {
        self.domain()
    }
}

impl<M: Monomial> RingElement for Poly<M> {
    fn constant(c: Scalar, _like: &Self) -> Self {
        Poly::constant(c)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Scalar) -> Self {
        Poly::scale(self, c)
    }
    fn element_domain(&self) -> CoeffDomain {
        self.domain
    }
}
