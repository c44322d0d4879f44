//! Exact scalar arithmetic over the two coefficient domains the rest of the
//! crate needs: the rationals and prime fields.
//!
//! Integers are plain [`BigInt`]/[`BigUint`] values; they only ever show up as
//! sequence entries and as coefficients on their way into a field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient domain mismatch: {0} vs {1}")]
    DomainMismatch(CoeffDomain, CoeffDomain),
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// Greatest common divisor, with `gcd(0, 0) = 0`.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn gcd_big(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// Trial division up to the square root.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The field the coefficients of a polynomial live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffDomain {
    Rational,
    PrimeField(u64),
}

impl CoeffDomain {
    /// `PrimeField(p)` after checking that `p` is prime.
    pub fn prime_field(p: u64) -> Result<Self, NumericError> {
        if is_prime(p) {
            Ok(CoeffDomain::PrimeField(p))
        } else {
            Err(NumericError::NotPrime(p))
        }
    }

    /// 0 for ℚ.
    pub fn characteristic(self) -> u64 {
        match self {
            CoeffDomain::Rational => 0,
            CoeffDomain::PrimeField(p) => p,
        }
    }

    pub fn check_same(self, other: CoeffDomain) -> Result<(), NumericError> {
        if self == other {
            Ok(())
        } else {
            Err(NumericError::DomainMismatch(self, other))
        }
    }
}

impl fmt::Display for CoeffDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffDomain::Rational => write!(f, "Q"),
            CoeffDomain::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

/// An element of ℚ or of 𝔽_p.
///
/// Rationals are kept in lowest terms with a positive denominator (this is
/// what [`BigRational`] maintains); residues lie in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { residue: u64, modulus: u64 },
}

fn mod_reduce_big(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue below a u64 modulus")
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn zero(domain: CoeffDomain) -> Self {
        Self::from_i64(domain, 0)
    }

    pub fn one(domain: CoeffDomain) -> Self {
        Self::from_i64(domain, 1)
    }

    pub fn from_i64(domain: CoeffDomain, n: i64) -> Self {
        Self::from_bigint(domain, &BigInt::from(n))
    }

    pub fn from_bigint(domain: CoeffDomain, n: &BigInt) -> Self {
        match domain {
            CoeffDomain::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            CoeffDomain::PrimeField(p) => Scalar::Modular {
                residue: mod_reduce_big(n, p),
                modulus: p,
            },
        }
    }

    /// `num / den` in the given domain.
    pub fn from_ratio(domain: CoeffDomain, num: &BigInt, den: &BigInt) -> Result<Self, NumericError> {
        if den.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        match domain {
            CoeffDomain::Rational => Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone()))),
            CoeffDomain::PrimeField(_) => Self::from_bigint(domain, num).try_div(&Self::from_bigint(domain, den)),
        }
    }

    pub fn domain(&self) -> CoeffDomain {
        match self {
            Scalar::Rational(_) => CoeffDomain::Rational,
            Scalar::Modular { modulus, .. } => CoeffDomain::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { residue, .. } => *residue == 1,
        }
    }

    /// True when the printed form needs a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Modular { .. } => false,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, NumericError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Modular { residue: a, modulus: p }, Scalar::Modular { residue: b, modulus: q }) if p == q => {
                Ok(Scalar::Modular {
                    residue: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                })
            }
            _ => Err(NumericError::DomainMismatch(self.domain(), other.domain())),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, NumericError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, NumericError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Modular { residue: a, modulus: p }, Scalar::Modular { residue: b, modulus: q }) if p == q => {
                Ok(Scalar::Modular {
                    residue: mod_mul(*a, *b, *p),
                    modulus: *p,
                })
            }
            _ => Err(NumericError::DomainMismatch(self.domain(), other.domain())),
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, NumericError> {
        self.domain().check_same(other.domain())?;
        self.try_mul(&other.inverse()?)
    }

    pub fn inverse(&self) -> Result<Self, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            // Fermat: a^(p-2) = a^-1
            Scalar::Modular { residue, modulus } => Scalar::Modular {
                residue: mod_pow(*residue, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    fn neg_ref(&self) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Modular { residue, modulus } => Scalar::Modular {
                residue: if *residue == 0 { 0 } else { modulus - residue },
                modulus: *modulus,
            },
        }
    }

    pub fn pow(&self, exp: u64) -> Self {
        match self {
            Scalar::Rational(q) => {
                let e = i32::try_from(exp).expect("rational exponent fits i32");
                Scalar::Rational(num_traits::pow::Pow::pow(q, e))
            }
            Scalar::Modular { residue, modulus } => Scalar::Modular {
                residue: mod_pow(*residue, exp, *modulus),
                modulus: *modulus,
            },
        }
    }

    /// Integer value when the scalar is an integer rational or a residue.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(q) if q.is_integer() => Some(q.to_integer()),
            Scalar::Rational(_) => None,
            Scalar::Modular { residue, .. } => Some(BigInt::from(*residue)),
        }
    }

    /// Absolute value as printed: `|q|` for rationals, the residue for 𝔽_p.
    pub fn abs_display(&self) -> String {
        match self {
            Scalar::Rational(q) => {
                let a = q.abs();
                if a.is_integer() {
                    a.to_integer().to_string()
                } else {
                    format!("{}/{}", a.numer(), a.denom())
                }
            }
            Scalar::Modular { residue, .. } => residue.to_string(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negative() {
            write!(f, "-")?;
        }
        write!(f, "{}", self.abs_display())
    }
}

// Operator forms panic on a domain mismatch. Polynomial code checks domains
// once at its own boundary and then uses these.
impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.try_add(rhs).expect("scalar domains agree")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.try_sub(rhs).expect("scalar domains agree")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.try_mul(rhs).expect("scalar domains agree")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

/// Converts a nonnegative big integer to `u64`, if it fits.
pub fn biguint_to_u64(n: &BigUint) -> Option<u64> {
    n.to_u64()
}

/// Signed view of an unsigned big integer.
pub fn to_signed(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}
