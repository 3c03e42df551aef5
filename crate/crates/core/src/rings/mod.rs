//! Exact coefficient rings: arbitrary-precision rationals, the quadratic
//! tower Q(alpha, beta, delta), prime fields, and homomorphisms between them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub(crate) mod fp;
mod tower;

pub use fp::{
    embed_tower, find_good_prime, find_good_prime_capped, is_prime_u64, sqrt_mod_p, tower_embeds,
    PrimeField, PrimeFieldElement, RingHom, DEFAULT_PRIME_SEARCH_CAP,
};
pub use tower::{TowerElement, TowerField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a quadratic residue mod {1}")]
    NonResidue(u64, u64),
    #[error("no tower embedding mod {p}: {reason}")]
    NoEmbedding { p: u64, reason: String },
    #[error("no suitable prime found in [{start}, {cap}]")]
    PrimeNotFound { start: u64, cap: u64 },
    #[error("denominator of {0} vanishes mod {1}")]
    DenominatorVanishes(String, u64),
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u64),
    #[error("cannot parse ring element from {0:?}")]
    Parse(String),
}

/// Commutative ring presented as a context object; elements carry no
/// behaviour of their own so a single generic implementation of polynomial
/// and matrix arithmetic serves every coefficient ring.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Rendering used in reports and error messages.
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    fn sum<I: IntoIterator<Item = Self::Elem>>(&self, it: I) -> Self::Elem {
        it.into_iter().fold(self.zero(), |a, b| self.add(&a, &b))
    }
}

pub trait Field: Ring {
    /// Multiplicative inverse; zero input is an error.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, RingError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, RingError> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

/// The field of arbitrary-precision rationals. `BigRational` keeps values in
/// lowest terms with a positive denominator, so equality is structural.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        rational_to_string(a)
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Result<BigRational, RingError> {
        if a.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(a.recip())
    }
}

/// Canonical "num/den" encoding, always with an explicit denominator.
pub fn rational_to_string(a: &BigRational) -> String {
    format!("{}/{}", a.numer(), a.denom())
}

/// Accepts "num/den" or a bare integer; the denominator must be positive
/// after normalization (BigRational reduces automatically).
pub fn rational_from_str(s: &str) -> Result<BigRational, RingError> {
    let parse_int =
        |t: &str| t.trim().parse::<BigInt>().map_err(|_| RingError::Parse(s.to_string()));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (parse_int(n)?, parse_int(d)?),
        None => (parse_int(s)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(RingError::Parse(s.to_string()));
    }
    Ok(BigRational::new(num, den))
}

/// Rational from an integer pair, mostly for tests and fixture data.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// True if `a` is an integer (denominator one).
pub fn is_integer(a: &BigRational) -> bool {
    a.denom().is_one()
}

/// Absolute-value helper used by pivot heuristics.
pub fn rational_abs(a: &BigRational) -> BigRational {
    a.abs()
}
