//! Exact scalar fields: the rationals and prime fields `F_p`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

/// Field operations supplied by a context value.
///
/// Elements are plain data; the context carries whatever the arithmetic
/// needs (the modulus for `F_p`). Elements are kept canonical, so `==` on
/// elements is field equality.
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, v: i128) -> Self::Elem;
    /// `num / den`; errors when `den` vanishes in the field.
    fn from_ratio(&self, num: i128, den: i128) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Text form: an integer, or `"a/b"` for a non-integral rational.
    fn format(&self, a: &Self::Elem) -> String;
    /// Short label, e.g. `Q` or `F_7`.
    fn label(&self) -> String;
}

/// Prime field `F_p` with `2 <= p <= 2^31 - 1`; elements live in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// Deterministic primality by trial division (enough for `p < 2^31`).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    /// Inverse of a nonzero reduced element by Fermat's little theorem.
    pub(crate) fn inv_raw(&self, a: u64) -> u64 {
        debug_assert!(a != 0 && a < self.p);
        let (mut base, mut exp, mut acc) = (a, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_int(&self, v: i128) -> u64 {
        self.reduce(v)
    }
    fn from_ratio(&self, num: i128, den: i128) -> Result<u64> {
        let d = self.reduce(den);
        if d == 0 {
            return Err(Error::Parse(format!(
                "denominator {den} vanishes modulo {}",
                self.p
            )));
        }
        Ok(self.reduce(num) * self.inv_raw(d) % self.p)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.inv_raw(*a))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn label(&self) -> String {
        format!("F_{}", self.p)
    }
}

/// The rational numbers, as arbitrary-precision fractions in lowest terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, v: i128) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(&self, num: i128, den: i128) -> Result<BigRational> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            // BigRational keeps the denominator positive.
            debug_assert!(a.denom().is_positive());
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn label(&self) -> String {
        "Q".into()
    }
}
