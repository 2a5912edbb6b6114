use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Which exact field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExactField {
    Rationals,
    PrimeField(u64),
}

impl ExactField {
    pub fn characteristic(&self) -> u64 {
        match self {
            ExactField::Rationals => 0,
            ExactField::PrimeField(p) => *p,
        }
    }

    /// True iff the integer `k` is a unit.
    pub fn is_unit(&self, k: u64) -> bool {
        match self {
            ExactField::Rationals => k != 0,
            ExactField::PrimeField(p) => k % p != 0,
        }
    }

    /// The smallest `k <= n` that is not a unit, if any.
    pub fn first_non_unit_up_to(&self, n: u64) -> Option<u64> {
        (1..=n).find(|&k| !self.is_unit(k))
    }
}

impl fmt::Display for ExactField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactField::Rationals => write!(f, "Q"),
            ExactField::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Exact scalars. Implemented by `BigRational` and by `Fp<P>`.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + Send
    + Sync
    + 'static
{
    fn field() -> ExactField;

    fn inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self;

    /// `num / den`, or `None` when `den` vanishes in the field.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self>;

    /// Numerator and positive denominator; residues in `[0, p)` for prime fields.
    fn to_ratio(&self) -> (BigInt, BigInt);

    fn characteristic() -> u64 {
        Self::field().characteristic()
    }

    fn pow_i64(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &b;
            }
            let sq = b.clone() * b.clone();
            b = sq;
            e >>= 1;
        }
        Some(acc)
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

impl Scalar for BigRational {
    fn field() -> ExactField {
        ExactField::Rationals
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }

    fn to_ratio(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }
}

/// Residues modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: u64) -> Self {
        debug_assert!(is_prime(P), "modulus {P} is not prime");
        Fp(v % P)
    }

    pub fn value(&self) -> u64 {
        self.0
    }

    fn reduce_bigint(n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(P)).to_u64().unwrap_or(0)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp(((self.0 as u128 + o.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp(((self.0 as u128 + P as u128 - o.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<'a, const P: u64> AddAssign<&'a Fp<P>> for Fp<P> {
    fn add_assign(&mut self, o: &'a Fp<P>) {
        *self = *self + *o;
    }
}

impl<'a, const P: u64> SubAssign<&'a Fp<P>> for Fp<P> {
    fn sub_assign(&mut self, o: &'a Fp<P>) {
        *self = *self - *o;
    }
}

impl<'a, const P: u64> MulAssign<&'a Fp<P>> for Fp<P> {
    fn mul_assign(&mut self, o: &'a Fp<P>) {
        *self = *self * *o;
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn field() -> ExactField {
        ExactField::PrimeField(P)
    }

    /// Fermat inverse `a^(p-2)`.
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        self.pow_i64((P - 2) as i64)
    }

    fn from_i64(n: i64) -> Self {
        Fp((n as i128).rem_euclid(P as i128) as u64)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        let d = Fp::<P>(Self::reduce_bigint(den));
        let n = Fp::<P>(Self::reduce_bigint(num));
        d.inv().map(|i| n * i)
    }

    fn to_ratio(&self) -> (BigInt, BigInt) {
        (BigInt::from(self.0), BigInt::one())
    }
}

/// Parse a decimal rational `a` or `a/b` into a scalar.
pub fn scalar_from_str<F: Scalar>(s: &str) -> Option<F> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    F::from_ratio(&n, &d)
}
