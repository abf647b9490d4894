//! Coefficient rings driving the elimination kernel.
//!
//! The kernel is generic over a [`Ring`] so the same pivoting code serves the
//! checked fixed-width integer fast path, the arbitrary-precision fallback and
//! the prime fields used for rank passes.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Raised by the fixed-width ring when a result does not fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub type RingResult<T> = Result<T, Overflow>;

pub trait Ring: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    /// Every nonzero element is a unit.
    const IS_FIELD: bool;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_bigint(&self, x: &BigInt) -> RingResult<Self::Elem>;
    fn to_bigint(&self, x: &Self::Elem) -> BigInt;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn is_unit(&self, x: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> RingResult<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> RingResult<Self::Elem>;
    fn neg(&self, a: &Self::Elem) -> RingResult<Self::Elem>;
    /// `y - q * x`
    fn sub_mul(&self, y: &Self::Elem, q: &Self::Elem, x: &Self::Elem) -> RingResult<Self::Elem>;
    /// `a / b` when `b` divides `a`, `None` otherwise.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> RingResult<Option<Self::Elem>>;
    /// `(g, s, t)` with `s*a + t*b = g`, `g` a normalized gcd.
    fn xgcd(&self, a: &Self::Elem, b: &Self::Elem) -> RingResult<(Self::Elem, Self::Elem, Self::Elem)>;
    /// Pivot quality: smaller is better.
    fn size(&self, x: &Self::Elem) -> u64;
    fn is_negative(&self, x: &Self::Elem) -> bool;
}

/// Integers in `i64` with every operation checked.
#[derive(Debug, Clone, Copy, Default)]
pub struct SmallInt;

impl Ring for SmallInt {
    type Elem = i64;
    const IS_FIELD: bool = false;

    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn from_bigint(&self, x: &BigInt) -> RingResult<i64> {
        x.to_i64().ok_or(Overflow)
    }
    fn to_bigint(&self, x: &i64) -> BigInt {
        BigInt::from(*x)
    }
    fn is_zero(&self, x: &i64) -> bool {
        *x == 0
    }
    fn is_unit(&self, x: &i64) -> bool {
        *x == 1 || *x == -1
    }
    fn add(&self, a: &i64, b: &i64) -> RingResult<i64> {
        a.checked_add(*b).ok_or(Overflow)
    }
    fn mul(&self, a: &i64, b: &i64) -> RingResult<i64> {
        a.checked_mul(*b).ok_or(Overflow)
    }
    fn neg(&self, a: &i64) -> RingResult<i64> {
        a.checked_neg().ok_or(Overflow)
    }
    fn sub_mul(&self, y: &i64, q: &i64, x: &i64) -> RingResult<i64> {
        q.checked_mul(*x)
            .and_then(|p| y.checked_sub(p))
            .ok_or(Overflow)
    }
    fn div_exact(&self, a: &i64, b: &i64) -> RingResult<Option<i64>> {
        if *b == 0 {
            return Ok(None);
        }
        if a.checked_rem(*b).ok_or(Overflow)? != 0 {
            return Ok(None);
        }
        a.checked_div(*b).map(Some).ok_or(Overflow)
    }
    fn xgcd(&self, a: &i64, b: &i64) -> RingResult<(i64, i64, i64)> {
        let e = (*a as i128).extended_gcd(&(*b as i128));
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g < 0 {
            g = -g;
            s = -s;
            t = -t;
        }
        let fit = |v: i128| i64::try_from(v).map_err(|_| Overflow);
        Ok((fit(g)?, fit(s)?, fit(t)?))
    }
    fn size(&self, x: &i64) -> u64 {
        x.unsigned_abs()
    }
    fn is_negative(&self, x: &i64) -> bool {
        *x < 0
    }
}

/// Arbitrary-precision integers; never overflows.
#[derive(Debug, Clone, Copy, Default)]
pub struct BigIntRing;

impl Ring for BigIntRing {
    type Elem = BigInt;
    const IS_FIELD: bool = false;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_bigint(&self, x: &BigInt) -> RingResult<BigInt> {
        Ok(x.clone())
    }
    fn to_bigint(&self, x: &BigInt) -> BigInt {
        x.clone()
    }
    fn is_zero(&self, x: &BigInt) -> bool {
        x.is_zero()
    }
    fn is_unit(&self, x: &BigInt) -> bool {
        x.magnitude().is_one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> RingResult<BigInt> {
        Ok(a + b)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> RingResult<BigInt> {
        Ok(a * b)
    }
    fn neg(&self, a: &BigInt) -> RingResult<BigInt> {
        Ok(-a)
    }
    fn sub_mul(&self, y: &BigInt, q: &BigInt, x: &BigInt) -> RingResult<BigInt> {
        Ok(y - q * x)
    }
    fn div_exact(&self, a: &BigInt, b: &BigInt) -> RingResult<Option<BigInt>> {
        if b.is_zero() {
            return Ok(None);
        }
        let (q, r) = a.div_rem(b);
        Ok(if r.is_zero() { Some(q) } else { None })
    }
    fn xgcd(&self, a: &BigInt, b: &BigInt) -> RingResult<(BigInt, BigInt, BigInt)> {
        let e = a.extended_gcd(b);
        if e.gcd.is_negative() {
            Ok((-e.gcd, -e.x, -e.y))
        } else {
            Ok((e.gcd, e.x, e.y))
        }
    }
    fn size(&self, x: &BigInt) -> u64 {
        x.magnitude().to_u64().unwrap_or(u64::MAX)
    }
    fn is_negative(&self, x: &BigInt) -> bool {
        x.is_negative()
    }
}

/// The prime field with `p` elements, `p < 2^32`.
#[derive(Debug, Clone, Copy)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Returns `None` unless `p` is a prime below `2^32`.
    pub fn new(p: u64) -> Option<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return None;
        }
        Some(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn inv(&self, a: u64) -> u64 {
        let mut result = 1u64;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        result
    }
}

impl Ring for PrimeField {
    type Elem = u64;
    const IS_FIELD: bool = true;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_bigint(&self, x: &BigInt) -> RingResult<u64> {
        let r = x.mod_floor(&BigInt::from(self.p));
        Ok(r.to_u64().expect("residue fits"))
    }
    fn to_bigint(&self, x: &u64) -> BigInt {
        BigInt::from(*x)
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn is_unit(&self, x: &u64) -> bool {
        *x != 0
    }
    fn add(&self, a: &u64, b: &u64) -> RingResult<u64> {
        Ok((a + b) % self.p)
    }
    fn mul(&self, a: &u64, b: &u64) -> RingResult<u64> {
        Ok(a * b % self.p)
    }
    fn neg(&self, a: &u64) -> RingResult<u64> {
        Ok((self.p - a) % self.p)
    }
    fn sub_mul(&self, y: &u64, q: &u64, x: &u64) -> RingResult<u64> {
        Ok((y + self.p - q * x % self.p) % self.p)
    }
    fn div_exact(&self, a: &u64, b: &u64) -> RingResult<Option<u64>> {
        if *b == 0 {
            return Ok(None);
        }
        Ok(Some(a * self.inv(*b) % self.p))
    }
    fn xgcd(&self, a: &u64, b: &u64) -> RingResult<(u64, u64, u64)> {
        if *a != 0 {
            Ok((1, self.inv(*a), 0))
        } else if *b != 0 {
            Ok((1, 0, self.inv(*b)))
        } else {
            Ok((0, 0, 0))
        }
    }
    fn size(&self, _x: &u64) -> u64 {
        1
    }
    fn is_negative(&self, _x: &u64) -> bool {
        false
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_int_detects_overflow() {
        let r = SmallInt;
        assert_eq!(r.mul(&i64::MAX, &2), Err(Overflow));
        assert_eq!(r.sub_mul(&i64::MIN, &1, &1), Err(Overflow));
        assert_eq!(r.div_exact(&i64::MIN, &-1), Err(Overflow));
        assert_eq!(r.div_exact(&7, &2), Ok(None));
        assert_eq!(r.div_exact(&-6, &3), Ok(Some(-2)));
    }

    #[test]
    fn xgcd_is_bezout_with_positive_gcd() {
        for (a, b) in [(12i64, -18), (-7, 5), (0, -4), (9, 0)] {
            let (g, s, t) = SmallInt.xgcd(&a, &b).unwrap();
            assert!(g >= 0);
            assert_eq!(s * a + t * b, g);
            let (gb, sb, tb) = BigIntRing.xgcd(&a.into(), &b.into()).unwrap();
            assert_eq!(gb, BigInt::from(g));
            assert_eq!(sb * a + tb * b, gb);
        }
    }

    #[test]
    fn prime_field_arithmetic() {
        assert!(PrimeField::new(4).is_none());
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.from_bigint(&BigInt::from(-3)).unwrap(), 2);
        assert_eq!(f.div_exact(&1, &2).unwrap(), Some(3));
        assert_eq!(f.sub_mul(&1, &2, &3).unwrap(), 0);
        assert_eq!(f.neg(&0).unwrap(), 0);
    }
}
