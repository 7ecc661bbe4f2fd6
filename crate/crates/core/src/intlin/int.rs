//! Arbitrary-precision integers with an inline machine-word fast path.
//!
//! Values that fit in an `i64` are stored inline; anything else spills to a
//! boxed `BigInt`. Every arithmetic operation checks for overflow and promotes,
//! and every result that fits is demoted again, so the representation of a
//! given value is unique and derived `Eq`/`Hash` are sound.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_abs() {
                Some(a) => Int::Small(a),
                None => Int::from_big(BigInt::from(*v).abs()),
            },
            Int::Big(b) => Int::from_big(b.abs()),
        }
    }

    /// Floor division.
    pub fn div_floor(&self, rhs: &Int) -> Int {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if !(*a == i64::MIN && *b == -1) {
                return Int::Small(Integer::div_floor(a, b));
            }
        }
        Int::from_big(Integer::div_floor(&self.to_big(), &rhs.to_big()))
    }

    /// Remainder with the sign of `rhs` (so `0 <= r < rhs` for positive `rhs`).
    pub fn mod_floor(&self, rhs: &Int) -> Int {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if !(*a == i64::MIN && *b == -1) {
                return Int::Small(Integer::mod_floor(a, b));
            }
        }
        Int::from_big(Integer::mod_floor(&self.to_big(), &rhs.to_big()))
    }

    /// Exact quotient; panics in debug builds when `rhs` does not divide.
    pub fn div_exact(&self, rhs: &Int) -> Int {
        debug_assert!(self.mod_floor(rhs).is_zero(), "inexact division");
        self.div_floor(rhs)
    }

    pub fn divides(&self, rhs: &Int) -> bool {
        if self.is_zero() {
            return rhs.is_zero();
        }
        rhs.mod_floor(self).is_zero()
    }

    pub fn gcd(&self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            let g = (*a as i128).gcd(&(*b as i128));
            if let Ok(v) = i64::try_from(g) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_big().gcd(&rhs.to_big()))
    }

    pub fn lcm(&self, rhs: &Int) -> Int {
        if self.is_zero() || rhs.is_zero() {
            return Int::ZERO;
        }
        (self * &rhs.div_exact(&self.gcd(rhs))).abs()
    }

    /// Returns `(g, s, t)` with `s*self + t*rhs = g = gcd(self, rhs) >= 0`.
    pub fn extended_gcd(&self, rhs: &Int) -> (Int, Int, Int) {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            let e = (*a as i128).extended_gcd(&(*b as i128));
            let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
            if g < 0 {
                g = -g;
                s = -s;
                t = -t;
            }
            if let (Ok(g), Ok(s), Ok(t)) = (i64::try_from(g), i64::try_from(s), i64::try_from(t)) {
                return (Int::Small(g), Int::Small(s), Int::Small(t));
            }
        }
        let e = self.to_big().extended_gcd(&rhs.to_big());
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        (Int::from_big(g), Int::from_big(s), Int::from_big(t))
    }

    /// `self += a * b`
    #[inline]
    pub fn add_mul(&mut self, a: &Int, b: &Int) {
        if let (Int::Small(x), Int::Small(y), Int::Small(z)) = (&*self, a, b) {
            if let Some(p) = y.checked_mul(*z) {
                if let Some(s) = x.checked_add(p) {
                    *self = Int::Small(s);
                    return;
                }
            }
        }
        *self = Int::from_big(self.to_big() + a.to_big() * b.to_big());
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Self {
        match i64::try_from(v) {
            Ok(x) => Int::Small(x),
            Err(_) => Int::from_big(BigInt::from(v)),
        }
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_big(b)
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! checked_binop {
    ($trait:ident, $method:ident, $checked:ident, $assign_trait:ident, $assign:ident) => {
        impl $trait<&Int> for &Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: &Int) -> Int {
                if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
                    if let Some(v) = a.$checked(*b) {
                        return Int::Small(v);
                    }
                }
                Int::from_big(self.to_big().$method(rhs.to_big()))
            }
        }
        impl $trait<Int> for Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: Int) -> Int {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Int> for Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: &Int) -> Int {
                (&self).$method(rhs)
            }
        }
        impl $trait<Int> for &Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: Int) -> Int {
                self.$method(&rhs)
            }
        }
        impl $assign_trait<&Int> for Int {
            #[inline]
            fn $assign(&mut self, rhs: &Int) {
                *self = (&*self).$method(rhs);
            }
        }
        impl $assign_trait<Int> for Int {
            #[inline]
            fn $assign(&mut self, rhs: Int) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

checked_binop!(Add, add, checked_add, AddAssign, add_assign);
checked_binop!(Sub, sub, checked_sub, SubAssign, sub_assign);
checked_binop!(Mul, mul, checked_mul, MulAssign, mul_assign);

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

impl std::iter::Sum for Int {
    fn sum<I: Iterator<Item = Int>>(iter: I) -> Int {
        iter.fold(Int::ZERO, |a, b| a + b)
    }
}

impl std::iter::Product for Int {
    fn product<I: Iterator<Item = Int>>(iter: I) -> Int {
        iter.fold(Int::ONE, |a, b| a * b)
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let a = Int::from(i64::MAX);
        let b = &a + &Int::ONE;
        assert!(matches!(b, Int::Big(_)));
        let c = &b - &Int::ONE;
        assert_eq!(c, a);
        assert!(matches!(c, Int::Small(_)));
        let sq = &a * &a;
        assert_eq!(sq.div_floor(&a), a);
    }

    #[test]
    fn floor_semantics() {
        let m7 = Int::from(-7);
        let three = Int::from(3);
        assert_eq!(m7.div_floor(&three), Int::from(-3));
        assert_eq!(m7.mod_floor(&three), Int::from(2));
    }

    #[test]
    fn extended_gcd_identity() {
        for (a, b) in [(12i64, 18i64), (-4, 6), (0, 5), (7, 0), (i64::MIN, 3)] {
            let (a, b) = (Int::from(a), Int::from(b));
            let (g, s, t) = a.extended_gcd(&b);
            assert_eq!(&(&s * &a) + &(&t * &b), g);
            assert!(!g.is_negative());
        }
    }

    #[test]
    fn min_value_edge_cases() {
        let m = Int::from(i64::MIN);
        assert_eq!((-&m).to_big(), -BigInt::from(i64::MIN));
        assert_eq!(m.abs().to_big(), BigInt::from(i64::MIN).abs());
        assert_eq!(m.div_floor(&Int::from(-1)).to_big(), -BigInt::from(i64::MIN));
    }
}
