use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::rational::Rational;

/// Coefficient ring for [`Poly`](super::Poly). Only ring operations are
/// required; nothing in the engine divides.
pub trait Coeff:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn from_i64(v: i64) -> Self;
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl Coeff for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
}

/// The prime field of order `2^61 - 1`.
///
/// A value that is nonzero here is the image of a nonzero rational, so a
/// nonzero test in this field certifies non-vanishing over the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Fp(u64);

impl Fp {
    pub const MODULUS: u64 = (1 << 61) - 1;

    pub fn new(v: u64) -> Self {
        Fp(v % Self::MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce(x: u128) -> u64 {
        let p = Self::MODULUS as u128;
        let folded = (x & p) + (x >> 61);
        let folded = (folded & p) + (folded >> 61);
        let r = folded as u64;
        if r >= Self::MODULUS {
            r - Self::MODULUS
        } else {
            r
        }
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(self) -> Option<Fp> {
        (self.0 != 0).then(|| self.pow(Self::MODULUS - 2))
    }

    pub fn from_bigint(v: &BigInt) -> Fp {
        let m = BigInt::from(Self::MODULUS);
        let r = ((v % &m) + &m) % &m;
        Fp(r.to_u64().expect("residue fits in u64"))
    }

    /// `None` when the denominator vanishes modulo the prime.
    pub fn from_rational(q: &Rational) -> Option<Fp> {
        let den = Self::from_bigint(q.denom()).inverse()?;
        Some(Self::from_bigint(q.numer()) * den)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let s = self.0 + rhs.0;
        Fp(if s >= Self::MODULUS {
            s - Self::MODULUS
        } else {
            s
        })
    }
}

impl<'a> AddAssign<&'a Fp> for Fp {
    fn add_assign(&mut self, rhs: &'a Fp) {
        *self = *self + *rhs;
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp(if self.0 == 0 {
            0
        } else {
            Self::MODULUS - self.0
        })
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        Fp(Self::reduce(self.0 as u128 * rhs.0 as u128))
    }
}

impl<'a> Mul<&'a Fp> for Fp {
    type Output = Fp;
    fn mul(self, rhs: &'a Fp) -> Fp {
        self * *rhs
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp(1)
    }
}

impl Coeff for Fp {
    fn from_i64(v: i64) -> Self {
        if v >= 0 {
            Fp::new(v as u64)
        } else {
            -Fp::new(v.unsigned_abs())
        }
    }
}
