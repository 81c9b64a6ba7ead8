//! Exact scalars in `Q(√2)`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// The number `rat + irr·√2` with rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    rat: BigRational,
    irr: BigRational,
}

impl Scalar {
    /// `rat + irr·√2`.
    pub fn new(rat: BigRational, irr: BigRational) -> Scalar {
        Scalar { rat, irr }
    }

    /// The integer `n`.
    pub fn int(n: i64) -> Scalar {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// The rational `n / d`.
    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::new(BigRational::new(BigInt::from(n), BigInt::from(d)), BigRational::zero())
    }

    /// Zero.
    pub fn zero() -> Scalar {
        Scalar::default()
    }

    /// One.
    pub fn one() -> Scalar {
        Scalar::int(1)
    }

    /// `√2`.
    pub fn sqrt2() -> Scalar {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    /// `2^e`.
    pub fn pow2(e: i32) -> Scalar {
        let p = BigRational::from_integer(BigInt::one() << e.unsigned_abs());
        let r = if e >= 0 { p } else { p.recip() };
        Scalar::new(r, BigRational::zero())
    }

    /// `√2^e`.
    pub fn sqrt2_pow(e: i32) -> Scalar {
        let half = Scalar::pow2(e.div_euclid(2));
        if e.rem_euclid(2) == 0 {
            half
        } else {
            half * Scalar::sqrt2()
        }
    }

    /// `(−1)^k`.
    pub fn sign(k: u32) -> Scalar {
        if k.is_multiple_of(2) {
            Scalar::one()
        } else {
            Scalar::int(-1)
        }
    }

    /// Rational part.
    pub fn rational(&self) -> &BigRational {
        &self.rat
    }

    /// Coefficient of `√2`.
    pub fn irrational(&self) -> &BigRational {
        &self.irr
    }

    /// Whether this is zero.
    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let norm = &self.rat * &self.rat - two * &self.irr * &self.irr;
        Some(Scalar::new(&self.rat / &norm, -(&self.irr / &norm)))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.irr.is_zero()) {
            (_, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "{}√2", self.irr),
            (false, false) => {
                let op = if self.irr.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}√2", self.rat, op, self.irr.abs())
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.rat + &o.rat, &self.irr + &o.irr)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.rat - &o.rat, &self.irr - &o.irr)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let two = BigRational::from_integer(BigInt::from(2));
        Scalar::new(&self.rat * &o.rat + two * &self.irr * &o.irr, &self.rat * &o.irr + &self.irr * &o.rat)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.rat, -self.irr)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.rat += &o.rat;
        self.irr += &o.irr;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.rat -= &o.rat;
        self.irr -= &o.irr;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(it: I) -> Scalar {
        it.fold(Scalar::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_arithmetic() {
        let r = Scalar::sqrt2();
        assert_eq!(&r * &r, Scalar::int(2));
        assert_eq!(Scalar::sqrt2_pow(-1) * Scalar::sqrt2(), Scalar::one());
        assert_eq!(Scalar::sqrt2_pow(3), Scalar::int(2) * Scalar::sqrt2());
        let x = Scalar::int(3) + Scalar::sqrt2();
        assert_eq!(&x / &x, Scalar::one());
        assert_eq!(x.to_string(), "3+1√2");
        assert_eq!(Scalar::pow2(-3), Scalar::ratio(1, 8));
    }
}
