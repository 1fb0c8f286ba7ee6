//! Bounded-precision p-adic numbers. A value is `unit * p^valuation` with
//! the unit known modulo p^precision. Squareness tests certify their
//! answer at the stored precision or refuse.

use crate::zpoly::{modinv, powmod_big, split_valuation};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub const DEFAULT_PRECISION: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    /// Unit part reduced mod p^precision; zero only for an approximate zero.
    unit: BigInt,
    valuation: i64,
    precision: u32,
}

impl PadicNumber {
    pub fn from_rational(p: u64, x: &BigRational, precision: u32) -> Self {
        assert!(precision >= 1);
        if x.is_zero() {
            return PadicNumber { p, unit: BigInt::zero(), valuation: 0, precision };
        }
        let (v, num, den) = split_valuation(x, p);
        let modulus = BigInt::from(p).pow(precision);
        let inv = modinv(&den.mod_floor(&modulus), &modulus).expect("denominator unit");
        let unit = (num.mod_floor(&modulus) * inv).mod_floor(&modulus);
        PadicNumber { p, unit, valuation: v, precision }
    }

    pub fn from_integer(p: u64, n: &BigInt, precision: u32) -> Self {
        Self::from_rational(p, &BigRational::from(n.clone()), precision)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn valuation(&self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::Degenerate("valuation of approximate zero".into()));
        }
        Ok(self.valuation)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn unit_mod(&self, k: u32) -> BigInt {
        self.unit.mod_floor(&BigInt::from(self.p).pow(k.min(self.precision)))
    }

    /// Certified square test. Needs the unit known mod p (odd p) or mod 8
    /// (p = 2); raises `InsufficientPrecision` otherwise.
    pub fn is_square(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Degenerate("square test of approximate zero".into()));
        }
        if self.valuation.is_odd() {
            return Ok(false);
        }
        if self.p == 2 {
            if self.precision < 3 {
                return Err(Error::InsufficientPrecision(
                    "need the unit mod 8 to decide squares in Q_2".into(),
                ));
            }
            Ok(self.unit_mod(3).is_one())
        } else {
            let pb = BigInt::from(self.p);
            let u = self.unit.mod_floor(&pb);
            Ok(powmod_big(&u, (self.p - 1) / 2, &pb).is_one())
        }
    }
}

impl std::fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "O({}^{})", self.p, self.precision);
        }
        write!(
            f,
            "{} * {}^{} + O({}^{})",
            self.unit,
            self.p,
            self.valuation,
            self.p,
            self.valuation + self.precision as i64
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn valuation_and_unit() {
        let x = PadicNumber::from_rational(5, &q(50, 3), DEFAULT_PRECISION);
        assert_eq!(x.valuation().unwrap(), 2);
        let y = PadicNumber::from_rational(5, &q(3, 25), DEFAULT_PRECISION);
        assert_eq!(y.valuation().unwrap(), -2);
    }

    #[test]
    fn square_tests() {
        assert!(PadicNumber::from_rational(2, &q(17, 1), 3).is_square().unwrap());
        assert!(!PadicNumber::from_rational(2, &q(3, 1), 3).is_square().unwrap());
        assert!(!PadicNumber::from_rational(5, &q(5, 1), 2).is_square().unwrap());
        assert!(PadicNumber::from_rational(5, &q(4, 9), 2).is_square().unwrap());
        assert!(PadicNumber::from_rational(2, &q(17, 1), 2).is_square().is_err());
    }

    #[test]
    fn squares_of_randoms_are_squares() {
        for p in [2u64, 3, 5, 7] {
            for n in [2i64, 3, 10, -15, 48, 121] {
                let x = q(n * n, 1);
                assert!(
                    PadicNumber::from_rational(p, &x, DEFAULT_PRECISION).is_square().unwrap(),
                    "p={p} n={n}"
                );
            }
        }
    }
}
