//! Short Weierstrass curves y^2 = x^3 + Ax + B and their invariant pairs.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EllipticCurveAB {
    pub a: BigInt,
    pub b: BigInt,
}

impl EllipticCurveAB {
    pub fn new(a: BigInt, b: BigInt) -> Result<Self> {
        let e = EllipticCurveAB { a, b };
        if e.cubic_disc().is_zero() {
            return Err(Error::Degenerate("4A^3 + 27B^2 = 0".into()));
        }
        Ok(e)
    }

    pub fn from_i64(a: i64, b: i64) -> Result<Self> {
        Self::new(BigInt::from(a), BigInt::from(b))
    }

    /// 4A^3 + 27B^2 (zero exactly when the cubic has a repeated root).
    pub fn cubic_disc(&self) -> BigInt {
        BigInt::from(4) * self.a.pow(3) + BigInt::from(27) * self.b.pow(2)
    }

    /// Curve discriminant -16(4A^3 + 27B^2).
    pub fn curve_disc(&self) -> BigInt {
        BigInt::from(-16) * self.cubic_disc()
    }

    /// The cubic x^3 + Ax + B.
    pub fn cubic(&self) -> crate::zpoly::ZPoly {
        crate::zpoly::ZPoly::new(vec![self.b.clone(), self.a.clone(), BigInt::zero(), BigInt::from(1)])
    }
}

/// The invariant pair (I, J); Delta = (4I^3 - J^2)/27.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvariantPair {
    pub i: BigInt,
    pub j: BigInt,
}

impl InvariantPair {
    pub fn new(i: BigInt, j: BigInt) -> Self {
        InvariantPair { i, j }
    }

    pub fn from_i64(i: i64, j: i64) -> Self {
        InvariantPair { i: BigInt::from(i), j: BigInt::from(j) }
    }

    pub fn disc(&self) -> BigRational {
        BigRational::new(
            BigInt::from(4) * self.i.pow(3) - self.j.pow(2),
            BigInt::from(27),
        )
    }

    pub fn is_singular(&self) -> bool {
        self.disc().is_zero()
    }
}

/// Jacobian curve of an invariant pair: y^2 = x^3 - (I/3)x - (J/27);
/// rational (A, B).
pub fn curve_from_invariants(inv: &InvariantPair) -> Result<(BigRational, BigRational)> {
    if inv.is_singular() {
        return Err(Error::SingularInvariants);
    }
    Ok((
        BigRational::new(-inv.i.clone(), BigInt::from(3)),
        BigRational::new(-inv.j.clone(), BigInt::from(27)),
    ))
}

/// Inverse map: (A, B) -> (I, J) = (-3A, -27B).
pub fn invariants_from_curve(e: &EllipticCurveAB) -> InvariantPair {
    InvariantPair::new(BigInt::from(-3) * &e.a, BigInt::from(-27) * &e.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn curve_invariant_roundtrip() {
        let e = EllipticCurveAB::from_i64(-1, 0).unwrap();
        let inv = invariants_from_curve(&e);
        assert_eq!(inv, InvariantPair::from_i64(3, 0));
        let (a, b) = curve_from_invariants(&inv).unwrap();
        assert_eq!(a, BigRational::from(BigInt::from(-1)));
        assert_eq!(b, BigRational::zero());

        let inv = InvariantPair::from_i64(0, 27);
        let (a, b) = curve_from_invariants(&inv).unwrap();
        assert!(a.is_zero());
        assert_eq!(b, -BigRational::one());

        assert!(curve_from_invariants(&InvariantPair::from_i64(0, 0)).is_err());
        assert_eq!(invariants_from_curve(&EllipticCurveAB::from_i64(1, 1).unwrap()),
            InvariantPair::from_i64(-3, -27));
    }

    #[test]
    fn disc_examples() {
        let q = |n: i64| BigRational::from(BigInt::from(n));
        assert_eq!(InvariantPair::from_i64(12, 0).disc(), q(256));
        assert_eq!(InvariantPair::from_i64(3, 0).disc(), q(4));
        assert_eq!(InvariantPair::from_i64(0, 0).disc(), q(0));
    }

    #[test]
    fn singular_curve_rejected() {
        assert!(EllipticCurveAB::from_i64(-3, 2).is_err());
    }
}
