use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// A real number `x` known through a rational `value` with `|x - value| <= err`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Certified {
    #[serde(with = "super::json::rat")]
    pub value: BigRational,
    #[serde(with = "super::json::rat")]
    pub err: BigRational,
}

impl Certified {
    pub fn new(value: BigRational, err: BigRational) -> Self {
        debug_assert!(!err.is_negative());
        Self { value, err }
    }

    pub fn exact(value: BigRational) -> Self {
        Self::new(value, BigRational::zero())
    }

    pub fn zero() -> Self {
        Self::exact(BigRational::zero())
    }

    /// Enclosure `[lo, hi]` turned into midpoint and radius.
    pub fn from_bounds(lo: &BigRational, hi: &BigRational) -> Self {
        let two = BigRational::from_integer(2.into());
        Self::new((lo + hi) / &two, (hi - lo) / two)
    }

    pub fn lower(&self) -> BigRational {
        &self.value - &self.err
    }

    pub fn upper(&self) -> BigRational {
        &self.value + &self.err
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }

    /// Whether `x` is compatible with the enclosure.
    pub fn contains(&self, x: &BigRational) -> bool {
        (x - &self.value).abs() <= self.err
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.value + &o.value, &self.err + &o.err)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.value - &o.value, &self.err + &o.err)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.value.clone(), self.err.clone())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(&self.value * s, &self.err * s.abs())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let err = self.value.abs() * &o.err + o.value.abs() * &self.err + &self.err * &o.err;
        Self::new(&self.value * &o.value, err)
    }
}

impl fmt::Display for Certified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.value, self.err)
    }
}

/// Complex certified number; each part carries its own bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedComplex {
    pub re: Certified,
    pub im: Certified,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::rat;

    #[test]
    fn enclosure_arithmetic() {
        let a = Certified::new(rat(1, 1), rat(1, 10));
        let b = Certified::new(rat(2, 1), rat(1, 100));
        let p = a.mul(&b);
        for x in [rat(9, 10), rat(11, 10)] {
            for y in [rat(199, 100), rat(201, 100)] {
                assert!(p.contains(&(&x * &y)));
            }
        }
        assert_eq!(Certified::from_bounds(&rat(1, 1), &rat(2, 1)), Certified::new(rat(3, 2), rat(1, 2)));
    }
}
