use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use super::json::parse_rat;

use crate::error::{Error, Result};

/// Complex number with rational real and imaginary parts.
///
/// Serialised as `{"re": "1/2", "im": "-3"}`. Parsing also accepts a bare
/// rational, a `[re, im]` pair, or text such as `"1/2-3i"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GaussianRational {
    #[serde(with = "super::json::rat")]
    pub re: BigRational,
    #[serde(with = "super::json::rat")]
    pub im: BigRational,
}

pub type GaussianVector = Vec<GaussianRational>;

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2`, always rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }

    /// Integer power by repeated squaring; negative exponents need a nonzero base.
    pub fn pow(&self, e: &BigInt) -> Result<Self> {
        let (mut base, mut k) = if e < &BigInt::zero() {
            (self.inv()?, -e.clone())
        } else {
            (self.clone(), e.clone())
        };
        let mut acc = Self::one();
        let two = BigInt::from(2);
        while !k.is_zero() {
            if (&k % &two).is_one() {
                acc = &acc * &base;
            }
            k /= &two;
            if !k.is_zero() {
                base = &base * &base;
            }
        }
        Ok(acc)
    }
}

/// Parses `"a"`, `"bi"`, `"a+bi"` or `"a-bi"` with rational `a`, `b`.
pub fn parse_gaussian(text: &str) -> Result<GaussianRational> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return Ok(GaussianRational::real(parse_rat(&s)?));
    };
    let split = body
        .char_indices()
        .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
        .map(|(k, _)| k)
        .next_back();
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        t => parse_rat(t.trim_start_matches('+'))?,
    };
    let re = if re.is_empty() { BigRational::zero() } else { parse_rat(re)? };
    Ok(GaussianRational::new(re, im))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Part {
    Str(String),
    Int(i64),
}

impl Part {
    fn rat(self) -> Result<BigRational> {
        match self {
            Part::Str(s) => parse_rat(&s),
            Part::Int(i) => Ok(BigRational::from_integer(i.into())),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GaussianRepr {
    Parts { re: Part, im: Part },
    Pair(Part, Part),
    Text(String),
    Int(i64),
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parsed = match GaussianRepr::deserialize(d)? {
            GaussianRepr::Parts { re, im } | GaussianRepr::Pair(re, im) => {
                re.rat().and_then(|re| Ok(GaussianRational::new(re, im.rat()?)))
            }
            GaussianRepr::Text(s) => parse_gaussian(&s),
            GaussianRepr::Int(i) => Ok(GaussianRational::from_ints(i, 0)),
        };
        parsed.map_err(D::Error::custom)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: Self) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}

/// `sum |v_i - w_i|^2`.
pub fn dist_sq(v: &[GaussianRational], w: &[GaussianRational]) -> BigRational {
    v.iter().zip(w).map(|(a, b)| (a - b).norm_sq()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::rat;

    #[test]
    fn parse_and_json_forms() {
        let g = |re, im| GaussianRational::new(re, im);
        assert_eq!(parse_gaussian("1/2-3i").unwrap(), g(rat(1, 2), rat(-3, 1)));
        assert_eq!(parse_gaussian("-i").unwrap(), g(rat(0, 1), rat(-1, 1)));
        assert_eq!(parse_gaussian("-2/3").unwrap(), g(rat(-2, 3), rat(0, 1)));
        assert_eq!(parse_gaussian("4 + i").unwrap(), g(rat(4, 1), rat(1, 1)));
        assert_eq!(parse_gaussian("0.5i").unwrap(), g(rat(0, 1), rat(1, 2)));
        assert!(parse_gaussian("1+2j").is_err());
        let want = g(rat(1, 2), rat(2, 1));
        for text in [r#"{"re":"1/2","im":2}"#, r#"["1/2","2"]"#, r#""1/2+2i""#] {
            assert_eq!(serde_json::from_str::<GaussianRational>(text).unwrap(), want, "{text}");
        }
        assert_eq!(serde_json::from_str::<GaussianRational>("3").unwrap(), GaussianRational::from_ints(3, 0));
        let round = serde_json::to_string(&want).unwrap();
        assert_eq!(round, r#"{"re":"1/2","im":"2"}"#);
        assert_eq!(serde_json::from_str::<GaussianRational>(&round).unwrap(), want);
    }

    #[test]
    fn arithmetic() {
        let a = GaussianRational::from_ints(1, 2);
        let b = GaussianRational::from_ints(3, -1);
        assert_eq!(&a * &b, GaussianRational::from_ints(5, 5));
        assert_eq!(&a * &a.inv().unwrap(), GaussianRational::one());
        assert_eq!(GaussianRational::i().pow(&BigInt::from(4)).unwrap(), GaussianRational::one());
        assert_eq!(
            GaussianRational::from_ints(2, 0).pow(&BigInt::from(-2)).unwrap(),
            GaussianRational::real(BigRational::new(1.into(), 4.into()))
        );
        assert!(GaussianRational::zero().inv().is_err());
    }
}
