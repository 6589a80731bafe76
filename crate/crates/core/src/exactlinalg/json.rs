//! JSON conventions: integers and rationals travel as decimal strings (`"-3"`, `"2/5"`),
//! matrices as arrays of row arrays. Parsing also accepts JSON integers and decimal
//! fractions such as `"0.4"`, which are read exactly.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::Matrix;
use crate::error::{Error, Result};

pub fn parse_int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

/// Parses `"p"`, `"p/q"` or a decimal such as `"-0.125"` into a reduced rational.
pub fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let (p, q) = (parse_int(p).map_err(|_| bad())?, parse_int(q).map_err(|_| bad())?);
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        if !ip_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{ip_digits}{fp}");
        let num = if digits.is_empty() { BigInt::zero() } else { parse_int(&digits).map_err(|_| bad())? };
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let r = BigRational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    Ok(BigRational::from_integer(parse_int(s).map_err(|_| bad())?))
}

pub fn format_rat(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumRepr {
    Str(String),
    Int(i64),
}

impl NumRepr {
    fn text(self) -> String {
        match self {
            NumRepr::Str(s) => s,
            NumRepr::Int(i) => i.to_string(),
        }
    }
}

/// Scalars with an exact textual JSON form.
pub trait ExactScalar: Sized {
    fn to_text(&self) -> String;
    fn from_text(s: &str) -> Result<Self>;
}

impl ExactScalar for BigInt {
    fn to_text(&self) -> String {
        self.to_string()
    }
    fn from_text(s: &str) -> Result<Self> {
        parse_int(s)
    }
}

impl ExactScalar for BigRational {
    fn to_text(&self) -> String {
        format_rat(self)
    }
    fn from_text(s: &str) -> Result<Self> {
        parse_rat(s)
    }
}

impl<T: ExactScalar> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .row_iter()
            .map(|r| r.iter().map(ExactScalar::to_text).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de, T: ExactScalar> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<NumRepr>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<T>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| T::from_text(&x.text())).collect::<Result<Vec<T>>>())
            .collect::<Result<_>>()
            .map_err(D::Error::custom)?;
        Matrix::from_rows(rows).map_err(D::Error::custom)
    }
}

fn de_scalar<'de, D: Deserializer<'de>, T: ExactScalar>(d: D) -> std::result::Result<T, D::Error> {
    T::from_text(&NumRepr::deserialize(d)?.text()).map_err(D::Error::custom)
}

fn de_vec<'de, D: Deserializer<'de>, T: ExactScalar>(d: D) -> std::result::Result<Vec<T>, D::Error> {
    let v: Vec<NumRepr> = Vec::deserialize(d)?;
    v.into_iter()
        .map(|x| T::from_text(&x.text()))
        .collect::<Result<_>>()
        .map_err(D::Error::custom)
}

fn ser_vec<S: Serializer, T: ExactScalar>(v: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(ExactScalar::to_text).collect::<Vec<_>>().serialize(s)
}

macro_rules! scalar_module {
    ($name:ident, $vec:ident, $opt:ident, $ty:ty) => {
        pub mod $name {
            use super::*;
            pub fn serialize<S: Serializer>(x: &$ty, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(&x.to_text())
            }
            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<$ty, D::Error> {
                de_scalar(d)
            }
        }
        pub mod $vec {
            use super::*;
            pub fn serialize<S: Serializer>(x: &[$ty], s: S) -> std::result::Result<S::Ok, S::Error> {
                ser_vec(x, s)
            }
            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<$ty>, D::Error> {
                de_vec(d)
            }
        }
        pub mod $opt {
            use super::*;
            pub fn serialize<S: Serializer>(x: &Option<$ty>, s: S) -> std::result::Result<S::Ok, S::Error> {
                match x {
                    Some(v) => s.serialize_some(&v.to_text()),
                    None => s.serialize_none(),
                }
            }
            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<$ty>, D::Error> {
                let o: Option<NumRepr> = Option::deserialize(d)?;
                o.map(|x| <$ty>::from_text(&x.text()))
                    .transpose()
                    .map_err(D::Error::custom)
            }
        }
    };
}

scalar_module!(rat, rat_vec, opt_rat, BigRational);
scalar_module!(int, int_vec, opt_int, BigInt);

/// Vector of integer vectors, e.g. a list of subspace generators.
pub mod int_vecs {
    use super::*;
    pub fn serialize<S: Serializer>(x: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
        x.iter()
            .map(|v| v.iter().map(ExactScalar::to_text).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<BigInt>>, D::Error> {
        let rows: Vec<Vec<NumRepr>> = Vec::deserialize(d)?;
        rows.into_iter()
            .map(|r| r.into_iter().map(|x| parse_int(&x.text())).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::{int_matrix, rat, IntMatrix, RatMatrix};

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rat("0.4").unwrap(), rat(2, 5));
        assert_eq!(parse_rat("7").unwrap(), rat(7, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert!(parse_rat("1.").is_err());
    }

    #[test]
    fn matrix_roundtrip() {
        let m = int_matrix(&[&[1, -2], &[3, 4]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["1","-2"],["3","4"]]"#);
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let r: RatMatrix = serde_json::from_str(r#"[["1/2", 3]]"#).unwrap();
        assert_eq!(r[(0, 0)], rat(1, 2));
        assert!(serde_json::from_str::<IntMatrix>(r#"[["1"],["2","3"]]"#).is_err());
    }
}
