//! Loading job input and pulling typed fields out of it.

use std::io::Read;

use num_bigint::BigInt;
use num_rational::BigRational;
use robust_orbits::exactlinalg::json::parse_rat;
use robust_orbits::exactlinalg::matrix::IntMatrix;
use robust_orbits::exactlinalg::GaussianRational;
use robust_orbits::logspace::QuotientPoint;
use robust_orbits::torus::TorusAction;
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::CliError;

/// Reads the input argument: `-` for standard input, inline JSON when it starts
/// with `{` or `[`, and a file path otherwise.
pub fn load(arg: &str) -> Result<Value, CliError> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
        s
    } else if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|source| CliError::Io { path: arg.into(), source })?
    };
    Ok(serde_json::from_str(&text)?)
}

pub fn field<T: DeserializeOwned>(obj: &Value, key: &str) -> Result<T, CliError> {
    let v = obj.get(key).ok_or_else(|| CliError::MissingField(key.to_string()))?;
    serde_json::from_value(v.clone()).map_err(|e| CliError::Field { key: key.to_string(), source: e })
}

/// A weight matrix given either as rows or, for a one-dimensional torus, as a
/// single flat row.
fn weight_matrix(obj: &Value) -> Result<IntMatrix, CliError> {
    let m = obj.get("M").ok_or_else(|| CliError::MissingField("M".into()))?;
    let rows = match m {
        Value::Array(xs) if !xs.is_empty() && !xs.iter().all(Value::is_array) => Value::Array(vec![m.clone()]),
        _ => m.clone(),
    };
    serde_json::from_value(rows).map_err(|e| CliError::Field { key: "M".into(), source: e })
}

pub fn action(obj: &Value) -> Result<TorusAction, CliError> {
    Ok(TorusAction::new(weight_matrix(obj)?)?)
}

pub fn gaussian_vec(obj: &Value, key: &str) -> Result<Vec<GaussianRational>, CliError> {
    field(obj, key)
}

/// An exact point of the log quotient, `{"rho": [...], "theta": [...]}`.
pub fn quotient_point(obj: &Value, key: &str) -> Result<QuotientPoint, CliError> {
    #[derive(serde::Deserialize)]
    struct Raw {
        #[serde(with = "robust_orbits::exactlinalg::json::rat_vec")]
        rho: Vec<BigRational>,
        #[serde(with = "robust_orbits::exactlinalg::json::rat_vec")]
        theta: Vec<BigRational>,
    }
    let raw: Raw = field(obj, key)?;
    Ok(QuotientPoint::new(raw.rho, raw.theta)?)
}

pub fn rational_flag(name: &str, text: &str) -> Result<BigRational, CliError> {
    parse_rat(text).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

#[derive(serde::Deserialize)]
struct RatVec(#[serde(with = "robust_orbits::exactlinalg::json::rat_vec")] Vec<BigRational>);

#[derive(serde::Deserialize)]
struct IntVec(#[serde(with = "robust_orbits::exactlinalg::json::int_vec")] Vec<BigInt>);

pub fn rat_vec(obj: &Value, key: &str) -> Result<Vec<BigRational>, CliError> {
    field::<RatVec>(obj, key).map(|v| v.0)
}

pub fn int_vec(obj: &Value, key: &str) -> Result<Vec<BigInt>, CliError> {
    field::<IntVec>(obj, key).map(|v| v.0)
}
