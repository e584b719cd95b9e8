//! Coefficient scalars: exact big rationals and double floats behind one trait.
//!
//! Every structure in this crate is generic over [`Coeff`]. The rational mode
//! carries exact signs through permanents and mixed discriminants; the float
//! mode feeds eigenwork and optimization. The mode is chosen at construction
//! time and everything downstream honors it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::Value;

use crate::error::{Error, Result};

pub trait Coeff:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + std::ops::Neg<Output = Self>
    + Signed
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic carries no rounding error.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    /// The exact ratio p/q. `q` must be nonzero.
    fn from_ratio(p: i64, q: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// JSON encoding: `"p/q"` strings in rational mode, plain numbers in float mode.
    fn coef_to_json(&self) -> Value;

    /// Accepts both encodings regardless of mode so files round-trip across modes.
    fn coef_from_json(v: &Value) -> Result<Self>;
}

impl Coeff for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        p as f64 / q as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn coef_to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map_or(Value::Null, Value::Number)
    }

    fn coef_from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::InvalidInput(format!("non-finite number {n}"))),
            Value::String(s) => {
                let r = parse_rational(s)?;
                Ok(Coeff::to_f64(&r))
            }
            other => Err(Error::InvalidInput(format!(
                "expected numeric coefficient, got {other}"
            ))),
        }
    }
}

impl Coeff for BigRational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn coef_to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn coef_from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Self::from_int(i))
                } else if let Some(f) = n.as_f64() {
                    // Floats convert exactly: every finite f64 is a dyadic rational.
                    BigRational::from_float(f)
                        .ok_or_else(|| Error::InvalidInput(format!("non-finite coefficient {f}")))
                } else {
                    Err(Error::InvalidInput(format!("unrepresentable number {n}")))
                }
            }
            other => Err(Error::InvalidInput(format!(
                "expected rational coefficient, got {other}"
            ))),
        }
    }
}

/// Equality up to `rel` relative slack in float mode, exact in rational mode.
pub fn values_agree<T: Coeff>(a: &T, b: &T, rel: f64) -> bool {
    if T::EXACT {
        a == b
    } else {
        let (x, y) = (a.to_f64(), b.to_f64());
        (x - y).abs() <= rel * x.abs().max(y.abs()).max(1.0)
    }
}

/// Formats as `p/q`, or just `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, `p`, or a decimal literal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim())
            .map_err(|e| Error::InvalidInput(format!("bad numerator {p:?}: {e}")))?;
        let q = BigInt::from_str(q.trim())
            .map_err(|e| Error::InvalidInput(format!("bad denominator {q:?}: {e}")))?;
        if q == BigInt::from(0) {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(BigRational::new(p, q))
    } else if let Ok(p) = BigInt::from_str(s) {
        Ok(BigRational::from_integer(p))
    } else if let Ok(f) = s.parse::<f64>() {
        BigRational::from_float(f)
            .ok_or_else(|| Error::InvalidInput(format!("non-finite coefficient {s:?}")))
    } else {
        Err(Error::InvalidInput(format!("cannot parse rational {s:?}")))
    }
}
