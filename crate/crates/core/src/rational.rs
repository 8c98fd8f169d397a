//! Exact rational arithmetic helpers.
//!
//! Everything in this crate is computed over `BigRational`; rationals cross
//! serialization boundaries as `"p/q"` strings (or `"p"` for integers).

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type Q = BigRational;

pub fn q(numer: i64, denom: i64) -> Q {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// `2^{-k}`.
pub fn dyadic(k: u32) -> Q {
    BigRational::new(BigInt::one(), BigInt::one() << k as usize)
}

pub fn half() -> Q {
    q(1, 2)
}

pub fn parse_q(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => BigInt::from_str(s)
            .map(BigRational::from_integer)
            .map_err(|_| bad()),
    }
}

pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn max_q<'a>(a: &'a Q, b: &'a Q) -> &'a Q {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn min_q<'a>(a: &'a Q, b: &'a Q) -> &'a Q {
    if a <= b {
        a
    } else {
        b
    }
}

/// Serde wrapper storing a rational as its `"p/q"` string form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatStr(pub Q);

impl From<Q> for RatStr {
    fn from(x: Q) -> Self {
        RatStr(x)
    }
}

impl From<&Q> for RatStr {
    fn from(x: &Q) -> Self {
        RatStr(x.clone())
    }
}

impl fmt::Display for RatStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for RatStr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        parse_q(s).map(RatStr)
    }
}

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&fmt_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Str(s) => parse_q(&s).map(RatStr).map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(RatStr(qi(n))),
        }
    }
}

/// `#[serde(with = "serde_q")]` for plain `Q` fields.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        RatStr::deserialize(d).map(|r| r.0)
    }
}

/// `#[serde(with = "serde_q_vec")]` for `Vec<Q>` fields.
pub mod serde_q_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(fmt_q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Vec::<RatStr>::deserialize(d).map(|v| v.into_iter().map(|r| r.0).collect())
    }
}

/// `#[serde(with = "serde_q_opt")]` for `Option<Q>` fields.
pub mod serde_q_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&fmt_q(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<RatStr>::deserialize(d).map(|v| v.map(|r| r.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q(" -2 ").unwrap(), qi(-2));
        assert_eq!(fmt_q(&q(6, 4)), "3/2");
        assert_eq!(fmt_q(&qi(1)), "1");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn dyadic_powers() {
        assert_eq!(dyadic(0), qi(1));
        assert_eq!(dyadic(3), q(1, 8));
    }

    #[test]
    fn ratstr_json() {
        let v: Vec<RatStr> = serde_json::from_str(r#"["1/2", "3", 4]"#).unwrap();
        assert_eq!(v[0].0, q(1, 2));
        assert_eq!(v[2].0, qi(4));
        assert_eq!(serde_json::to_string(&v[0]).unwrap(), "\"1/2\"");
    }
}
