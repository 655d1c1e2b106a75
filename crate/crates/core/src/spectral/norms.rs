use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A norm exponent in `[1, ∞]`.
///
/// Parses `inf`, `∞`, integers, decimals, and rationals such as `4/3`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INF: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Domain(format!("norm exponent must lie in [1, inf], got {p}")));
        }
        Ok(Exponent(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_inf(self) -> bool {
        self.0.is_infinite()
    }

    pub fn dual(self) -> Exponent {
        Exponent(dual_unchecked(self.0))
    }
}

impl From<Exponent> for f64 {
    fn from(p: Exponent) -> f64 {
        p.0
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inf() {
            return write!(f, "inf");
        }
        // Prefer a short rational form for the common thirds/quarters.
        for den in 1..=12u32 {
            let num = self.0 * den as f64;
            if (num - num.round()).abs() < 1e-12 {
                return if den == 1 { write!(f, "{}", num.round()) } else { write!(f, "{}/{}", num.round(), den) };
            }
        }
        write!(f, "{}", self.0)
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Domain(format!("cannot parse exponent `{s}`"));
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Exponent::INF);
        }
        let value = match t.split_once('/') {
            Some((a, b)) => {
                let a: f64 = a.trim().parse().map_err(|_| bad())?;
                let b: f64 = b.trim().parse().map_err(|_| bad())?;
                a / b
            }
            None => t.parse().map_err(|_| bad())?,
        };
        Exponent::new(value)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_inf() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(x) => Exponent::new(x),
            Raw::Text(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

fn dual_unchecked(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Hölder conjugate `p*` with `1/p + 1/p* = 1`.
pub fn holder_dual(p: f64) -> Result<f64> {
    Ok(Exponent::new(p)?.dual().value())
}

/// Expectation-normalized `L_p` norm, `((1/n) Σ |v_i|^p)^{1/p}`; `p = ∞` gives `max |v_i|`.
pub fn lp_norm(v: &[f64], p: f64) -> Result<f64> {
    let p = Exponent::new(p)?;
    if v.is_empty() {
        return Err(Error::Domain("L_p norm of an empty vector".into()));
    }
    Ok(lp(v, p.value()))
}

pub(crate) fn lp(v: &[f64], p: f64) -> f64 {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if p.is_infinite() || max == 0.0 {
        return max;
    }
    let n = v.len() as f64;
    if p == 1.0 {
        return v.iter().map(|x| x.abs()).sum::<f64>() / n;
    }
    if p == 2.0 {
        return (v.iter().map(|x| x * x).sum::<f64>() / n).sqrt();
    }
    // Scale by the max entry so large p neither overflows nor underflows.
    let s: f64 = v.iter().map(|x| (x.abs() / max).powf(p)).sum::<f64>() / n;
    max * s.powf(1.0 / p)
}

/// Expectation inner product `(1/n) Σ u_i v_i`.
pub fn inner(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Dimension { expected: u.len(), found: v.len() });
    }
    if u.is_empty() {
        return Err(Error::Domain("inner product of empty vectors".into()));
    }
    Ok(u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / u.len() as f64)
}
