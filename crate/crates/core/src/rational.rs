use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// An exact non-negative rational, used for densities and expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Ratio<u64>);

impl Exact {
    pub fn new(num: u64, den: u64) -> Self {
        Exact(Ratio::new(num, den))
    }

    pub fn zero() -> Self {
        Exact(Ratio::zero())
    }

    pub fn one() -> Self {
        Exact(Ratio::from_integer(1))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `1 - self`; callers guarantee `self <= 1`.
    pub fn complement(&self) -> Self {
        Exact(Ratio::from_integer(1) - self.0)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Exact", 2)?;
        s.serialize_field("exact", &self.to_string())?;
        s.serialize_field("value", &self.to_f64())?;
        s.end()
    }
}
