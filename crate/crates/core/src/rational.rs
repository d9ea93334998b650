//! Helpers for exact rational scalars and the extended value line.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Signed, Zero};

use crate::Rat;

/// Shorthand for a rational from machine integers.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for an integer rational.
pub fn rint(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Parses "p/q" or "p" into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    Rat::from_str(s.trim()).map_err(|e| format!("invalid rational {s:?}: {e}"))
}

/// Canonical "p/q" rendering (integers render without the denominator).
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

/// n! as a rational.
pub fn factorial(n: usize) -> Rat {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rat::from_integer(acc)
}

/// A nonnegative rational extended with +infinity, used for expansion
/// constants and cosystoles where empty minima occur.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ext {
    Finite(Rat),
    Infinite,
}

impl Ext {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Ext::Infinite)
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Ext::Finite(r) => Some(r),
            Ext::Infinite => None,
        }
    }

    /// min(self, 1), collapsing infinity to 1.
    pub fn min_with_one(&self) -> Rat {
        match self {
            Ext::Infinite => Rat::one(),
            Ext::Finite(r) => {
                if *r < Rat::one() {
                    r.clone()
                } else {
                    Rat::one()
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Ext::Infinite => true,
            Ext::Finite(r) => r.is_positive(),
        }
    }
}

impl From<Rat> for Ext {
    fn from(r: Rat) -> Self {
        Ext::Finite(r)
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ext::Infinite, Ext::Infinite) => Ordering::Equal,
            (Ext::Infinite, Ext::Finite(_)) => Ordering::Greater,
            (Ext::Finite(_), Ext::Infinite) => Ordering::Less,
            (Ext::Finite(a), Ext::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Infinite => write!(f, "inf"),
            Ext::Finite(r) => write!(f, "{r}"),
        }
    }
}

/// Parses "inf" or "p/q".
pub fn parse_ext(s: &str) -> Result<Ext, String> {
    let t = s.trim();
    if t == "inf" || t == "infinity" {
        Ok(Ext::Infinite)
    } else {
        parse_rat(t).map(Ext::Finite)
    }
}

/// True if the rational is zero.
pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}
