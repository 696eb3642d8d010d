//! Named MUB sets, written `hw:<d>`, `d4:<x>,<y>,<z>` (angles in units of
//! π), `tao` or `grassl`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mub::{d4_triple, grassl_triple, hw_set, tao_pair, MubSet};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Heisenberg-Weyl set: complete for prime powers, a tensor-product set
    /// of `min pⁿ + 1` bases otherwise.
    Hw { dim: usize },
    /// `{I, F(xπ), H(yπ, zπ)}` in d = 4.
    D4 { x: f64, y: f64, z: f64 },
    /// `{I, S₆}`.
    Tao,
    /// `{I, F₇, A₇}`.
    Grassl,
}

impl Family {
    pub fn dim(&self) -> usize {
        match self {
            Family::Hw { dim } => *dim,
            Family::D4 { .. } => 4,
            Family::Tao => 6,
            Family::Grassl => 7,
        }
    }

    pub fn build<T: Real>(&self) -> Result<MubSet<T>> {
        let pi = |t: f64| T::lit(t * std::f64::consts::PI);
        match *self {
            Family::Hw { dim } => hw_set(dim),
            Family::D4 { x, y, z } => Ok(d4_triple(pi(x), pi(y), pi(z))),
            Family::Tao => Ok(tao_pair()),
            Family::Grassl => Ok(grassl_triple()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Hw { dim } => write!(f, "hw:{dim}"),
            Family::D4 { x, y, z } => write!(f, "d4:{x},{y},{z}"),
            Family::Tao => f.write_str("tao"),
            Family::Grassl => f.write_str("grassl"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidData(format!(
                "unknown family {s:?} (expected hw:<d>, d4:<x>,<y>,<z>, tao or grassl)"
            ))
        };
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        match name.trim() {
            "hw" => {
                let dim = args.trim().parse().map_err(|_| bad())?;
                Ok(Family::Hw { dim })
            }
            "d4" => {
                let v: Vec<f64> = args
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad())?;
                match v[..] {
                    [x, y, z] => Ok(Family::D4 { x, y, z }),
                    _ => Err(bad()),
                }
            }
            "tao" if args.is_empty() => Ok(Family::Tao),
            "grassl" if args.is_empty() => Ok(Family::Grassl),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
