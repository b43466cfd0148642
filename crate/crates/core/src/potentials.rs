//! Screened Coulomb potential families.
//!
//! ```text
//! ECSC     v(r) = -(A/r) exp(-delta1 r) cos(g delta2 r)
//! GESC     v(r) = -(a/r) [1 + (1 + b r) exp(-2 b r)]
//! Yukawa   v(r) = -(A/r) exp(-delta r)
//! Coulomb  v(r) = -Z/r
//! ```
//!
//! ECSC reduces to Yukawa at g = 0 and to Coulomb at delta1 = delta2 = 0;
//! GESC interpolates between a charge-2a Coulomb potential (b = 0) and a
//! charge-a one (b -> infinity). All quantities in atomic units.

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SolverError};

/// A screened Coulomb potential with fixed parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    Ecsc { a: f64, delta1: f64, delta2: f64, g: f64 },
    Gesc { a: f64, b: f64 },
    Yukawa { a: f64, delta: f64 },
    Coulomb { z: f64 },
}

impl Potential {
    /// ECSC with unit coupling, g = 1 and a common screening parameter,
    /// the form all tabulated data uses.
    pub fn ecsc(delta: f64) -> Self {
        Potential::Ecsc {
            a: 1.0,
            delta1: delta,
            delta2: delta,
            g: 1.0,
        }
    }

    /// GESC with unit coupling.
    pub fn gesc(b: f64) -> Self {
        Potential::Gesc { a: 1.0, b }
    }

    pub fn coulomb(z: f64) -> Self {
        Potential::Coulomb { z }
    }

    pub fn yukawa(a: f64, delta: f64) -> Self {
        Potential::Yukawa { a, delta }
    }

    /// v(r); the potentials are singular at the origin, so r must be positive.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(SolverError::PotentialDomain { r });
        }
        Ok(match *self {
            Potential::Ecsc {
                a,
                delta1,
                delta2,
                g,
            } => -(a / r) * (-delta1 * r).exp() * (g * delta2 * r).cos(),
            Potential::Gesc { a, b } => -(a / r) * (1.0 + (1.0 + b * r) * (-2.0 * b * r).exp()),
            Potential::Yukawa { a, delta } => -(a / r) * (-delta * r).exp(),
            Potential::Coulomb { z } => -z / r,
        })
    }

    /// Effective radial potential u(r) = l(l+1)/(2 r^2) + v(r).
    pub fn effective(&self, l: u32, r: f64) -> Result<f64> {
        let lf = l as f64;
        Ok(lf * (lf + 1.0) / (2.0 * r * r) + self.evaluate(r)?)
    }

    /// Family keyword used by the string grammar.
    pub fn family(&self) -> &'static str {
        match self {
            Potential::Ecsc { .. } => "ecsc",
            Potential::Gesc { .. } => "gesc",
            Potential::Yukawa { .. } => "yukawa",
            Potential::Coulomb { .. } => "coulomb",
        }
    }

    /// Parameter list serialized in canonical `key=value` form (the part of
    /// the potential string after the colon).
    pub fn params_string(&self) -> String {
        match *self {
            Potential::Ecsc {
                a,
                delta1,
                delta2,
                g,
            } => {
                let mut s = String::new();
                if a != 1.0 {
                    s.push_str(&format!("A={a},"));
                }
                if delta1 == delta2 {
                    s.push_str(&format!("delta={delta1}"));
                } else {
                    s.push_str(&format!("delta1={delta1},delta2={delta2}"));
                }
                if g != 1.0 {
                    s.push_str(&format!(",g={g}"));
                }
                s
            }
            Potential::Gesc { a, b } => {
                if a == 1.0 {
                    format!("b={b}")
                } else {
                    format!("a={a},b={b}")
                }
            }
            Potential::Yukawa { a, delta } => {
                if a == 1.0 {
                    format!("delta={delta}")
                } else {
                    format!("A={a},delta={delta}")
                }
            }
            Potential::Coulomb { z } => format!("Z={z}"),
        }
    }

    fn validate(self) -> Result<Self> {
        let ok = match self {
            Potential::Ecsc {
                a,
                delta1,
                delta2,
                g,
            } => a > 0.0 && delta1 >= 0.0 && delta2 >= 0.0 && g >= 0.0,
            Potential::Gesc { a, b } => a > 0.0 && b >= 0.0,
            Potential::Yukawa { a, delta } => a > 0.0 && delta >= 0.0,
            Potential::Coulomb { z } => z > 0.0,
        };
        if ok {
            Ok(self)
        } else {
            Err(SolverError::Parse(format!(
                "potential parameters out of range: {self}"
            )))
        }
    }
}

/// Canonical potential-string form, `family:key=value{,key=value}`.
/// Parsing the output reproduces the potential exactly.
impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family(), self.params_string())
    }
}

/// Grammar: `<family>:<key>=<value>{,<key>=<value>}` with families
/// ecsc | gesc | yukawa | coulomb. Unknown keys are errors. Omitted keys
/// default to A=1, delta=0, g=1 (ecsc); a=1, b=0 (gesc); A=1, delta=0
/// (yukawa); Z=1 (coulomb). `delta` sets both ECSC screening parameters
/// and conflicts with explicit `delta1`/`delta2`.
impl FromStr for Potential {
    type Err = SolverError;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (family, rest) = match text.split_once(':') {
            Some((f, r)) => (f, r),
            None => (text, ""),
        };
        let mut pairs = Vec::new();
        if !rest.trim().is_empty() {
            for item in rest.split(',') {
                let (key, value) = item.split_once('=').ok_or_else(|| {
                    SolverError::Parse(format!("expected key=value, got `{item}`"))
                })?;
                let value: f64 = value.trim().parse().map_err(|_| {
                    SolverError::Parse(format!("bad numeric value `{value}` for key `{key}`"))
                })?;
                if !value.is_finite() {
                    return Err(SolverError::Parse(format!(
                        "non-finite value for key `{key}`"
                    )));
                }
                pairs.push((key.trim().to_string(), value));
            }
        }
        let take = |pairs: &mut Vec<(String, f64)>, key: &str| -> Option<f64> {
            pairs
                .iter()
                .position(|(k, _)| k == key)
                .map(|idx| pairs.remove(idx).1)
        };

        let built = match family {
            "ecsc" => {
                let a = take(&mut pairs, "A").unwrap_or(1.0);
                let g = take(&mut pairs, "g").unwrap_or(1.0);
                let delta = take(&mut pairs, "delta");
                let delta1 = take(&mut pairs, "delta1");
                let delta2 = take(&mut pairs, "delta2");
                if delta.is_some() && (delta1.is_some() || delta2.is_some()) {
                    return Err(SolverError::Parse(
                        "`delta` conflicts with `delta1`/`delta2`".into(),
                    ));
                }
                let (d1, d2) = match delta {
                    Some(d) => (d, d),
                    None => (delta1.unwrap_or(0.0), delta2.unwrap_or(0.0)),
                };
                Potential::Ecsc {
                    a,
                    delta1: d1,
                    delta2: d2,
                    g,
                }
            }
            "gesc" => Potential::Gesc {
                a: take(&mut pairs, "a").unwrap_or(1.0),
                b: take(&mut pairs, "b").unwrap_or(0.0),
            },
            "yukawa" => Potential::Yukawa {
                a: take(&mut pairs, "A").unwrap_or(1.0),
                delta: take(&mut pairs, "delta").unwrap_or(0.0),
            },
            "coulomb" => Potential::Coulomb {
                z: take(&mut pairs, "Z").unwrap_or(1.0),
            },
            other => {
                return Err(SolverError::Parse(format!(
                    "unknown potential family `{other}`"
                )))
            }
        };
        if let Some((key, _)) = pairs.first() {
            return Err(SolverError::Parse(format!(
                "unknown key `{key}` for family `{family}`"
            )));
        }
        built.validate()
    }
}
