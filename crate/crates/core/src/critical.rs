//! Critical screening strength of ECSC bound states.
//!
//! The oscillating screened potential holds only finitely many levels; each
//! (n, l) state unbinds at a critical delta_c. The search bisects on delta
//! with a predicate built on [`converge_state`]: near threshold, the
//! truncated domain fakes binding unless the full grid-stability machinery
//! vets each probe.
//!
//! GESC has no critical screening (its large-b limit is still a Coulomb
//! tail that binds every level), so the search is deliberately ECSC-only.

use crate::error::{Result, SolverError};
use crate::potentials::Potential;
use crate::spectrum::{converge_state, SolverConfig};

/// Smallest bisection tolerance the quoted reference values can support.
const MIN_TOL: f64 = 1e-5;

/// Probe ceiling; every tabulated state is unbound well before this.
const DELTA_CEILING: f64 = 2.0;

/// Descent floor when hunting for a bound lower bracket.
const DELTA_FLOOR: f64 = 1e-5;

/// Energies above this are not accepted as proof of binding at a probe.
const BINDING_MARGIN: f64 = -1e-10;

/// ECSC family parameters with the screening strength left free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcscFamily {
    pub a: f64,
    pub g: f64,
}

impl Default for EcscFamily {
    fn default() -> Self {
        Self { a: 1.0, g: 1.0 }
    }
}

impl EcscFamily {
    fn at(&self, delta: f64) -> Potential {
        Potential::Ecsc {
            a: self.a,
            delta1: delta,
            delta2: delta,
            g: self.g,
        }
    }
}

/// Result of a critical-screening bisection.
#[derive(Debug, Clone, Copy)]
pub struct CriticalResult {
    pub n: u32,
    pub l: u32,
    /// Midpoint of the final bracket.
    pub delta_c: f64,
    /// Half-width of the final bracket; the state is bound at
    /// `delta_c - bracket_width` and unbound at `delta_c + bracket_width`.
    pub bracket_width: f64,
    /// Converged energy at the bound edge of the bracket.
    pub energy_at_lower: f64,
}

/// Locate delta_c for state (n, l) of the ECSC family to within `tol`.
pub fn find_critical_screening(
    family: EcscFamily,
    n: u32,
    l: u32,
    tol: f64,
    base: &SolverConfig,
) -> Result<CriticalResult> {
    if !(tol >= MIN_TOL) {
        return Err(SolverError::InvalidArgument(format!(
            "tolerance {tol} below the supported floor {MIN_TOL}"
        )));
    }
    if n == 0 || l >= n {
        return Err(SolverError::InvalidArgument(format!(
            "need n > l, got n = {n}, l = {l}"
        )));
    }

    let probe = |delta: f64| -> Option<f64> {
        match converge_state(family.at(delta), n, l, base) {
            Ok(state) if state.energy < BINDING_MARGIN => Some(state.energy),
            _ => None,
        }
    };

    if probe(DELTA_CEILING).is_some() {
        return Err(SolverError::NoUpperBracket {
            n,
            l,
            delta: DELTA_CEILING,
        });
    }

    // Geometric descent to find a bound lower edge.
    let mut hi = DELTA_CEILING;
    let mut lo = DELTA_CEILING / 2.0;
    let mut energy_lo;
    loop {
        match probe(lo) {
            Some(e) => {
                energy_lo = e;
                break;
            }
            None => {
                hi = lo;
                lo /= 2.0;
                if lo < DELTA_FLOOR {
                    return Err(SolverError::NoLowerBracket { n, l, delta: lo });
                }
            }
        }
    }

    while hi - lo > 2.0 * tol {
        let mid = 0.5 * (lo + hi);
        match probe(mid) {
            Some(e) => {
                lo = mid;
                energy_lo = e;
            }
            None => hi = mid,
        }
    }

    Ok(CriticalResult {
        n,
        l,
        delta_c: 0.5 * (lo + hi),
        bracket_width: 0.5 * (hi - lo),
        energy_at_lower: energy_lo,
    })
}
