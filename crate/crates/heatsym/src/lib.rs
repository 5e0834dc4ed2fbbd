//! Symmetry analysis of 1-D transient heat conduction.
//!
//! The crate determines the point symmetries of `T_t = alpha * T_xx` admitted
//! by two classical initial-boundary-value problems on a semi-infinite solid
//! (constant surface temperature, constant surface heat flux), reduces each
//! problem to an ODE along the similarity variable `xi = x^2/t`, integrates
//! the reduced ODE into erf-type closed forms, and cross-checks those closed
//! forms against an independent theta-scheme finite-difference solver.
//!
//! Module map:
//! - [`exprcore`]: exact polynomial expressions over a fixed jet space
//! - [`liealg`]: vector fields, prolongations, commutators, symmetry checks
//! - [`bvpfilter`]: boundary/BC invariance constraints on the symmetry algebra
//! - [`reduction`]: similarity charts, reduced ODEs, closed-form integration
//! - [`analytic`]: numeric evaluation (erf, temperatures, fluxes, residuals)
//! - [`fdsolver`]: theta-scheme finite differences on a truncated domain
//! - [`harness`]: config ingestion, CSV emission, comparison metrics, CLI

pub mod analytic;
pub mod bvpfilter;
pub mod exprcore;
pub mod fdsolver;
pub mod harness;
pub mod liealg;
pub(crate) mod ratlin;
pub mod reduction;

use std::fmt;
use std::str::FromStr;

/// The two initial-boundary-value problems treated by the pipeline.
///
/// `Ibvp1`: constant surface temperature `T_s` at `x = 0`, initial `T_i`.
/// `Ibvp2`: constant inward surface flux `q0''` at `x = 0`, initial `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    Ibvp1,
    Ibvp2,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Ibvp1 => write!(f, "ibvp1"),
            Problem::Ibvp2 => write!(f, "ibvp2"),
        }
    }
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ibvp1" => Ok(Problem::Ibvp1),
            "ibvp2" => Ok(Problem::Ibvp2),
            other => Err(format!("unknown problem `{other}` (expected ibvp1 or ibvp2)")),
        }
    }
}
