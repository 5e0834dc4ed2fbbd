//! Numerical evaluation of the closed-form solutions.
//!
//! Provides the error function to 1e-12 absolute accuracy with no external
//! special-function dependency, the two temperature solutions, Fourier-law
//! fluxes from the analytically differentiated closed forms, and a
//! finite-difference residual check of the governing PDE.

use crate::Problem;
use std::f64::consts::PI;
use std::fmt;

/// AISI 304 stainless steel, W/(m K).
pub const AISI304_KCOND: f64 = 18.2;
/// AISI 304 density, kg/m^3.
pub const AISI304_RHO: f64 = 7822.0;
/// AISI 304 specific heat, J/(kg K).
pub const AISI304_C_HEAT: f64 = 536.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnalyticError {
    Domain { what: String },
    NonphysicalParams { what: String },
}

impl fmt::Display for AnalyticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticError::Domain { what } => write!(f, "domain error: {what}"),
            AnalyticError::NonphysicalParams { what } => {
                write!(f, "nonphysical parameters: {what}")
            }
        }
    }
}

impl std::error::Error for AnalyticError {}

/// Physical parameters of a conduction problem.
///
/// `alpha` is stored explicitly; use [`ThermalConfig::derived_alpha`] to
/// compute it from `kcond / (rho * c_heat)` when it is not prescribed.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalConfig {
    /// Thermal conductivity, W/(m K).
    pub kcond: f64,
    /// Density, kg/m^3.
    pub rho: f64,
    /// Specific heat, J/(kg K).
    pub c_heat: f64,
    /// Thermal diffusivity, m^2/s.
    pub alpha: f64,
    /// Initial temperature, K.
    pub t_init: f64,
    /// Surface temperature (first problem), K.
    pub t_surf: f64,
    /// Surface heat flux (second problem), W/m^2.
    pub q0pp: f64,
    /// Truncated domain length, m.
    pub length: f64,
}

impl ThermalConfig {
    pub fn derived_alpha(kcond: f64, rho: f64, c_heat: f64) -> f64 {
        kcond / (rho * c_heat)
    }

    /// The AISI 304 example data for either problem.
    pub fn aisi304(problem: Problem) -> ThermalConfig {
        let alpha = Self::derived_alpha(AISI304_KCOND, AISI304_RHO, AISI304_C_HEAT);
        match problem {
            Problem::Ibvp1 => ThermalConfig {
                kcond: AISI304_KCOND,
                rho: AISI304_RHO,
                c_heat: AISI304_C_HEAT,
                alpha,
                t_init: 300.0,
                t_surf: 900.0,
                q0pp: 0.0,
                length: 2.0,
            },
            Problem::Ibvp2 => ThermalConfig {
                kcond: AISI304_KCOND,
                rho: AISI304_RHO,
                c_heat: AISI304_C_HEAT,
                alpha,
                t_init: 0.0,
                t_surf: 0.0,
                q0pp: 5000.0,
                length: 10.0,
            },
        }
    }

    pub fn validate(&self) -> Result<(), AnalyticError> {
        if self.alpha <= 0.0 || !self.alpha.is_finite() {
            return Err(AnalyticError::NonphysicalParams {
                what: format!("alpha must be positive, got {}", self.alpha),
            });
        }
        if self.kcond <= 0.0 || !self.kcond.is_finite() {
            return Err(AnalyticError::NonphysicalParams {
                what: format!("kcond must be positive, got {}", self.kcond),
            });
        }
        if self.length <= 0.0 || !self.length.is_finite() {
            return Err(AnalyticError::NonphysicalParams {
                what: format!("L must be positive, got {}", self.length),
            });
        }
        Ok(())
    }
}

// Largest double below 1; erf saturates here to keep its range open.
fn one_minus() -> f64 {
    f64::from_bits(1.0f64.to_bits() - 1)
}

/// Maclaurin series for erf, used for |y| <= 2.5.
fn erf_series(y: f64) -> f64 {
    let y2 = y * y;
    let mut power_over_fact = y; // (-1)^n y^(2n+1) / n!
    let mut sum = y;
    let mut n = 0u32;
    loop {
        n += 1;
        power_over_fact *= -y2 / n as f64;
        let term = power_over_fact / (2 * n + 1) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) || n > 200 {
            break;
        }
    }
    sum * std::f64::consts::FRAC_2_SQRT_PI
}

/// Continued fraction for the upper incomplete gamma ratio Q(1/2, y^2),
/// which equals erfc(y) for y > 0. Modified Lentz iteration.
fn erfc_continued_fraction(y: f64) -> f64 {
    let a = 0.5;
    let x = y * y;
    const TINY: f64 = 1e-300;
    let b0 = x + 1.0 - a;
    let mut b = b0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b0;
    let mut h = d;
    for i in 1..200 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-17 {
            break;
        }
    }
    (-x).exp() * y * h / PI.sqrt()
}

/// Error function: |result - erf(y)| <= 1e-12, odd, range (-1, 1).
pub fn erf(y: f64) -> f64 {
    if y < 0.0 {
        return -erf(-y);
    }
    let v = if y <= 2.5 {
        erf_series(y)
    } else {
        1.0 - erfc_continued_fraction(y)
    };
    v.min(one_minus())
}

/// Complementary error function `1 - erf`.
pub fn erfc(y: f64) -> f64 {
    if y < 0.0 {
        return 2.0 - erfc(-y);
    }
    if y <= 2.5 {
        1.0 - erf_series(y)
    } else {
        erfc_continued_fraction(y)
    }
}

fn check_domain(x: f64, t: f64) -> Result<(), AnalyticError> {
    if t <= 0.0 || t.is_nan() {
        return Err(AnalyticError::Domain { what: format!("t must be positive, got {t}") });
    }
    if x < 0.0 {
        return Err(AnalyticError::Domain { what: format!("x must be nonnegative, got {x}") });
    }
    Ok(())
}

/// Similarity argument `x / (2 sqrt(alpha t))`.
fn eta(x: f64, t: f64, alpha: f64) -> f64 {
    x / (2.0 * (alpha * t).sqrt())
}

/// Constant-surface-temperature solution:
/// `T(x,t) = (T_i - T_s) erf(x / (2 sqrt(alpha t))) + T_s`.
pub fn temp_ibvp1(x: f64, t: f64, cfg: &ThermalConfig) -> Result<f64, AnalyticError> {
    cfg.validate()?;
    check_domain(x, t)?;
    Ok((cfg.t_init - cfg.t_surf) * erf(eta(x, t, cfg.alpha)) + cfg.t_surf)
}

/// Constant-surface-flux solution:
/// `T(x,t) = 2 (q0''/k) sqrt(alpha t / pi) e^{-x^2/(4 alpha t)}
///           - (q0''/k) x erfc(x / (2 sqrt(alpha t)))`.
pub fn temp_ibvp2(x: f64, t: f64, cfg: &ThermalConfig) -> Result<f64, AnalyticError> {
    cfg.validate()?;
    check_domain(x, t)?;
    let h = eta(x, t, cfg.alpha);
    let q_over_k = cfg.q0pp / cfg.kcond;
    Ok(2.0 * q_over_k * (cfg.alpha * t / PI).sqrt() * (-h * h).exp() - q_over_k * x * erfc(h))
}

/// Fourier-law flux `-k dT/dx` from the analytically differentiated solution.
///
/// For the flux problem this is `q0'' erfc(eta)`, exactly `q0''` at `x = 0`;
/// for the surface-temperature problem it is
/// `k (T_s - T_i) e^{-eta^2} / sqrt(pi alpha t)`.
pub fn flux(x: f64, t: f64, cfg: &ThermalConfig, problem: Problem) -> Result<f64, AnalyticError> {
    cfg.validate()?;
    check_domain(x, t)?;
    let h = eta(x, t, cfg.alpha);
    match problem {
        Problem::Ibvp1 => {
            Ok(cfg.kcond * (cfg.t_surf - cfg.t_init) * (-h * h).exp() / (PI * cfg.alpha * t).sqrt())
        }
        Problem::Ibvp2 => Ok(cfg.q0pp * erfc(h)),
    }
}

fn solution_of(problem: Problem) -> fn(f64, f64, &ThermalConfig) -> Result<f64, AnalyticError> {
    match problem {
        Problem::Ibvp1 => temp_ibvp1,
        Problem::Ibvp2 => temp_ibvp2,
    }
}

/// `|T_t - alpha T_xx|` by central differences with step `h` in each
/// variable. Second-order accurate in `h` for the smooth closed forms.
pub fn pde_residual(
    problem: Problem,
    x: f64,
    t: f64,
    h: f64,
    cfg: &ThermalConfig,
) -> Result<f64, AnalyticError> {
    if h <= 0.0 || h.is_nan() {
        return Err(AnalyticError::Domain { what: format!("step must be positive, got {h}") });
    }
    if x - h < 0.0 {
        return Err(AnalyticError::Domain {
            what: format!("stencil leaves the domain: x - h = {}", x - h),
        });
    }
    if t - h <= 0.0 || (t - h).is_nan() {
        return Err(AnalyticError::Domain {
            what: format!("stencil leaves the domain: t - h = {}", t - h),
        });
    }
    let f = solution_of(problem);
    let t_t = (f(x, t + h, cfg)? - f(x, t - h, cfg)?) / (2.0 * h);
    let t_xx = (f(x + h, t, cfg)? - 2.0 * f(x, t, cfg)? + f(x - h, t, cfg)?) / (h * h);
    Ok((t_t - cfg.alpha * t_xx).abs())
}
