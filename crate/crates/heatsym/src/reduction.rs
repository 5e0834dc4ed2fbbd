//! Similarity reduction and closed-form integration.
//!
//! For an admitted scaling operator `a*(2t d/dt + x d/dx) + m*T d/dT` with
//! `n = m/a` a nonnegative integer, the solution ansatz is `T = x^n V(xi)`
//! with invariant `xi = x^2/t`. Substituting the ansatz into the heat
//! equation is done symbolically over polynomials in `(x, 1/t, V, V', V'')`;
//! the residual must factor through functions of `xi` alone, which yields the
//! reduced ODE. The two paper cases `n = 0, 1` integrate in closed form into
//! erf-type solutions whose constants are then fitted from the boundary
//! conditions (the far-field decay condition is applied here, during the
//! fit).
//!
//! Fractional powers of `xi` never enter the polynomial engine: the first
//! integral `W = V'` is handled in a dedicated representation (half-integer
//! exponent of `xi` plus a Gaussian factor).

use crate::analytic::{erf, ThermalConfig};
use crate::bvpfilter::Row6;
use crate::Problem;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    /// Operator outside the supported scaling family.
    NotScaling { coefficient: &'static str, detail: String },
    /// The substituted residual does not factor through `xi` (or is otherwise
    /// malformed); guards implementation bugs.
    ReductionFailure { detail: String },
    /// Only `n = 0` and `n = 1` integrate against the closed-form library.
    UnsupportedExponent { n: u32 },
    /// The reduced ODE is not of the integrable shape `a1*xi V'' + (b0 +
    /// alpha_inv*xi/4*a1...) V' = 0` handled here.
    UnsupportedOdeForm { detail: String },
    NonphysicalParams { what: String },
    /// Formula and problem disagree (e.g. fitting the flux data to the
    /// surface-temperature form).
    FitMismatch { detail: String },
    /// Evaluation of an unfitted form, or outside the domain.
    Evaluation { detail: String },
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::NotScaling { coefficient, detail } => {
                write!(f, "operator is not a supported scaling: {coefficient} {detail}")
            }
            ReductionError::ReductionFailure { detail } => {
                write!(f, "reduction failure: {detail}")
            }
            ReductionError::UnsupportedExponent { n } => {
                write!(f, "no closed-form kernel for exponent n = {n} (supported: 0, 1)")
            }
            ReductionError::UnsupportedOdeForm { detail } => {
                write!(f, "reduced ODE outside the integrable family: {detail}")
            }
            ReductionError::NonphysicalParams { what } => {
                write!(f, "nonphysical parameters: {what}")
            }
            ReductionError::FitMismatch { detail } => write!(f, "fit mismatch: {detail}"),
            ReductionError::Evaluation { detail } => write!(f, "evaluation error: {detail}"),
        }
    }
}

impl std::error::Error for ReductionError {}

/// Similarity variables for an admitted scaling operator: `xi = x^2/t`,
/// `V(xi) = T / x^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityChart {
    exponent: u32,
    source: Row6,
}

impl SimilarityChart {
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn source(&self) -> &Row6 {
        &self.source
    }
}

impl fmt::Display for SimilarityChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xi = x^2/t, ")?;
        match self.exponent {
            0 => write!(f, "V(xi) = T"),
            1 => write!(f, "V(xi) = T/x"),
            n => write!(f, "V(xi) = T/x^{n}"),
        }
    }
}

/// Build the chart for a coefficient vector `(k1..k6)`.
///
/// Requires `k1 = k2 = k4 = k5 = 0`, `k3 != 0`, and `k6/k3` a nonnegative
/// integer `n`.
pub fn similarity_chart(v: &Row6) -> Result<SimilarityChart, ReductionError> {
    for (idx, name) in [(0, "k1"), (1, "k2"), (3, "k4"), (4, "k5")] {
        if !v[idx].is_zero() {
            return Err(ReductionError::NotScaling {
                coefficient: name,
                detail: format!("= {} (must be 0)", v[idx]),
            });
        }
    }
    if v[2].is_zero() {
        return Err(ReductionError::NotScaling {
            coefficient: "k3",
            detail: "= 0 (must be nonzero)".to_string(),
        });
    }
    let ratio = &v[5] / &v[2];
    if !ratio.is_integer() || ratio.is_negative() {
        return Err(ReductionError::NotScaling {
            coefficient: "k6",
            detail: format!("k6/k3 = {ratio} is not a nonnegative integer"),
        });
    }
    let exponent = ratio
        .to_integer()
        .to_u32()
        .ok_or_else(|| ReductionError::NotScaling {
            coefficient: "k6",
            detail: format!("k6/k3 = {ratio} too large"),
        })?;
    Ok(SimilarityChart { exponent, source: v.clone() })
}

// ---------------------------------------------------------------------------
// Internal polynomial engine over (x, 1/t, V, V', V'', V''') with alpha powers.

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct SimMono {
    x: i64,
    t_inv: i64,
    v: [u32; 4],
    alpha: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct SimPoly(BTreeMap<SimMono, BigRational>);

impl SimPoly {
    fn zero() -> Self {
        SimPoly(BTreeMap::new())
    }

    fn add_term(&mut self, mono: SimMono, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.0.entry(mono).or_insert_with(BigRational::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.0.remove(&mono);
        }
    }

    fn sub(&self, other: &SimPoly) -> SimPoly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(*m, -c.clone());
        }
        out
    }

    fn shift_alpha(&self, da: i64) -> SimPoly {
        SimPoly(
            self.0
                .iter()
                .map(|(m, c)| (SimMono { alpha: m.alpha + da, ..*m }, c.clone()))
                .collect(),
        )
    }

    /// d/dx with the chain rule through `xi = x^2/t`: each `V_j` contributes
    /// `V_{j+1} * 2x/t`.
    fn d_dx(&self) -> Result<SimPoly, ReductionError> {
        let mut out = SimPoly::zero();
        for (m, c) in &self.0 {
            if m.x != 0 {
                out.add_term(
                    SimMono { x: m.x - 1, ..*m },
                    c * BigRational::from_integer(BigInt::from(m.x)),
                );
            }
            for j in 0..4 {
                if m.v[j] == 0 {
                    continue;
                }
                if j == 3 {
                    return Err(ReductionError::ReductionFailure {
                        detail: "derivative order above V''' required".to_string(),
                    });
                }
                let mut v = m.v;
                v[j] -= 1;
                v[j + 1] += 1;
                out.add_term(
                    SimMono { x: m.x + 1, t_inv: m.t_inv + 1, v, alpha: m.alpha },
                    c * BigRational::from_integer(BigInt::from(2 * m.v[j] as i64)),
                );
            }
        }
        Ok(out)
    }

    /// d/dt; each `V_j` contributes `V_{j+1} * (-x^2/t^2)`.
    fn d_dt(&self) -> Result<SimPoly, ReductionError> {
        let mut out = SimPoly::zero();
        for (m, c) in &self.0 {
            if m.t_inv != 0 {
                out.add_term(
                    SimMono { t_inv: m.t_inv + 1, ..*m },
                    c * BigRational::from_integer(BigInt::from(-m.t_inv)),
                );
            }
            for j in 0..4 {
                if m.v[j] == 0 {
                    continue;
                }
                if j == 3 {
                    return Err(ReductionError::ReductionFailure {
                        detail: "derivative order above V''' required".to_string(),
                    });
                }
                let mut v = m.v;
                v[j] -= 1;
                v[j + 1] += 1;
                out.add_term(
                    SimMono { x: m.x + 2, t_inv: m.t_inv + 2, v, alpha: m.alpha },
                    c * BigRational::from_integer(BigInt::from(-(m.v[j] as i64))),
                );
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Reduced ODE.

/// One term `coeff * alpha^alpha_pow * xi^xi_pow`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiTerm {
    pub coeff: BigRational,
    pub xi_pow: u32,
    pub alpha_pow: i64,
}

/// Polynomial in `xi` whose coefficients are rationals times powers of
/// `alpha` (negative powers meaning `alpha_inv`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiPoly {
    terms: Vec<XiTerm>,
}

impl XiPoly {
    pub fn zero() -> Self {
        XiPoly { terms: Vec::new() }
    }

    pub fn term(coeff: i64, xi_pow: u32, alpha_pow: i64) -> XiTerm {
        XiTerm { coeff: BigRational::from_integer(BigInt::from(coeff)), xi_pow, alpha_pow }
    }

    pub fn from_terms(terms: Vec<XiTerm>) -> Self {
        let mut out = XiPoly { terms };
        out.normalize_order();
        out
    }

    fn normalize_order(&mut self) {
        self.terms.retain(|t| !t.coeff.is_zero());
        self.terms.sort_by_key(|t| (t.xi_pow, t.alpha_pow));
    }

    pub fn terms(&self) -> &[XiTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn scale(&mut self, factor: &BigRational) {
        for t in &mut self.terms {
            t.coeff = &t.coeff * factor;
        }
    }

    fn shift_alpha(&mut self, da: i64) {
        for t in &mut self.terms {
            t.alpha_pow += da;
        }
    }
}

impl fmt::Display for XiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = t.coeff.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || (t.alpha_pow == 0 && t.xi_pow == 0) {
                factors.push(mag.to_string());
            }
            match t.alpha_pow {
                0 => {}
                1 => factors.push("alpha".to_string()),
                -1 => factors.push("alpha_inv".to_string()),
                p if p > 0 => factors.push(format!("alpha^{p}")),
                p => factors.push(format!("alpha_inv^{}", -p)),
            }
            match t.xi_pow {
                0 => {}
                1 => factors.push("xi".to_string()),
                p => factors.push(format!("xi^{p}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// The reduced ODE `A(xi) V'' + B(xi) V' + C(xi) V = 0`, denominators
/// cleared, normalized so `A` has coprime integer coefficients with positive
/// leading coefficient and no `alpha` factor.
///
/// `C` is identically zero for the charts with `n <= 1` treated by the
/// closed-form library; it is carried so that higher scaling exponents still
/// reduce correctly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedOde {
    pub second: XiPoly,
    pub first: XiPoly,
    pub zeroth: XiPoly,
}

impl fmt::Display for ReducedOde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*V'' + ({})*V'", self.second, self.first)?;
        if !self.zeroth.is_zero() {
            write!(f, " + ({})*V", self.zeroth)?;
        }
        write!(f, " = 0")
    }
}

/// Substitute `T = x^n V(x^2/t)` into `T_t - alpha T_xx` and factor the
/// residual through `xi`.
pub fn reduce_pde(chart: &SimilarityChart) -> Result<ReducedOde, ReductionError> {
    let n = chart.exponent as i64;
    let mut ansatz = SimPoly::zero();
    ansatz.add_term(
        SimMono { x: n, t_inv: 0, v: [1, 0, 0, 0], alpha: 0 },
        BigRational::one(),
    );

    let t_t = ansatz.d_dt()?;
    let t_xx = ansatz.d_dx()?.d_dx()?;
    let residual = t_t.sub(&t_xx.shift_alpha(1));

    // residual = x^n * (1/t) * sum_j g_j(xi) V_j requires each monomial
    // x^p (1/t)^q V_j to satisfy p - n = 2 (q - 1); then xi^m with m = q - 1.
    let mut collected: Vec<(usize, i64, i64, BigRational)> = Vec::new();
    let mut min_m = 0i64;
    for (m, c) in &residual.0 {
        let total_v: u32 = m.v.iter().sum();
        if total_v != 1 {
            return Err(ReductionError::ReductionFailure {
                detail: format!("residual is not linear in V and its derivatives: {m:?}"),
            });
        }
        let j = m.v.iter().position(|&e| e == 1).unwrap();
        let pow_m = m.t_inv - 1;
        if m.x - n != 2 * pow_m {
            return Err(ReductionError::ReductionFailure {
                detail: format!(
                    "residual does not factor through xi: x^{} (1/t)^{} with n = {n}",
                    m.x, m.t_inv
                ),
            });
        }
        min_m = min_m.min(pow_m);
        collected.push((j, pow_m, m.alpha, c.clone()));
    }
    if collected.is_empty() {
        return Err(ReductionError::ReductionFailure { detail: "empty residual".to_string() });
    }

    // Clear negative xi powers.
    let shift = -min_m;
    let mut polys = [XiPoly::zero(), XiPoly::zero(), XiPoly::zero()];
    for (j, pow_m, alpha_pow, coeff) in collected {
        if j > 2 {
            return Err(ReductionError::ReductionFailure {
                detail: "third derivative of V in residual".to_string(),
            });
        }
        polys[j].terms.push(XiTerm {
            coeff,
            xi_pow: u32::try_from(pow_m + shift).expect("shift clears negatives"),
            alpha_pow,
        });
    }
    let [mut zeroth, mut first, mut second] = polys;
    for p in [&mut zeroth, &mut first, &mut second] {
        p.normalize_order();
    }
    if second.is_zero() {
        return Err(ReductionError::ReductionFailure {
            detail: "V'' coefficient is identically zero".to_string(),
        });
    }

    // Normalize: remove the common alpha power of A, scale to coprime
    // integer coefficients in A, and make A's leading coefficient positive.
    let a0 = second.terms[0].alpha_pow;
    if second.terms.iter().all(|t| t.alpha_pow == a0) {
        for p in [&mut zeroth, &mut first, &mut second] {
            p.shift_alpha(-a0);
        }
    }
    let all_terms = || zeroth.terms.iter().chain(&first.terms).chain(&second.terms);
    let denom_lcm = all_terms()
        .fold(BigInt::one(), |acc, t| num_integer::lcm(acc, t.coeff.denom().clone()));
    let numer_gcd = all_terms()
        .fold(BigInt::zero(), |acc, t| num_integer::gcd(acc, t.coeff.numer().clone()));
    let mut factor = BigRational::new(denom_lcm, numer_gcd);
    if second.terms.last().unwrap().coeff.is_negative() {
        factor = -factor;
    }
    for p in [&mut zeroth, &mut first, &mut second] {
        p.scale(&factor);
    }

    Ok(ReducedOde { second, first, zeroth })
}

// ---------------------------------------------------------------------------
// Closed forms.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaId {
    /// `T = 2 c1 sqrt(alpha pi) erf(x/(2 sqrt(alpha t))) + c2` (n = 0).
    Ibvp1Erf,
    /// `T = -2 c1 sqrt(t) e^{-x^2/(4 alpha t)}
    ///      - c1 x sqrt(pi/alpha) erf(x/(2 sqrt(alpha t))) + c2 x` (n = 1).
    Ibvp2Flux,
}

impl FormulaId {
    pub fn name(self) -> &'static str {
        match self {
            FormulaId::Ibvp1Erf => "ibvp1_erf",
            FormulaId::Ibvp2Flux => "ibvp2_flux",
        }
    }
}

/// Integration constants: symbolic placeholders until fitted.
#[derive(Debug, Clone, PartialEq)]
pub enum Constants {
    Symbolic,
    Fitted { c1: f64, c2: f64, alpha: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub exponent: u32,
    pub formula: FormulaId,
    pub constants: Constants,
}

impl ClosedForm {
    /// Numeric evaluation; requires fitted constants, `x >= 0`, `t > 0`.
    pub fn evaluate(&self, x: f64, t: f64) -> Result<f64, ReductionError> {
        let Constants::Fitted { c1, c2, alpha } = self.constants else {
            return Err(ReductionError::Evaluation {
                detail: "constants are symbolic; call fit_constants first".to_string(),
            });
        };
        if t <= 0.0 || t.is_nan() || x < 0.0 {
            return Err(ReductionError::Evaluation {
                detail: format!("outside domain: x = {x}, t = {t}"),
            });
        }
        let eta = x / (2.0 * (alpha * t).sqrt());
        match self.formula {
            FormulaId::Ibvp1Erf => Ok(2.0 * c1 * (alpha * PI).sqrt() * erf(eta) + c2),
            FormulaId::Ibvp2Flux => Ok(-2.0 * c1 * t.sqrt() * (-eta * eta).exp()
                - c1 * x * (PI / alpha).sqrt() * erf(eta)
                + c2 * x),
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.formula {
            FormulaId::Ibvp1Erf => {
                write!(f, "T(x,t) = 2*c1*sqrt(alpha*pi)*erf(x/(2*sqrt(alpha*t))) + c2")?
            }
            FormulaId::Ibvp2Flux => write!(
                f,
                "T(x,t) = -2*c1*sqrt(t)*exp(-x^2/(4*alpha*t)) \
                 - c1*x*sqrt(pi/alpha)*erf(x/(2*sqrt(alpha*t))) + c2*x"
            )?,
        }
        match &self.constants {
            Constants::Symbolic => write!(f, "  (c1, c2 symbolic)"),
            Constants::Fitted { c1, c2, alpha } => {
                write!(f, "  with c1 = {c1:.12e}, c2 = {c2:.12e}, alpha = {alpha:.12e}")
            }
        }
    }
}

/// Integrate the reduced ODE against the closed-form kernel library.
///
/// The first integral is `W = V' = c xi^(-b0/a1) e^(-xi/(4 alpha))` from
/// `W'/W = -B/A`; the second quadrature resolves `xi^(-1/2)` (n = 0) to the
/// erf form and `xi^(-3/2)` (n = 1), by one integration by parts, to the
/// erf-plus-Gaussian form.
pub fn integrate_reduced(ode: &ReducedOde, n: u32) -> Result<ClosedForm, ReductionError> {
    if n > 1 {
        return Err(ReductionError::UnsupportedExponent { n });
    }
    if !ode.zeroth.is_zero() {
        return Err(ReductionError::UnsupportedOdeForm {
            detail: "zeroth-order term present".to_string(),
        });
    }
    // A must be a single pure term a1 * xi.
    let [a_term] = ode.second.terms() else {
        return Err(ReductionError::UnsupportedOdeForm {
            detail: format!("V'' coefficient {} is not a single term", ode.second),
        });
    };
    if a_term.xi_pow != 1 || a_term.alpha_pow != 0 {
        return Err(ReductionError::UnsupportedOdeForm {
            detail: format!("V'' coefficient {} is not a1*xi", ode.second),
        });
    }
    let a1 = &a_term.coeff;

    // B must be b0 + b1 * alpha_inv * xi with b1/a1 = 1/4.
    let mut b0 = BigRational::zero();
    let mut b1 = BigRational::zero();
    for t in ode.first.terms() {
        match (t.xi_pow, t.alpha_pow) {
            (0, 0) => b0 = t.coeff.clone(),
            (1, -1) => b1 = t.coeff.clone(),
            _ => {
                return Err(ReductionError::UnsupportedOdeForm {
                    detail: format!("V' coefficient {} has unexpected term", ode.first),
                })
            }
        }
    }
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if &b1 / a1 != quarter {
        return Err(ReductionError::UnsupportedOdeForm {
            detail: "Gaussian rate is not 1/(4 alpha)".to_string(),
        });
    }
    // W = xi^(-b0/a1) e^(-xi/(4 alpha)); in halves:
    let half_exponent = -(&BigRational::from_integer(BigInt::from(2)) * &b0 / a1);
    let halves = if half_exponent.is_integer() {
        half_exponent.to_integer().to_i64()
    } else {
        None
    };
    let formula = match (n, halves) {
        (0, Some(-1)) => FormulaId::Ibvp1Erf,
        (1, Some(-3)) => FormulaId::Ibvp2Flux,
        _ => {
            return Err(ReductionError::UnsupportedOdeForm {
                detail: format!(
                    "kernel xi^({half_exponent}/2) e^(-xi/4alpha) not in library for n = {n}"
                ),
            })
        }
    };
    Ok(ClosedForm { exponent: n, formula, constants: Constants::Symbolic })
}

/// Fit `c1`, `c2` from the initial/boundary conditions.
///
/// The far-field decay condition eliminates the growing branch: for the flux
/// problem it forces `c2 = c1 sqrt(pi/alpha)`, and the surface flux then
/// pins `c1`.
pub fn fit_constants(
    form: &ClosedForm,
    problem: Problem,
    cfg: &ThermalConfig,
) -> Result<ClosedForm, ReductionError> {
    if cfg.alpha <= 0.0 || cfg.alpha.is_nan() {
        return Err(ReductionError::NonphysicalParams {
            what: format!("alpha = {} must be positive", cfg.alpha),
        });
    }
    if cfg.kcond <= 0.0 || cfg.kcond.is_nan() {
        return Err(ReductionError::NonphysicalParams {
            what: format!("kcond = {} must be positive", cfg.kcond),
        });
    }
    let alpha = cfg.alpha;
    let constants = match (problem, form.formula) {
        (Problem::Ibvp1, FormulaId::Ibvp1Erf) => {
            // V(0) = T_s and V(inf) = T_i: erf spans [0, 1).
            let c2 = cfg.t_surf;
            let c1 = (cfg.t_init - cfg.t_surf) / (2.0 * (alpha * PI).sqrt());
            Constants::Fitted { c1, c2, alpha }
        }
        (Problem::Ibvp2, FormulaId::Ibvp2Flux) => {
            // Decay at infinity: c2 = c1 sqrt(pi/alpha); surface flux
            // -k T_x(0,t) = q0'' gives c2 = -q0''/k.
            let c2 = -cfg.q0pp / cfg.kcond;
            let c1 = c2 * (alpha / PI).sqrt();
            Constants::Fitted { c1, c2, alpha }
        }
        (p, f) => {
            return Err(ReductionError::FitMismatch {
                detail: format!("formula {} does not solve {p}", f.name()),
            })
        }
    };
    Ok(ClosedForm { constants, ..form.clone() })
}

/// Full symbolic-to-numeric chain for one problem: chart, reduced ODE,
/// closed form with fitted constants.
pub fn reduce_problem(
    problem: Problem,
    v: &Row6,
    cfg: &ThermalConfig,
) -> Result<(SimilarityChart, ReducedOde, ClosedForm), ReductionError> {
    let chart = similarity_chart(v)?;
    let ode = reduce_pde(&chart)?;
    let form = integrate_reduced(&ode, chart.exponent())?;
    let fitted = fit_constants(&form, problem, cfg)?;
    Ok((chart, ode, fitted))
}
