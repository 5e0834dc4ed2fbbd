//! Vector fields on `(x, t, T)`, their prolongations, and the symmetry
//! algebra of the heat equation.
//!
//! The algebra is spanned by
//!
//! ```text
//! X1 = d/dt                 X2 = d/dx             X3 = 2t d/dt + x d/dx
//! X4 = 2t d/dx - (1/alpha) x T d/dT
//! X5 = 4t^2 d/dt + 4xt d/dx - (1/alpha)(x^2 + 2 alpha t) T d/dT
//! X6 = T d/dT               X_inf = f(t,x) d/dT with f_t = alpha f_xx
//! ```
//!
//! [`is_symmetry`] verifies membership exactly: the second prolongation is
//! applied to `T_t - alpha*T_xx` and the result is restricted to the equation
//! manifold; the outcome must be the zero polynomial, not a small residual.

use crate::exprcore::{
    parse_expr, Coordinate, Direction, Expr, JetOverflow, SymConst, Symbol,
};
use crate::ratlin;
use num_rational::BigRational;

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieError {
    /// A component depends on a jet coordinate of order >= 1.
    NotBaseFunction { component: &'static str, coordinate: Coordinate },
    /// `inf_generator` argument may depend on x and t only.
    BadInfArgument { coordinate: Coordinate },
    /// An expression uses a jet coordinate with no extended coefficient.
    UncoveredCoordinate { coordinate: Coordinate },
    Jet(JetOverflow),
    /// A field is not in the span of X1..X6 plus f(t,x) d/dT.
    NotInSpan,
}

impl fmt::Display for LieError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieError::NotBaseFunction { component, coordinate } => write!(
                f,
                "{component} must be a function of (x, t, T) but depends on {}",
                coordinate.name()
            ),
            LieError::BadInfArgument { coordinate } => write!(
                f,
                "inf_generator argument must depend on x, t only; found {}",
                coordinate.name()
            ),
            LieError::UncoveredCoordinate { coordinate } => write!(
                f,
                "expression depends on {} which has no extended coefficient at this order",
                coordinate.name()
            ),
            LieError::Jet(j) => j.fmt(f),
            LieError::NotInSpan => write!(f, "field does not expand in the symmetry algebra"),
        }
    }
}

impl std::error::Error for LieError {}

impl From<JetOverflow> for LieError {
    fn from(j: JetOverflow) -> Self {
        LieError::Jet(j)
    }
}

/// Infinitesimal generator `xi d/dx + tau d/dt + phi d/dT`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    xi: Expr,
    tau: Expr,
    phi: Expr,
}

fn check_base_only(component: &'static str, e: &Expr) -> Result<(), LieError> {
    for c in Coordinate::ALL {
        if !c.is_base() && e.depends_on(Symbol::Coord(c)) {
            return Err(LieError::NotBaseFunction { component, coordinate: c });
        }
    }
    Ok(())
}

impl VectorField {
    /// Components must be functions of `(x, t, T)` and constants only.
    pub fn new(xi: Expr, tau: Expr, phi: Expr) -> Result<Self, LieError> {
        check_base_only("xi", &xi)?;
        check_base_only("tau", &tau)?;
        check_base_only("phi", &phi)?;
        Ok(VectorField { xi, tau, phi })
    }

    pub fn zero() -> Self {
        VectorField { xi: Expr::zero(), tau: Expr::zero(), phi: Expr::zero() }
    }

    pub fn xi(&self) -> &Expr {
        &self.xi
    }

    pub fn tau(&self) -> &Expr {
        &self.tau
    }

    pub fn phi(&self) -> &Expr {
        &self.phi
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_zero() && self.tau.is_zero() && self.phi.is_zero()
    }

    /// Action on a function of `(x, t, T)`: `xi g_x + tau g_t + phi g_T`.
    pub fn apply_base(&self, g: &Expr) -> Expr {
        let gx = g.differentiate(Symbol::Coord(Coordinate::X));
        let gt = g.differentiate(Symbol::Coord(Coordinate::Time));
        let gu = g.differentiate(Symbol::Coord(Coordinate::Temp));
        &(&(&self.xi * &gx) + &(&self.tau * &gt)) + &(&self.phi * &gu)
    }

    pub fn scaled(&self, s: &Expr) -> VectorField {
        VectorField {
            xi: s * &self.xi,
            tau: s * &self.tau,
            phi: s * &self.phi,
        }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            xi: &self.xi + &other.xi,
            tau: &self.tau + &other.tau,
            phi: &self.phi + &other.phi,
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField {
            xi: &self.xi - &other.xi,
            tau: &self.tau - &other.tau,
            phi: &self.phi - &other.phi,
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) d/dx + ({}) d/dt + ({}) d/dT", self.xi, self.tau, self.phi)
    }
}

/// The six named generators of the heat-equation symmetry algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorId {
    X1,
    X2,
    X3,
    X4,
    X5,
    X6,
}

impl GeneratorId {
    pub const ALL: [GeneratorId; 6] = [
        GeneratorId::X1,
        GeneratorId::X2,
        GeneratorId::X3,
        GeneratorId::X4,
        GeneratorId::X5,
        GeneratorId::X6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorId::X1 => "X1",
            GeneratorId::X2 => "X2",
            GeneratorId::X3 => "X3",
            GeneratorId::X4 => "X4",
            GeneratorId::X5 => "X5",
            GeneratorId::X6 => "X6",
        }
    }
}

fn lit(s: &str) -> Expr {
    parse_expr(s).expect("internal expression literal")
}

pub fn named_generator(id: GeneratorId) -> VectorField {
    let (xi, tau, phi) = match id {
        GeneratorId::X1 => ("0", "1", "0"),
        GeneratorId::X2 => ("1", "0", "0"),
        GeneratorId::X3 => ("x", "2*t", "0"),
        GeneratorId::X4 => ("2*t", "0", "-alpha_inv*x*T"),
        GeneratorId::X5 => ("4*x*t", "4*t^2", "-alpha_inv*x^2*T - 2*t*T"),
        GeneratorId::X6 => ("0", "0", "T"),
    };
    VectorField { xi: lit(xi), tau: lit(tau), phi: lit(phi) }
}

/// `X_inf = f(t,x) d/dT`.
pub fn inf_generator(f: &Expr) -> Result<VectorField, LieError> {
    for c in Coordinate::ALL {
        if !matches!(c, Coordinate::X | Coordinate::Time) && f.depends_on(Symbol::Coord(c)) {
            return Err(LieError::BadInfArgument { coordinate: c });
        }
    }
    Ok(VectorField { xi: Expr::zero(), tau: Expr::zero(), phi: f.clone() })
}

/// Coefficient of one generator in a linear combination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficient {
    /// The named symbolic constant `k_i`.
    Sym,
    Num(BigRational),
}

/// `k1 X1 + ... + k6 X6` with symbolic or rational coefficients.
pub fn linear_combination(coeffs: &[Coefficient; 6]) -> VectorField {
    let mut acc = VectorField::zero();
    for (i, (id, coeff)) in GeneratorId::ALL.iter().zip(coeffs).enumerate() {
        let scale = match coeff {
            Coefficient::Sym => Expr::constant(SymConst::KS[i]),
            Coefficient::Num(r) => Expr::from_rational(r.clone()),
        };
        acc = acc.add(&named_generator(*id).scaled(&scale));
    }
    acc
}

/// The fully symbolic operator `k1 X1 + ... + k6 X6`.
pub fn general_operator() -> VectorField {
    linear_combination(&[
        Coefficient::Sym,
        Coefficient::Sym,
        Coefficient::Sym,
        Coefficient::Sym,
        Coefficient::Sym,
        Coefficient::Sym,
    ])
}

/// Operator with the given rational coefficient vector.
pub fn operator_from_vector(v: &[BigRational; 6]) -> VectorField {
    let coeffs: Vec<Coefficient> = v.iter().map(|r| Coefficient::Num(r.clone())).collect();
    linear_combination(&coeffs.try_into().unwrap())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProlongationOrder {
    First,
    Second,
}

/// A generator extended to first- or second-order jet coordinates.
///
/// The extended coefficients satisfy the defining identities
/// `phi_x = D_x(phi) - T_x D_x(xi) - T_t D_x(tau)`,
/// `phi_t = D_t(phi) - T_x D_t(xi) - T_t D_t(tau)`,
/// `phi_xx = D_x(phi_x) - T_xx D_x(xi) - T_xt D_x(tau)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProlongedField {
    base: VectorField,
    phi_x: Expr,
    phi_t: Expr,
    phi_xx: Option<Expr>,
}

impl ProlongedField {
    pub fn base(&self) -> &VectorField {
        &self.base
    }

    pub fn phi_x(&self) -> &Expr {
        &self.phi_x
    }

    pub fn phi_t(&self) -> &Expr {
        &self.phi_t
    }

    pub fn phi_xx(&self) -> Option<&Expr> {
        self.phi_xx.as_ref()
    }

    pub fn order(&self) -> ProlongationOrder {
        if self.phi_xx.is_some() {
            ProlongationOrder::Second
        } else {
            ProlongationOrder::First
        }
    }

    /// Apply the prolonged generator to an expression.
    ///
    /// `F` may use `T_xx` only at second order and may never use `T_xt`,
    /// `T_tt`, or `T_xxx` (those have no extended coefficient here).
    pub fn apply_to(&self, f: &Expr) -> Result<Expr, LieError> {
        for c in [Coordinate::TempXT, Coordinate::TempTT, Coordinate::TempXXX] {
            if f.depends_on(Symbol::Coord(c)) {
                return Err(LieError::UncoveredCoordinate { coordinate: c });
            }
        }
        if self.phi_xx.is_none() && f.depends_on(Symbol::Coord(Coordinate::TempXX)) {
            return Err(LieError::UncoveredCoordinate { coordinate: Coordinate::TempXX });
        }
        let d = |c: Coordinate| f.differentiate(Symbol::Coord(c));
        let mut out = self.base.apply_base(f);
        out = &out + &(&self.phi_x * &d(Coordinate::TempX));
        out = &out + &(&self.phi_t * &d(Coordinate::TempT));
        if let Some(phi_xx) = &self.phi_xx {
            out = &out + &(phi_xx * &d(Coordinate::TempXX));
        }
        Ok(out)
    }
}

/// First or second prolongation via total derivatives.
pub fn prolong(field: &VectorField, order: ProlongationOrder) -> Result<ProlongedField, LieError> {
    let tx = Expr::coordinate(Coordinate::TempX);
    let tt = Expr::coordinate(Coordinate::TempT);

    let dx_xi = field.xi.total_derivative(Direction::X)?;
    let dx_tau = field.tau.total_derivative(Direction::X)?;
    let dt_xi = field.xi.total_derivative(Direction::T)?;
    let dt_tau = field.tau.total_derivative(Direction::T)?;

    let phi_x = &(&field.phi.total_derivative(Direction::X)? - &(&tx * &dx_xi)) - &(&tt * &dx_tau);
    let phi_t = &(&field.phi.total_derivative(Direction::T)? - &(&tx * &dt_xi)) - &(&tt * &dt_tau);

    let phi_xx = match order {
        ProlongationOrder::First => None,
        ProlongationOrder::Second => {
            let txx = Expr::coordinate(Coordinate::TempXX);
            let txt = Expr::coordinate(Coordinate::TempXT);
            Some(&(&phi_x.total_derivative(Direction::X)? - &(&txx * &dx_xi)) - &(&txt * &dx_tau))
        }
    };

    Ok(ProlongedField { base: field.clone(), phi_x, phi_t, phi_xx })
}

/// `T_t - alpha * T_xx`.
pub fn heat_operator() -> Expr {
    lit("T_t - alpha*T_xx")
}

/// Restrict to the equation manifold: `T_t -> alpha T_xx`, and the
/// differential consequence `T_xt -> alpha T_xxx`.
pub fn on_manifold(e: &Expr) -> Expr {
    e.substitute(&[
        (Coordinate::TempT, lit("alpha*T_xx")),
        (Coordinate::TempXT, lit("alpha*T_xxx")),
    ])
}

/// Exact symmetry test: the prolonged action on the heat operator must vanish
/// identically on the equation manifold.
pub fn is_symmetry(field: &VectorField) -> Result<bool, LieError> {
    let prolonged = prolong(field, ProlongationOrder::Second)?;
    let action = prolonged.apply_to(&heat_operator())?;
    Ok(on_manifold(&action).is_zero())
}

/// Commutator `[X, Y]`, componentwise `X(Y_comp) - Y(X_comp)`.
pub fn commutator(x: &VectorField, y: &VectorField) -> VectorField {
    VectorField {
        xi: &x.apply_base(&y.xi) - &y.apply_base(&x.xi),
        tau: &x.apply_base(&y.tau) - &y.apply_base(&x.tau),
        phi: &x.apply_base(&y.phi) - &y.apply_base(&x.phi),
    }
}

/// Expansion of a field in the symmetry algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanExpansion {
    /// Coefficient of each named generator; a constant expression in
    /// `alpha`/`alpha_inv` (the algebra's structure constants involve `1/alpha`).
    pub coefficients: [Expr; 6],
    /// Remaining `f(t,x) d/dT` part; zero when the field lies in the span of
    /// the named generators alone.
    pub inf_part: Expr,
}

/// Expand `field` as `sum c_i X_i + f(t,x) d/dT` by exact linear solving.
///
/// Scalars are sought in the span of `{alpha_inv, 1, alpha}` over the
/// rationals, which covers the algebra's structure constants.
pub fn expand_in_span(field: &VectorField) -> Result<SpanExpansion, LieError> {
    const SCALARS: [&str; 3] = ["alpha_inv", "1", "alpha"];
    let generators: Vec<VectorField> = GeneratorId::ALL.iter().map(|&g| named_generator(g)).collect();

    // Columns: scalar * generator, flattened.
    let mut columns: Vec<VectorField> = Vec::new();
    for gen in &generators {
        for s in SCALARS {
            columns.push(gen.scaled(&lit(s)));
        }
    }

    // Rows: every monomial of xi and tau, plus the T-dependent monomials of
    // phi. T-free phi monomials are left to the f(t,x) d/dT remainder.
    let temp = Symbol::Coord(Coordinate::Temp);
    let mut keys: Vec<(usize, crate::exprcore::Monomial)> = Vec::new();
    let push_keys = |vf: &VectorField, keys: &mut Vec<(usize, crate::exprcore::Monomial)>| {
        for (slot, comp) in [(0usize, &vf.xi), (1, &vf.tau), (2, &vf.phi)] {
            for (mono, _) in comp.terms() {
                if slot == 2 && mono.exponent(temp) == 0 {
                    continue;
                }
                let key = (slot, mono.clone());
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
        }
    };
    for col in &columns {
        push_keys(col, &mut keys);
    }
    push_keys(field, &mut keys);

    let coeff_of = |vf: &VectorField, key: &(usize, crate::exprcore::Monomial)| -> BigRational {
        let comp = match key.0 {
            0 => &vf.xi,
            1 => &vf.tau,
            _ => &vf.phi,
        };
        comp.terms()
            .find(|(m, _)| *m == &key.1)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(num_traits::Zero::zero)
    };

    let matrix: Vec<ratlin::Row> = keys
        .iter()
        .map(|key| columns.iter().map(|col| coeff_of(col, key)).collect())
        .collect();
    let rhs: Vec<BigRational> = keys.iter().map(|key| coeff_of(field, key)).collect();

    let solution = ratlin::solve(&matrix, &rhs, columns.len()).ok_or(LieError::NotInSpan)?;

    let mut coefficients: Vec<Expr> = Vec::with_capacity(6);
    let mut reconstructed = VectorField::zero();
    for (gi, gen) in generators.iter().enumerate() {
        let mut scalar = Expr::zero();
        for (si, s) in SCALARS.iter().enumerate() {
            let q = &solution[gi * SCALARS.len() + si];
            scalar = &scalar + &lit(s).scaled(q);
        }
        reconstructed = reconstructed.add(&gen.scaled(&scalar));
        coefficients.push(scalar);
    }

    let remainder = field.sub(&reconstructed);
    if !remainder.xi.is_zero() || !remainder.tau.is_zero() || remainder.phi.depends_on(temp) {
        return Err(LieError::NotInSpan);
    }
    Ok(SpanExpansion {
        coefficients: coefficients.try_into().unwrap(),
        inf_part: remainder.phi,
    })
}

/// Heat polynomials used to exercise `X_inf`: polynomial solutions of
/// `f_t = alpha f_xx` up to degree 4.
pub fn heat_polynomials() -> Vec<Expr> {
    ["1", "x", "x^2 + 2*alpha*t", "x^3 + 6*alpha*x*t", "x^4 + 12*alpha*x^2*t + 12*alpha^2*t^2"]
        .iter()
        .map(|s| lit(s))
        .collect()
}
