//! Exact symbolic expressions over a fixed jet space.
//!
//! An [`Expr`] is a multivariate polynomial with arbitrary-precision rational
//! coefficients over the nine jet coordinates `x, t, T, T_x, T_t, T_xx, T_xt,
//! T_tt, T_xxx` and a fixed set of named constants (`alpha`, material data,
//! the operator coefficients `k1..k6`). The coordinate set is closed: no
//! operation ever introduces a symbol outside this list, and a total
//! derivative that would need one fails with [`JetOverflow`].
//!
//! Division by `alpha` is represented by the distinct constant `alpha_inv`;
//! the relation `alpha * alpha_inv = 1` is applied whenever monomials are
//! multiplied, so canonical forms never contain both symbols in one monomial.
//! Equality of canonical forms is exact, which makes [`Expr::is_zero`] a
//! decision procedure rather than a numerical test.

mod parse;

pub use parse::{parse_expr, ParseError};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Jet coordinates, in the fixed global order used for monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coordinate {
    X,
    Time,
    Temp,
    TempX,
    TempT,
    TempXX,
    TempXT,
    TempTT,
    TempXXX,
}

impl Coordinate {
    pub const ALL: [Coordinate; 9] = [
        Coordinate::X,
        Coordinate::Time,
        Coordinate::Temp,
        Coordinate::TempX,
        Coordinate::TempT,
        Coordinate::TempXX,
        Coordinate::TempXT,
        Coordinate::TempTT,
        Coordinate::TempXXX,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Coordinate::X => "x",
            Coordinate::Time => "t",
            Coordinate::Temp => "T",
            Coordinate::TempX => "T_x",
            Coordinate::TempT => "T_t",
            Coordinate::TempXX => "T_xx",
            Coordinate::TempXT => "T_xt",
            Coordinate::TempTT => "T_tt",
            Coordinate::TempXXX => "T_xxx",
        }
    }

    /// Base variables of the jet space.
    pub fn is_base(self) -> bool {
        matches!(self, Coordinate::X | Coordinate::Time | Coordinate::Temp)
    }
}

/// Named commuting constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymConst {
    Alpha,
    AlphaInv,
    TInit,
    TSurf,
    Q0pp,
    Kcond,
    K1,
    K2,
    K3,
    K4,
    K5,
    K6,
}

impl SymConst {
    pub const ALL: [SymConst; 12] = [
        SymConst::Alpha,
        SymConst::AlphaInv,
        SymConst::TInit,
        SymConst::TSurf,
        SymConst::Q0pp,
        SymConst::Kcond,
        SymConst::K1,
        SymConst::K2,
        SymConst::K3,
        SymConst::K4,
        SymConst::K5,
        SymConst::K6,
    ];

    /// The six operator coefficients, in order.
    pub const KS: [SymConst; 6] = [
        SymConst::K1,
        SymConst::K2,
        SymConst::K3,
        SymConst::K4,
        SymConst::K5,
        SymConst::K6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SymConst::Alpha => "alpha",
            SymConst::AlphaInv => "alpha_inv",
            SymConst::TInit => "T_i",
            SymConst::TSurf => "T_s",
            SymConst::Q0pp => "q0pp",
            SymConst::Kcond => "kcond",
            SymConst::K1 => "k1",
            SymConst::K2 => "k2",
            SymConst::K3 => "k3",
            SymConst::K4 => "k4",
            SymConst::K5 => "k5",
            SymConst::K6 => "k6",
        }
    }
}

/// Any symbol: a jet coordinate or a named constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Coord(Coordinate),
    Const(SymConst),
}

pub const SYMBOL_COUNT: usize = 21;

const ALPHA_IDX: usize = 9;
const ALPHA_INV_IDX: usize = 10;

impl Symbol {
    pub const ALL: [Symbol; SYMBOL_COUNT] = [
        Symbol::Coord(Coordinate::X),
        Symbol::Coord(Coordinate::Time),
        Symbol::Coord(Coordinate::Temp),
        Symbol::Coord(Coordinate::TempX),
        Symbol::Coord(Coordinate::TempT),
        Symbol::Coord(Coordinate::TempXX),
        Symbol::Coord(Coordinate::TempXT),
        Symbol::Coord(Coordinate::TempTT),
        Symbol::Coord(Coordinate::TempXXX),
        Symbol::Const(SymConst::Alpha),
        Symbol::Const(SymConst::AlphaInv),
        Symbol::Const(SymConst::TInit),
        Symbol::Const(SymConst::TSurf),
        Symbol::Const(SymConst::Q0pp),
        Symbol::Const(SymConst::Kcond),
        Symbol::Const(SymConst::K1),
        Symbol::Const(SymConst::K2),
        Symbol::Const(SymConst::K3),
        Symbol::Const(SymConst::K4),
        Symbol::Const(SymConst::K5),
        Symbol::Const(SymConst::K6),
    ];

    pub fn index(self) -> usize {
        match self {
            Symbol::Coord(c) => c as usize,
            Symbol::Const(k) => 9 + k as usize,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::Coord(c) => c.name(),
            Symbol::Const(k) => k.name(),
        }
    }

    pub fn from_name(name: &str) -> Option<Symbol> {
        Symbol::ALL.iter().copied().find(|s| s.name() == name)
    }
}

/// Direction of a total derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    X,
    T,
}

impl Direction {
    fn name(self) -> &'static str {
        match self {
            Direction::X => "x",
            Direction::T => "t",
        }
    }
}

/// A total derivative needed a jet coordinate outside the fixed set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetOverflow {
    pub coordinate: Coordinate,
    pub direction: Direction,
}

impl fmt::Display for JetOverflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "total derivative D_{} of {} leaves the fixed jet space",
            self.direction.name(),
            self.coordinate.name()
        )
    }
}

impl std::error::Error for JetOverflow {}

/// Exponent vector over the fixed symbol order.
///
/// Ordering is lexicographic over the exponent array, i.e. over the fixed
/// global symbol order; this is what makes printing deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: [u32; SYMBOL_COUNT],
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial { exps: [0; SYMBOL_COUNT] }
    }

    pub fn symbol(sym: Symbol) -> Self {
        let mut m = Monomial::unit();
        m.exps[sym.index()] = 1;
        m
    }

    pub fn exponent(&self, sym: Symbol) -> u32 {
        self.exps[sym.index()]
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Copy with the exponents of the given symbols set to zero.
    pub fn erased(&self, syms: &[Symbol]) -> Monomial {
        let mut m = self.clone();
        for s in syms {
            m.exps[s.index()] = 0;
        }
        m
    }

    /// Product of two monomials with the `alpha * alpha_inv -> 1` reduction.
    fn product(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(&other.exps) {
            *e += o;
        }
        let cancel = exps[ALPHA_IDX].min(exps[ALPHA_INV_IDX]);
        exps[ALPHA_IDX] -= cancel;
        exps[ALPHA_INV_IDX] -= cancel;
        Monomial { exps }
    }

    fn factors(&self) -> impl Iterator<Item = (Symbol, u32)> + '_ {
        Symbol::ALL
            .iter()
            .copied()
            .filter(move |s| self.exps[s.index()] > 0)
            .map(move |s| (s, self.exps[s.index()]))
    }
}

/// Canonical multivariate polynomial: monomial -> nonzero rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Expr::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Expr::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Monomial::unit(), r);
        }
        Expr { terms }
    }

    pub fn coordinate(c: Coordinate) -> Self {
        Expr::symbol(Symbol::Coord(c))
    }

    pub fn constant(k: SymConst) -> Self {
        Expr::symbol(Symbol::Const(k))
    }

    pub fn symbol(sym: Symbol) -> Self {
        Expr::term(Monomial::symbol(sym), BigRational::one())
    }

    pub fn term(mono: Monomial, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        Expr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Rational value of a constant expression, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_unit() {
                return Some(c.clone());
            }
        }
        None
    }

    fn add_term(&mut self, mono: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> Expr {
        if factor.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Expr {
        let mut acc = Expr::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn depends_on(&self, sym: Symbol) -> bool {
        self.terms.keys().any(|m| m.exponent(sym) > 0)
    }

    pub fn max_degree(&self, sym: Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(sym)).max().unwrap_or(0)
    }

    /// Formal partial derivative, treating every other symbol as independent.
    ///
    /// Acts on the canonical representative; in particular it is formal with
    /// respect to the `alpha * alpha_inv = 1` relation.
    pub fn differentiate(&self, sym: Symbol) -> Expr {
        let idx = sym.index();
        let mut out = Expr::zero();
        for (mono, coeff) in &self.terms {
            let e = mono.exps[idx];
            if e == 0 {
                continue;
            }
            let mut m = mono.clone();
            m.exps[idx] = e - 1;
            out.add_term(m, coeff * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Total derivative along `x` or `t` on the fixed jet space.
    ///
    /// `D_x` sends `T -> T_x, T_x -> T_xx, T_t -> T_xt, T_xx -> T_xxx`;
    /// `D_t` sends `T -> T_t, T_x -> T_xt, T_t -> T_tt`. Any dependence on a
    /// coordinate whose successor is missing from the jet space is a
    /// [`JetOverflow`].
    pub fn total_derivative(&self, dir: Direction) -> Result<Expr, JetOverflow> {
        let (base, chain): (Coordinate, &[(Coordinate, Option<Coordinate>)]) = match dir {
            Direction::X => (
                Coordinate::X,
                &[
                    (Coordinate::Temp, Some(Coordinate::TempX)),
                    (Coordinate::TempX, Some(Coordinate::TempXX)),
                    (Coordinate::TempT, Some(Coordinate::TempXT)),
                    (Coordinate::TempXX, Some(Coordinate::TempXXX)),
                    (Coordinate::TempXT, None),
                    (Coordinate::TempTT, None),
                    (Coordinate::TempXXX, None),
                ],
            ),
            Direction::T => (
                Coordinate::Time,
                &[
                    (Coordinate::Temp, Some(Coordinate::TempT)),
                    (Coordinate::TempX, Some(Coordinate::TempXT)),
                    (Coordinate::TempT, Some(Coordinate::TempTT)),
                    (Coordinate::TempXX, None),
                    (Coordinate::TempXT, None),
                    (Coordinate::TempTT, None),
                    (Coordinate::TempXXX, None),
                ],
            ),
        };
        let mut out = self.differentiate(Symbol::Coord(base));
        for &(src, succ) in chain {
            let partial = self.differentiate(Symbol::Coord(src));
            if partial.is_zero() {
                continue;
            }
            match succ {
                Some(next) => out = &out + &(&Expr::coordinate(next) * &partial),
                None => {
                    return Err(JetOverflow { coordinate: src, direction: dir });
                }
            }
        }
        Ok(out)
    }

    /// Simultaneous substitution of expressions for jet coordinates.
    ///
    /// Binding targets must be distinct.
    pub fn substitute(&self, bindings: &[(Coordinate, Expr)]) -> Expr {
        for (i, (c, _)) in bindings.iter().enumerate() {
            assert!(
                bindings[i + 1..].iter().all(|(d, _)| d != c),
                "substitute: duplicate binding target {}",
                c.name()
            );
        }
        let mut out = Expr::zero();
        for (mono, coeff) in &self.terms {
            let mut rest = mono.clone();
            let mut piece = Expr::from_rational(coeff.clone());
            for (coord, replacement) in bindings {
                let e = rest.exps[Symbol::Coord(*coord).index()];
                if e > 0 {
                    rest.exps[Symbol::Coord(*coord).index()] = 0;
                    piece = &piece * &replacement.pow(e);
                }
            }
            out = &out + &(&piece * &Expr::term(rest, BigRational::one()));
        }
        out
    }

    /// Decompose as a polynomial in `sym`: degree -> coefficient expression
    /// with `sym` removed.
    pub fn poly_in(&self, sym: Symbol) -> BTreeMap<u32, Expr> {
        let idx = sym.index();
        let mut out: BTreeMap<u32, Expr> = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let deg = mono.exps[idx];
            let mut rest = mono.clone();
            rest.exps[idx] = 0;
            out.entry(deg)
                .or_insert_with(Expr::zero)
                .add_term(rest, coeff.clone());
        }
        out.retain(|_, e| !e.is_zero());
        out
    }

    /// Exact division by a constant symbol; `None` if some term lacks it.
    pub fn div_symbol_exact(&self, k: SymConst) -> Option<Expr> {
        let idx = Symbol::Const(k).index();
        let mut terms = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            if mono.exps[idx] == 0 {
                return None;
            }
            let mut m = mono.clone();
            m.exps[idx] -= 1;
            terms.insert(m, coeff.clone());
        }
        Some(Expr { terms })
    }
}

impl Add for &Expr {
    type Output = Expr;

    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Expr {
    type Output = Expr;

    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Expr {
    type Output = Expr;

    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.product(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        &self + &rhs
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        &self - &rhs
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl fmt::Display for Expr {
    /// Prints the grammar accepted by [`parse_expr`]; terms appear in
    /// descending monomial order so leading terms come first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            let neg = coeff.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            let mut wrote_factor = false;
            if !mag.is_one() || mono.is_unit() {
                if mag.denom().is_one() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "{}/{}", mag.numer(), mag.denom())?;
                }
                wrote_factor = true;
            }
            for (sym, e) in mono.factors() {
                if wrote_factor {
                    write!(f, "*")?;
                }
                write!(f, "{}", sym.name())?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote_factor = true;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn parse_two_term_operator() {
        let e = p("T_t - alpha*T_xx");
        assert_eq!(e.num_terms(), 2);
        assert_eq!(
            e,
            &Expr::coordinate(Coordinate::TempT)
                - &(&Expr::constant(SymConst::Alpha) * &Expr::coordinate(Coordinate::TempXX))
        );
    }

    #[test]
    fn parse_cancellation() {
        assert!(p("x*x - x^2").is_zero());
        assert!(p("2*t + 3*t - 5*t").is_zero());
        assert!(p("x - x").is_zero());
    }

    #[test]
    fn alpha_inverse_relation() {
        assert!(p("alpha*alpha_inv - 1").is_zero());
        assert!(p("alpha^2*alpha_inv - alpha").is_zero());
        assert!(!p("T_x").is_zero());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("x^2*t").differentiate(Symbol::Coord(Coordinate::X)), p("2*x*t"));
        assert_eq!(
            p("alpha_inv*x*T").differentiate(Symbol::Coord(Coordinate::Temp)),
            p("alpha_inv*x")
        );
        assert!(p("x^2").differentiate(Symbol::Coord(Coordinate::Time)).is_zero());
    }

    #[test]
    fn total_derivative_examples() {
        assert_eq!(p("T").total_derivative(Direction::X).unwrap(), p("T_x"));
        assert_eq!(p("x*T_x").total_derivative(Direction::X).unwrap(), p("T_x + x*T_xx"));
        assert_eq!(p("T_x").total_derivative(Direction::T).unwrap(), p("T_xt"));
    }

    #[test]
    fn total_derivative_overflow() {
        let err = p("T_xx").total_derivative(Direction::T).unwrap_err();
        assert_eq!(err.coordinate, Coordinate::TempXX);
        assert_eq!(err.direction, Direction::T);
        assert!(p("T_xxx").total_derivative(Direction::X).is_err());
        // No dependence on an overflowing coordinate: no error.
        assert!(p("x*t^2").total_derivative(Direction::T).is_ok());
    }

    #[test]
    fn substitute_examples() {
        let manifold = p("T_t - alpha*T_xx")
            .substitute(&[(Coordinate::TempT, p("alpha*T_xx"))]);
        assert!(manifold.is_zero());
        assert!(p("x^2").substitute(&[(Coordinate::X, Expr::zero())]).is_zero());
        // Boundary restriction of xi at t = 0 keeps only k2.
        assert_eq!(
            p("k2 + 2*k4*t").substitute(&[(Coordinate::Time, Expr::zero())]),
            p("k2")
        );
    }

    #[test]
    fn substitution_is_simultaneous() {
        // x -> t, t -> x swaps rather than chains.
        let e = p("x^2*t");
        let swapped = e.substitute(&[
            (Coordinate::X, Expr::coordinate(Coordinate::Time)),
            (Coordinate::Time, Expr::coordinate(Coordinate::X)),
        ]);
        assert_eq!(swapped, p("t^2*x"));
    }

    #[test]
    #[should_panic(expected = "duplicate binding target")]
    fn substitute_rejects_duplicate_targets() {
        p("x").substitute(&[
            (Coordinate::X, Expr::zero()),
            (Coordinate::X, Expr::one()),
        ]);
    }

    #[test]
    fn print_parse_round_trip() {
        for s in [
            "T_t - alpha*T_xx",
            "3/2*x^2*t - alpha_inv*T + 7",
            "k1 + 2*k3*t - 5/3*k5*t^2",
            "0",
            "-x",
            "x^3 - 2*x + 1/2",
        ] {
            let e = p(s);
            let printed = e.to_string();
            assert_eq!(p(&printed), e, "round trip failed for printed form {printed:?}");
        }
    }

    #[test]
    fn div_symbol_exact_works() {
        let e = p("kcond*T_x*k6 - kcond*k3*T_x");
        let q = e.div_symbol_exact(SymConst::Kcond).unwrap();
        assert_eq!(q, p("k6*T_x - k3*T_x"));
        assert!(p("kcond*T_x + 1").div_symbol_exact(SymConst::Kcond).is_none());
    }

    #[test]
    fn poly_in_decomposition() {
        let e = p("kcond*T_x^2 + 3*T_x*t - 5");
        let parts = e.poly_in(Symbol::Coord(Coordinate::TempX));
        assert_eq!(parts[&0], p("-5"));
        assert_eq!(parts[&1], p("3*t"));
        assert_eq!(parts[&2], p("kcond"));
    }

    mod properties {
        use super::*;
        use num_bigint::BigInt;
        use proptest::prelude::*;

        // Random expressions over a pool that is closed under both total
        // derivatives (base coordinates and constants only).
        const POOL: [Symbol; 5] = [
            Symbol::Coord(Coordinate::X),
            Symbol::Coord(Coordinate::Time),
            Symbol::Coord(Coordinate::Temp),
            Symbol::Const(SymConst::Alpha),
            Symbol::Const(SymConst::K3),
        ];

        fn rational() -> impl Strategy<Value = BigRational> {
            (-6i64..7, 1i64..4).prop_map(|(n, d)| {
                BigRational::new(BigInt::from(n), BigInt::from(d))
            })
        }

        fn arb_expr() -> impl Strategy<Value = Expr> {
            let term = (
                rational(),
                proptest::collection::vec((0usize..POOL.len(), 1u32..3), 0..3),
            )
                .prop_map(|(coeff, factors)| {
                    let mut e = Expr::from_rational(coeff);
                    for (idx, exp) in factors {
                        e = &e * &Expr::symbol(POOL[idx]).pow(exp);
                    }
                    e
                });
            proptest::collection::vec(term, 0..4)
                .prop_map(|terms| terms.into_iter().fold(Expr::zero(), |a, b| &a + &b))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn ring_axioms(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
                let assoc = &(&(&a + &b) + &c) - &(&a + &(&b + &c));
                prop_assert!(assoc.is_zero());
                let distrib = &(&a * &(&b + &c)) - &(&(&a * &b) + &(&a * &c));
                prop_assert!(distrib.is_zero());
                let commut = &(&a * &b) - &(&b * &a);
                prop_assert!(commut.is_zero());
            }

            #[test]
            fn derivatives_are_linear(
                a in arb_expr(),
                b in arb_expr(),
                lambda in rational(),
                which in 0usize..POOL.len(),
            ) {
                let combo = &a + &b.scaled(&lambda);
                let sym = POOL[which];
                let lhs = combo.differentiate(sym);
                let rhs = &a.differentiate(sym) + &b.differentiate(sym).scaled(&lambda);
                prop_assert!((&lhs - &rhs).is_zero());

                for dir in [Direction::X, Direction::T] {
                    let lhs = combo.total_derivative(dir).unwrap();
                    let rhs = &a.total_derivative(dir).unwrap()
                        + &b.total_derivative(dir).unwrap().scaled(&lambda);
                    prop_assert!((&lhs - &rhs).is_zero());
                }
            }

            #[test]
            fn total_derivatives_commute(e in arb_expr()) {
                let xt = e.total_derivative(Direction::X).unwrap()
                    .total_derivative(Direction::T).unwrap();
                let tx = e.total_derivative(Direction::T).unwrap()
                    .total_derivative(Direction::X).unwrap();
                prop_assert!((&xt - &tx).is_zero());
            }

            #[test]
            fn print_then_parse_is_identity(e in arb_expr()) {
                prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
            }
        }
    }
}
