//! Hotelling's linear city with two stores.
//!
//! Consumers are spread uniformly over a line of length `l` and pay the
//! posted price plus `c` per unit of distance travelled. Store A sits at
//! distance `a` from the left end, store B at distance `b` from the right
//! end. Each store owns its hinterland (`a` and `b`) and the stores split the
//! contested segment of length `l - a - b` at the consumer who is
//! indifferent between them.
//!
//! [`equilibrium`] evaluates the closed-form price equilibrium.
//! [`best_response_solve`] reaches the same point by alternating best
//! responses built from the profit functions alone, and serves as a check
//! on the closed form.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HotellingError {
    #[error("invalid market parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "{} captures the whole contested segment (q1 = {q1}, q2 = {q2}); no split demand",
        match .captor { Some(s) => s.to_string(), None => "neither store".to_string() }
    )]
    UndercutRegime {
        /// `None` when the contested segment is empty and prices are equal.
        captor: Option<Store>,
        q1: f64,
        q2: f64,
    },
    #[error("best-response iteration did not converge after {iterations} rounds (last prices {p1}, {p2})")]
    NoConvergence { iterations: u32, p1: f64, p2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Store {
    A,
    B,
}

impl fmt::Display for Store {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Store::A => f.write_str("store A"),
            Store::B => f.write_str("store B"),
        }
    }
}

/// Line length `l`, store distances `a` and `b` from their ends, and
/// transport cost `c` per unit distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarketConfig {
    l: f64,
    a: f64,
    b: f64,
    c: f64,
}

impl MarketConfig {
    pub fn new(l: f64, a: f64, b: f64, c: f64) -> Result<Self, HotellingError> {
        let invalid = |msg: String| Err(HotellingError::InvalidParameter(msg));
        for (name, v) in [("l", l), ("a", a), ("b", b), ("c", c)] {
            if !v.is_finite() {
                return invalid(format!("{name} must be finite, got {v}"));
            }
        }
        if l <= 0.0 {
            return invalid(format!("l must be > 0, got {l}"));
        }
        if c <= 0.0 {
            return invalid(format!("c must be > 0, got {c}"));
        }
        if a < 0.0 {
            return invalid(format!("a must be >= 0, got {a}"));
        }
        if b < 0.0 {
            return invalid(format!("b must be >= 0, got {b}"));
        }
        if a + b > l {
            return invalid(format!("a + b must be <= l, got {a} + {b} > {l}"));
        }
        Ok(MarketConfig { l, a, b, c })
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Length of the contested segment between the stores.
    pub fn contested(&self) -> f64 {
        self.l - self.a - self.b
    }

    /// The same market with the two stores' positions exchanged.
    pub fn swapped(&self) -> MarketConfig {
        MarketConfig {
            a: self.b,
            b: self.a,
            ..*self
        }
    }

    pub fn with(&self, param: Param, value: f64) -> Result<MarketConfig, HotellingError> {
        let MarketConfig { l, a, b, c } = *self;
        match param {
            Param::L => MarketConfig::new(value, a, b, c),
            Param::A => MarketConfig::new(l, value, b, c),
            Param::B => MarketConfig::new(l, a, value, c),
            Param::C => MarketConfig::new(l, a, b, value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PricePair {
    pub p1: f64,
    pub p2: f64,
}

impl PricePair {
    pub fn new(p1: f64, p2: f64) -> Self {
        PricePair { p1, p2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DemandSplit {
    /// A's share of the contested segment.
    pub x: f64,
    /// B's share of the contested segment.
    pub y: f64,
    pub q1: f64,
    pub q2: f64,
}

/// Conditions checked on an equilibrium; each names what went wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// Store A's quantity is negative.
    NegativeQ1,
    NegativeQ2,
    /// `p2 >= p1 + c(l - a - b)`: A takes the whole contested segment.
    AUndercutsB,
    /// `p1 >= p2 + c(l - a - b)`: B takes the whole contested segment.
    BUndercutsA,
    /// `a + b = l`: no contested segment.
    EmptyContestedSegment,
}

impl Violation {
    pub fn as_str(self) -> &'static str {
        match self {
            Violation::NegativeQ1 => "negative_q1",
            Violation::NegativeQ2 => "negative_q2",
            Violation::AUndercutsB => "a_undercuts_b",
            Violation::BUndercutsA => "b_undercuts_a",
            Violation::EmptyContestedSegment => "empty_contested_segment",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equilibrium {
    pub prices: PricePair,
    pub split: DemandSplit,
    pub profit1: f64,
    pub profit2: f64,
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// Best-response rounds used; `None` for the closed form.
    pub iterations: Option<u32>,
}

/// Undercut conditions at the given prices, in a fixed order.
fn undercut_violations(m: &MarketConfig, p: PricePair) -> Vec<Violation> {
    let mut v = Vec::new();
    let gap = m.c * m.contested();
    if p.p2 >= p.p1 + gap {
        v.push(Violation::AUndercutsB);
    }
    if p.p1 >= p.p2 + gap {
        v.push(Violation::BUndercutsA);
    }
    v
}

fn split_unchecked(m: &MarketConfig, p: PricePair) -> DemandSplit {
    let contested = m.contested();
    let x = 0.5 * (contested + (p.p2 - p.p1) / m.c);
    let y = 0.5 * (contested + (p.p1 - p.p2) / m.c);
    DemandSplit {
        x,
        y,
        q1: m.a + x,
        q2: m.b + y,
    }
}

/// Location of the indifferent consumer and the resulting demand.
///
/// Outside the no-undercut region one store takes the whole contested
/// segment; that case is returned as [`HotellingError::UndercutRegime`]
/// carrying the captor's quantities instead of a clamped split.
pub fn demand_split(m: &MarketConfig, p: PricePair) -> Result<DemandSplit, HotellingError> {
    let violations = undercut_violations(m, p);
    if violations.is_empty() {
        return Ok(split_unchecked(m, p));
    }
    let (captor, q1, q2) = match (
        violations.contains(&Violation::AUndercutsB),
        violations.contains(&Violation::BUndercutsA),
    ) {
        (true, false) => (Some(Store::A), m.l - m.b, m.b),
        (false, true) => (Some(Store::B), m.a, m.l - m.a),
        _ => (None, m.a, m.b),
    };
    Err(HotellingError::UndercutRegime { captor, q1, q2 })
}

/// Profits `p1 * q1` and `p2 * q2`.
pub fn profits(m: &MarketConfig, p: PricePair) -> Result<(f64, f64), HotellingError> {
    let s = demand_split(m, p)?;
    Ok((p.p1 * s.q1, p.p2 * s.q2))
}

/// Profits written as quadratics in the prices,
/// `pi1 = (l + a - b) p1 / 2 - p1^2 / 2c + p1 p2 / 2c` and symmetrically for B.
/// Defined for any prices; agrees with [`profits`] inside the no-undercut
/// region.
pub fn profits_quadratic(m: &MarketConfig, p: PricePair) -> (f64, f64) {
    let (pa, pb, c) = (p.p1, p.p2, m.c);
    let pi1 = 0.5 * (m.l + m.a - m.b) * pa - pa * pa / (2.0 * c) + pa * pb / (2.0 * c);
    let pi2 = 0.5 * (m.l - m.a + m.b) * pb - pb * pb / (2.0 * c) + pa * pb / (2.0 * c);
    (pi1, pi2)
}

/// Closed-form price equilibrium. Always returns a result; `valid` and
/// `violations` say whether it describes a genuine split market.
pub fn equilibrium(m: &MarketConfig) -> Equilibrium {
    let shift_a = m.l + (m.a - m.b) / 3.0;
    let shift_b = m.l + (m.b - m.a) / 3.0;
    let prices = PricePair::new(m.c * shift_a, m.c * shift_b);
    let q1 = 0.5 * shift_a;
    let q2 = 0.5 * shift_b;
    let split = DemandSplit {
        x: q1 - m.a,
        y: q2 - m.b,
        q1,
        q2,
    };
    assess(m, prices, split, None)
}

fn assess(
    m: &MarketConfig,
    prices: PricePair,
    split: DemandSplit,
    iterations: Option<u32>,
) -> Equilibrium {
    let mut violations = Vec::new();
    if split.q1 < 0.0 {
        violations.push(Violation::NegativeQ1);
    }
    if split.q2 < 0.0 {
        violations.push(Violation::NegativeQ2);
    }
    violations.extend(undercut_violations(m, prices));
    if m.a + m.b >= m.l {
        violations.push(Violation::EmptyContestedSegment);
    }
    Equilibrium {
        prices,
        split,
        profit1: prices.p1 * split.q1,
        profit2: prices.p2 * split.q2,
        valid: violations.is_empty(),
        violations,
        iterations,
    }
}

/// Price maximizing `alpha p^2 + beta p` for `alpha < 0`.
fn quadratic_argmax(alpha: f64, beta: f64) -> f64 {
    -beta / (2.0 * alpha)
}

/// A's profit-maximizing price given B's price. From the quadratic profit,
/// `alpha = -1/2c` and `beta = (l + a - b)/2 + p2/2c`.
fn best_response_a(m: &MarketConfig, p2: f64) -> f64 {
    let alpha = -1.0 / (2.0 * m.c);
    let beta = 0.5 * (m.l + m.a - m.b) + p2 / (2.0 * m.c);
    quadratic_argmax(alpha, beta)
}

fn best_response_b(m: &MarketConfig, p1: f64) -> f64 {
    let alpha = -1.0 / (2.0 * m.c);
    let beta = 0.5 * (m.l - m.a + m.b) + p1 / (2.0 * m.c);
    quadratic_argmax(alpha, beta)
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: u32 = 10_000;

/// Equilibrium by alternating best responses from `p1 = p2 = c l / 2`,
/// stopping once neither price moves by `tol` or more in a round. The
/// best-response map has slope 1/2, so each round shrinks the error by 4.
pub fn best_response_solve(
    m: &MarketConfig,
    tol: f64,
    max_iter: u32,
) -> Result<Equilibrium, HotellingError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(HotellingError::InvalidParameter(format!(
            "tolerance must be > 0, got {tol}"
        )));
    }
    let start = 0.5 * m.c * m.l;
    let (mut p1, mut p2) = (start, start);
    for round in 1..=max_iter {
        let next1 = best_response_a(m, p2);
        let next2 = best_response_b(m, next1);
        let step = (next1 - p1).abs().max((next2 - p2).abs());
        p1 = next1;
        p2 = next2;
        if step < tol {
            let prices = PricePair::new(p1, p2);
            return Ok(assess(m, prices, split_unchecked(m, prices), Some(round)));
        }
    }
    Err(HotellingError::NoConvergence {
        iterations: max_iter,
        p1,
        p2,
    })
}

/// Which market parameter a comparative-statics sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    L,
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticsRow {
    pub param: Param,
    pub value: f64,
    /// The closed-form equilibrium, or the reason the varied market is
    /// not a valid configuration.
    pub outcome: Result<Equilibrium, HotellingError>,
}

/// Closed-form equilibria across a grid of values for one parameter, the
/// rest held at `base`. Invalid grid points yield an error row.
pub fn comparative_statics(base: &MarketConfig, param: Param, grid: &[f64]) -> Vec<StaticsRow> {
    grid.par_iter()
        .map(|&value| StaticsRow {
            param,
            value,
            outcome: base.with(param, value).map(|m| equilibrium(&m)),
        })
        .collect()
}

impl Serialize for HotellingError {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
