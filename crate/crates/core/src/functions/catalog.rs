//! Scalar function catalogues.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::quadrature::gauss_legendre_on;
use crate::error::{Error, Result};
use crate::linalg::Domain;

/// Lower edge of the window on which quadrature representations are tuned.
pub const REP_WINDOW_LO: f64 = 1e-3;
/// Upper edge of the tuning window.
pub const REP_WINDOW_HI: f64 = 1e3;
/// Tail mass left outside the truncated `u = ln s` interval, relative.
const REP_TAIL: f64 = 1e-10;
/// Minimum number of Gauss–Legendre nodes per representation.
pub const REP_MIN_NODES: usize = 200;

/// The brick `f_s(t) = t / (s + t)`, with `f_0(t) = t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrickFn {
    pub s: f64,
}

impl BrickFn {
    pub fn new(s: f64) -> Result<Self> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!("brick parameter s = {s}")));
        }
        Ok(Self { s })
    }

    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        brick(self.s, t)
    }
}

#[inline]
pub(crate) fn brick(s: f64, t: f64) -> f64 {
    if s == 0.0 {
        t
    } else {
        t / (s + t)
    }
}

/// Discretized positive measure: quadrature nodes plus point masses, both as
/// `(s, weight)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegralRep {
    pub nodes: Vec<(f64, f64)>,
    pub atoms: Vec<(f64, f64)>,
}

impl IntegralRep {
    pub fn atom(s: f64, w: f64) -> Self {
        Self {
            nodes: Vec::new(),
            atoms: vec![(s, w)],
        }
    }

    /// `∫ f_s(t) dμ(s)`.
    pub fn integrate_bricks(&self, t: f64) -> f64 {
        self.atoms
            .iter()
            .chain(&self.nodes)
            .map(|&(s, w)| w * brick(s, t))
            .sum()
    }

    /// `Σ w / (1 + s)`, finite for every valid representation.
    pub fn growth_mass(&self) -> f64 {
        self.atoms
            .iter()
            .chain(&self.nodes)
            .map(|&(s, w)| w / (1.0 + s))
            .sum()
    }

    pub fn is_valid(&self) -> bool {
        self.atoms
            .iter()
            .chain(&self.nodes)
            .all(|&(s, w)| s >= 0.0 && s.is_finite() && w > 0.0 && w.is_finite())
    }

    /// Representation of `t^p`, `0 < p < 1`, with `dμ(s) = (sin pπ / π) s^{p−1} ds`.
    ///
    /// Quadrature runs in `u = ln s`; the interval is chosen so that both
    /// tails fall below `REP_TAIL` relative on the tuning window.
    pub fn power(p: f64) -> Self {
        debug_assert!(p > 0.0 && p < 1.0);
        let c = (p * PI).sin() / PI;
        let lo_t = REP_WINDOW_LO;
        let hi_t = REP_WINDOW_HI;
        // lower tail ≈ c e^{p u}/p, upper tail ≈ c t e^{-(1-p) u}/(1-p)
        let u_lo = (REP_TAIL * p * lo_t.powf(p) / c).ln() / p;
        let u_hi = (c / (REP_TAIL * (1.0 - p))).ln() / (1.0 - p) + hi_t.ln();
        let nodes = node_count(u_hi - u_lo);
        Self {
            nodes: gauss_legendre_on(nodes, u_lo, u_hi)
                .into_iter()
                .map(|(u, w)| (u.exp(), w * c * (p * u).exp()))
                .collect(),
            atoms: Vec::new(),
        }
    }

    /// Representation of `log(1 + t)`, `dμ(s) = 1_{[1,∞)} ds / s`.
    pub fn log1p() -> Self {
        let u_hi = (REP_WINDOW_HI / REP_TAIL).ln();
        let nodes = node_count(u_hi);
        Self {
            nodes: gauss_legendre_on(nodes, 0.0, u_hi)
                .into_iter()
                .map(|(u, w)| (u.exp(), w))
                .collect(),
            atoms: Vec::new(),
        }
    }
}

fn node_count(width: f64) -> usize {
    REP_MIN_NODES.max((width * 1.7).ceil() as usize)
}

/// Operator monotone function on `[0, ∞)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonotoneKind {
    /// `f_s`
    Brick { s: f64 },
    /// `t^p`, `0 < p ≤ 1`
    Power { p: f64 },
    /// `log(1 + t)`
    Log1p,
    /// `Σ w_j f_{s_j}` with `w_j > 0`
    Bricks { terms: Vec<(f64, f64)> },
    /// The zero function; with an offset, a nonnegative constant.
    Zero,
}

/// Catalogued operator monotone `g = offset + g₀` with `g₀(0) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneFn {
    pub kind: MonotoneKind,
    /// `g(0) ≥ 0`.
    pub offset: f64,
}

impl MonotoneFn {
    pub fn brick(s: f64) -> Result<Self> {
        BrickFn::new(s)?;
        Ok(Self::plain(MonotoneKind::Brick { s }))
    }

    pub fn identity() -> Self {
        Self::plain(MonotoneKind::Brick { s: 0.0 })
    }

    pub fn power(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "operator monotone power needs 0 < p <= 1, got {p}"
            )));
        }
        Ok(Self::plain(MonotoneKind::Power { p }))
    }

    pub fn log1p() -> Self {
        Self::plain(MonotoneKind::Log1p)
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::plain(MonotoneKind::Zero).with_offset(c)
    }

    /// `Σ w_j f_{s_j}`; each pair is `(weight, s)`.
    pub fn bricks(terms: Vec<(f64, f64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("empty brick combination".into()));
        }
        for &(w, s) in &terms {
            BrickFn::new(s)?;
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidParameter(format!("brick weight {w}")));
            }
        }
        Ok(Self::plain(MonotoneKind::Bricks { terms }))
    }

    fn plain(kind: MonotoneKind) -> Self {
        Self { kind, offset: 0.0 }
    }

    /// `c + g`, `c ≥ 0`.
    pub fn with_offset(mut self, c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("offset {c} must be >= 0")));
        }
        self.offset = c;
        Ok(self)
    }

    /// `g − g(0)`.
    pub fn without_offset(&self) -> Self {
        Self {
            kind: self.kind.clone(),
            offset: 0.0,
        }
    }

    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        self.offset
            + match &self.kind {
                MonotoneKind::Brick { s } => brick(*s, t),
                MonotoneKind::Power { p } => {
                    if *p == 1.0 {
                        t
                    } else {
                        t.powf(*p)
                    }
                }
                MonotoneKind::Log1p => t.ln_1p(),
                MonotoneKind::Bricks { terms } => terms.iter().map(|&(w, s)| w * brick(s, t)).sum(),
                MonotoneKind::Zero => 0.0,
            }
    }

    pub fn representation(&self) -> IntegralRep {
        match &self.kind {
            MonotoneKind::Brick { s } => IntegralRep::atom(*s, 1.0),
            MonotoneKind::Power { p } if *p == 1.0 => IntegralRep::atom(0.0, 1.0),
            MonotoneKind::Power { p } => IntegralRep::power(*p),
            MonotoneKind::Log1p => IntegralRep::log1p(),
            MonotoneKind::Bricks { terms } => IntegralRep {
                nodes: Vec::new(),
                atoms: terms.iter().map(|&(w, s)| (s, w)).collect(),
            },
            MonotoneKind::Zero => IntegralRep::default(),
        }
    }

    /// The default catalogue exercised by the suites.
    pub fn catalogue() -> Vec<MonotoneFn> {
        vec![
            Self::identity(),
            Self::brick(0.1).unwrap(),
            Self::brick(1.0).unwrap(),
            Self::brick(10.0).unwrap(),
            Self::power(0.25).unwrap(),
            Self::power(0.5).unwrap(),
            Self::power(0.75).unwrap(),
            Self::log1p(),
            Self::bricks(vec![(0.5, 0.2), (2.0, 5.0)]).unwrap(),
            Self::brick(1.0).unwrap().with_offset(0.5).unwrap(),
        ]
    }
}

impl fmt::Display for MonotoneFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            MonotoneKind::Brick { s } if *s == 0.0 => write!(f, "identity")?,
            MonotoneKind::Brick { s } => write!(f, "brick:s={s}")?,
            MonotoneKind::Power { p } => write!(f, "power:p={p}")?,
            MonotoneKind::Log1p => write!(f, "log1p")?,
            MonotoneKind::Bricks { terms } => {
                write!(f, "bricks:")?;
                for (i, (w, s)) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{w}@{s}")?;
                }
            }
            MonotoneKind::Zero => write!(f, "const")?,
        }
        if self.offset != 0.0 {
            write!(f, ":c={}", self.offset)?;
        }
        Ok(())
    }
}

/// Nonnegative operator convex `f` on `[0, ∞)` with `f(0) = 0`, carried as
/// `f(t) = βt + γt² + ∫ t f_s(t) dμ(s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexFn {
    /// `t`
    Linear,
    /// `t²`
    Square,
    /// `t^p`, `1 < p ≤ 2`
    Power { p: f64 },
    /// `t² / (1 + t) = t · f_1(t)`
    SquareOverOnePlus,
}

impl ConvexFn {
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 1.0 && p <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "operator convex power needs 1 < p <= 2, got {p}"
            )));
        }
        Ok(if p == 2.0 {
            Self::Square
        } else {
            Self::Power { p }
        })
    }

    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        match self {
            ConvexFn::Linear => t,
            ConvexFn::Square => t * t,
            ConvexFn::Power { p } => t.powf(*p),
            ConvexFn::SquareOverOnePlus => t * t / (1.0 + t),
        }
    }

    /// `f(t) / t`, the operator monotone quotient, for `t > 0`.
    pub fn quotient(&self) -> MonotoneFn {
        match self {
            ConvexFn::Linear => MonotoneFn::constant(1.0).expect("1 >= 0"),
            ConvexFn::Square => MonotoneFn::identity(),
            ConvexFn::Power { p } => MonotoneFn::power(p - 1.0).expect("1 < p <= 2"),
            ConvexFn::SquareOverOnePlus => MonotoneFn::brick(1.0).expect("s = 1"),
        }
    }

    /// `β`
    pub fn beta(&self) -> f64 {
        matches!(self, ConvexFn::Linear) as u8 as f64
    }

    /// `γ`
    pub fn gamma(&self) -> f64 {
        matches!(self, ConvexFn::Square) as u8 as f64
    }

    /// The measure `μ` in `∫ t f_s(t) dμ(s)`; empty for pure `β`/`γ` entries.
    pub fn representation(&self) -> IntegralRep {
        match self {
            ConvexFn::Linear | ConvexFn::Square => IntegralRep::default(),
            ConvexFn::Power { p } => IntegralRep::power(p - 1.0),
            ConvexFn::SquareOverOnePlus => IntegralRep::atom(1.0, 1.0),
        }
    }

    pub fn catalogue() -> Vec<ConvexFn> {
        vec![
            ConvexFn::Linear,
            ConvexFn::Square,
            ConvexFn::Power { p: 1.5 },
            ConvexFn::Power { p: 1.25 },
            ConvexFn::SquareOverOnePlus,
        ]
    }
}

impl fmt::Display for ConvexFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvexFn::Linear => write!(f, "linear"),
            ConvexFn::Square => write!(f, "square"),
            ConvexFn::Power { p } => write!(f, "power:p={p}"),
            ConvexFn::SquareOverOnePlus => write!(f, "sqfrac"),
        }
    }
}

/// Parity extension of a function given on `[0, ∞)` to all of ℝ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    #[default]
    None,
    /// `h(−t) = −h(t)`
    Odd,
    /// `h(−t) = h(t)`
    Even,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlainKind {
    /// `min{t, 1}`
    Min1,
    /// `t^q`, `q > 0`
    Power { q: f64 },
    /// `1_{t ≥ at}`, `at > 0`
    Step { at: f64 },
    /// `|t|`
    Abs,
    /// `e^t`
    Exp,
}

/// Nondecreasing `h: [0, ∞) → [0, ∞)`, optionally extended by parity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlainFn {
    pub kind: PlainKind,
    pub parity: Parity,
}

impl PlainFn {
    pub fn new(kind: PlainKind) -> Result<Self> {
        match kind {
            PlainKind::Power { q } if !(q > 0.0 && q.is_finite()) => {
                return Err(Error::InvalidParameter(format!("power needs q > 0, got {q}")))
            }
            PlainKind::Step { at } if !(at > 0.0 && at.is_finite()) => {
                return Err(Error::InvalidParameter(format!("step needs at > 0, got {at}")))
            }
            _ => {}
        }
        Ok(Self {
            kind,
            parity: Parity::None,
        })
    }

    pub fn min1() -> Self {
        Self::new(PlainKind::Min1).unwrap()
    }

    pub fn power(q: f64) -> Result<Self> {
        Self::new(PlainKind::Power { q })
    }

    pub fn identity() -> Self {
        Self::new(PlainKind::Power { q: 1.0 }).unwrap()
    }

    pub fn odd(mut self) -> Self {
        self.parity = Parity::Odd;
        self
    }

    pub fn even(mut self) -> Self {
        self.parity = Parity::Even;
        self
    }

    /// Value on `[0, ∞)`.
    #[inline]
    pub fn base_value(&self, t: f64) -> f64 {
        match self.kind {
            PlainKind::Min1 => t.min(1.0),
            PlainKind::Power { q } => {
                if q == 1.0 {
                    t
                } else {
                    t.powf(q)
                }
            }
            PlainKind::Step { at } => {
                if t >= at {
                    1.0
                } else {
                    0.0
                }
            }
            PlainKind::Abs => t.abs(),
            PlainKind::Exp => t.exp(),
        }
    }

    /// Value on the declared domain; negative `t` only meaningful with a parity.
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        if t >= 0.0 {
            return self.base_value(t);
        }
        match self.parity {
            Parity::Odd => -self.base_value(-t),
            Parity::Even => self.base_value(-t),
            Parity::None => self.base_value(t),
        }
    }

    pub fn domain(&self) -> Domain {
        match self.parity {
            Parity::None => Domain::NonNegative,
            _ => Domain::Real,
        }
    }

    /// The nondecreasing `h` catalogue used as weights and `C_i` bounds.
    pub fn catalogue() -> Vec<PlainFn> {
        vec![
            Self::identity(),
            Self::min1(),
            Self::power(0.5).unwrap(),
            Self::power(3.0).unwrap(),
            Self::new(PlainKind::Step { at: 0.5 }).unwrap(),
            Self::new(PlainKind::Exp).unwrap(),
        ]
    }

    /// Odd and even extensions with `h(0) = 0`, for the trace inequalities.
    pub fn parity_catalogue() -> Vec<PlainFn> {
        vec![
            Self::identity().odd(),
            Self::power(3.0).unwrap().odd(),
            Self::power(0.5).unwrap().odd(),
            Self::min1().odd(),
            Self::new(PlainKind::Abs).unwrap().even(),
            Self::power(2.0).unwrap().even(),
            Self::min1().even(),
            Self::new(PlainKind::Step { at: 0.5 }).unwrap().even(),
        ]
    }
}

impl fmt::Display for PlainFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PlainKind::Min1 => write!(f, "min1")?,
            PlainKind::Power { q } => write!(f, "power:q={q}")?,
            PlainKind::Step { at } => write!(f, "step:at={at}")?,
            PlainKind::Abs => write!(f, "abs")?,
            PlainKind::Exp => write!(f, "exp")?,
        }
        match self.parity {
            Parity::None => Ok(()),
            Parity::Odd => write!(f, ":odd"),
            Parity::Even => write!(f, ":even"),
        }
    }
}
