//! Tail functions: validation, evaluation, generalized inverses and the
//! conversions between absolute and two-sided tails.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailKind {
    /// Bounds `P(|X| >= t)`; defined on `[0, inf)` and extended by 1 below 0.
    Absolute,
    /// Bounds `P(X >= t)`.
    Right,
    /// Bounds `P(X <= t)`.
    Left,
}

impl TailKind {
    /// The side from which a tail of this kind must be continuous.
    pub fn required_continuity(self) -> Side {
        match self {
            TailKind::Absolute | TailKind::Right => Side::Left,
            TailKind::Left => Side::Right,
        }
    }

    fn nonincreasing(self) -> bool {
        !matches!(self, TailKind::Left)
    }
}

impl fmt::Display for TailKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailKind::Absolute => "absolute",
            TailKind::Right => "right",
            TailKind::Left => "left",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Exponential {
        rate: f64,
    },
    Gaussian {
        mu: f64,
        sigma: f64,
    },
    /// `values[i]` holds on the i-th interval cut out by `breaks`; the
    /// breakpoints belong to the interval on the `continuity` side.
    Step {
        breaks: Vec<f64>,
        values: Vec<f64>,
        continuity: Side,
    },
    /// Linear interpolation between knots, constant beyond the end knots.
    PiecewiseLinear {
        knots: Vec<(f64, f64)>,
    },
    /// `min(1, plus(t) + minus(-t))`, the absolute tail of a two-sided pair.
    SumMin(Box<TwoTail>),
    /// An absolute tail read as a right tail on the whole line.
    Restricted(Box<TailFn>),
    /// `t -> inner(-t)`.
    Reflected(Box<TailFn>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailFn {
    kind: TailKind,
    family: Family,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    Parameter,
    Range,
    Monotonicity,
    Limit,
    Continuity,
}

/// One reason a tail function is not admissible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// The breakpoint or knot where the problem shows up, when there is one.
    pub at: Option<f64>,
    pub detail: String,
}

impl Violation {
    fn new(kind: ViolationKind, at: Option<f64>, detail: impl Into<String>) -> Self {
        Violation {
            kind,
            at,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = serde_json::to_value(self.kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        match self.at {
            Some(t) => write!(f, "{kind} at t={t}: {}", self.detail),
            None => write!(f, "{kind}: {}", self.detail),
        }
    }
}

impl TailFn {
    pub fn exponential(kind: TailKind, rate: f64) -> Self {
        TailFn {
            kind,
            family: Family::Exponential { rate },
        }
    }

    pub fn gaussian(kind: TailKind, mu: f64, sigma: f64) -> Self {
        TailFn {
            kind,
            family: Family::Gaussian { mu, sigma },
        }
    }

    /// A step tail with the continuity the kind requires.
    pub fn step(kind: TailKind, breaks: Vec<f64>, values: Vec<f64>) -> Self {
        Self::step_with_continuity(kind, breaks, values, kind.required_continuity())
    }

    pub fn step_with_continuity(
        kind: TailKind,
        breaks: Vec<f64>,
        values: Vec<f64>,
        continuity: Side,
    ) -> Self {
        TailFn {
            kind,
            family: Family::Step {
                breaks,
                values,
                continuity,
            },
        }
    }

    pub fn piecewise_linear(kind: TailKind, knots: Vec<(f64, f64)>) -> Self {
        TailFn {
            kind,
            family: Family::PiecewiseLinear { knots },
        }
    }

    /// Validate and return self, or the list of violations as an error.
    pub fn checked(self) -> Result<Self> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidTail(v))
        }
    }

    pub fn kind(&self) -> TailKind {
        self.kind
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Exponential { .. } => "exp",
            Family::Gaussian { .. } => "gauss",
            Family::Step { .. } => "step",
            Family::PiecewiseLinear { .. } => "pl",
            Family::SumMin(_) => "summin",
            Family::Restricted(_) => "restricted",
            Family::Reflected(_) => "reflected",
        }
    }

    pub fn expect_kind(&self, expected: TailKind) -> Result<()> {
        if self.kind == expected {
            Ok(())
        } else {
            Err(Error::WrongKind {
                expected: kind_name(expected),
                found: self.kind,
            })
        }
    }

    /// Right tails and absolute tails (read on the whole line) are both
    /// nonincreasing and accepted wherever a right tail is.
    pub fn expect_right_like(&self) -> Result<()> {
        match self.kind {
            TailKind::Right | TailKind::Absolute => Ok(()),
            TailKind::Left => Err(Error::WrongKind {
                expected: "right",
                found: self.kind,
            }),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if self.kind == TailKind::Absolute && t < 0.0 {
            return 1.0;
        }
        match &self.family {
            Family::Exponential { rate } => match self.kind {
                TailKind::Left => {
                    if t >= 0.0 {
                        1.0
                    } else {
                        (rate * t).exp()
                    }
                }
                _ => {
                    if t <= 0.0 {
                        1.0
                    } else {
                        (-rate * t).exp()
                    }
                }
            },
            Family::Gaussian { mu, sigma } => {
                let z = (t - mu) / sigma;
                match self.kind {
                    TailKind::Right => special::upper_normal(z),
                    TailKind::Left => special::upper_normal(-z),
                    TailKind::Absolute => (2.0 * special::upper_normal(z)).min(1.0),
                }
            }
            Family::Step {
                breaks,
                values,
                continuity,
            } => {
                let i = match continuity {
                    Side::Left => breaks.partition_point(|&b| b < t),
                    Side::Right => breaks.partition_point(|&b| b <= t),
                };
                values[i.min(values.len() - 1)]
            }
            Family::PiecewiseLinear { knots } => interpolate(knots, t),
            Family::SumMin(tt) => (tt.plus.eval(t) + tt.minus.eval(-t)).min(1.0),
            Family::Restricted(inner) => inner.eval(t),
            Family::Reflected(inner) => inner.eval(-t),
        }
    }

    /// `sup { t : f(t) >= 1 - s }` for right and absolute tails.
    pub fn gen_inverse_right(&self, s: f64) -> Result<f64> {
        self.expect_right_like()?;
        Ok(self.sup_at_least(1.0 - s))
    }

    /// `inf { t : f(t) >= s }` for left tails.
    pub fn gen_inverse_left(&self, s: f64) -> Result<f64> {
        self.expect_kind(TailKind::Left)?;
        Ok(self.inf_at_least(s))
    }

    /// `sup { t : f(t) >= y }` for a nonincreasing tail.
    pub(crate) fn sup_at_least(&self, y: f64) -> f64 {
        let raw = if y <= 0.0 {
            f64::INFINITY
        } else {
            match &self.family {
                Family::Exponential { rate } => {
                    if y >= 1.0 {
                        0.0
                    } else {
                        -y.ln() / rate
                    }
                }
                Family::Gaussian { mu, sigma } => {
                    let level = if self.kind == TailKind::Absolute {
                        y / 2.0
                    } else {
                        y
                    };
                    mu + sigma * special::upper_normal_sup(level)
                }
                Family::Step { breaks, values, .. } => {
                    let j = values.partition_point(|&v| v >= y);
                    if j == 0 {
                        f64::NEG_INFINITY
                    } else if j == values.len() {
                        f64::INFINITY
                    } else {
                        breaks[j - 1]
                    }
                }
                Family::PiecewiseLinear { knots } => {
                    let j = knots.partition_point(|k| k.1 >= y);
                    if j == 0 {
                        f64::NEG_INFINITY
                    } else if j == knots.len() {
                        f64::INFINITY
                    } else {
                        let (t0, v0) = knots[j - 1];
                        let (t1, v1) = knots[j];
                        t0 + (v0 - y) / (v0 - v1) * (t1 - t0)
                    }
                }
                Family::SumMin(_) => self.bisect_sup(y),
                Family::Restricted(inner) => inner.sup_at_least(y),
                Family::Reflected(inner) => -inner.inf_at_least(y),
            }
        };
        if self.kind == TailKind::Absolute {
            raw.max(0.0)
        } else {
            raw
        }
    }

    /// `inf { t : f(t) >= s }` for a nondecreasing tail.
    pub(crate) fn inf_at_least(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return f64::NEG_INFINITY;
        }
        match &self.family {
            Family::Exponential { rate } => {
                if s >= 1.0 {
                    0.0
                } else {
                    s.ln() / rate
                }
            }
            Family::Gaussian { mu, sigma } => mu - sigma * special::upper_normal_sup(s),
            Family::Step { breaks, values, .. } => {
                let j = values.partition_point(|&v| v < s);
                if j == 0 {
                    f64::NEG_INFINITY
                } else if j == values.len() {
                    f64::INFINITY
                } else {
                    breaks[j - 1]
                }
            }
            Family::PiecewiseLinear { knots } => {
                let j = knots.partition_point(|k| k.1 < s);
                if j == 0 {
                    f64::NEG_INFINITY
                } else if j == knots.len() {
                    f64::INFINITY
                } else {
                    let (t0, v0) = knots[j - 1];
                    let (t1, v1) = knots[j];
                    t0 + (s - v0) / (v1 - v0) * (t1 - t0)
                }
            }
            Family::SumMin(_) | Family::Restricted(_) => f64::NAN,
            Family::Reflected(inner) => -inner.sup_at_least(s),
        }
    }

    fn bisect_sup(&self, y: f64) -> f64 {
        if y > 1.0 {
            return f64::NEG_INFINITY;
        }
        let mut lo = 0.0;
        let mut hi = 1.0;
        while self.eval(hi) >= y {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid) >= y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Points where the tail may jump or change slope.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = match &self.family {
            Family::Exponential { .. } => vec![0.0],
            Family::Gaussian { .. } => {
                if self.kind == TailKind::Absolute {
                    vec![0.0]
                } else {
                    vec![]
                }
            }
            Family::Step { breaks, .. } => breaks.clone(),
            Family::PiecewiseLinear { knots } => knots.iter().map(|k| k.0).collect(),
            Family::SumMin(tt) => {
                let mut v = vec![0.0];
                v.extend(tt.plus.breakpoints());
                v.extend(tt.minus.breakpoints().into_iter().map(|b| -b));
                v
            }
            Family::Restricted(inner) => inner.breakpoints(),
            Family::Reflected(inner) => inner.breakpoints().into_iter().map(|b| -b).collect(),
        };
        if self.kind == TailKind::Absolute {
            out.retain(|&b| b >= 0.0);
            out.push(0.0);
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Piecewise constant tails admit exact comparisons; others need a tolerance.
    pub fn is_piecewise_constant(&self) -> bool {
        match &self.family {
            Family::Step { .. } => true,
            Family::SumMin(tt) => {
                tt.plus.is_piecewise_constant() && tt.minus.is_piecewise_constant()
            }
            Family::Restricted(inner) | Family::Reflected(inner) => inner.is_piecewise_constant(),
            _ => false,
        }
    }

    pub fn is_continuous(&self) -> bool {
        match &self.family {
            Family::Exponential { .. } | Family::Gaussian { .. } => true,
            Family::PiecewiseLinear { .. } => true,
            Family::Step { .. } => false,
            Family::SumMin(tt) => tt.plus.is_continuous() && tt.minus.is_continuous(),
            Family::Restricted(inner) | Family::Reflected(inner) => inner.is_continuous(),
        }
    }

    /// Mirror a left tail into a right tail or back.
    pub fn reflect(&self) -> Result<TailFn> {
        let kind = match self.kind {
            TailKind::Left => TailKind::Right,
            TailKind::Right => TailKind::Left,
            TailKind::Absolute => {
                return Err(Error::WrongKind {
                    expected: "left or right",
                    found: TailKind::Absolute,
                })
            }
        };
        Ok(self.mirrored(kind))
    }

    fn mirrored(&self, kind: TailKind) -> TailFn {
        let family = match &self.family {
            Family::Exponential { rate } => Family::Exponential { rate: *rate },
            Family::Gaussian { mu, sigma } if self.kind != TailKind::Absolute => {
                Family::Gaussian {
                    mu: -mu,
                    sigma: *sigma,
                }
            }
            Family::Step {
                breaks,
                values,
                continuity,
            } => Family::Step {
                breaks: breaks.iter().rev().map(|b| -b).collect(),
                values: values.iter().rev().copied().collect(),
                continuity: match continuity {
                    Side::Left => Side::Right,
                    Side::Right => Side::Left,
                },
            },
            Family::PiecewiseLinear { knots } => Family::PiecewiseLinear {
                knots: knots.iter().rev().map(|&(t, v)| (-t, v)).collect(),
            },
            Family::Reflected(inner) if inner.kind == kind => return (**inner).clone(),
            _ => Family::Reflected(Box::new(self.clone())),
        };
        TailFn { kind, family }
    }

    pub fn validate(&self) -> Vec<Violation> {
        use ViolationKind::*;
        let mut out = Vec::new();
        let kind = self.kind;
        match &self.family {
            Family::Exponential { rate } => {
                if !(rate.is_finite() && *rate > 0.0) {
                    out.push(Violation::new(
                        Parameter,
                        None,
                        format!("rate must be positive and finite, got {rate}"),
                    ));
                }
            }
            Family::Gaussian { mu, sigma } => {
                if !mu.is_finite() {
                    out.push(Violation::new(Parameter, None, "mu must be finite"));
                }
                if !(sigma.is_finite() && *sigma > 0.0) {
                    out.push(Violation::new(
                        Parameter,
                        None,
                        format!("sigma must be positive and finite, got {sigma}"),
                    ));
                }
                if kind == TailKind::Absolute && *mu < 0.0 {
                    out.push(Violation::new(
                        Limit,
                        Some(0.0),
                        "absolute tail must equal 1 at 0, which needs mu >= 0",
                    ));
                }
            }
            Family::Step {
                breaks,
                values,
                continuity,
            } => validate_step(kind, breaks, values, *continuity, &mut out),
            Family::PiecewiseLinear { knots } => validate_pl(self, knots, &mut out),
            Family::SumMin(tt) => {
                if kind != TailKind::Absolute {
                    out.push(Violation::new(
                        Parameter,
                        None,
                        "a sum-min tail is always absolute",
                    ));
                }
                out.extend(tt.validate());
            }
            Family::Restricted(inner) => {
                if kind != TailKind::Right || inner.kind != TailKind::Absolute {
                    out.push(Violation::new(
                        Parameter,
                        None,
                        "a restricted tail is a right tail built from an absolute one",
                    ));
                }
                out.extend(inner.validate());
            }
            Family::Reflected(inner) => {
                let expected = match inner.kind {
                    TailKind::Left => TailKind::Right,
                    _ => TailKind::Left,
                };
                if kind != expected {
                    out.push(Violation::new(
                        Parameter,
                        None,
                        format!("reflection of a {} tail must be a {expected} tail", inner.kind),
                    ));
                }
                out.extend(inner.validate());
            }
        }
        out
    }
}

fn kind_name(k: TailKind) -> &'static str {
    match k {
        TailKind::Absolute => "absolute",
        TailKind::Right => "right",
        TailKind::Left => "left",
    }
}

fn interpolate(knots: &[(f64, f64)], t: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    let j = knots.partition_point(|k| k.0 <= t);
    let (t0, v0) = knots[j - 1];
    let (t1, v1) = knots[j];
    v0 + (t - t0) / (t1 - t0) * (v1 - v0)
}

fn validate_step(
    kind: TailKind,
    breaks: &[f64],
    values: &[f64],
    continuity: Side,
    out: &mut Vec<Violation>,
) {
    use ViolationKind::*;
    if values.len() != breaks.len() + 1 {
        out.push(Violation::new(
            Parameter,
            None,
            format!(
                "{} breakpoints need {} values, got {}",
                breaks.len(),
                breaks.len() + 1,
                values.len()
            ),
        ));
        return;
    }
    for (i, w) in breaks.windows(2).enumerate() {
        if !(w[0] < w[1]) {
            out.push(Violation::new(
                Parameter,
                Some(breaks[i + 1]),
                "breakpoints must be strictly increasing",
            ));
        }
    }
    if breaks.iter().any(|b| !b.is_finite()) {
        out.push(Violation::new(Parameter, None, "breakpoints must be finite"));
    }
    let at = |i: usize| breaks.get(i.min(breaks.len().saturating_sub(1))).copied();
    for (i, &v) in values.iter().enumerate() {
        if !(0.0..=1.0).contains(&v) {
            out.push(Violation::new(
                Range,
                at(i),
                format!("value {v} lies outside [0, 1]"),
            ));
        }
    }
    for i in 0..breaks.len() {
        let ok = if kind.nonincreasing() {
            values[i] >= values[i + 1]
        } else {
            values[i] <= values[i + 1]
        };
        if !ok {
            out.push(Violation::new(
                Monotonicity,
                Some(breaks[i]),
                format!("value goes from {} to {}", values[i], values[i + 1]),
            ));
        }
    }
    let first = values[0];
    let last = values[values.len() - 1];
    match kind {
        TailKind::Right => {
            if first != 1.0 {
                out.push(Violation::new(Limit, at(0), "must tend to 1 at -inf"));
            }
            if last != 0.0 {
                out.push(Violation::new(Limit, at(breaks.len()), "must tend to 0 at +inf"));
            }
        }
        TailKind::Left => {
            if first != 0.0 {
                out.push(Violation::new(Limit, at(0), "must tend to 0 at -inf"));
            }
            if last != 1.0 {
                out.push(Violation::new(Limit, at(breaks.len()), "must tend to 1 at +inf"));
            }
        }
        TailKind::Absolute => {
            let i0 = match continuity {
                Side::Left => breaks.partition_point(|&b| b < 0.0),
                Side::Right => breaks.partition_point(|&b| b <= 0.0),
            };
            if values[i0] != 1.0 {
                out.push(Violation::new(Limit, Some(0.0), "must equal 1 at 0"));
            }
            if last != 0.0 {
                out.push(Violation::new(Limit, at(breaks.len()), "must tend to 0 at +inf"));
            }
        }
    }
    if continuity != kind.required_continuity() {
        if let Some(i) = (0..breaks.len()).find(|&i| values[i] != values[i + 1]) {
            out.push(Violation::new(
                Continuity,
                Some(breaks[i]),
                format!(
                    "a {kind} tail must be {}-continuous",
                    match kind.required_continuity() {
                        Side::Left => "left",
                        Side::Right => "right",
                    }
                ),
            ));
        }
    }
}

fn validate_pl(f: &TailFn, knots: &[(f64, f64)], out: &mut Vec<Violation>) {
    use ViolationKind::*;
    if knots.is_empty() {
        out.push(Violation::new(Parameter, None, "at least one knot is needed"));
        return;
    }
    if knots.iter().any(|k| !k.0.is_finite()) {
        out.push(Violation::new(Parameter, None, "knots must be finite"));
        return;
    }
    for w in knots.windows(2) {
        if !(w[0].0 < w[1].0) {
            out.push(Violation::new(
                Parameter,
                Some(w[1].0),
                "knots must be strictly increasing",
            ));
        }
    }
    for &(t, v) in knots {
        if !(0.0..=1.0).contains(&v) {
            out.push(Violation::new(
                Range,
                Some(t),
                format!("value {v} lies outside [0, 1]"),
            ));
        }
    }
    let kind = f.kind;
    for w in knots.windows(2) {
        let ok = if kind.nonincreasing() {
            w[0].1 >= w[1].1
        } else {
            w[0].1 <= w[1].1
        };
        if !ok {
            out.push(Violation::new(
                Monotonicity,
                Some(w[1].0),
                format!("value goes from {} to {}", w[0].1, w[1].1),
            ));
        }
    }
    let first = knots[0];
    let last = knots[knots.len() - 1];
    match kind {
        TailKind::Right => {
            if first.1 != 1.0 {
                out.push(Violation::new(Limit, Some(first.0), "must tend to 1 at -inf"));
            }
            if last.1 != 0.0 {
                out.push(Violation::new(Limit, Some(last.0), "must tend to 0 at +inf"));
            }
        }
        TailKind::Left => {
            if first.1 != 0.0 {
                out.push(Violation::new(Limit, Some(first.0), "must tend to 0 at -inf"));
            }
            if last.1 != 1.0 {
                out.push(Violation::new(Limit, Some(last.0), "must tend to 1 at +inf"));
            }
        }
        TailKind::Absolute => {
            if interpolate(knots, 0.0) != 1.0 {
                out.push(Violation::new(Limit, Some(0.0), "must equal 1 at 0"));
            }
            if last.1 != 0.0 {
                out.push(Violation::new(Limit, Some(last.0), "must tend to 0 at +inf"));
            }
        }
    }
}

/// A left tail for `P(X <= t)` paired with a right tail for `P(X >= t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoTail {
    pub minus: TailFn,
    pub plus: TailFn,
}

impl TwoTail {
    pub fn new(minus: TailFn, plus: TailFn) -> Result<Self> {
        let tt = TwoTail { minus, plus };
        let v = tt.validate();
        if v.is_empty() {
            Ok(tt)
        } else {
            Err(Error::InvalidTail(v))
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.minus.kind != TailKind::Left {
            out.push(Violation::new(
                ViolationKind::Parameter,
                None,
                format!("minus tail must be a left tail, got {}", self.minus.kind),
            ));
        }
        if self.plus.kind != TailKind::Right {
            out.push(Violation::new(
                ViolationKind::Parameter,
                None,
                format!("plus tail must be a right tail, got {}", self.plus.kind),
            ));
        }
        out.extend(self.minus.validate());
        out.extend(self.plus.validate());
        if out.is_empty() {
            if self.minus.eval(0.0) != 1.0 {
                out.push(Violation::new(
                    ViolationKind::Limit,
                    Some(0.0),
                    "minus tail must equal 1 at 0",
                ));
            }
            if self.plus.eval(0.0) != 1.0 {
                out.push(Violation::new(
                    ViolationKind::Limit,
                    Some(0.0),
                    "plus tail must equal 1 at 0",
                ));
            }
        }
        out
    }
}

/// `t -> min(1, plus(t) + minus(-t))`. Two step tails give a step tail back.
pub fn two_to_absolute(tt: &TwoTail) -> TailFn {
    if let (Family::Step { breaks: bp, .. }, Family::Step { breaks: bm, .. }) =
        (&tt.plus.family, &tt.minus.family)
    {
        let mut breaks: Vec<f64> = bp
            .iter()
            .copied()
            .chain(bm.iter().map(|b| -b))
            .filter(|&b| b >= 0.0)
            .chain(std::iter::once(0.0))
            .collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let h = |t: f64| (tt.plus.eval(t) + tt.minus.eval(-t)).min(1.0);
        let mut values: Vec<f64> = breaks.iter().map(|&b| h(b)).collect();
        values.push(h(breaks[breaks.len() - 1] + 1.0));
        return TailFn::step(TailKind::Absolute, breaks, values);
    }
    TailFn {
        kind: TailKind::Absolute,
        family: Family::SumMin(Box::new(tt.clone())),
    }
}

/// Split an absolute tail into the two-sided pair `f+(t) = f(t)` for `t >= 0`
/// and `f-(t) = f(-t)` for `t <= 0`, both equal to 1 elsewhere.
pub fn absolute_to_two(f: &TailFn) -> Result<TwoTail> {
    f.expect_kind(TailKind::Absolute)?;
    let plus = match &f.family {
        Family::Exponential { .. } | Family::Step { .. } | Family::PiecewiseLinear { .. } => {
            TailFn {
                kind: TailKind::Right,
                family: f.family.clone(),
            }
        }
        _ => TailFn {
            kind: TailKind::Right,
            family: Family::Restricted(Box::new(f.clone())),
        },
    };
    let minus = match &f.family {
        Family::Exponential { .. } | Family::Step { .. } | Family::PiecewiseLinear { .. } => {
            plus.mirrored(TailKind::Left)
        }
        _ => TailFn {
            kind: TailKind::Left,
            family: Family::Reflected(Box::new(f.clone())),
        },
    };
    Ok(TwoTail { minus, plus })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step_right() -> TailFn {
        TailFn::step(TailKind::Right, vec![1.0, 2.0], vec![1.0, 0.5, 0.0])
    }

    #[test]
    fn exponential_absolute_values() {
        let f = TailFn::exponential(TailKind::Absolute, 1.0);
        assert_eq!(f.eval(-3.0), 1.0);
        assert_eq!(f.eval(0.0), 1.0);
        assert!((f.eval(2.0) - (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn step_is_left_continuous() {
        let f = step_right();
        assert_eq!(f.eval(1.0), 1.0);
        assert_eq!(f.eval(1.0 + 1e-12), 0.5);
        assert_eq!(f.eval(2.0), 0.5);
        assert_eq!(f.eval(2.5), 0.0);
    }

    #[test]
    fn inverse_right_examples() {
        let f = TailFn::exponential(TailKind::Right, 1.0);
        assert!((f.gen_inverse_right(0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(step_right().gen_inverse_right(0.6).unwrap(), 2.0);
        assert_eq!(step_right().gen_inverse_right(0.3).unwrap(), 1.0);
    }

    #[test]
    fn inverse_left_of_step() {
        let f = step_right().reflect().unwrap();
        assert_eq!(f.kind(), TailKind::Left);
        assert_eq!(f.eval(-1.0), 1.0);
        assert_eq!(f.eval(-1.5), 0.5);
        assert_eq!(f.eval(-2.0), 0.5);
        assert_eq!(f.eval(-2.5), 0.0);
        assert_eq!(f.gen_inverse_left(0.4).unwrap(), -2.0);
        assert_eq!(f.gen_inverse_left(0.7).unwrap(), -1.0);
    }

    #[test]
    fn gaussian_inverse_is_precise() {
        let f = TailFn::gaussian(TailKind::Right, 0.3, 2.0);
        for &s in &[1e-9, 0.01, 0.3, 0.5, 0.9, 1.0 - 1e-9] {
            let t = f.gen_inverse_right(s).unwrap();
            assert!((f.eval(t) - (1.0 - s)).abs() < 1e-12, "s={s}");
        }
        assert!((f.gen_inverse_right(0.5).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn validate_reports_violations() {
        let bad = TailFn::step(TailKind::Right, vec![1.0, 2.0], vec![1.0, 1.2, 0.0]);
        let v = bad.validate();
        assert!(v.iter().any(|x| x.kind == ViolationKind::Range && x.at == Some(2.0)));
        assert!(v.iter().any(|x| x.kind == ViolationKind::Monotonicity));

        let wrong_side =
            TailFn::step_with_continuity(TailKind::Right, vec![1.0], vec![1.0, 0.0], Side::Right);
        let v = wrong_side.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::Continuity);
        assert_eq!(v[0].at, Some(1.0));

        let never_zero = TailFn::step(TailKind::Right, vec![1.0], vec![1.0, 0.2]);
        assert!(never_zero
            .validate()
            .iter()
            .any(|x| x.kind == ViolationKind::Limit));

        assert!(TailFn::exponential(TailKind::Right, -1.0).checked().is_err());
        assert!(TailFn::gaussian(TailKind::Absolute, -0.1, 1.0).checked().is_err());
        assert!(step_right().checked().is_ok());
    }

    #[test]
    fn two_step_tails_close_to_a_step() {
        let plus = TailFn::step(TailKind::Right, vec![0.0, 1.0, 3.0], vec![1.0, 0.4, 0.1, 0.0]);
        let minus = TailFn::step(TailKind::Left, vec![-2.0, 0.0], vec![0.0, 0.3, 1.0]);
        let tt = TwoTail::new(minus, plus).unwrap();
        let h = two_to_absolute(&tt);
        assert_eq!(h.family_name(), "step");
        assert!(h.validate().is_empty(), "{:?}", h.validate());
        for i in 0..400 {
            let t = i as f64 * 0.0125 - 0.5;
            let want = if t < 0.0 {
                1.0
            } else {
                (tt.plus.eval(t) + tt.minus.eval(-t)).min(1.0)
            };
            assert_eq!(h.eval(t), want, "t={t}");
        }
    }

    #[test]
    fn absolute_round_trip() {
        for f in [
            TailFn::exponential(TailKind::Absolute, 1.3),
            TailFn::gaussian(TailKind::Absolute, 0.5, 1.0),
            TailFn::step(TailKind::Absolute, vec![0.5, 2.0], vec![1.0, 0.25, 0.0]),
        ] {
            let tt = absolute_to_two(&f).unwrap();
            assert!(tt.validate().is_empty());
            for i in 0..100 {
                let t = i as f64 * 0.05;
                assert_eq!(tt.plus.eval(t), f.eval(t));
                assert_eq!(tt.minus.eval(-t), f.eval(t));
                assert_eq!(tt.plus.eval(-t - 0.01), 1.0);
                assert_eq!(tt.minus.eval(t + 0.01), 1.0);
            }
        }
    }
}
