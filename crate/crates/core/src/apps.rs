//! Applications of the monotone-function tail theorems: Gaussian sums,
//! monotone and positive-multinomial functions of `X~`, Schur multiplier
//! traces and the continuous one-dimensional shift.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;
use crate::special;
use crate::tailfn::{TailFn, TailKind};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpec {
    pub mus: Vec<f64>,
    pub sigmas: Vec<f64>,
}

impl GaussianSpec {
    pub fn new(mus: Vec<f64>, sigmas: Vec<f64>) -> Result<Self> {
        if mus.is_empty() || mus.len() != sigmas.len() {
            return Err(Error::input("need one sigma per mu, and at least one of each"));
        }
        if mus.iter().any(|m| !m.is_finite()) {
            return Err(Error::input("means must be finite"));
        }
        if sigmas.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::input("standard deviations must be positive"));
        }
        Ok(GaussianSpec { mus, sigmas })
    }

    pub fn mean(&self) -> f64 {
        self.mus.iter().sum()
    }

    pub fn sd(&self) -> f64 {
        self.sigmas.iter().map(|s| s * s).sum::<f64>().sqrt()
    }
}

/// Sharpest right tail at `t` of a sum of independent variables with the
/// given Gaussian right tails: a normal tail with the summed mean and variance.
pub fn gaussian_sum_sharp_tail(spec: &GaussianSpec, t: f64) -> f64 {
    special::upper_normal((t - spec.mean()) / spec.sd())
}

/// One term `coef * x_1^e_1 * ... * x_n^e_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    pub exponents: Vec<u32>,
}

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A function `g: R^n -> R` together with the properties it claims.
#[derive(Clone)]
pub enum Aggregate {
    Sum,
    Max,
    Min,
    Product,
    WeightedSum(Vec<f64>),
    Polynomial(Vec<Monomial>),
    Custom {
        name: String,
        func: ScalarFn,
        monotone: bool,
        positive_multinomial: bool,
    },
}

impl fmt::Debug for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Aggregate::Sum => f.write_str("Sum"),
            Aggregate::Max => f.write_str("Max"),
            Aggregate::Min => f.write_str("Min"),
            Aggregate::Product => f.write_str("Product"),
            Aggregate::WeightedSum(w) => write!(f, "WeightedSum({w:?})"),
            Aggregate::Polynomial(p) => write!(f, "Polynomial({p:?})"),
            Aggregate::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl Aggregate {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Aggregate::Sum => x.iter().sum(),
            Aggregate::Max => x.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Aggregate::Min => x.iter().copied().fold(f64::INFINITY, f64::min),
            Aggregate::Product => x.iter().product(),
            Aggregate::WeightedSum(w) => w.iter().zip(x).map(|(a, b)| a * b).sum(),
            Aggregate::Polynomial(terms) => terms
                .iter()
                .map(|m| {
                    m.coef
                        * m.exponents
                            .iter()
                            .zip(x)
                            .map(|(&e, &xi)| if e == 0 { 1.0 } else { xi.powi(e as i32) })
                            .product::<f64>()
                })
                .sum(),
            Aggregate::Custom { func, .. } => func(x),
        }
    }

    /// Componentwise nondecreasing on all of `R^n`.
    pub fn declared_monotone(&self) -> bool {
        match self {
            Aggregate::Sum | Aggregate::Max | Aggregate::Min => true,
            Aggregate::Product => false,
            Aggregate::WeightedSum(w) => w.iter().all(|&x| x >= 0.0),
            Aggregate::Polynomial(terms) => terms
                .iter()
                .all(|m| m.coef >= 0.0 && m.exponents.iter().sum::<u32>() <= 1),
            Aggregate::Custom { monotone, .. } => *monotone,
        }
    }

    /// Nondecreasing on the nonnegative orthant and `g(x) <= g(|x|)`.
    pub fn declared_positive_multinomial(&self) -> bool {
        match self {
            Aggregate::Sum | Aggregate::Max | Aggregate::Min | Aggregate::Product => true,
            Aggregate::WeightedSum(w) => w.iter().all(|&x| x >= 0.0),
            Aggregate::Polynomial(terms) => terms.iter().all(|m| m.coef >= 0.0),
            Aggregate::Custom {
                positive_multinomial,
                ..
            } => *positive_multinomial,
        }
    }

    fn arity_ok(&self, n: usize) -> bool {
        match self {
            Aggregate::WeightedSum(w) => w.len() == n,
            Aggregate::Polynomial(terms) => terms.iter().all(|m| m.exponents.len() == n),
            _ => true,
        }
    }
}

const SPOT_CHECKS: usize = 1000;
const SPOT_SEED: u64 = 0x5eed;

fn spot_fail(x: &[f64], y: &[f64], gx: f64, gy: f64) -> Error {
    Error::input(format!(
        "g fails its declared property: g({x:?}) = {gx} > g({y:?}) = {gy}"
    ))
}

fn exceeds(a: f64, b: f64) -> bool {
    a > b + 1e-9 * (1.0 + b.abs())
}

/// Check `x <= y => g(x) <= g(y)` on random pairs.
pub fn spot_check_monotone(g: &Aggregate, n: usize) -> Result<()> {
    let mut r = rng::stream(SPOT_SEED, 0);
    for _ in 0..SPOT_CHECKS {
        let x: Vec<f64> = (0..n).map(|_| rng::uniform(&mut r, -5.0, 5.0)).collect();
        let y: Vec<f64> = x.iter().map(|xi| xi + rng::uniform(&mut r, 0.0, 3.0)).collect();
        let (gx, gy) = (g.eval(&x), g.eval(&y));
        if exceeds(gx, gy) {
            return Err(spot_fail(&x, &y, gx, gy));
        }
    }
    Ok(())
}

/// Check monotonicity on the nonnegative orthant and `g(x) <= g(|x|)` on
/// random points.
pub fn spot_check_positive_multinomial(g: &Aggregate, n: usize) -> Result<()> {
    let mut r = rng::stream(SPOT_SEED, 1);
    for _ in 0..SPOT_CHECKS {
        let x: Vec<f64> = (0..n).map(|_| rng::uniform(&mut r, 0.0, 5.0)).collect();
        let y: Vec<f64> = x.iter().map(|xi| xi + rng::uniform(&mut r, 0.0, 3.0)).collect();
        let (gx, gy) = (g.eval(&x), g.eval(&y));
        if exceeds(gx, gy) {
            return Err(spot_fail(&x, &y, gx, gy));
        }
        let z: Vec<f64> = (0..n).map(|_| rng::uniform(&mut r, -5.0, 5.0)).collect();
        let za: Vec<f64> = z.iter().map(|v| v.abs()).collect();
        let (gz, gza) = (g.eval(&z), g.eval(&za));
        if exceeds(gz, gza) {
            return Err(spot_fail(&z, &za, gz, gza));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Monte Carlo over uniform `s`, batched on counter-based streams.
    Mc { samples: usize, seed: u64 },
    /// Tensor grid of `resolution` cells per coordinate, bracketing the
    /// probability by the cell corners.
    Grid { resolution: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: Option<f64>,
    pub bracket: Option<(f64, f64)>,
}

/// Largest number of grid cells evaluated in grid mode.
pub const GRID_CELL_CAP: usize = 1 << 28;

fn xtilde(f: &TailFn, s: f64) -> f64 {
    f.sup_at_least(1.0 - s)
}

fn monte_carlo(
    n: usize,
    samples: usize,
    seed: u64,
    draw: impl Fn(&mut rand_chacha::ChaCha8Rng, &mut [f64]) -> bool + Sync,
) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::input("need at least one sample"));
    }
    let hits: u64 = rng::batches(samples)
        .into_par_iter()
        .map(|(b, size)| {
            let mut r = rng::stream(seed, b);
            let mut buf = vec![0.0; n];
            (0..size).filter(|_| draw(&mut r, &mut buf)).count() as u64
        })
        .sum();
    let p = hits as f64 / samples as f64;
    Ok(Estimate {
        value: p,
        std_error: Some((p * (1.0 - p) / samples as f64).sqrt()),
        bracket: None,
    })
}

fn estimate(g: &Aggregate, f: &[TailFn], t: f64, mode: Mode) -> Result<Estimate> {
    let n = f.len();
    match mode {
        Mode::Mc { samples, seed } => monte_carlo(n, samples, seed, |r, x| {
            for (xk, fk) in x.iter_mut().zip(f) {
                *xk = xtilde(fk, rng::open01(r));
            }
            g.eval(x) >= t
        }),
        Mode::Grid { resolution } => grid_bracket(g, f, t, resolution),
    }
}

fn grid_bracket(g: &Aggregate, f: &[TailFn], t: f64, r: usize) -> Result<Estimate> {
    let n = f.len();
    if r == 0 {
        return Err(Error::input("grid resolution must be positive"));
    }
    let cells = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(r));
    let cells = match cells {
        Some(c) if c <= GRID_CELL_CAP => c,
        _ => {
            return Err(Error::CapExceeded {
                what: "grid cell count",
                size: cells.unwrap_or(usize::MAX),
                cap: GRID_CELL_CAP,
            })
        }
    };
    // corners[k][i] = X~_k(i / r); the cell [i/r, (i+1)/r) lies between
    // corners i and i + 1.
    let corners: Vec<Vec<f64>> = f
        .iter()
        .map(|fk| {
            (0..=r)
                .map(|i| {
                    if i == r {
                        f64::INFINITY
                    } else {
                        fk.sup_at_least(1.0 - i as f64 / r as f64)
                    }
                })
                .collect()
        })
        .collect();
    let rest = cells / r;
    let (lo, hi) = (0..r)
        .into_par_iter()
        .map(|i0| {
            let mut idx = vec![0usize; n];
            idx[0] = i0;
            let mut low = vec![0.0; n];
            let mut up = vec![0.0; n];
            let (mut sure, mut maybe) = (0u64, 0u64);
            for _ in 0..rest {
                for k in 0..n {
                    low[k] = corners[k][idx[k]];
                    up[k] = corners[k][idx[k] + 1];
                }
                let gl = g.eval(&low);
                if gl >= t {
                    sure += 1;
                    maybe += 1;
                } else {
                    let gu = g.eval(&up);
                    if gu >= t || gu.is_nan() {
                        maybe += 1;
                    }
                }
                for k in (1..n).rev() {
                    idx[k] += 1;
                    if idx[k] < r {
                        break;
                    }
                    idx[k] = 0;
                }
            }
            (sure, maybe)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let lo = lo as f64 / cells as f64;
    let hi = hi as f64 / cells as f64;
    Ok(Estimate {
        value: 0.5 * (lo + hi),
        std_error: None,
        bracket: Some((lo, hi)),
    })
}

fn check_right_tails(f: &[TailFn], kind: Option<TailKind>) -> Result<()> {
    if f.is_empty() {
        return Err(Error::input("need at least one tail"));
    }
    for fk in f {
        match kind {
            Some(k) => fk.expect_kind(k)?,
            None => fk.expect_right_like()?,
        }
        let v = fk.validate();
        if !v.is_empty() {
            return Err(Error::InvalidTail(v));
        }
    }
    Ok(())
}

/// `P(g(X~_1, ..., X~_n) >= t)` for a componentwise nondecreasing `g`.
pub fn monotone_sharp_tail(g: &Aggregate, f: &[TailFn], t: f64, mode: Mode) -> Result<Estimate> {
    check_right_tails(f, None)?;
    if !g.arity_ok(f.len()) {
        return Err(Error::input("g does not take as many arguments as there are tails"));
    }
    if !g.declared_monotone() {
        return Err(Error::input(format!("{g:?} is not declared monotone")));
    }
    spot_check_monotone(g, f.len())?;
    estimate(g, f, t, mode)
}

/// Same as [`monotone_sharp_tail`] for absolute tails and a `g` that is
/// nondecreasing on the positive orthant with `g(x) <= g(|x|)`.
pub fn positive_multinomial_sharp_tail(
    g: &Aggregate,
    f: &[TailFn],
    t: f64,
    mode: Mode,
) -> Result<Estimate> {
    check_right_tails(f, Some(TailKind::Absolute))?;
    if !g.arity_ok(f.len()) {
        return Err(Error::input("g does not take as many arguments as there are tails"));
    }
    if !g.declared_positive_multinomial() {
        return Err(Error::input(format!(
            "{g:?} is not declared a positive multinomial-type function"
        )));
    }
    spot_check_positive_multinomial(g, f.len())?;
    estimate(g, f, t, mode)
}

/// Coefficients `m[j_1, ..., j_{d+1}]` of a d-linear Schur multiplier on
/// `n x n` matrices, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurTensor {
    pub d: usize,
    pub n: usize,
    pub entries: Vec<f64>,
}

pub type Matrix = Vec<Vec<f64>>;

impl SchurTensor {
    pub fn new(d: usize, n: usize, entries: Vec<f64>) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::input("tensor arity and size must be positive"));
        }
        let want = n.checked_pow(d as u32 + 1).unwrap_or(usize::MAX);
        if entries.len() != want {
            return Err(Error::input(format!(
                "a tensor with d={d}, n={n} has {want} entries, got {}",
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::input("tensor entries must be finite"));
        }
        Ok(SchurTensor { d, n, entries })
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.entries[idx.iter().fold(0, |acc, &j| acc * self.n + j)]
    }
}

/// `sum m[j] x1[j1][j2] ... xd[jd][j_{d+1}] E[j1][j_{d+1}]`, summed in
/// lexicographic order of `(j_1, ..., j_{d+1})`.
pub fn schur_multiply(m: &SchurTensor, xs: &[Matrix]) -> Result<Matrix> {
    let (d, n) = (m.d, m.n);
    if xs.len() != d {
        return Err(Error::input(format!("expected {d} matrices, got {}", xs.len())));
    }
    if xs.iter().any(|x| x.len() != n || x.iter().any(|row| row.len() != n)) {
        return Err(Error::input(format!("every matrix must be {n} x {n}")));
    }
    let mut out = vec![vec![0.0; n]; n];
    let mut idx = vec![0usize; d + 1];
    for &c in &m.entries {
        let mut term = c;
        for k in 0..d {
            term *= xs[k][idx[k]][idx[k + 1]];
        }
        out[idx[0]][idx[d]] += term;
        for k in (0..=d).rev() {
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
        }
    }
    Ok(out)
}

pub fn trace(m: &Matrix) -> f64 {
    (0..m.len()).map(|i| m[i][i]).sum()
}

/// Monte Carlo estimate of `P(Tr(M(X~_1, ..., X~_d)) >= t)` (or of its
/// absolute value) with each entry drawn independently from its `X~`.
///
/// `tails` holds one tail for every entry, indexed `[k][i][j]`, or a single
/// tail shared by all entries.
pub fn schur_trace_sharp_tail(
    m: &SchurTensor,
    tails: &[TailFn],
    t: f64,
    samples: usize,
    seed: u64,
    absolute: bool,
) -> Result<Estimate> {
    if m.entries.iter().any(|&x| x < 0.0) {
        return Err(Error::input("tensor entries must be nonnegative"));
    }
    let (d, n) = (m.d, m.n);
    let count = d * n * n;
    if tails.len() != 1 && tails.len() != count {
        return Err(Error::input(format!(
            "need 1 or {count} tails, got {}",
            tails.len()
        )));
    }
    check_right_tails(tails, Some(TailKind::Absolute))?;
    let tail = |e: usize| if tails.len() == 1 { &tails[0] } else { &tails[e] };
    monte_carlo(count, samples, seed, |r, buf| {
        for (e, x) in buf.iter_mut().enumerate() {
            *x = xtilde(tail(e), rng::open01(r));
        }
        let xs: Vec<Matrix> = (0..d)
            .map(|k| {
                (0..n)
                    .map(|i| buf[(k * n + i) * n..(k * n + i + 1) * n].to_vec())
                    .collect()
            })
            .collect();
        let tr = trace(&schur_multiply(m, &xs).expect("shapes match"));
        let v = if absolute { tr.abs() } else { tr };
        v >= t
    })
}

/// A continuous piecewise-linear `g: R -> R`: linear interpolation between
/// knots, extended by the given slopes outside them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinearG {
    pub knots: Vec<(f64, f64)>,
    pub left_slope: f64,
    pub right_slope: f64,
}

impl PiecewiseLinearG {
    pub fn new(knots: Vec<(f64, f64)>, left_slope: f64, right_slope: f64) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::input("g needs at least one knot"));
        }
        if knots.iter().any(|k| !k.0.is_finite() || !k.1.is_finite())
            || !left_slope.is_finite()
            || !right_slope.is_finite()
        {
            return Err(Error::input("g must have finite knots and slopes"));
        }
        if knots.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::input("knots of g must be strictly increasing"));
        }
        Ok(PiecewiseLinearG {
            knots,
            left_slope,
            right_slope,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (x0, y0) = self.knots[0];
        let (xl, yl) = self.knots[self.knots.len() - 1];
        if x <= x0 {
            return y0 + self.left_slope * (x - x0);
        }
        if x >= xl {
            return yl + self.right_slope * (x - xl);
        }
        let j = self.knots.partition_point(|k| k.0 <= x);
        let (a, ya) = self.knots[j - 1];
        let (b, yb) = self.knots[j];
        ya + (x - a) / (b - a) * (yb - ya)
    }

    /// `{ x : g(x') <= g(x) for all x' < x }` as sorted closed intervals;
    /// the first may start at `-inf` and the last may end at `+inf`.
    pub fn running_max_set(&self) -> Vec<(f64, f64)> {
        let k = &self.knots;
        let mut parts: Vec<(f64, f64)> = Vec::new();
        let mut best;
        if self.left_slope >= 0.0 {
            parts.push((f64::NEG_INFINITY, k[0].0));
            best = k[0].1;
        } else {
            // g is unbounded above to the left, so nothing qualifies; the
            // running max stays infinite.
            return Vec::new();
        }
        for w in k.windows(2) {
            let ((a, ya), (b, yb)) = (w[0], w[1]);
            if yb > ya {
                let start = if ya >= best {
                    a
                } else if yb >= best {
                    a + (best - ya) / (yb - ya) * (b - a)
                } else {
                    f64::NAN
                };
                if !start.is_nan() {
                    parts.push((start, b));
                }
            } else if yb == ya && ya >= best {
                parts.push((a, b));
            } else if ya >= best {
                parts.push((a, a));
            }
            best = best.max(ya).max(yb);
        }
        let (xl, yl) = k[k.len() - 1];
        if self.right_slope > 0.0 {
            let start = if yl >= best {
                xl
            } else {
                xl + (best - yl) / self.right_slope
            };
            parts.push((start, f64::INFINITY));
        } else if self.right_slope == 0.0 && yl >= best {
            parts.push((xl, f64::INFINITY));
        } else if yl >= best {
            parts.push((xl, xl));
        }
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for p in parts {
            match merged.last_mut() {
                Some(last) if p.0 <= last.1 => last.1 = last.1.max(p.1),
                _ => merged.push(p),
            }
        }
        merged
    }

    /// `inf { x : g(x) >= t }`, or `None` if `g` never reaches `t`.
    fn first_reach(&self, t: f64) -> Option<f64> {
        let k = &self.knots;
        let (x0, y0) = k[0];
        if t <= y0 {
            return Some(if self.left_slope > 0.0 {
                x0 - (y0 - t) / self.left_slope
            } else {
                f64::NEG_INFINITY
            });
        }
        for w in k.windows(2) {
            let ((a, ya), (b, yb)) = (w[0], w[1]);
            if yb >= t {
                return Some(a + (t - ya) / (yb - ya) * (b - a));
            }
        }
        let (xl, yl) = k[k.len() - 1];
        (self.right_slope > 0.0).then(|| xl + (t - yl) / self.right_slope)
    }
}

/// `P(g(S_R(f, G)) >= t)` with `G` the running-max set of `g`; this is
/// `f` at the first point where the running max of `g` reaches `t`.
pub fn continuous_1d_sharp_tail(g: &PiecewiseLinearG, f: &TailFn, t: f64) -> Result<f64> {
    f.expect_right_like()?;
    let v = f.validate();
    if !v.is_empty() {
        return Err(Error::InvalidTail(v));
    }
    if g.left_slope < 0.0 {
        return Err(Error::input(
            "the running-max set of g is bounded below (g decreases to the left of its first knot)",
        ));
    }
    Ok(match g.first_reach(t) {
        Some(x) if x == f64::NEG_INFINITY => 1.0,
        Some(x) => f.eval(x),
        None => 0.0,
    })
}
