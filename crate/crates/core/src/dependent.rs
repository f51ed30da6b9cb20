//! Sharpest bounds without independence: the Q map, the southwest boundary,
//! an LP over finitely supported measures and the closed form for `n = 2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite_solver::PointSet;
use crate::lp;
use crate::tailfn::{TailFn, TailKind};

/// Default bound on `|V|` for the LP.
pub const DEFAULT_LP_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepSolution {
    pub value: f64,
    /// Optimal mass on each point of `V`, in input order.
    pub masses: Vec<(Vec<f64>, f64)>,
}

/// Componentwise absolute value, deduplicated.
pub fn q_map(v: &PointSet) -> PointSet {
    PointSet::new(
        v.points()
            .iter()
            .map(|p| p.iter().map(|x| x.abs()).collect())
            .collect(),
    )
    .expect("image of a valid point set")
}

/// The componentwise-minimal points of a subset of the closed positive orthant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwBoundary {
    pub points: Vec<Vec<f64>>,
}

fn below_or_equal(q: &[f64], p: &[f64]) -> bool {
    q.iter().zip(p).all(|(a, b)| a <= b)
}

pub fn sw_boundary(v: &PointSet) -> Result<SwBoundary> {
    if let Some(p) = v.points().iter().find(|p| p.iter().any(|&x| x < 0.0)) {
        return Err(Error::input(format!(
            "point {p:?} has a negative coordinate"
        )));
    }
    let pts = v.points();
    let points = pts
        .iter()
        .filter(|p| !pts.iter().any(|q| q != *p && below_or_equal(q, p)))
        .cloned()
        .collect();
    Ok(SwBoundary { points })
}

/// `∂SW(Q(V))`, which carries the same dependent optimum as `V`.
pub fn sw_reduce(v: &PointSet) -> PointSet {
    let b = sw_boundary(&q_map(v)).expect("Q(V) lies in the positive orthant");
    PointSet::new(b.points).expect("boundary of a nonempty set is nonempty")
}

pub fn solve_dep_lp(f: &[TailFn], v: &PointSet) -> Result<DepSolution> {
    solve_dep_lp_with(f, v, DEFAULT_LP_CAP)
}

/// Maximize the total mass on `V` subject to `P(|X_k| >= t) <= f_k(t)` at
/// every threshold `t` among the magnitudes of the k-th coordinates.
pub fn solve_dep_lp_with(f: &[TailFn], v: &PointSet, cap: usize) -> Result<DepSolution> {
    if v.len() > cap {
        return Err(Error::CapExceeded {
            what: "point set",
            size: v.len(),
            cap,
        });
    }
    if f.len() != v.dim() {
        return Err(Error::input(format!(
            "{} tails given for points of dimension {}",
            f.len(),
            v.dim()
        )));
    }
    for fk in f {
        fk.expect_kind(TailKind::Absolute)?;
        let viol = fk.validate();
        if !viol.is_empty() {
            return Err(Error::InvalidTail(viol));
        }
    }
    let pts = v.points();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (k, fk) in f.iter().enumerate() {
        let mut thresholds: Vec<f64> = pts.iter().map(|p| p[k].abs()).filter(|&t| t > 0.0).collect();
        thresholds.sort_by(f64::total_cmp);
        thresholds.dedup();
        for t in thresholds {
            a.push(pts.iter().map(|p| if p[k].abs() >= t { 1.0 } else { 0.0 }).collect());
            b.push(fk.eval(t));
        }
    }
    a.push(vec![1.0; pts.len()]);
    b.push(1.0);
    let sol = lp::maximize(&vec![1.0; pts.len()], &a, &b)?;
    Ok(DepSolution {
        value: sol.objective.min(1.0),
        masses: pts.iter().cloned().zip(sol.x).collect(),
    })
}

/// The closed form in the plane. With `W` the first coordinates of the
/// southwest boundary of `Q(V)` and `h2(t)` the lowest second coordinate
/// above `t`, the bound is the smallest of `f1(min W)`, `f2(h2(max W))` and
/// `f1(next(t)) + f2(h2(t))` over consecutive `t < next(t)` in `W`.
pub fn solve_dep_2d(f1: &TailFn, f2: &TailFn, v: &PointSet) -> Result<f64> {
    if v.dim() != 2 {
        return Err(Error::input(format!(
            "the closed form needs points in the plane, got dimension {}",
            v.dim()
        )));
    }
    if v.points().iter().any(|p| p[0] == 0.0 && p[1] == 0.0) {
        return Err(Error::input("the closed form excludes the origin"));
    }
    f1.expect_kind(TailKind::Absolute)?;
    f2.expect_kind(TailKind::Absolute)?;
    if !f1.is_continuous() {
        return Err(Error::input(format!(
            "the first tail must be continuous, got family {}",
            f1.family_name()
        )));
    }
    let q = q_map(v);
    let boundary = sw_boundary(&q)?;
    let mut w: Vec<f64> = boundary.points.iter().map(|p| p[0]).collect();
    w.sort_by(f64::total_cmp);
    w.dedup();
    let h2 = |t: f64| {
        q.points()
            .iter()
            .filter(|p| p[0] == t)
            .map(|p| p[1])
            .fold(f64::INFINITY, f64::min)
    };
    let kappa = w
        .windows(2)
        .map(|p| f1.eval(p[1]) + f2.eval(h2(p[0])))
        .fold(f64::INFINITY, f64::min);
    let last = w[w.len() - 1];
    Ok(f1.eval(w[0]).min(kappa).min(f2.eval(h2(last))))
}
