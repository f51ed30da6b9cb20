//! Random instances shared by the integration targets.
#![allow(dead_code)]

use rand_chacha::ChaCha8Rng;
use sharptail::finite_solver::PointSet;
use sharptail::rng::{index, stream, uniform};
use sharptail::{TailFn, TailKind};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    stream(seed, 0)
}

/// Strictly increasing breakpoints in `(lo, hi)`.
fn sorted(r: &mut Rng, k: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut b: Vec<f64> = (0..k).map(|_| uniform(r, lo, hi)).collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// Values from 1 down to 0 through `k` random interior levels.
fn levels(r: &mut Rng, k: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..k).map(|_| uniform(r, 0.02, 0.98)).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn step(r: &mut Rng, kind: TailKind) -> TailFn {
    let k = 1 + index(r, 4);
    let breaks = sorted(r, k, 0.1, 4.0);
    let mut values = vec![1.0];
    values.extend(levels(r, breaks.len() - 1));
    values.push(0.0);
    let f = TailFn::step(kind, breaks, values);
    assert!(f.validate().is_empty(), "{f:?}");
    f
}

pub fn exponential(r: &mut Rng, kind: TailKind) -> TailFn {
    TailFn::exponential(kind, uniform(r, 0.3, 3.0))
}

pub fn gaussian_abs(r: &mut Rng) -> TailFn {
    TailFn::gaussian(TailKind::Absolute, uniform(r, 0.0, 1.0), uniform(r, 0.3, 2.0))
}

pub fn piecewise_linear(r: &mut Rng, kind: TailKind) -> TailFn {
    let k = 1 + index(r, 3);
    let mut xs = vec![0.0];
    xs.extend(sorted(r, k, 0.1, 4.0));
    let mut ys = vec![1.0];
    ys.extend(levels(r, xs.len() - 2));
    ys.push(0.0);
    let f = TailFn::piecewise_linear(kind, xs.into_iter().zip(ys).collect());
    assert!(f.validate().is_empty(), "{f:?}");
    f
}

/// Any absolute tail.
pub fn any_abs(r: &mut Rng) -> TailFn {
    match index(r, 4) {
        0 => step(r, TailKind::Absolute),
        1 => exponential(r, TailKind::Absolute),
        2 => gaussian_abs(r),
        _ => piecewise_linear(r, TailKind::Absolute),
    }
}

/// A continuous absolute tail.
pub fn continuous_abs(r: &mut Rng) -> TailFn {
    match index(r, 3) {
        0 => exponential(r, TailKind::Absolute),
        1 => gaussian_abs(r),
        _ => piecewise_linear(r, TailKind::Absolute),
    }
}

/// A coordinate drawn from a small lattice so that coincidences occur.
pub fn coord(r: &mut Rng, signed: bool) -> f64 {
    let x = index(r, 9) as f64 * 0.5;
    if signed && index(r, 2) == 1 {
        -x
    } else {
        x
    }
}

pub fn points(r: &mut Rng, dim: usize, count: usize, signed: bool) -> PointSet {
    loop {
        let pts: Vec<Vec<f64>> = (0..count)
            .map(|_| (0..dim).map(|_| coord(r, signed)).collect())
            .collect();
        let v = PointSet::new(pts).unwrap();
        if v.len() == count {
            return v;
        }
    }
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
