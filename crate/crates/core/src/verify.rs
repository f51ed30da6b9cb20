//! Oracles that do not share code paths with the solvers: feasibility
//! checks, a multistart coordinate-ascent lower bound and exact sum tails.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite_solver::PointSet;
use crate::lp;
use crate::neat::{Atom, NeatRv};
use crate::rng;
use crate::tailfn::{Family, TailFn, TailKind, TwoTail};
use crate::EXACT_TOL;

/// A point where a distribution puts more mass in a tail than allowed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityViolation {
    pub coord: usize,
    pub t: f64,
    pub mass: f64,
    pub bound: f64,
}

fn check_points(f: &TailFn, extra: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut pts: Vec<f64> = f.breakpoints().into_iter().chain(extra).collect();
    pts.retain(|t| t.is_finite());
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `P(|X_k| >= t) <= f_k(t)` at every atom magnitude and breakpoint.
pub fn check_feasible_abs(x: &[Vec<Atom>], f: &[TailFn]) -> Vec<FeasibilityViolation> {
    let mut out = Vec::new();
    for (k, (atoms, fk)) in x.iter().zip(f).enumerate() {
        for t in check_points(fk, atoms.iter().map(|a| a.value.abs())) {
            if t <= 0.0 {
                continue;
            }
            let mass: f64 = atoms.iter().filter(|a| a.value.abs() >= t).map(|a| a.mass).sum();
            let bound = fk.eval(t);
            if mass > bound + EXACT_TOL {
                out.push(FeasibilityViolation {
                    coord: k,
                    t,
                    mass,
                    bound,
                });
            }
        }
    }
    out
}

/// `P(X >= t) <= f(t)` at every atom, breakpoint and, for a continuous part,
/// a sweep of its quantiles.
pub fn check_feasible_right(x: &NeatRv, f: &TailFn) -> Vec<FeasibilityViolation> {
    let pts = check_points(f, probe_points(x));
    pts.into_iter()
        .filter_map(|t| {
            let (mass, bound) = (x.rcdf(t), f.eval(t));
            (mass > bound + EXACT_TOL).then_some(FeasibilityViolation {
                coord: 0,
                t,
                mass,
                bound,
            })
        })
        .collect()
}

/// `P(X <= t) <= f(t)` for a left tail.
pub fn check_feasible_left(x: &NeatRv, f: &TailFn) -> Vec<FeasibilityViolation> {
    let pts = check_points(f, probe_points(x));
    pts.into_iter()
        .filter_map(|t| {
            let (mass, bound) = (x.cdf(t), f.eval(t));
            (mass > bound + EXACT_TOL).then_some(FeasibilityViolation {
                coord: 0,
                t,
                mass,
                bound,
            })
        })
        .collect()
}

pub fn check_feasible_two(x: &NeatRv, tt: &TwoTail) -> Vec<FeasibilityViolation> {
    let mut v = check_feasible_left(x, &tt.minus);
    v.extend(check_feasible_right(x, &tt.plus));
    v
}

fn probe_points(x: &NeatRv) -> impl Iterator<Item = f64> + '_ {
    let sweep = if x.continuous_mass() > 0.0 { 1..200 } else { 0..0 };
    x.atoms()
        .iter()
        .map(|a| a.value)
        .chain(sweep.map(move |i| x.quantile(i as f64 / 200.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForce {
    pub value: f64,
    pub witness: Vec<Vec<Atom>>,
}

struct Coord {
    support: Vec<f64>,
    /// Index of 0 in `support`.
    zero: usize,
    /// For each point of V, the index of its k-th coordinate in `support`.
    slot: Vec<usize>,
}

fn objective(coords: &[Coord], m: &[Vec<f64>], npts: usize) -> f64 {
    (0..npts)
        .map(|p| coords.iter().zip(m).map(|(c, mk)| mk[c.slot[p]]).product::<f64>())
        .sum()
}

/// Best distribution of coordinate `k` on its support, for a linear
/// objective `w`, under `P(|X| >= t) <= f(t)`.
fn best_marginal(c: &Coord, f: &TailFn, w: &[f64]) -> Result<Vec<f64>> {
    let vars: Vec<usize> = (0..c.support.len()).filter(|&i| i != c.zero).collect();
    let obj: Vec<f64> = vars.iter().map(|&i| w[i] - w[c.zero]).collect();
    let mut mags: Vec<f64> = vars.iter().map(|&i| c.support[i].abs()).collect();
    mags.sort_by(f64::total_cmp);
    mags.dedup();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for t in mags {
        a.push(vars.iter().map(|&i| (c.support[i].abs() >= t) as u8 as f64).collect());
        b.push(f.eval(t));
    }
    a.push(vec![1.0; vars.len()]);
    b.push(1.0);
    let sol = lp::maximize(&obj, &a, &b)?;
    let mut m = vec![0.0; c.support.len()];
    for (&i, &x) in vars.iter().zip(&sol.x) {
        m[i] = x;
    }
    m[c.zero] = (1.0 - sol.x.iter().sum::<f64>()).max(0.0);
    Ok(m)
}

fn weights(coords: &[Coord], m: &[Vec<f64>], k: usize, npts: usize) -> Vec<f64> {
    let mut w = vec![0.0; coords[k].support.len()];
    for p in 0..npts {
        let rest: f64 = coords
            .iter()
            .zip(m)
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, (c, mj))| mj[c.slot[p]])
            .product();
        w[coords[k].slot[p]] += rest;
    }
    w
}

/// Multistart coordinate ascent over independent distributions supported on
/// the coordinates of `V` and 0. Each step solves one marginal's LP exactly.
/// The result is a feasible value, hence a lower bound on the supremum.
pub fn brute_force_independent(
    f: &[TailFn],
    v: &PointSet,
    restarts: usize,
    seed: u64,
) -> Result<BruteForce> {
    if f.len() != v.dim() {
        return Err(Error::input("one tail per coordinate is needed"));
    }
    for fk in f {
        fk.expect_kind(TailKind::Absolute)?;
    }
    let npts = v.len();
    let coords: Vec<Coord> = (0..v.dim())
        .map(|k| {
            let mut support: Vec<f64> = v.points().iter().map(|p| p[k]).chain([0.0]).collect();
            support.sort_by(f64::total_cmp);
            support.dedup();
            let zero = support.iter().position(|&x| x == 0.0).unwrap();
            let slot = v
                .points()
                .iter()
                .map(|p| support.iter().position(|&x| x == p[k]).unwrap())
                .collect();
            Coord {
                support,
                zero,
                slot,
            }
        })
        .collect();

    let runs = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|r| -> Result<(f64, Vec<Vec<f64>>)> {
            let mut g = rng::stream(seed, r);
            let mut m = Vec::with_capacity(coords.len());
            for (c, fk) in coords.iter().zip(f) {
                let w: Vec<f64> = c.support.iter().map(|_| rng::uniform(&mut g, -1.0, 1.0)).collect();
                let vertex = best_marginal(c, fk, &w)?;
                let scale = rng::open01(&mut g);
                let mut mk: Vec<f64> = vertex.iter().map(|x| x * scale).collect();
                mk[c.zero] += 1.0 - scale;
                m.push(mk);
            }
            let mut value = objective(&coords, &m, npts);
            for _ in 0..500 {
                for k in 0..coords.len() {
                    let w = weights(&coords, &m, k, npts);
                    m[k] = best_marginal(&coords[k], &f[k], &w)?;
                }
                let next = objective(&coords, &m, npts);
                let gained = next - value;
                value = value.max(next);
                if gained <= 1e-15 {
                    break;
                }
            }
            Ok((value, m))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = &runs[0];
    for r in &runs[1..] {
        if r.0 > best.0 {
            best = r;
        }
    }
    let witness = coords
        .iter()
        .zip(&best.1)
        .map(|(c, mk)| {
            c.support
                .iter()
                .zip(mk)
                .filter(|(_, &x)| x > 0.0)
                .map(|(&v, &x)| Atom::new(v, x))
                .collect()
        })
        .collect();
    Ok(BruteForce {
        value: best.0,
        witness,
    })
}

fn gamma_survival(k: usize, rate: f64, x: f64) -> f64 {
    if k == 0 {
        return if x <= 0.0 { 1.0 } else { 0.0 };
    }
    if x <= 0.0 {
        return 1.0;
    }
    let y = rate * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..k {
        term *= y / i as f64;
        sum += term;
    }
    (-y).exp() * sum
}

/// Exact `P(X~_1 + ... + X~_n >= t)` for exponential (common rate) and step
/// right tails, by convolving the step atoms with a Gamma tail.
pub fn exact_sum_tail_oracle(f: &[TailFn], t: f64) -> Result<f64> {
    let mut rate: Option<f64> = None;
    let mut exp_count = 0;
    let mut atoms = vec![(0.0f64, 1.0f64)];
    for fk in f {
        fk.expect_right_like()?;
        match fk.family() {
            Family::Exponential { rate: r } => {
                match rate {
                    Some(r0) if r0 != *r => {
                        return Err(Error::Unsupported(
                            "exponential tails with different rates".into(),
                        ))
                    }
                    _ => rate = Some(*r),
                }
                exp_count += 1;
            }
            Family::Step { breaks, values, .. } => {
                let absolute = fk.kind() == TailKind::Absolute;
                let own: Vec<(f64, f64)> = (0..breaks.len())
                    .map(|j| {
                        let at = if absolute { breaks[j].max(0.0) } else { breaks[j] };
                        (at, values[j] - values[j + 1])
                    })
                    .filter(|a| a.1 > 0.0)
                    .collect();
                let mut next = Vec::with_capacity(atoms.len() * own.len());
                for &(a, p) in &atoms {
                    for &(b, q) in &own {
                        next.push((a + b, p * q));
                    }
                }
                atoms = next;
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "no exact sum for the {} family",
                    fk.family_name()
                )))
            }
        }
    }
    let r = rate.unwrap_or(1.0);
    Ok(atoms
        .iter()
        .map(|&(a, p)| p * gamma_survival(exp_count, r, t - a))
        .sum())
}
