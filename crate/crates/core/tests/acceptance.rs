//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use sharptail::apps::{self, Aggregate, GaussianSpec, Mode};
use sharptail::dependent::{self, sw_reduce, q_map};
use sharptail::finite_solver::{self, PointSet};
use sharptail::rng::{index, uniform};
use sharptail::shift::{self, CoordSet};
use sharptail::tailfn::{absolute_to_two, Family, TwoTail};
use sharptail::verify;
use sharptail::{NeatRv, TailFn, TailKind, EXACT_TOL, LOOSE_TOL};

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn is_exact(f: &TailFn) -> bool {
    match f.family() {
        Family::Step { .. } | Family::PiecewiseLinear { .. } => true,
        Family::Restricted(inner) | Family::Reflected(inner) => is_exact(inner),
        Family::SumMin(tt) => is_exact(&tt.minus) && is_exact(&tt.plus),
        _ => false,
    }
}

fn tol_for(fs: &[&TailFn]) -> f64 {
    if fs.iter().all(|f| is_exact(f)) {
        EXACT_TOL
    } else {
        LOOSE_TOL
    }
}

/// Two-point antichains against the max-of-three closed form.
fn two_point_closed_form() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for i in 0..200 {
        let kind = TailKind::Absolute;
        let (f1, f2) = if i % 2 == 0 {
            (step(&mut r, kind), step(&mut r, kind))
        } else {
            (exponential(&mut r, kind), exponential(&mut r, kind))
        };
        let a1 = if i % 7 == 0 { 0.0 } else { uniform(&mut r, 0.0, 2.0) };
        let a2 = a1 + uniform(&mut r, 0.05, 2.0);
        let b2 = if i % 5 == 0 { 0.0 } else { uniform(&mut r, 0.0, 2.0) };
        let b1 = b2 + uniform(&mut r, 0.05, 2.0);
        let v = PointSet::new(vec![vec![a1, b1], vec![a2, b2]]).unwrap();
        let got = finite_solver::solve_finite_abs(&[f1.clone(), f2.clone()], &v)
            .unwrap()
            .value;
        let p11 = f1.eval(a1) * f2.eval(b1);
        let p22 = f1.eval(a2) * f2.eval(b2);
        let p21 = f1.eval(a2) * f2.eval(b1);
        let want = p11.max(p22).max(p11 + p22 - 2.0 * p21);
        let err = (got - want).abs();
        worst = worst.max(err);
        if err > tol_for(&[&f1, &f2]) {
            failures += 1;
        }
    }
    let took = start.elapsed();
    outcome(
        failures == 0 && took < Duration::from_secs(1),
        format!("200 instances, {failures} mismatches, max err {worst:.1e}, {took:.2?} (limit 1s)"),
    )
}

/// Closed-form dependent bound in the plane against the LP.
fn dependent_plane() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let mut done = 0;
    while done < 200 {
        let n = 3 + index(&mut r, 6);
        let v = points(&mut r, 2, n, true);
        if v.points().iter().any(|p| p[0] == 0.0 && p[1] == 0.0) {
            continue;
        }
        done += 1;
        let f = [continuous_abs(&mut r), any_abs(&mut r)];
        let lp = dependent::solve_dep_lp(&f, &v).unwrap().value;
        let cf = dependent::solve_dep_2d(&f[0], &f[1], &v).unwrap();
        let err = (lp - cf).abs();
        worst = worst.max(err);
        if err > LOOSE_TOL {
            failures.push((lp, cf));
        }
    }
    let took = start.elapsed();
    outcome(
        failures.is_empty() && took < Duration::from_secs(5),
        format!(
            "200 instances, {} mismatches{}, max err {worst:.1e}, {took:.2?} (limit 5s)",
            failures.len(),
            failures
                .first()
                .map(|(a, b)| format!(" (first: lp {a} vs closed form {b})"))
                .unwrap_or_default()
        ),
    )
}

/// The dependent LP is unchanged by folding signs and by keeping only the
/// minimal points.
fn dependent_reductions() -> Outcome {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let dim = 1 + index(&mut r, 4);
        let n = 1 + index(&mut r, 8);
        let v = points(&mut r, dim, n, true);
        let f: Vec<TailFn> = (0..dim).map(|_| any_abs(&mut r)).collect();
        let base = dependent::solve_dep_lp(&f, &v).unwrap().value;
        let q = dependent::solve_dep_lp(&f, &q_map(&v)).unwrap().value;
        let sw = dependent::solve_dep_lp(&f, &sw_reduce(&v)).unwrap().value;
        worst = worst.max((base - q).abs()).max((base - sw).abs());
    }
    outcome(
        worst <= LOOSE_TOL,
        format!("100 instances, max deviation {worst:.1e} (tol 1e-9)"),
    )
}

fn right_tail(r: &mut Rng) -> TailFn {
    match index(r, 4) {
        0 => step(r, TailKind::Right),
        1 => exponential(r, TailKind::Right),
        2 => TailFn::gaussian(TailKind::Right, uniform(r, -1.0, 2.0), uniform(r, 0.3, 2.0)),
        _ => piecewise_linear(r, TailKind::Right),
    }
}

fn random_coords(r: &mut Rng, with_zero: bool) -> CoordSet {
    let k = 1 + index(r, 6);
    let v: Vec<f64> = (0..k).map(|_| uniform(r, -3.0, 5.0)).collect();
    if with_zero {
        CoordSet::with_zero(v).unwrap()
    } else {
        CoordSet::new(v).unwrap()
    }
}

/// Every shift output respects its tails, with equality on the grid where
/// the operator promises it.
fn shift_preserves_tails() -> Outcome {
    let mut r = rng(4);
    let mut problems = Vec::new();
    for case in 0..500 {
        let op = case % 4;
        let (name, ok) = match op {
            0 => {
                let f = right_tail(&mut r);
                let g = random_coords(&mut r, false);
                let x = shift::shift_right_atoms(&f, &g).unwrap();
                let tol = tol_for(&[&f]);
                let feasible = verify::check_feasible_right(&x, &f).is_empty();
                let tight = g.values().iter().all(|&v| close(x.rcdf(v), f.eval(v), tol));
                ("right", feasible && tight)
            }
            1 => {
                let f = right_tail(&mut r).reflect().unwrap();
                let g = random_coords(&mut r, false);
                let x = shift::shift_left_atoms(&f, &g).unwrap();
                let tol = tol_for(&[&f]);
                let feasible = verify::check_feasible_left(&x, &f).is_empty();
                let tight = g.values().iter().all(|&v| close(x.cdf(v), f.eval(v), tol));
                ("left", feasible && tight)
            }
            2 => {
                let tt = if index(&mut r, 2) == 0 {
                    absolute_to_two(&any_abs(&mut r)).unwrap()
                } else {
                    let minus = loop {
                        let f = right_tail(&mut r);
                        if f.eval(0.0) == 1.0 {
                            break f;
                        }
                    };
                    let plus = loop {
                        let f = right_tail(&mut r);
                        if f.eval(0.0) == 1.0 {
                            break f;
                        }
                    };
                    TwoTail {
                        minus: minus.reflect().unwrap(),
                        plus,
                    }
                };
                let g = random_coords(&mut r, true);
                let c = uniform(&mut r, 0.0, 1.0);
                let x = shift::shift_two_atoms(&tt, &g, c).unwrap();
                let feasible = verify::check_feasible_two(&x, &tt).is_empty();
                let on_grid = x.atoms().iter().all(|a| g.contains(a.value));
                ("two-sided", feasible && on_grid)
            }
            _ => {
                let f = any_abs(&mut r);
                let g = random_coords(&mut r, true);
                let x = shift::shift_abs_atoms(&f, &g).unwrap();
                let tol = tol_for(&[&f]);
                let feasible = verify::check_feasible_abs(&[x.distribution()], std::slice::from_ref(&f)).is_empty();
                let on_grid = x.atoms.iter().all(|a| g.contains(a.value));
                let tight = g
                    .magnitudes()
                    .values()
                    .iter()
                    .filter(|&&m| m > 0.0)
                    .all(|&m| close(x.abs_rcdf(m), f.eval(m), tol));
                ("absolute", feasible && on_grid && tight)
            }
        };
        if !ok {
            problems.push(format!("{name}#{case}"));
        }
    }
    outcome(
        problems.is_empty(),
        format!(
            "500 (tail, grid) pairs, {} failures{}",
            problems.len(),
            problems.first().map(|p| format!(" (first {p})")).unwrap_or_default()
        ),
    )
}

/// The largest neat r.v. has exactly the prescribed tail.
fn xtilde_fidelity() -> Outcome {
    let mut r = rng(5);
    let families = [
        ("step", step(&mut r, TailKind::Right)),
        ("pl", piecewise_linear(&mut r, TailKind::Right)),
        ("exp", exponential(&mut r, TailKind::Right)),
        ("gauss", TailFn::gaussian(TailKind::Right, 0.7, 1.3)),
        ("exp-abs", TailFn::exponential(TailKind::Absolute, 0.8)),
    ];
    let mut report = Vec::new();
    let mut pass = true;
    for (name, f) in families {
        let x = NeatRv::Quantile(f.clone());
        let tol = tol_for(&[&f]);
        let mut worst = 0.0f64;
        for _ in 0..10_000 {
            let t = uniform(&mut r, -3.0, 6.0);
            worst = worst.max((x.rcdf(t) - f.eval(t)).abs());
        }
        pass &= worst <= tol;
        report.push(format!("{name} {worst:.0e}"));
    }
    outcome(pass, format!("10^4 points per family, max err: {}", report.join(", ")))
}

/// The Gaussian sum formula, at the mean and against sampling.
fn gaussian_sum() -> Outcome {
    let specs = [
        GaussianSpec::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap(),
        GaussianSpec::new(vec![1.0, -2.0, 0.5], vec![0.5, 2.0, 1.0]).unwrap(),
    ];
    let mut pass = true;
    let mut worst_mid = 0.0f64;
    let mut worst_z = 0.0f64;
    for (i, spec) in specs.iter().enumerate() {
        let mid = apps::gaussian_sum_sharp_tail(spec, spec.mean());
        worst_mid = worst_mid.max((mid - 0.5).abs());
        let f: Vec<TailFn> = spec
            .mus
            .iter()
            .zip(&spec.sigmas)
            .map(|(&m, &s)| TailFn::gaussian(TailKind::Right, m, s))
            .collect();
        for (j, z) in [-1.0, 0.0, 0.5, 2.0].into_iter().enumerate() {
            let t = spec.mean() + z * spec.sd();
            let exact = apps::gaussian_sum_sharp_tail(spec, t);
            let mc = apps::monotone_sharp_tail(
                &Aggregate::Sum,
                &f,
                t,
                Mode::Mc {
                    samples: 1_000_000,
                    seed: 10 + (i * 4 + j) as u64,
                },
            )
            .unwrap();
            let se = mc.std_error.unwrap();
            let zscore = (mc.value - exact).abs() / se;
            worst_z = worst_z.max(zscore);
            pass &= zscore <= 4.0;
        }
    }
    pass &= worst_mid <= 1.5e-7;
    outcome(
        pass,
        format!("|P(mean) - 0.5| = {worst_mid:.1e} (tol 1.5e-7); 10^6-sample MC within {worst_z:.2} SE (limit 4)"),
    )
}

/// Grid bracketing of the two-exponential sum.
fn monotone_grid_bracket() -> Outcome {
    let f = vec![
        TailFn::exponential(TailKind::Right, 1.0),
        TailFn::exponential(TailKind::Right, 1.0),
    ];
    let oracle = verify::exact_sum_tail_oracle(&f, 2.0).unwrap();
    let e = apps::monotone_sharp_tail(&Aggregate::Sum, &f, 2.0, Mode::Grid { resolution: 1 << 12 }).unwrap();
    let (lo, hi) = e.bracket.unwrap();
    let want = 3.0 * (-2.0f64).exp();
    let pass = close(oracle, want, 1e-15) && lo <= want && want <= hi && hi - lo < 1e-3;
    outcome(
        pass,
        format!("bracket [{lo:.6}, {hi:.6}] width {:.1e} (limit 1e-3) around {want:.6}", hi - lo),
    )
}

struct Instance {
    f: Vec<TailFn>,
    v: PointSet,
}

fn shared_instances() -> Vec<Instance> {
    let mut r = rng(8);
    (0..90)
        .map(|i| {
            let dim = 1 + index(&mut r, 3);
            let n = if i < 60 { 1 + index(&mut r, 3) } else { 4 + index(&mut r, 3) };
            let n = n.min(9usize.pow(dim as u32));
            let v = points(&mut r, dim, n, true);
            let f = (0..dim).map(|_| any_abs(&mut r)).collect();
            Instance { f, v }
        })
        .collect()
}

/// The brute-force lower bound never beats the solver and meets it on
/// small instances.
fn sandwich(instances: &[Instance]) -> Outcome {
    let mut above = 0;
    let mut gaps = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        let solved = finite_solver::solve_finite_abs(&inst.f, &inst.v).unwrap().value;
        let bf = verify::brute_force_independent(&inst.f, &inst.v, 100, 100 + i as u64)
            .unwrap()
            .value;
        if bf > solved + LOOSE_TOL {
            above += 1;
        }
        if inst.v.len() <= 3 && (bf - solved).abs() > LOOSE_TOL {
            gaps.push(solved - bf);
        }
    }
    let small = instances.iter().filter(|x| x.v.len() <= 3).count();
    outcome(
        above == 0 && gaps.is_empty(),
        format!(
            "{} instances, {above} above the solver; {small} with |V| <= 3, {} not matched{}",
            instances.len(),
            gaps.len(),
            gaps.iter()
                .cloned()
                .reduce(f64::max)
                .map(|g| format!(" (largest gap {g:.1e})"))
                .unwrap_or_default()
        ),
    )
}

fn dependent_dominates(instances: &[Instance]) -> Outcome {
    let mut r = rng(9);
    let mut extra: Vec<Instance> = (0..100)
        .map(|_| {
            let dim = 1 + index(&mut r, 3);
            let n = (1 + index(&mut r, 8)).min(9usize.pow(dim as u32));
            let v = points(&mut r, dim, n, true);
            Instance {
                f: (0..dim).map(|_| any_abs(&mut r)).collect(),
                v,
            }
        })
        .collect();
    extra.extend(instances.iter().map(|i| Instance {
        f: i.f.clone(),
        v: i.v.clone(),
    }));
    let mut worst = f64::INFINITY;
    for inst in &extra {
        let ind = finite_solver::solve_finite_abs(&inst.f, &inst.v).unwrap().value;
        let dep = dependent::solve_dep_lp(&inst.f, &inst.v).unwrap().value;
        worst = worst.min(dep - ind);
    }
    outcome(
        worst >= -LOOSE_TOL,
        format!("{} instances, min(dependent - independent) = {worst:.1e}", extra.len()),
    )
}

fn spread_points(r: &mut Rng, dim: usize, count: usize) -> PointSet {
    let pts = (0..count)
        .map(|_| (0..dim).map(|_| uniform(r, -4.0, 4.0)).collect())
        .collect();
    PointSet::new(pts).unwrap()
}

fn performance() -> Outcome {
    let mut r = rng(10);
    let v = spread_points(&mut r, 3, 12);
    let f: Vec<TailFn> = (0..3).map(|_| any_abs(&mut r)).collect();
    let start = Instant::now();
    finite_solver::solve_finite_abs(&f, &v).unwrap();
    let ind = start.elapsed();
    let v64 = spread_points(&mut r, 3, 64);
    let start = Instant::now();
    dependent::solve_dep_lp(&f, &v64).unwrap();
    let dep = start.elapsed();
    outcome(
        ind < Duration::from_secs(10) && dep < Duration::from_secs(1),
        format!("independent |V|=12 in 3-D: {ind:.2?} (limit 10s); dependent |V|=64: {dep:.2?} (limit 1s)"),
    )
}

fn main() -> ExitCode {
    let shared = shared_instances();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("two-point closed form", Box::new(two_point_closed_form)),
        ("dependent closed form in the plane", Box::new(dependent_plane)),
        ("dependent sign folding and SW reduction", Box::new(dependent_reductions)),
        ("shift operators preserve tails", Box::new(shift_preserves_tails)),
        ("largest neat r.v. fidelity", Box::new(xtilde_fidelity)),
        ("Gaussian sum formula", Box::new(gaussian_sum)),
        ("monotone g grid bracket", Box::new(monotone_grid_bracket)),
        ("brute force sandwich", Box::new(|| sandwich(&shared))),
        ("dependent bound dominates", Box::new(|| dependent_dominates(&shared))),
        ("performance", Box::new(performance)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "[{:>2}] {verdict} {name}: {} [{:.2?}]",
            i + 1,
            o.detail,
            start.elapsed()
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
