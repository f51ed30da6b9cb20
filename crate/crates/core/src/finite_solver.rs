//! Exact `sup P(X in V)` over independent tail-bounded coordinates for a
//! finite target set `V`, by enumerating the grids the absolute and
//! two-sided shift operators can land on.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::neat::Atom;
use crate::shift::{shift_abs_atoms, shift_two_atoms, CoordSet, Grid};
use crate::tailfn::{TailFn, TailKind, TwoTail};

/// Default bound on `|V|`; the candidate count grows like `2^|V|`.
pub const DEFAULT_CAP: usize = 16;

/// Values closer than this count as tied when picking the best grid.
const TIE: f64 = 1e-15;

/// A finite, duplicate-free set of points of a common dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::input("point set is empty"))?;
        if dim == 0 {
            return Err(Error::input("points must have at least one coordinate"));
        }
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
        for mut p in points {
            p.iter_mut().for_each(|x| *x += 0.0);
            if p.len() != dim {
                return Err(Error::input(format!(
                    "point {p:?} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::input(format!("point {p:?} is not finite")));
            }
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Ok(PointSet { dim, points: out })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub value: f64,
    #[serde(serialize_with = "crate::io::ser_grid")]
    pub grid: Grid,
    /// Split points of the two-sided shift, one per coordinate.
    pub c: Option<Vec<f64>>,
    /// The optimal distribution of each coordinate.
    pub witness: Vec<Vec<Atom>>,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub cap: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { cap: DEFAULT_CAP }
    }
}

/// `#0(A)`: the product of the coordinate projections of `A`, each with 0 added.
pub fn grid_fn(points: &[&[f64]], dim: usize) -> Grid {
    Grid(
        (0..dim)
            .map(|k| {
                CoordSet::with_zero(points.iter().map(|p| p[k]).collect())
                    .expect("finite coordinates")
            })
            .collect(),
    )
}

fn restrict<'a>(g: &Grid, v: &'a PointSet) -> Vec<&'a [f64]> {
    v.points
        .iter()
        .filter(|p| g.contains(p))
        .map(Vec::as_slice)
        .collect()
}

/// Whether `G = #0(G ∩ V)`.
pub fn is_fixpoint(g: &Grid, v: &PointSet) -> bool {
    grid_fn(&restrict(g, v), v.dim) == *g
}

/// Every grid of the form `#0(W)` for `W ⊆ V`, pushed to a fixpoint of
/// `G -> #0(G ∩ V)`, deduplicated and ordered by size then coordinates.
pub fn candidate_grids(v: &PointSet, cap: usize) -> Result<Vec<Grid>> {
    if v.len() > cap {
        return Err(Error::CapExceeded {
            what: "point set",
            size: v.len(),
            cap,
        });
    }
    let n = v.len();
    let found: BTreeSet<(usize, Grid)> = (0u64..1 << n)
        .into_par_iter()
        .map(|mask| {
            let w: Vec<&[f64]> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| v.points[i].as_slice())
                .collect();
            let mut g = grid_fn(&w, v.dim);
            loop {
                let next = grid_fn(&restrict(&g, v), v.dim);
                if next == g {
                    break;
                }
                g = next;
            }
            (g.size(), g)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(found.into_iter().map(|(_, g)| g).collect())
}

fn check_tails(f: &[TailFn], dim: usize, kind: TailKind) -> Result<()> {
    if f.len() != dim {
        return Err(Error::input(format!(
            "{} tails given for points of dimension {dim}",
            f.len()
        )));
    }
    for fk in f {
        fk.expect_kind(kind)?;
        let v = fk.validate();
        if !v.is_empty() {
            return Err(Error::InvalidTail(v));
        }
    }
    Ok(())
}

/// `P(S(f, G) in V)`, the product measure of `G ∩ V` under the absolute shift.
pub fn measure_on_grid_abs(f: &[TailFn], g: &Grid, v: &PointSet) -> Result<f64> {
    let atoms = g
        .0
        .iter()
        .zip(f)
        .map(|(gk, fk)| shift_abs_atoms(fk, gk))
        .collect::<Result<Vec<_>>>()?;
    Ok(restrict(g, v)
        .iter()
        .map(|p| atoms.iter().zip(p.iter()).map(|(x, &pk)| x.mass_at(pk)).product::<f64>())
        .sum())
}

/// `P(S2(f, G, c) in V)`.
pub fn measure_on_grid_two(tt: &[TwoTail], g: &Grid, c: &[f64], v: &PointSet) -> Result<f64> {
    let atoms = g
        .0
        .iter()
        .zip(tt)
        .zip(c)
        .map(|((gk, t), &ck)| shift_two_atoms(t, gk, ck))
        .collect::<Result<Vec<_>>>()?;
    Ok(restrict(g, v)
        .iter()
        .map(|p| atoms.iter().zip(p.iter()).map(|(x, &pk)| x.mass_at(pk)).product::<f64>())
        .sum())
}

fn pick_best<T>(scored: Vec<(f64, T)>) -> Option<(f64, T)> {
    let mut best: Option<(f64, T)> = None;
    for (val, item) in scored {
        match &best {
            Some((b, _)) if val <= b + TIE => {}
            _ => best = Some((val, item)),
        }
    }
    best
}

pub fn solve_finite_abs(f: &[TailFn], v: &PointSet) -> Result<SolveResult> {
    solve_finite_abs_with(f, v, SolverConfig::default())
}

pub fn solve_finite_abs_with(f: &[TailFn], v: &PointSet, cfg: SolverConfig) -> Result<SolveResult> {
    check_tails(f, v.dim, TailKind::Absolute)?;
    let grids = candidate_grids(v, cfg.cap)?;
    let scored = grids
        .into_par_iter()
        .map(|g| measure_on_grid_abs(f, &g, v).map(|val| (val, g)))
        .collect::<Result<Vec<_>>>()?;
    let (value, grid) = pick_best(scored).expect("the zero grid is always a candidate");
    let witness = grid
        .0
        .iter()
        .zip(f)
        .map(|(gk, fk)| shift_abs_atoms(fk, gk).map(|x| x.distribution()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SolveResult {
        value,
        grid,
        c: None,
        witness,
    })
}

/// Split points at which the two-sided objective can change slope in one
/// coordinate: 0, 1 and the places where `s = c` meets an atom boundary.
pub fn c_candidates(tt: &TwoTail, g: &CoordSet) -> Vec<f64> {
    let mut c = vec![0.0, 1.0];
    for &x in g.values() {
        if x > 0.0 {
            c.push(1.0 - tt.plus.eval(x));
        } else if x < 0.0 {
            c.push(tt.minus.eval(x));
        }
    }
    for x in &mut c {
        *x = x.clamp(0.0, 1.0);
    }
    c.sort_by(f64::total_cmp);
    c.dedup();
    c
}

fn best_split(tt: &[TwoTail], g: &Grid, v: &PointSet) -> Result<(f64, Vec<f64>)> {
    let pts = restrict(g, v);
    let n = tt.len();
    let cands: Vec<Vec<f64>> = g.0.iter().zip(tt).map(|(gk, t)| c_candidates(t, gk)).collect();
    // mass[k][ci][p]: mass the k-th coordinate puts on p_k under split cands[k][ci].
    let mut mass = Vec::with_capacity(n);
    for k in 0..n {
        let mut per_c = Vec::with_capacity(cands[k].len());
        for &ck in &cands[k] {
            let x = shift_two_atoms(&tt[k], &g.0[k], ck)?;
            per_c.push(pts.iter().map(|p| x.mass_at(p[k])).collect::<Vec<_>>());
        }
        mass.push(per_c);
    }
    let mut idx = vec![0usize; n];
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let val: f64 = (0..pts.len())
            .map(|p| (0..n).map(|k| mass[k][idx[k]][p]).product::<f64>())
            .sum();
        match &best {
            Some((b, _)) if val <= b + TIE => {}
            _ => best = Some((val, idx.clone())),
        }
        let mut k = n;
        loop {
            if k == 0 {
                let (val, idx) = best.expect("at least one split");
                return Ok((val, (0..n).map(|k| cands[k][idx[k]]).collect()));
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < cands[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

pub fn solve_finite_two(tt: &[TwoTail], v: &PointSet) -> Result<SolveResult> {
    solve_finite_two_with(tt, v, SolverConfig::default())
}

pub fn solve_finite_two_with(tt: &[TwoTail], v: &PointSet, cfg: SolverConfig) -> Result<SolveResult> {
    if tt.len() != v.dim {
        return Err(Error::input(format!(
            "{} tails given for points of dimension {}",
            tt.len(),
            v.dim
        )));
    }
    for t in tt {
        let viol = t.validate();
        if !viol.is_empty() {
            return Err(Error::InvalidTail(viol));
        }
    }
    let grids = candidate_grids(v, cfg.cap)?;
    let scored = grids
        .into_par_iter()
        .map(|g| best_split(tt, &g, v).map(|(val, c)| (val, (g, c))))
        .collect::<Result<Vec<_>>>()?;
    let (value, (grid, c)) = pick_best(scored).expect("the zero grid is always a candidate");
    let witness = grid
        .0
        .iter()
        .zip(tt)
        .zip(&c)
        .map(|((gk, t), &ck)| shift_two_atoms(t, gk, ck).map(|x| x.atoms().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SolveResult {
        value,
        grid,
        c: Some(c),
        witness,
    })
}

/// The closed form for two points `(a1, b1)`, `(a2, b2)` with
/// `0 <= a1 < a2` and `0 <= b2 < b1`.
pub fn solve_example1(f1: &TailFn, f2: &TailFn, a1: f64, b1: f64, a2: f64, b2: f64) -> Result<f64> {
    if !(0.0 <= a1 && a1 < a2 && 0.0 <= b2 && b2 < b1) {
        return Err(Error::input(format!(
            "need 0 <= a1 < a2 and 0 <= b2 < b1, got a=({a1}, {a2}) b=({b1}, {b2})"
        )));
    }
    let p11 = f1.eval(a1) * f2.eval(b1);
    let p22 = f1.eval(a2) * f2.eval(b2);
    let p21 = f1.eval(a2) * f2.eval(b1);
    Ok(p11.max(p22).max(p11 + p22 - 2.0 * p21))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp1() -> TailFn {
        TailFn::exponential(TailKind::Absolute, 1.0)
    }

    fn grid(coords: &[&[f64]]) -> Grid {
        Grid(coords.iter().map(|c| CoordSet::new(c.to_vec()).unwrap()).collect())
    }

    #[test]
    fn two_point_antichain_has_four_grids() {
        let v = PointSet::new(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        let grids = candidate_grids(&v, DEFAULT_CAP).unwrap();
        let want = [
            grid(&[&[0.0], &[0.0]]),
            grid(&[&[0.0, 1.0], &[0.0, 2.0]]),
            grid(&[&[0.0, 2.0], &[0.0, 1.0]]),
            grid(&[&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0]]),
        ];
        assert_eq!(grids, want);
        assert!(grids.iter().all(|g| is_fixpoint(g, &v)));
    }

    #[test]
    fn two_point_antichain_value() {
        let f = [exp1(), exp1()];
        let v = PointSet::new(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        let r = solve_finite_abs(&f, &v).unwrap();
        let want = 2.0 * (-3.0f64).exp() - 2.0 * (-4.0f64).exp();
        assert!((r.value - want).abs() < 1e-15);
        assert_eq!(r.grid.size(), 9);
        let g4 = grid(&[&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0]]);
        assert!((measure_on_grid_abs(&f, &g4, &v).unwrap() - want).abs() < 1e-15);
        let e1 = solve_example1(&f[0], &f[1], 1.0, 2.0, 2.0, 1.0).unwrap();
        assert!((e1 - want).abs() < 1e-15);
        assert!(solve_example1(&f[0], &f[1], 2.0, 2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn origin_and_zero_grid() {
        let f = [exp1(), exp1()];
        let v = PointSet::new(vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(solve_finite_abs(&f, &v).unwrap().value, 1.0);
        let v = PointSet::new(vec![vec![1.0, 1.0]]).unwrap();
        let zero = grid(&[&[0.0], &[0.0]]);
        assert_eq!(measure_on_grid_abs(&f, &zero, &v).unwrap(), 0.0);
    }

    #[test]
    fn cap_is_enforced() {
        let f = [exp1()];
        let v = PointSet::new((0..17).map(|i| vec![i as f64]).collect()).unwrap();
        assert!(matches!(
            solve_finite_abs(&f, &v),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn two_tail_one_dimensional() {
        let tt = TwoTail::new(
            TailFn::exponential(TailKind::Left, 1.0),
            TailFn::exponential(TailKind::Right, 1.0),
        )
        .unwrap();
        let v = PointSet::new(vec![vec![-1.0], vec![2.0]]).unwrap();
        let r = solve_finite_two(std::slice::from_ref(&tt), &v).unwrap();
        let want = (-1.0f64).exp() + (-2.0f64).exp();
        assert!((r.value - want).abs() < 1e-15, "{}", r.value);
        // dense scan over c agrees
        let g = grid(&[&[-1.0, 0.0, 2.0]]);
        let scan = (0..=10_000)
            .map(|i| measure_on_grid_two(std::slice::from_ref(&tt), &g, &[i as f64 / 1e4], &v).unwrap())
            .fold(0.0, f64::max);
        assert!(scan <= r.value + 1e-15 && scan > r.value - 1e-4);
    }
}
