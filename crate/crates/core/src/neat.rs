//! Neat random variables: nondecreasing maps from `(0, 1)` to the reals,
//! stored either as finitely many atoms or in quantile form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tailfn::{TailFn, TailKind};
use crate::{EXACT_TOL, LOOSE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub value: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(value: f64, mass: f64) -> Self {
        Atom { value, mass }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NeatRv {
    /// Atoms sorted by value, positive masses summing to 1.
    Atoms(Vec<Atom>),
    /// The generalized inverse of a tail function: `X~` for right and
    /// absolute tails, the left quantile for left tails.
    Quantile(TailFn),
    /// The quantile of `base` outside `band`, and inside `band` the atoms
    /// laid out in order. The atoms' masses add up to the band width.
    Spliced {
        base: TailFn,
        band: (f64, f64),
        atoms: Vec<Atom>,
    },
}

/// Build an atomic neat r.v. from unsorted `(value, mass)` pairs; repeated
/// values are merged and zero masses dropped.
pub fn neat_from_atoms(pairs: &[(f64, f64)]) -> Result<NeatRv> {
    let mut atoms = Vec::with_capacity(pairs.len());
    for &(v, m) in pairs {
        if !v.is_finite() {
            return Err(Error::input(format!("atom value {v} is not finite")));
        }
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::input(format!("atom mass {m} is not a probability")));
        }
        if m > 0.0 {
            atoms.push(Atom::new(v, m));
        }
    }
    let total: f64 = atoms.iter().map(|a| a.mass).sum();
    if (total - 1.0).abs() > EXACT_TOL {
        return Err(Error::input(format!("atom masses sum to {total}, not 1")));
    }
    Ok(NeatRv::Atoms(merge_sorted(atoms)))
}

pub(crate) fn merge_sorted(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.last_mut() {
            Some(last) if last.value == a.value => last.mass += a.mass,
            _ => out.push(a),
        }
    }
    out
}

fn tail_quantile(f: &TailFn, s: f64) -> f64 {
    match f.kind() {
        TailKind::Left => f.inf_at_least(s),
        _ => f.sup_at_least(1.0 - s),
    }
}

fn atoms_quantile(atoms: &[Atom], s: f64) -> f64 {
    let mut cum = 0.0;
    for a in atoms {
        cum += a.mass;
        if s < cum {
            return a.value;
        }
    }
    atoms.last().map_or(f64::NAN, |a| a.value)
}

/// `inf { s : q(s) >= t }` for a nondecreasing map `q` on `(0, 1)`.
fn first_reaching(q: impl Fn(f64) -> f64, t: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if q(mid) >= t {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `sup { s : q(s) <= t }` for a nondecreasing map `q` on `(0, 1)`.
fn last_below(q: impl Fn(f64) -> f64, t: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if q(mid) <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn outside(band: (f64, f64), a: f64, b: f64) -> f64 {
    let overlap = (b.min(band.1) - a.max(band.0)).max(0.0);
    (b - a) - overlap
}

impl NeatRv {
    pub fn quantile(&self, s: f64) -> f64 {
        match self {
            NeatRv::Atoms(atoms) => atoms_quantile(atoms, s),
            NeatRv::Quantile(f) => tail_quantile(f, s),
            NeatRv::Spliced { base, band, atoms } => {
                if s >= band.0 && s < band.1 {
                    atoms_quantile(atoms, s - band.0)
                } else {
                    tail_quantile(base, s)
                }
            }
        }
    }

    /// `P(X >= t)`, the Lebesgue measure of `{ s : X(s) >= t }`.
    pub fn rcdf(&self, t: f64) -> f64 {
        match self {
            NeatRv::Atoms(atoms) => mass_where(atoms, |v| v >= t),
            NeatRv::Quantile(f) => 1.0 - first_reaching(|s| tail_quantile(f, s), t),
            NeatRv::Spliced { base, band, atoms } => {
                let s = first_reaching(|s| tail_quantile(base, s), t);
                outside(*band, s, 1.0) + mass_where(atoms, |v| v >= t)
            }
        }
    }

    /// `P(X <= t)`.
    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            NeatRv::Atoms(atoms) => mass_where(atoms, |v| v <= t),
            NeatRv::Quantile(f) => last_below(|s| tail_quantile(f, s), t),
            NeatRv::Spliced { base, band, atoms } => {
                let s = last_below(|s| tail_quantile(base, s), t);
                outside(*band, 0.0, s) + mass_where(atoms, |v| v <= t)
            }
        }
    }

    /// `P(|X| >= t)` for an atomic r.v.
    pub fn abs_rcdf(&self, t: f64) -> f64 {
        match self {
            NeatRv::Atoms(atoms) => mass_where(atoms, |v| v.abs() >= t),
            _ if t <= 0.0 => 1.0,
            _ => self.rcdf(t) + self.cdf(-t),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        match self {
            NeatRv::Atoms(a) => a,
            NeatRv::Spliced { atoms, .. } => atoms,
            NeatRv::Quantile(_) => &[],
        }
    }

    /// Mass of the atom at exactly `v`.
    pub fn mass_at(&self, v: f64) -> f64 {
        self.atoms()
            .iter()
            .find(|a| a.value == v)
            .map_or(0.0, |a| a.mass)
    }

    /// Mass not carried by atoms.
    pub fn continuous_mass(&self) -> f64 {
        match self {
            NeatRv::Atoms(_) => 0.0,
            NeatRv::Quantile(_) => 1.0,
            NeatRv::Spliced { band, .. } => 1.0 - (band.1 - band.0),
        }
    }
}

fn mass_where(atoms: &[Atom], keep: impl Fn(f64) -> bool) -> f64 {
    atoms.iter().filter(|a| keep(a.value)).map(|a| a.mass).sum()
}

/// Whether the distribution of `x` respects the tail `f` at every point where
/// either can change: atoms, breakpoints, and a quantile sweep for the
/// continuous part.
pub fn dominates(f: &TailFn, x: &NeatRv) -> bool {
    let tol = if f.is_piecewise_constant() {
        EXACT_TOL
    } else {
        LOOSE_TOL
    };
    let mut points: Vec<f64> = f.breakpoints();
    points.extend(x.atoms().iter().map(|a| a.value));
    if x.continuous_mass() > 0.0 {
        points.extend((1..100).map(|i| x.quantile(i as f64 / 100.0)));
    }
    points.retain(|t| t.is_finite());
    let lhs = |t: f64| match f.kind() {
        TailKind::Right => x.rcdf(t),
        TailKind::Left => x.cdf(t),
        TailKind::Absolute => x.abs_rcdf(t.abs()),
    };
    points.iter().all(|&t| lhs(t) <= f.eval(t) + tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_are_sorted_and_merged() {
        let x = neat_from_atoms(&[(2.0, 0.25), (-1.0, 0.5), (2.0, 0.25)]).unwrap();
        assert_eq!(x.atoms(), &[Atom::new(-1.0, 0.5), Atom::new(2.0, 0.5)]);
        assert_eq!(x.quantile(0.49), -1.0);
        assert_eq!(x.quantile(0.5), 2.0);
        assert_eq!(x.rcdf(0.0), 0.5);
        assert_eq!(x.cdf(-1.0), 0.5);
        assert!(neat_from_atoms(&[(0.0, 0.5)]).is_err());
        assert!(neat_from_atoms(&[(0.0, -0.5), (1.0, 1.5)]).is_err());
    }

    #[test]
    fn quantile_form_rcdf_matches_tail() {
        let f = TailFn::exponential(TailKind::Right, 2.0);
        let x = NeatRv::Quantile(f.clone());
        for &t in &[0.1, 0.5, 1.0, 3.0] {
            assert!((x.rcdf(t) - f.eval(t)).abs() < 1e-12);
        }
        assert_eq!(x.rcdf(-1.0), 1.0);
        assert!(dominates(&f, &x));
    }

    #[test]
    fn dominates_detects_excess_mass() {
        let f = TailFn::step(TailKind::Right, vec![1.0, 2.0], vec![1.0, 0.5, 0.0]);
        let ok = neat_from_atoms(&[(1.0, 0.5), (2.0, 0.5)]).unwrap();
        let bad = neat_from_atoms(&[(1.0, 0.4), (2.0, 0.6)]).unwrap();
        let far = neat_from_atoms(&[(0.0, 0.5), (2.5, 0.5)]).unwrap();
        assert!(dominates(&f, &ok));
        assert!(!dominates(&f, &bad));
        assert!(!dominates(&f, &far));
    }
}
