//! The shift operators on finite coordinate sets: right, left, two-sided and
//! absolute, with their reversed-CDF formulas.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::neat::{merge_sorted, Atom, NeatRv};
use crate::tailfn::{TailFn, TailKind, TwoTail};

/// A finite, ascending, duplicate-free set of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordSet(Vec<f64>);

impl CoordSet {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::input("coordinate set is empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("coordinate set has a non-finite value"));
        }
        // -0.0 and 0.0 are one coordinate
        values.iter_mut().for_each(|v| *v += 0.0);
        values.sort_by(f64::total_cmp);
        values.dedup();
        Ok(CoordSet(values))
    }

    /// Like [`CoordSet::new`] but always includes 0.
    pub fn with_zero(mut values: Vec<f64>) -> Result<Self> {
        values.push(0.0);
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: f64) -> bool {
        self.0.binary_search_by(|x| x.total_cmp(&v)).is_ok()
    }

    pub fn min(&self) -> f64 {
        self.0[0]
    }

    pub fn max(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    /// `{ |v| : v in self }`, ascending.
    pub fn magnitudes(&self) -> CoordSet {
        let mut m: Vec<f64> = self.0.iter().map(|v| v.abs()).collect();
        m.sort_by(f64::total_cmp);
        m.dedup();
        CoordSet(m)
    }

    fn require_zero(&self) -> Result<()> {
        if self.contains(0.0) {
            Ok(())
        } else {
            Err(Error::MissingZero)
        }
    }
}

impl Eq for CoordSet {}

impl PartialOrd for CoordSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CoordSet {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

/// A product set `G^1 x ... x G^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Grid(pub Vec<CoordSet>);

impl Grid {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Number of points in the product.
    pub fn size(&self) -> usize {
        self.0.iter().map(CoordSet::len).product()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.0.len() && self.0.iter().zip(p).all(|(c, &x)| c.contains(x))
    }

    pub fn coords(&self) -> &[CoordSet] {
        &self.0
    }
}

fn positive(atoms: impl IntoIterator<Item = Atom>) -> Vec<Atom> {
    atoms.into_iter().filter(|a| a.mass > 0.0).collect()
}

/// Distribution of `s -> sup (g + (-inf, inf g])` below `X~(s)`.
///
/// Grid atoms carry successive differences of `f`. When `f(inf g) < 1` the
/// remaining mass stays on `X~` below `inf g`, which the result keeps in
/// quantile form.
pub fn shift_right_atoms(f: &TailFn, g: &CoordSet) -> Result<NeatRv> {
    f.expect_right_like()?;
    let v = g.values();
    let atoms = positive((0..v.len()).map(|i| {
        let next = v.get(i + 1).map_or(0.0, |&w| f.eval(w));
        Atom::new(v[i], (f.eval(v[i]) - next).max(0.0))
    }));
    let top = f.eval(v[0]);
    if top >= 1.0 {
        Ok(NeatRv::Atoms(atoms))
    } else {
        Ok(NeatRv::Spliced {
            base: f.clone(),
            band: (1.0 - top, 1.0),
            atoms,
        })
    }
}

/// `P(S_R(f, g) >= t) = f(inf (g + (-inf, inf g]) above t)`, 0 past the top.
pub fn shift_right_rcdf(f: &TailFn, g: &CoordSet, t: f64) -> Result<f64> {
    f.expect_right_like()?;
    if t <= g.min() {
        return Ok(f.eval(t));
    }
    let v = g.values();
    let i = v.partition_point(|&x| x < t);
    Ok(v.get(i).map_or(0.0, |&x| f.eval(x)))
}

/// Mirror image of [`shift_right_atoms`] for a left tail: values are
/// rounded up into `g`, residual mass stays above `sup g`.
pub fn shift_left_atoms(f: &TailFn, g: &CoordSet) -> Result<NeatRv> {
    f.expect_kind(TailKind::Left)?;
    let v = g.values();
    let atoms = positive((0..v.len()).map(|i| {
        let prev = if i == 0 { 0.0 } else { f.eval(v[i - 1]) };
        Atom::new(v[i], (f.eval(v[i]) - prev).max(0.0))
    }));
    let covered = f.eval(g.max());
    if covered >= 1.0 {
        Ok(NeatRv::Atoms(atoms))
    } else {
        Ok(NeatRv::Spliced {
            base: f.clone(),
            band: (0.0, covered),
            atoms,
        })
    }
}

/// `P(S_L(f, g) <= t)`.
pub fn shift_left_cdf(f: &TailFn, g: &CoordSet, t: f64) -> Result<f64> {
    f.expect_kind(TailKind::Left)?;
    if t >= g.max() {
        return Ok(f.eval(t));
    }
    let v = g.values();
    let i = v.partition_point(|&x| x <= t);
    Ok(if i == 0 { 0.0 } else { f.eval(v[i - 1]) })
}

/// The two-sided shift: mass `c` goes to the negative side, following `f-`
/// as far as it allows, and `1 - c` to the positive side under `f+`. Any
/// surplus lands on 0.
pub fn shift_two_atoms(tt: &TwoTail, g: &CoordSet, c: f64) -> Result<NeatRv> {
    g.require_zero()?;
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::input(format!("split point c={c} is outside [0, 1]")));
    }
    let v = g.values();
    let zero = v.partition_point(|&x| x < 0.0);
    let below = |x: f64| c.min(tt.minus.eval(x));
    let above = |x: f64| (1.0 - c).min(tt.plus.eval(x));
    let mut atoms = Vec::with_capacity(v.len());
    let mut prev = 0.0;
    for &x in &v[..zero] {
        let p = below(x);
        atoms.push(Atom::new(x, (p - prev).max(0.0)));
        prev = p;
    }
    let neg_total = prev;
    let pos = &v[zero + 1..];
    let pos_total = pos.first().map_or(0.0, |&x| above(x));
    atoms.push(Atom::new(0.0, (1.0 - neg_total - pos_total).max(0.0)));
    for (j, &x) in pos.iter().enumerate() {
        let next = pos.get(j + 1).map_or(0.0, |&w| above(w));
        atoms.push(Atom::new(x, (above(x) - next).max(0.0)));
    }
    Ok(NeatRv::Atoms(positive(atoms)))
}

/// A radially neat r.v. on finitely many atoms, listed with nondecreasing
/// magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRv {
    pub atoms: Vec<Atom>,
}

impl RadialRv {
    pub fn abs_rcdf(&self, t: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.value.abs() >= t)
            .map(|a| a.mass)
            .sum()
    }

    pub fn mass_at(&self, v: f64) -> f64 {
        self.atoms
            .iter()
            .find(|a| a.value == v)
            .map_or(0.0, |a| a.mass)
    }

    pub fn is_radially_sorted(&self) -> bool {
        self.atoms
            .windows(2)
            .all(|w| w[0].value.abs() <= w[1].value.abs())
    }

    /// The atoms sorted by signed value.
    pub fn distribution(&self) -> Vec<Atom> {
        merge_sorted(self.atoms.clone())
    }
}

/// The absolute shift: magnitudes follow the right shift onto `|g|`, and each
/// magnitude takes the sign under which it belongs to `g`, positive first.
pub fn shift_abs_atoms(f: &TailFn, g: &CoordSet) -> Result<RadialRv> {
    f.expect_kind(TailKind::Absolute)?;
    g.require_zero()?;
    let u = g.magnitudes();
    let u = u.values();
    let atoms = positive((0..u.len()).map(|i| {
        let next = u.get(i + 1).map_or(0.0, |&w| f.eval(w));
        let value = if g.contains(u[i]) { u[i] } else { -u[i] };
        Atom::new(value, (f.eval(u[i]) - next).max(0.0))
    }));
    Ok(RadialRv { atoms })
}

/// `P(|S(f, g)| >= t) = f(inf |g| above t)`, 0 past the top.
pub fn shift_abs_rcdf(f: &TailFn, g: &CoordSet, t: f64) -> Result<f64> {
    f.expect_kind(TailKind::Absolute)?;
    g.require_zero()?;
    if t < 0.0 {
        return Err(Error::input(format!("t={t} must be nonnegative")));
    }
    let u = g.magnitudes();
    let i = u.values().partition_point(|&x| x < t);
    Ok(u.values().get(i).map_or(0.0, |&x| f.eval(x)))
}
