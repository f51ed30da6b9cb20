//! JSON forms of tails, point sets, grids, neat r.v.'s and tensors.
//!
//! A tail is `{"kind": "absolute|right|left", "family": "exp|gauss|step|pl",
//! "params": {...}}`; a two-sided tail is `{"kind": "two", "minus": <tail>,
//! "plus": <tail>}`.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::apps::{PiecewiseLinearG, SchurTensor};
use crate::error::{Error, Result};
use crate::finite_solver::PointSet;
use crate::neat::{neat_from_atoms, NeatRv};
use crate::shift::{CoordSet, Grid};
use crate::tailfn::{Family, Side, TailFn, TailKind, TwoTail};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TailDoc {
    kind: String,
    family: Option<String>,
    #[serde(default)]
    params: Value,
    minus: Option<Value>,
    plus: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpParams {
    rate: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussParams {
    mu: f64,
    sigma: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StepParams {
    breaks: Vec<f64>,
    values: Vec<f64>,
    continuity: Option<Side>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlParams {
    knots: Vec<(f64, f64)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairParams {
    minus: Value,
    plus: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OfParams {
    of: Value,
}

fn from<T: DeserializeOwned>(v: &Value) -> Result<T> {
    Ok(serde_json::from_value(v.clone())?)
}

/// A one-sided or absolute tail, or a two-sided pair.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTail {
    One(TailFn),
    Two(TwoTail),
}

impl AnyTail {
    pub fn validate(&self) -> Vec<crate::tailfn::Violation> {
        match self {
            AnyTail::One(f) => f.validate(),
            AnyTail::Two(t) => t.validate(),
        }
    }
}

fn parse_kind(s: &str) -> Result<TailKind> {
    match s {
        "absolute" => Ok(TailKind::Absolute),
        "right" => Ok(TailKind::Right),
        "left" => Ok(TailKind::Left),
        other => Err(Error::input(format!("unknown tail kind {other:?}"))),
    }
}

pub fn parse_any_tail(v: &Value) -> Result<AnyTail> {
    let doc: TailDoc = from(v)?;
    if doc.kind == "two" {
        let (Some(minus), Some(plus)) = (&doc.minus, &doc.plus) else {
            return Err(Error::input("a two-sided tail needs \"minus\" and \"plus\""));
        };
        return Ok(AnyTail::Two(TwoTail {
            minus: parse_tail(minus)?,
            plus: parse_tail(plus)?,
        }));
    }
    if doc.minus.is_some() || doc.plus.is_some() {
        return Err(Error::input("\"minus\"/\"plus\" only belong to two-sided tails"));
    }
    let kind = parse_kind(&doc.kind)?;
    let family = doc
        .family
        .as_deref()
        .ok_or_else(|| Error::input("tail is missing \"family\""))?;
    let f = match family {
        "exp" => TailFn::exponential(kind, from::<ExpParams>(&doc.params)?.rate),
        "gauss" => {
            let p: GaussParams = from(&doc.params)?;
            TailFn::gaussian(kind, p.mu, p.sigma)
        }
        "step" => {
            let p: StepParams = from(&doc.params)?;
            let side = p.continuity.unwrap_or(kind.required_continuity());
            TailFn::step_with_continuity(kind, p.breaks, p.values, side)
        }
        "pl" => TailFn::piecewise_linear(kind, from::<PlParams>(&doc.params)?.knots),
        "summin" => {
            let p: PairParams = from(&doc.params)?;
            let tt = TwoTail {
                minus: parse_tail(&p.minus)?,
                plus: parse_tail(&p.plus)?,
            };
            let f = crate::tailfn::two_to_absolute(&tt);
            if kind != TailKind::Absolute {
                return Err(Error::input("a summin tail is absolute"));
            }
            f
        }
        "restricted" | "reflected" => {
            let inner = parse_tail(&from::<OfParams>(&doc.params)?.of)?;
            wrap(kind, family, inner)?
        }
        other => return Err(Error::input(format!("unknown tail family {other:?}"))),
    };
    Ok(AnyTail::One(f))
}

fn wrap(kind: TailKind, family: &str, inner: TailFn) -> Result<TailFn> {
    if family == "restricted" {
        let tt = crate::tailfn::absolute_to_two(&inner)?;
        if kind != TailKind::Right {
            return Err(Error::input("a restricted tail is a right tail"));
        }
        Ok(tt.plus)
    } else {
        let f = match inner.kind() {
            TailKind::Absolute => crate::tailfn::absolute_to_two(&inner)?.minus,
            _ => inner.reflect()?,
        };
        if f.kind() != kind {
            return Err(Error::input(format!(
                "the reflection of a {} tail is a {} tail",
                inner.kind(),
                f.kind()
            )));
        }
        Ok(f)
    }
}

/// A single (not two-sided) tail.
pub fn parse_tail(v: &Value) -> Result<TailFn> {
    match parse_any_tail(v)? {
        AnyTail::One(f) => Ok(f),
        AnyTail::Two(_) => Err(Error::input("expected a one-sided or absolute tail")),
    }
}

pub fn parse_two_tail(v: &Value) -> Result<TwoTail> {
    match parse_any_tail(v)? {
        AnyTail::Two(t) => Ok(t),
        AnyTail::One(f) if f.kind() == TailKind::Absolute => crate::tailfn::absolute_to_two(&f),
        AnyTail::One(_) => Err(Error::input("expected a two-sided or absolute tail")),
    }
}

/// A list of tails, either a bare array or `{"tails": [...]}`.
pub fn parse_tail_list(v: &Value) -> Result<Vec<AnyTail>> {
    let arr = match v {
        Value::Array(a) => a,
        Value::Object(o) => o
            .get("tails")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("expected an array of tails or {\"tails\": [...]}"))?,
        _ => return Err(Error::input("expected an array of tails")),
    };
    arr.iter().map(parse_any_tail).collect()
}

pub fn tail_to_json(f: &TailFn) -> Value {
    let kind = f.kind().to_string();
    match f.family() {
        Family::Exponential { rate } => json!({"kind": kind, "family": "exp", "params": {"rate": rate}}),
        Family::Gaussian { mu, sigma } => {
            json!({"kind": kind, "family": "gauss", "params": {"mu": mu, "sigma": sigma}})
        }
        Family::Step {
            breaks,
            values,
            continuity,
        } => json!({"kind": kind, "family": "step",
            "params": {"breaks": breaks, "values": values, "continuity": continuity}}),
        Family::PiecewiseLinear { knots } => {
            json!({"kind": kind, "family": "pl", "params": {"knots": knots}})
        }
        Family::SumMin(tt) => json!({"kind": kind, "family": "summin",
            "params": {"minus": tail_to_json(&tt.minus), "plus": tail_to_json(&tt.plus)}}),
        Family::Restricted(inner) => {
            json!({"kind": kind, "family": "restricted", "params": {"of": tail_to_json(inner)}})
        }
        Family::Reflected(inner) => {
            json!({"kind": kind, "family": "reflected", "params": {"of": tail_to_json(inner)}})
        }
    }
}

pub fn two_tail_to_json(tt: &TwoTail) -> Value {
    json!({"kind": "two", "minus": tail_to_json(&tt.minus), "plus": tail_to_json(&tt.plus)})
}

/// `{"points": [[...], ...]}` or a bare array of points.
pub fn parse_points(v: &Value) -> Result<PointSet> {
    let pts = match v {
        Value::Object(o) => o
            .get("points")
            .ok_or_else(|| Error::input("expected {\"points\": [...]}"))?,
        other => other,
    };
    PointSet::new(from(pts)?)
}

/// `{"grid": [[coords of axis 1], [coords of axis 2], ...]}`.
pub fn parse_grid(v: &Value) -> Result<Grid> {
    let g = match v {
        Value::Object(o) => o
            .get("grid")
            .ok_or_else(|| Error::input("expected {\"grid\": [...]}"))?,
        other => other,
    };
    let coords: Vec<Vec<f64>> = from(g)?;
    if coords.is_empty() {
        return Err(Error::input("grid has no coordinates"));
    }
    Ok(Grid(
        coords
            .into_iter()
            .map(CoordSet::new)
            .collect::<Result<_>>()?,
    ))
}

pub fn grid_to_json(g: &Grid) -> Value {
    json!({"grid": g.coords().iter().map(|c| c.values().to_vec()).collect::<Vec<_>>()})
}

pub(crate) fn ser_grid<S: Serializer>(g: &Grid, s: S) -> std::result::Result<S::Ok, S::Error> {
    g.coords()
        .iter()
        .map(|c| c.values().to_vec())
        .collect::<Vec<_>>()
        .serialize(s)
}

/// `{"atoms": [[value, mass], ...]}` or `{"quantile_of": <tail>}`.
pub fn parse_neat(v: &Value) -> Result<NeatRv> {
    if let Some(a) = v.get("atoms") {
        let pairs: Vec<(f64, f64)> = from(a)?;
        return neat_from_atoms(&pairs);
    }
    if let Some(t) = v.get("quantile_of") {
        return Ok(NeatRv::Quantile(parse_tail(t)?.checked()?));
    }
    Err(Error::input("expected {\"atoms\": ...} or {\"quantile_of\": ...}"))
}

/// A tensor as nested arrays of depth `d + 1`, each level of length `n`.
pub fn parse_tensor(v: &Value) -> Result<SchurTensor> {
    let mut depth = 0;
    let mut cur = v;
    let mut n = None;
    while let Value::Array(a) = cur {
        if a.is_empty() {
            return Err(Error::input("tensor has an empty level"));
        }
        match n {
            None => n = Some(a.len()),
            Some(m) if m != a.len() => {
                return Err(Error::input("tensor levels must all have the same length"))
            }
            _ => {}
        }
        depth += 1;
        cur = &a[0];
    }
    let n = n.ok_or_else(|| Error::input("tensor must be a nested array"))?;
    if depth < 2 {
        return Err(Error::input("a tensor needs at least two indices"));
    }
    let mut entries = Vec::new();
    flatten(v, depth, n, &mut entries)?;
    SchurTensor::new(depth - 1, n, entries)
}

fn flatten(v: &Value, depth: usize, n: usize, out: &mut Vec<f64>) -> Result<()> {
    if depth == 0 {
        out.push(
            v.as_f64()
                .ok_or_else(|| Error::input("tensor entries must be numbers"))?,
        );
        return Ok(());
    }
    match v {
        Value::Array(a) if a.len() == n => a.iter().try_for_each(|x| flatten(x, depth - 1, n, out)),
        _ => Err(Error::input("tensor is ragged")),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GDoc {
    knots: Vec<(f64, f64)>,
    left_slope: f64,
    right_slope: f64,
}

/// `{"knots": [[x, y], ...], "left_slope": a, "right_slope": b}`.
pub fn parse_pl_g(v: &Value) -> Result<PiecewiseLinearG> {
    let d: GDoc = from(v)?;
    PiecewiseLinearG::new(d.knots, d.left_slope, d.right_slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_round_trip() {
        for f in [
            TailFn::exponential(TailKind::Absolute, 2.0),
            TailFn::gaussian(TailKind::Left, 1.0, 0.5),
            TailFn::step(TailKind::Right, vec![1.0, 2.0], vec![1.0, 0.5, 0.0]),
            TailFn::piecewise_linear(TailKind::Right, vec![(0.0, 1.0), (3.0, 0.0)]),
            crate::tailfn::absolute_to_two(&TailFn::gaussian(TailKind::Absolute, 0.0, 1.0))
                .unwrap()
                .minus,
        ] {
            let back = parse_tail(&tail_to_json(&f)).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn rejects_unknown_fields() {
        let v = json!({"kind": "right", "family": "exp", "params": {"rat": 1}});
        assert!(parse_tail(&v).is_err());
        let v = json!({"kind": "sideways", "family": "exp", "params": {"rate": 1}});
        assert!(parse_tail(&v).is_err());
    }

    #[test]
    fn tensors_and_points() {
        let t = parse_tensor(&json!([[[1, 0], [0, 0]], [[0, 0], [0, 2]]])).unwrap();
        assert_eq!((t.d, t.n), (2, 2));
        assert_eq!(t.get(&[1, 1, 1]), 2.0);
        assert!(parse_tensor(&json!([[1, 2], [3]])).is_err());
        let p = parse_points(&json!({"points": [[1, 2], [2, 1], [1, 2]]})).unwrap();
        assert_eq!(p.len(), 2);
        let g = parse_grid(&json!({"grid": [[0, 1], [2, 0, 2]]})).unwrap();
        assert_eq!(g.coords()[1].values(), &[0.0, 2.0]);
    }
}
