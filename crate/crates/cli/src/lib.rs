//! Command-line driver. Reads JSON problem files, prints JSON results and,
//! with `--csv`, plot-ready tables.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation failure, 3 computation
//! error such as an exceeded size cap.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::bail;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sharptail::apps::{self, Aggregate, Mode, Monomial};
use sharptail::dependent;
use sharptail::finite_solver::{self, SolverConfig};
use sharptail::io::{self, AnyTail};
use sharptail::neat::NeatRv;
use sharptail::shift::{self, CoordSet};
use sharptail::tailfn::{TailFn, TailKind, TwoTail};
use sharptail::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "sharptail", version, about = "Sharpest tail bounds for tail-bounded random variables")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check a tail function file and list any violations.
    Validate { file: PathBuf },
    /// Tabulate the largest neat r.v. with the given right tail.
    Xtilde {
        #[arg(long)]
        tail: PathBuf,
        /// Quantile levels; defaults to an even sweep.
        #[arg(long, value_delimiter = ',')]
        s: Vec<f64>,
        #[arg(long, default_value_t = 19)]
        steps: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Apply a shift operator to one coordinate set.
    Shift {
        #[arg(long)]
        tail: PathBuf,
        #[arg(long, value_enum)]
        op: Option<ShiftOp>,
        /// Grid file; `--axis` picks the coordinate set.
        #[arg(long, conflicts_with = "coords")]
        grid: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        axis: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coords: Vec<f64>,
        /// Split point for the two-sided shift.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, default_value_t = 41)]
        steps: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Exact bound for independent coordinates and a finite target set.
    SolveFinite {
        #[arg(long)]
        tails: PathBuf,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        two_tail: bool,
        #[arg(long, default_value_t = finite_solver::DEFAULT_CAP)]
        cap: usize,
    },
    /// Exact bound when the coordinates may be dependent.
    SolveDep {
        #[arg(long)]
        tails: PathBuf,
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_enum, default_value_t = DepMethod::Lp)]
        method: DepMethod,
        #[arg(long, default_value_t = dependent::DEFAULT_LP_CAP)]
        cap: usize,
    },
    /// Closed form for two points in the plane.
    Example1 {
        #[arg(long, conflicts_with_all = ["f1", "f2"])]
        exp_rate: Option<f64>,
        #[arg(long, requires = "f2")]
        f1: Option<PathBuf>,
        #[arg(long, requires = "f1")]
        f2: Option<PathBuf>,
        #[arg(long)]
        a1: f64,
        #[arg(long)]
        b1: f64,
        #[arg(long)]
        a2: f64,
        #[arg(long)]
        b2: f64,
    },
    /// Sharpest right tail of a sum of Gaussian-tailed variables.
    GaussianSum {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mus: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        sigmas: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Also estimate by sampling.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Tail of a monotone function of the largest neat r.v.'s.
    MonotoneTail {
        #[arg(long)]
        tails: PathBuf,
        /// sum, max, min, product, weighted:w1,w2,..., or poly:c*e1*e2+...
        #[arg(long)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Grid resolution per coordinate; Monte Carlo when absent.
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Absolute tails and a positive multinomial-type g.
        #[arg(long)]
        positive: bool,
    },
    /// Tail of the trace of a nonnegative Schur multiplier.
    SchurTail {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Bound the absolute value of the trace.
        #[arg(long)]
        abs: bool,
    },
    /// Continuous one-dimensional shift for a piecewise-linear g.
    Cont1d {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        tail: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// Run the oracle suite on a problem file.
    Verify {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = finite_solver::DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ShiftOp {
    Right,
    Left,
    Two,
    Abs,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum DepMethod {
    Lp,
    #[value(name = "2d")]
    TwoD,
}

/// Failures in reading or interpreting the command's inputs.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// Result of a subcommand: what to print and whether it counts as a
/// validation failure.
struct Output {
    text: String,
    invalid: bool,
}

impl Output {
    fn json(v: &impl Serialize) -> anyhow::Result<Self> {
        Ok(Output {
            text: serde_json::to_string_pretty(v)? + "\n",
            invalid: false,
        })
    }

    fn text(text: String) -> Self {
        Output {
            text,
            invalid: false,
        }
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let sink: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            if o.invalid {
                EXIT_INVALID
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    if let Some(se) = e.downcast_ref::<sharptail::Error>() {
        return if se.is_validation() {
            EXIT_INVALID
        } else {
            EXIT_COMPUTE
        };
    }
    if e.downcast_ref::<serde_json::Error>().is_some() {
        return EXIT_INVALID;
    }
    EXIT_USAGE
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text).map_err(sharptail::Error::from)?)
}

fn require_valid(t: &AnyTail) -> anyhow::Result<()> {
    let v = t.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(sharptail::Error::InvalidTail(v).into())
    }
}

fn one_tails(list: Vec<AnyTail>) -> anyhow::Result<Vec<TailFn>> {
    list.into_iter()
        .map(|t| {
            require_valid(&t)?;
            match t {
                AnyTail::One(f) => Ok(f),
                AnyTail::Two(_) => Err(sharptail::Error::InvalidInput(
                    "two-sided tails are only accepted with --two-tail".into(),
                )
                .into()),
            }
        })
        .collect()
}

fn two_tails(list: Vec<AnyTail>) -> anyhow::Result<Vec<TwoTail>> {
    list.into_iter()
        .map(|t| {
            require_valid(&t)?;
            Ok(match t {
                AnyTail::Two(tt) => tt,
                AnyTail::One(f) => sharptail::tailfn::absolute_to_two(&f)?,
            })
        })
        .collect()
}

fn csv_table(header: &str, rows: &[(f64, f64)]) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for (a, b) in rows {
        s.push_str(&format!("{a},{b}\n"));
    }
    s
}

fn dispatch(cmd: Cmd) -> anyhow::Result<Output> {
    match cmd {
        Cmd::Validate { file } => {
            let v = read_json(&file)?;
            let tails = if v.is_array() || v.get("tails").is_some() {
                io::parse_tail_list(&v)?
            } else {
                vec![io::parse_any_tail(&v)?]
            };
            let violations: Vec<_> = tails.iter().flat_map(AnyTail::validate).collect();
            let mut o = Output::json(&json!({
                "valid": violations.is_empty(),
                "violations": violations,
            }))?;
            o.invalid = !violations.is_empty();
            Ok(o)
        }
        Cmd::Xtilde { tail, s, steps, csv } => {
            let f = io::parse_tail(&read_json(&tail)?)?.checked()?;
            f.expect_right_like()?;
            let levels: Vec<f64> = if s.is_empty() {
                (1..=steps).map(|i| i as f64 / (steps + 1) as f64).collect()
            } else {
                s
            };
            if let Some(bad) = levels.iter().find(|s| !(**s > 0.0 && **s < 1.0)) {
                bail!(sharptail::Error::InvalidInput(format!(
                    "quantile level {bad} is outside (0, 1)"
                )));
            }
            let rows: Vec<(f64, f64)> = levels
                .iter()
                .map(|&s| Ok((s, f.gen_inverse_right(s)?)))
                .collect::<sharptail::Result<_>>()?;
            if csv {
                Ok(Output::text(csv_table("s,x", &rows)))
            } else {
                Output::json(
                    &rows
                        .iter()
                        .map(|(s, x)| json!({"s": s, "x": x}))
                        .collect::<Vec<_>>(),
                )
            }
        }
        Cmd::Shift {
            tail,
            op,
            grid,
            axis,
            coords,
            c,
            steps,
            csv,
        } => {
            let t = io::parse_any_tail(&read_json(&tail)?)?;
            require_valid(&t)?;
            let g = match grid {
                Some(p) => {
                    let g = io::parse_grid(&read_json(&p)?)?;
                    g.coords()
                        .get(axis)
                        .cloned()
                        .ok_or_else(|| Usage(format!("grid has no axis {axis}")))?
                }
                None if !coords.is_empty() => CoordSet::new(coords)?,
                None => return Err(Usage("give --grid or --coords".into()).into()),
            };
            shift_cmd(t, op, &g, c, steps, csv)
        }
        Cmd::SolveFinite {
            tails,
            points,
            two_tail,
            cap,
        } => {
            let list = io::parse_tail_list(&read_json(&tails)?)?;
            let v = io::parse_points(&read_json(&points)?)?;
            let cfg = SolverConfig { cap };
            let r = if two_tail {
                finite_solver::solve_finite_two_with(&two_tails(list)?, &v, cfg)?
            } else {
                finite_solver::solve_finite_abs_with(&one_tails(list)?, &v, cfg)?
            };
            Output::json(&r)
        }
        Cmd::SolveDep {
            tails,
            points,
            method,
            cap,
        } => {
            let f = one_tails(io::parse_tail_list(&read_json(&tails)?)?)?;
            let v = io::parse_points(&read_json(&points)?)?;
            match method {
                DepMethod::Lp => Output::json(&dependent::solve_dep_lp_with(&f, &v, cap)?),
                DepMethod::TwoD => {
                    if f.len() != 2 {
                        bail!(sharptail::Error::InvalidInput(
                            "the 2d method needs exactly two tails".into()
                        ));
                    }
                    let value = dependent::solve_dep_2d(&f[0], &f[1], &v)?;
                    Output::json(&json!({"value": value, "masses": Value::Null}))
                }
            }
        }
        Cmd::Example1 {
            exp_rate,
            f1,
            f2,
            a1,
            b1,
            a2,
            b2,
        } => {
            let (f1, f2) = match (exp_rate, f1, f2) {
                (Some(r), _, _) => {
                    let f = TailFn::exponential(TailKind::Absolute, r).checked()?;
                    (f.clone(), f)
                }
                (None, Some(p1), Some(p2)) => (
                    io::parse_tail(&read_json(&p1)?)?.checked()?,
                    io::parse_tail(&read_json(&p2)?)?.checked()?,
                ),
                _ => return Err(Usage("give --exp-rate or both --f1 and --f2".into()).into()),
            };
            f1.expect_kind(TailKind::Absolute)?;
            f2.expect_kind(TailKind::Absolute)?;
            let value = finite_solver::solve_example1(&f1, &f2, a1, b1, a2, b2)?;
            Output::json(&json!({ "value": value }))
        }
        Cmd::GaussianSum {
            mus,
            sigmas,
            t,
            samples,
            seed,
        } => {
            let spec = apps::GaussianSpec::new(mus, sigmas)?;
            let value = apps::gaussian_sum_sharp_tail(&spec, t);
            let mc = match samples {
                Some(n) => {
                    let f: Vec<TailFn> = spec
                        .mus
                        .iter()
                        .zip(&spec.sigmas)
                        .map(|(&m, &s)| TailFn::gaussian(TailKind::Right, m, s))
                        .collect();
                    Some(apps::monotone_sharp_tail(
                        &Aggregate::Sum,
                        &f,
                        t,
                        Mode::Mc { samples: n, seed },
                    )?)
                }
                None => None,
            };
            Output::json(&json!({ "value": value, "mc": mc }))
        }
        Cmd::MonotoneTail {
            tails,
            g,
            t,
            resolution,
            samples,
            seed,
            positive,
        } => {
            let f = one_tails(io::parse_tail_list(&read_json(&tails)?)?)?;
            let g = parse_aggregate(&g, f.len())?;
            let mode = match resolution {
                Some(r) => Mode::Grid { resolution: r },
                None => Mode::Mc { samples, seed },
            };
            let e = if positive {
                apps::positive_multinomial_sharp_tail(&g, &f, t, mode)?
            } else {
                apps::monotone_sharp_tail(&g, &f, t, mode)?
            };
            Output::json(&e)
        }
        Cmd::SchurTail {
            problem,
            t,
            samples,
            seed,
            abs,
        } => {
            let p = read_json(&problem)?;
            let tensor = io::parse_tensor(
                p.get("tensor")
                    .ok_or_else(|| sharptail::Error::InvalidInput("problem needs \"tensor\"".into()))?,
            )?;
            let tails = match (p.get("tails"), p.get("tail")) {
                (Some(list), _) => one_tails(io::parse_tail_list(list)?)?,
                (None, Some(one)) => one_tails(vec![io::parse_any_tail(one)?])?,
                _ => bail!(sharptail::Error::InvalidInput(
                    "problem needs \"tails\" or \"tail\"".into()
                )),
            };
            let e = apps::schur_trace_sharp_tail(&tensor, &tails, t, samples, seed, abs)?;
            Output::json(&e)
        }
        Cmd::Cont1d { g, tail, t } => {
            let g = io::parse_pl_g(&read_json(&g)?)?;
            let f = io::parse_tail(&read_json(&tail)?)?.checked()?;
            let value = apps::continuous_1d_sharp_tail(&g, &f, t)?;
            let set: Vec<_> = g
                .running_max_set()
                .into_iter()
                .map(|(a, b)| json!([finite_or_null(a), finite_or_null(b)]))
                .collect();
            Output::json(&json!({ "value": value, "running_max_set": set }))
        }
        Cmd::Verify {
            problem,
            restarts,
            seed,
            cap,
        } => verify_cmd(&read_json(&problem)?, restarts, seed, cap),
    }
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

type Curve = Box<dyn Fn(f64) -> f64>;

fn shift_cmd(
    t: AnyTail,
    op: Option<ShiftOp>,
    g: &CoordSet,
    c: Option<f64>,
    steps: usize,
    csv: bool,
) -> anyhow::Result<Output> {
    let op = op.unwrap_or(match &t {
        AnyTail::Two(_) => ShiftOp::Two,
        AnyTail::One(f) => match f.kind() {
            TailKind::Absolute => ShiftOp::Abs,
            TailKind::Right => ShiftOp::Right,
            TailKind::Left => ShiftOp::Left,
        },
    });
    let (atoms, rcdf): (Vec<(f64, f64)>, Curve) = match (op, t) {
        (ShiftOp::Right, AnyTail::One(f)) => {
            let x = shift::shift_right_atoms(&f, g)?;
            (pairs(&x), Box::new(move |t| x.rcdf(t)))
        }
        (ShiftOp::Left, AnyTail::One(f)) => {
            let x = shift::shift_left_atoms(&f, g)?;
            (pairs(&x), Box::new(move |t| x.rcdf(t)))
        }
        (ShiftOp::Abs, AnyTail::One(f)) => {
            let x = shift::shift_abs_atoms(&f, g)?;
            let atoms = x.distribution().iter().map(|a| (a.value, a.mass)).collect();
            (atoms, Box::new(move |t| x.abs_rcdf(t)))
        }
        (ShiftOp::Two, t) => {
            let tt = match t {
                AnyTail::Two(tt) => tt,
                AnyTail::One(f) => sharptail::tailfn::absolute_to_two(&f)?,
            };
            let c = c.ok_or_else(|| Usage("the two-sided shift needs --c".into()))?;
            let x = shift::shift_two_atoms(&tt, g, c)?;
            (pairs(&x), Box::new(move |t| x.rcdf(t)))
        }
        (op, AnyTail::Two(_)) => {
            bail!(sharptail::Error::InvalidInput(format!(
                "a two-sided tail cannot be used with the {op:?} shift"
            )))
        }
    };
    let (lo, hi) = (g.min() - 1.0, g.max() + 1.0);
    let lo = if matches!(op, ShiftOp::Abs) { 0.0 } else { lo };
    let n = steps.max(2);
    let table: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            (t, rcdf(t))
        })
        .collect();
    let mass_on_grid: f64 = atoms.iter().map(|a| a.1).sum();
    if csv {
        let mut s = csv_table("value,mass", &atoms);
        s.push('\n');
        s.push_str(&csv_table(
            if matches!(op, ShiftOp::Abs) { "t,p_abs_ge" } else { "t,p_ge" },
            &table,
        ));
        Ok(Output::text(s))
    } else {
        Output::json(&json!({
            "atoms": atoms,
            "residual_mass": (1.0 - mass_on_grid).max(0.0),
            "rcdf": table,
        }))
    }
}

fn pairs(x: &NeatRv) -> Vec<(f64, f64)> {
    x.atoms().iter().map(|a| (a.value, a.mass)).collect()
}

fn parse_aggregate(spec: &str, n: usize) -> anyhow::Result<Aggregate> {
    let bad = |m: String| -> anyhow::Error { sharptail::Error::InvalidInput(m).into() };
    Ok(match spec {
        "sum" => Aggregate::Sum,
        "max" => Aggregate::Max,
        "min" => Aggregate::Min,
        "product" => Aggregate::Product,
        s if s.starts_with("weighted:") => {
            let w = s["weighted:".len()..]
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| bad(format!("bad weight in {s:?}: {e}")))?;
            Aggregate::WeightedSum(w)
        }
        s if s.starts_with("poly:") => {
            // c*e1*e2*...*en terms joined by '+'
            let mut terms = Vec::new();
            for term in s["poly:".len()..].split('+') {
                let mut parts = term.split('*').map(str::trim);
                let coef = parts
                    .next()
                    .unwrap_or("")
                    .parse::<f64>()
                    .map_err(|e| bad(format!("bad coefficient in {term:?}: {e}")))?;
                let exponents = parts
                    .map(|e| e.parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| bad(format!("bad exponent in {term:?}: {e}")))?;
                if exponents.len() != n {
                    return Err(bad(format!("term {term:?} needs {n} exponents")));
                }
                terms.push(Monomial { coef, exponents });
            }
            Aggregate::Polynomial(terms)
        }
        other => return Err(bad(format!("unknown function {other:?}"))),
    })
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn verify_cmd(p: &Value, restarts: usize, seed: u64, cap: usize) -> anyhow::Result<Output> {
    let f = one_tails(io::parse_tail_list(
        p.get("tails")
            .ok_or_else(|| sharptail::Error::InvalidInput("problem needs \"tails\"".into()))?,
    )?)?;
    let v = io::parse_points(
        p.get("points")
            .ok_or_else(|| sharptail::Error::InvalidInput("problem needs \"points\"".into()))?,
    )?;
    let mut checks = Vec::new();
    let solved = finite_solver::solve_finite_abs_with(&f, &v, SolverConfig { cap })?;
    let viol = verify::check_feasible_abs(&solved.witness, &f);
    checks.push(Check {
        name: "witness_feasible",
        pass: viol.is_empty(),
        detail: format!("{} violations", viol.len()),
    });
    checks.push(Check {
        name: "grid_fixpoint",
        pass: finite_solver::is_fixpoint(&solved.grid, &v),
        detail: String::new(),
    });
    let recomputed = finite_solver::measure_on_grid_abs(&f, &solved.grid, &v)?;
    checks.push(Check {
        name: "value_recomputes",
        pass: (recomputed - solved.value).abs() <= 1e-12,
        detail: format!("{recomputed} vs {}", solved.value),
    });
    let bf = verify::brute_force_independent(&f, &v, restarts, seed)?;
    checks.push(Check {
        name: "brute_force_below_solver",
        pass: bf.value <= solved.value + 1e-9,
        detail: format!("{} <= {}", bf.value, solved.value),
    });
    if v.len() <= 3 {
        checks.push(Check {
            name: "brute_force_matches_solver",
            pass: (bf.value - solved.value).abs() <= 1e-9,
            detail: format!("{} vs {}", bf.value, solved.value),
        });
    }
    if v.len() <= dependent::DEFAULT_LP_CAP {
        let dep = dependent::solve_dep_lp(&f, &v)?;
        checks.push(Check {
            name: "dependent_at_least_independent",
            pass: dep.value >= solved.value - 1e-9,
            detail: format!("{} >= {}", dep.value, solved.value),
        });
        let reduced = dependent::solve_dep_lp(&f, &dependent::sw_reduce(&v))?;
        checks.push(Check {
            name: "dependent_sw_invariant",
            pass: (reduced.value - dep.value).abs() <= 1e-9,
            detail: format!("{} vs {}", reduced.value, dep.value),
        });
        let origin = v.points().iter().any(|p| p.iter().all(|&x| x == 0.0));
        if v.dim() == 2 && f[0].is_continuous() && !origin {
            let closed = dependent::solve_dep_2d(&f[0], &f[1], &v)?;
            checks.push(Check {
                name: "dependent_closed_form_matches_lp",
                pass: (closed - dep.value).abs() <= 1e-9,
                detail: format!("{closed} vs {}", dep.value),
            });
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    let mut o = Output::json(&json!({
        "pass": pass,
        "value": solved.value,
        "checks": checks,
    }))?;
    o.invalid = !pass;
    Ok(o)
}
