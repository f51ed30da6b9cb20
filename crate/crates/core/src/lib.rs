//! Sharpest possible tail bounds for functions of random variables whose
//! individual tails are bounded.
//!
//! The library covers tail functions, neat random variables, the shift
//! operators that move a quantile onto a grid, the exact finite-set solvers
//! in the independent and dependent settings, a handful of applications and
//! brute-force verification oracles.

pub mod apps;
pub mod dependent;
pub mod error;
pub mod finite_solver;
pub mod io;
pub mod lp;
pub mod neat;
pub mod rng;
pub mod shift;
pub mod special;
pub mod tailfn;
pub mod verify;

pub use error::{Error, Result};
pub use neat::{Atom, NeatRv};
pub use tailfn::{TailFn, TailKind, TwoTail};

/// Tolerance for comparisons that are exact up to float summation.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for comparisons involving transcendental tails.
pub const LOOSE_TOL: f64 = 1e-9;
