//! Numerical study of the auxiliary function behind the inner-product bound.
//!
//! For `|x| < |y|` put `a = |y| / |x| > 1` and `b = |x - y|^2 / |x|^2`; the
//! triangle inequality gives `(a - 1)^2 <= b <= (a + 1)^2`. With
//! `e = a^(1-p)`,
//!
//! ```text
//! f(p) = ((1 - e) / (1 + e))^2 + (e + a^(1+p)) / b
//! E(p) = 4b(1 - e) + (a^(2p) - 1)(1 + e)^3
//! ```
//!
//! `E` has the sign of `f'` on `[0, 1]`. The inner-product bound holds iff
//! `f(p) <= (1 + a^2) / b`, which follows when `E` changes sign exactly once
//! (an interior minimum) and `f(0) <= f(1)`. This module locates the root of
//! `E` by bisection, counts its sign changes on a grid and checks the
//! boundary-maximum conclusion.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack accepted on the `(a - 1)^2 <= b <= (a + 1)^2` constraint,
/// so boundary pairs written as `b = (a - 1)^2` survive rounding.
const PAIR_SLACK: f64 = 1e-12;

pub const DEFAULT_SIGN_GRID: usize = 1001;

/// Normalized coordinates `(a, b)` of a pair with `|x| < |y|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedPair {
    a: f64,
    b: f64,
}

impl NormalizedPair {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let invalid = |reason| Err(Error::InvalidPair { a, b, reason });
        if !(a.is_finite() && b.is_finite()) {
            return invalid("a and b must be finite");
        }
        if a <= 1.0 {
            return invalid("a must exceed 1");
        }
        if b <= 0.0 {
            return invalid("b must be positive");
        }
        let lo = (a - 1.0) * (a - 1.0);
        let hi = (a + 1.0) * (a + 1.0);
        if b < lo * (1.0 - PAIR_SLACK) || b > hi * (1.0 + PAIR_SLACK) {
            return invalid("b must lie in [(a-1)^2, (a+1)^2]");
        }
        Ok(Self { a, b })
    }

    /// From the three norms of a pair; the shorter vector plays `x`.
    pub fn from_norms(x_norm: f64, y_norm: f64, diff_norm: f64) -> Result<Self> {
        let (small, large) = if x_norm <= y_norm { (x_norm, y_norm) } else { (y_norm, x_norm) };
        Self::new(large / small, (diff_norm / small).powi(2))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `(1 + a^2) / b`, the normalized form of `(|x|^2 + |y|^2) / |x - y|^2`.
    pub fn envelope(&self) -> f64 {
        (1.0 + self.a * self.a) / self.b
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::PExponentOutOfRange(p))
    }
}

pub fn fp_value(pair: &NormalizedPair, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(f_at(pair, p))
}

fn f_at(pair: &NormalizedPair, p: f64) -> f64 {
    let NormalizedPair { a, b } = *pair;
    let e = a.powf(1.0 - p);
    let t = (1.0 - e) / (1.0 + e);
    t * t + (e + a.powf(1.0 + p)) / b
}

/// `E(p)`, a positive multiple of `f'(p)`.
pub fn fp_derivative_surrogate(pair: &NormalizedPair, p: f64) -> f64 {
    let NormalizedPair { a, b } = *pair;
    let e = a.powf(1.0 - p);
    4.0 * b * (1.0 - e) + (a.powf(2.0 * p) - 1.0) * (1.0 + e).powi(3)
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Sign changes of `E` on `grid_size` equally spaced points of `[0, 1]`.
/// Exact zeros are skipped, so a touch-and-return does not count.
pub fn count_sign_changes(pair: &NormalizedPair, grid_size: usize) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for i in 0..grid_size {
        let p = i as f64 / (grid_size - 1) as f64;
        let s = sign(fp_derivative_surrogate(pair, p));
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

fn sign_grid(pair: &NormalizedPair, grid_size: usize) -> Vec<(f64, f64)> {
    (0..grid_size)
        .map(|i| {
            let p = i as f64 / (grid_size - 1) as f64;
            (p, fp_derivative_surrogate(pair, p))
        })
        .collect()
}

/// Root of `E` located by bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub p0: f64,
    /// Final bracket; `E(lo) < 0 < E(hi)`.
    pub lo: f64,
    pub hi: f64,
    pub residual: f64,
    pub iterations: u32,
    pub sign_changes: usize,
}

/// Bisection of `E` on `[0, 1]` to bracket width `tol`, continued until
/// `|E(p0)| <= tol` or the bracket stops shrinking.
pub fn find_extremum(pair: &NormalizedPair, tol: f64) -> Result<Extremum> {
    find_extremum_with_grid(pair, tol, DEFAULT_SIGN_GRID)
}

pub fn find_extremum_with_grid(
    pair: &NormalizedPair,
    tol: f64,
    grid_size: usize,
) -> Result<Extremum> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::InvalidConfig(format!("tolerance {tol} outside (0, 1e-3]")));
    }
    if grid_size < 2 {
        return Err(Error::InvalidConfig(format!("sign grid needs >= 2 points, got {grid_size}")));
    }
    let sign_changes = count_sign_changes(pair, grid_size);
    if sign_changes > 1 {
        return Err(Error::MultipleSignChanges {
            a: pair.a,
            b: pair.b,
            sign_changes,
            grid: sign_grid(pair, grid_size),
        });
    }
    let e = |p| fp_derivative_surrogate(pair, p);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if !(e(lo) < 0.0 && e(hi) > 0.0) {
        return Err(Error::InvalidPair {
            a: pair.a,
            b: pair.b,
            reason: "derivative surrogate does not bracket a root on [0, 1]",
        });
    }
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        let em = e(mid);
        let done = hi - lo <= tol && em.abs() <= tol;
        if done || mid <= lo || mid >= hi || em == 0.0 {
            return Ok(Extremum { p0: mid, lo, hi, residual: em, iterations, sign_changes });
        }
        if em < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
}

/// `f` sampled on `[0, 1]` with the location of its interior critical point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FpProfile {
    pub pair: NormalizedPair,
    pub grid: Vec<(f64, f64)>,
    pub f0: f64,
    pub f1: f64,
    pub p0: Option<f64>,
    pub sign_changes: usize,
    pub deriv_sign_at_0: i8,
    pub deriv_sign_at_1: i8,
}

/// Profile of `f` on `grid_size` points; the sign changes of `E` are
/// counted on the same grid (at least [`DEFAULT_SIGN_GRID`] points).
/// `p0` is absent when bisection cannot run or the root is not unique.
pub fn fp_profile(pair: &NormalizedPair, grid_size: usize, tol: f64) -> Result<FpProfile> {
    if grid_size < 2 {
        return Err(Error::InvalidConfig(format!("grid needs >= 2 points, got {grid_size}")));
    }
    let sign_grid = grid_size.max(DEFAULT_SIGN_GRID);
    let grid: Vec<(f64, f64)> = (0..grid_size)
        .map(|i| {
            let p = i as f64 / (grid_size - 1) as f64;
            (p, f_at(pair, p))
        })
        .collect();
    let (p0, sign_changes) = match find_extremum_with_grid(pair, tol, sign_grid) {
        Ok(ext) => (Some(ext.p0), ext.sign_changes),
        Err(Error::MultipleSignChanges { sign_changes, .. }) => (None, sign_changes),
        Err(Error::InvalidPair { .. }) => (None, count_sign_changes(pair, sign_grid)),
        Err(e) => return Err(e),
    };
    Ok(FpProfile {
        pair: *pair,
        f0: grid[0].1,
        f1: grid[grid_size - 1].1,
        grid,
        p0,
        sign_changes,
        deriv_sign_at_0: sign(fp_derivative_surrogate(pair, 0.0)),
        deriv_sign_at_1: sign(fp_derivative_surrogate(pair, 1.0)),
    })
}

/// Outcome of checking that `f` peaks at the boundary of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryReport {
    pub pair: NormalizedPair,
    pub grid_size: usize,
    pub grid_max: f64,
    pub argmax_p: f64,
    pub f0: f64,
    pub f1: f64,
    pub envelope: f64,
    /// Human-readable description of each failed check; empty on success.
    pub failures: Vec<String>,
}

impl BoundaryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const BOUNDARY_MAX_TOL: f64 = 1e-10;
pub const BOUNDARY_ORDER_TOL: f64 = 1e-12;

pub fn fp_boundary_max_check(pair: &NormalizedPair, grid_size: usize) -> Result<BoundaryReport> {
    if grid_size < 101 {
        return Err(Error::InvalidConfig(format!(
            "boundary check needs a grid of >= 101 points, got {grid_size}"
        )));
    }
    let mut grid_max = f64::NEG_INFINITY;
    let mut argmax_p = 0.0;
    for i in 0..grid_size {
        let p = i as f64 / (grid_size - 1) as f64;
        let f = f_at(pair, p);
        if f > grid_max {
            grid_max = f;
            argmax_p = p;
        }
    }
    let f0 = f_at(pair, 0.0);
    let f1 = f_at(pair, 1.0);
    let envelope = pair.envelope();
    let mut failures = Vec::new();
    if grid_max > f0.max(f1) + BOUNDARY_MAX_TOL {
        failures.push(format!(
            "interior maximum f({argmax_p}) = {grid_max} exceeds max(f(0), f(1)) = {}",
            f0.max(f1)
        ));
    }
    if f0 > f1 + BOUNDARY_ORDER_TOL {
        failures.push(format!("f(0) = {f0} exceeds f(1) = {f1}"));
    }
    if grid_max > envelope + BOUNDARY_MAX_TOL {
        failures.push(format!("f({argmax_p}) = {grid_max} exceeds (1 + a^2)/b = {envelope}"));
    }
    Ok(BoundaryReport { pair: *pair, grid_size, grid_max, argmax_p, f0, f1, envelope, failures })
}

/// Profiles of many pairs, evaluated in parallel and returned sorted by `(a, b)`.
pub fn profile_many(pairs: &[NormalizedPair], grid_size: usize, tol: f64) -> Result<Vec<FpProfile>> {
    let mut sorted = pairs.to_vec();
    sorted.sort_by(|l, r| l.a.total_cmp(&r.a).then(l.b.total_cmp(&r.b)));
    sorted.par_iter().map(|pair| fp_profile(pair, grid_size, tol)).collect()
}
