//! Numerical certification that a norm is not induced by an inner product.
//!
//! Three tools:
//!
//! * [`search_violation`] maximizes `alpha_p / Characterizing(q)` over pairs.
//!   Any pair with ratio above 1 refutes the characterizing inequality for
//!   that `(p, q)` and so certifies the norm as non-inner-product.
//! * [`lorch_test`] looks for equal-norm `x`, `y` and `gamma != 0` with
//!   `|x + y| > |gamma x + y / gamma|`, which Lorch's condition forbids in
//!   inner-product spaces.
//! * [`scaling_sequence`] evaluates `s_n = |gamma^(p^n) x + gamma^(-p^n) y|`,
//!   the sequence used to pass from the characterizing inequality to Lorch's
//!   condition, and reports whether it is non-increasing.
//!
//! A search that finds nothing is inconclusive: it cannot prove that a norm
//! is an inner-product norm.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pangular::{self, BoundKind, PExponent, Pair, QExponent};
use crate::sampling;
use crate::vectorspace::{NormSpec, Vector};

pub const DEFAULT_RATIO_THRESHOLD: f64 = 1.0 + 1e-7;
pub const DEFAULT_SHRINK_FACTOR: f64 = 0.5;
pub const DEFAULT_INITIAL_STEP: f64 = 0.3;
pub const DEFAULT_RESTARTS: usize = 50;
pub const DEFAULT_STEPS: usize = 2000;

/// Pattern search stops once the step falls below this.
const MIN_STEP: f64 = 1e-12;

/// Witnesses with `||x| - |y|| < DEAD_ZONE * |x|` are discarded: the ratio is
/// identically 1 on equal-norm pairs, so anything above it there is noise.
const DEAD_ZONE: f64 = 1e-6;

pub const NOT_A_PROOF: &str = "search is not a proof";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub p: PExponent,
    pub q: QExponent,
    pub restarts: usize,
    pub steps_per_restart: usize,
    pub seed: u64,
    pub ratio_threshold: f64,
    pub shrink_factor: f64,
    pub initial_step: f64,
}

impl SearchConfig {
    pub fn new(p: PExponent, q: QExponent) -> Self {
        Self {
            p,
            q,
            restarts: DEFAULT_RESTARTS,
            steps_per_restart: DEFAULT_STEPS,
            seed: 0,
            ratio_threshold: DEFAULT_RATIO_THRESHOLD,
            shrink_factor: DEFAULT_SHRINK_FACTOR,
            initial_step: DEFAULT_INITIAL_STEP,
        }
    }

    pub fn with_budget(mut self, restarts: usize, steps_per_restart: usize) -> Self {
        self.restarts = restarts;
        self.steps_per_restart = steps_per_restart;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.p.value() >= 1.0 {
            return fail(format!("p must lie in [0, 1), got {}", self.p.value()));
        }
        if self.restarts == 0 || self.steps_per_restart == 0 {
            return fail("restarts and steps must be positive".into());
        }
        if !(self.ratio_threshold > 1.0 && self.ratio_threshold.is_finite()) {
            return fail(format!("ratio threshold must exceed 1, got {}", self.ratio_threshold));
        }
        if !(self.shrink_factor > 0.0 && self.shrink_factor < 1.0) {
            return fail(format!("shrink factor must lie in (0, 1), got {}", self.shrink_factor));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return fail(format!("initial step must be positive, got {}", self.initial_step));
        }
        Ok(())
    }
}

/// A pair violating the characterizing inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationWitness {
    pub x: Vector,
    pub y: Vector,
    pub p: f64,
    pub q: f64,
    pub alpha_p: f64,
    pub bound: f64,
    pub ratio: f64,
    #[serde(serialize_with = "serialize_display")]
    pub spec: NormSpec,
    pub seed: u64,
    pub restart: usize,
    pub evaluations: u64,
}

fn serialize_display<S: serde::Serializer>(
    v: &NormSpec,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchStats {
    pub best_ratio: f64,
    pub best_pair: (Vector, Vector),
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Violation(ViolationWitness),
    NotFound(SearchStats),
}

impl SearchOutcome {
    pub fn evaluations(&self) -> u64 {
        match self {
            SearchOutcome::Violation(w) => w.evaluations,
            SearchOutcome::NotFound(s) => s.evaluations,
        }
    }

    pub fn best_ratio(&self) -> f64 {
        match self {
            SearchOutcome::Violation(w) => w.ratio,
            SearchOutcome::NotFound(s) => s.best_ratio,
        }
    }
}

/// Unit-sphere direction (Euclidean) from hyperspherical angles.
fn direction(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len() + 1);
    let mut sin_prod = 1.0;
    for a in angles {
        out.push(sin_prod * a.cos());
        sin_prod *= a.sin();
    }
    out.push(sin_prod);
    out
}

/// Search coordinates: `dim - 1` angles for `x`, `dim - 1` for `y`, and
/// `ln |y|`. `x` is normalized to `|x| = 1`.
struct Parametrization<'a> {
    spec: &'a NormSpec,
}

impl Parametrization<'_> {
    fn len(&self) -> usize {
        2 * (self.spec.dim() - 1) + 1
    }

    fn pair(&self, params: &[f64]) -> (Vector, Vector) {
        let k = self.spec.dim() - 1;
        let u = direction(&params[..k]);
        let v = direction(&params[k..2 * k]);
        let s = params[2 * k].exp();
        let nu = self.spec.norm_unchecked(&u);
        let nv = self.spec.norm_unchecked(&v);
        let x = Vector::from_raw(u.iter().map(|c| c / nu).collect());
        let y = Vector::from_raw(v.iter().map(|c| s * c / nv).collect());
        (x, y)
    }
}

struct RestartResult {
    ratio: f64,
    params: Vec<f64>,
    evaluations: u64,
}

fn objective(spec: &NormSpec, pm: &Parametrization<'_>, params: &[f64], p: PExponent, kind: BoundKind) -> f64 {
    let (x, y) = pm.pair(params);
    match Pair::new(spec, &x, &y) {
        Ok(pair) if !pair.is_degenerate() && x != y => pair.alpha_p(p) / pair.bound(p, kind),
        _ => f64::NEG_INFINITY,
    }
}

fn run_restart(spec: &NormSpec, cfg: &SearchConfig, index: usize) -> RestartResult {
    let pm = Parametrization { spec };
    let kind = BoundKind::Characterizing(cfg.q);
    let mut rng = sampling::stream_rng(cfg.seed, index as u64);
    let k = spec.dim() - 1;
    let mut params: Vec<f64> = (0..2 * k).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    // Initial radius kept away from 1, where the ratio is identically 1.
    let s = if rng.random_bool(0.5) {
        rng.random_range(0.1..=0.9)
    } else {
        rng.random_range(1.1..=10.0)
    };
    params.push(f64::ln(s));

    let mut best = objective(spec, &pm, &params, cfg.p, kind);
    let mut evaluations = 1u64;
    let mut step = cfg.initial_step;
    for _ in 0..cfg.steps_per_restart {
        let mut improved = false;
        for i in 0..pm.len() {
            for dir in [1.0, -1.0] {
                let old = params[i];
                params[i] = old + dir * step;
                let val = objective(spec, &pm, &params, cfg.p, kind);
                evaluations += 1;
                if val > best {
                    best = val;
                    improved = true;
                    break;
                }
                params[i] = old;
            }
        }
        if !improved {
            step *= cfg.shrink_factor;
            if step < MIN_STEP {
                break;
            }
        }
    }
    RestartResult { ratio: best, params, evaluations }
}

/// Multi-start pattern search for a pair violating the characterizing
/// inequality with exponents `(cfg.p, cfg.q)`.
///
/// Every restart runs to completion; the result is taken from the restart
/// with the largest ratio (lowest index on ties), so the outcome does not
/// depend on how restarts are scheduled across threads.
pub fn search_violation(spec: &NormSpec, cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let results: Vec<RestartResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| run_restart(spec, cfg, i))
        .collect();
    let evaluations = results.iter().map(|r| r.evaluations).sum();
    let (restart, best) = results
        .iter()
        .enumerate()
        .fold(None::<(usize, &RestartResult)>, |acc, (i, r)| match acc {
            Some((_, b)) if b.ratio >= r.ratio => acc,
            _ => Some((i, r)),
        })
        .expect("at least one restart");

    let pm = Parametrization { spec };
    let (x, y) = pm.pair(&best.params);
    let kind = BoundKind::Characterizing(cfg.q);
    if best.ratio > cfg.ratio_threshold {
        let report = pangular::bound_report(spec, &x, &y, cfg.p, kind)?;
        let nx = spec.norm(&x)?;
        let ny = spec.norm(&y)?;
        if report.ratio > cfg.ratio_threshold && (nx - ny).abs() >= DEAD_ZONE * nx {
            return Ok(SearchOutcome::Violation(ViolationWitness {
                x,
                y,
                p: cfg.p.value(),
                q: cfg.q.value(),
                alpha_p: report.alpha_p,
                bound: report.bound,
                ratio: report.ratio,
                spec: spec.clone(),
                seed: cfg.seed,
                restart,
                evaluations,
            }));
        }
    }
    Ok(SearchOutcome::NotFound(SearchStats {
        best_ratio: best.ratio,
        best_pair: (x, y),
        evaluations,
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    NotInnerProduct(ViolationWitness),
    ConsistentWithInnerProduct {
        stats: SearchStats,
        caveat: &'static str,
        /// `q <= 1`: an inner-product norm satisfies the inequality for every
        /// such `q`, so the negative result is meaningful for all of them.
        q_in_unit_interval: bool,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::NotInnerProduct(_) => "NotInnerProduct",
            Verdict::ConsistentWithInnerProduct { .. } => "ConsistentWithInnerProduct",
        }
    }
}

pub fn certify_ips(spec: &NormSpec, cfg: &SearchConfig) -> Result<Verdict> {
    Ok(match search_violation(spec, cfg)? {
        SearchOutcome::Violation(w) => Verdict::NotInnerProduct(w),
        SearchOutcome::NotFound(stats) => Verdict::ConsistentWithInnerProduct {
            stats,
            caveat: NOT_A_PROOF,
            q_in_unit_interval: cfg.q.value() <= 1.0,
        },
    })
}

/// Equal-norm pair and `gamma` with `|x + y| > |gamma x + y / gamma|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorchWitness {
    pub x: Vector,
    pub y: Vector,
    pub gamma: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorchStats {
    pub best_margin: f64,
    pub pairs: usize,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LorchOutcome {
    Witness(LorchWitness, LorchStats),
    NotFound(LorchStats),
}

pub const LORCH_GRID_POINTS: usize = 129;
const LORCH_GAMMA_MIN_LOG10: f64 = -2.0;
const LORCH_GAMMA_MAX_LOG10: f64 = 2.0;
const LORCH_MARGIN_TOL: f64 = 1e-9;
const REFINE_ITERS: usize = 60;

/// `gamma` values of the Lorch sweep: a log grid on `[1e-2, 1e2]` for each sign.
pub fn lorch_gamma_grid() -> Vec<f64> {
    let span = LORCH_GAMMA_MAX_LOG10 - LORCH_GAMMA_MIN_LOG10;
    let positive: Vec<f64> = (0..LORCH_GRID_POINTS)
        .map(|i| {
            let t = i as f64 / (LORCH_GRID_POINTS - 1) as f64;
            10f64.powf(LORCH_GAMMA_MIN_LOG10 + span * t)
        })
        .collect();
    positive.iter().map(|g| -g).chain(positive.iter().copied()).collect()
}

fn lorch_rhs(spec: &NormSpec, x: &Vector, y: &Vector, gamma: f64) -> f64 {
    spec.norm_unchecked(x.combine(gamma, y, 1.0 / gamma).coords())
}

struct LorchCandidate {
    x: Vector,
    y: Vector,
    gamma: f64,
    lhs: f64,
    rhs: f64,
    evaluations: u64,
}

fn lorch_pair(spec: &NormSpec, seed: u64, index: usize, grid: &[f64]) -> LorchCandidate {
    let mut rng = sampling::stream_rng(seed, index as u64);
    let x0 = sampling::random_vector(&mut rng, spec.dim(), 0.0);
    let y0 = sampling::random_vector(&mut rng, spec.dim(), 0.0);
    let x = x0.divided(spec.norm_unchecked(x0.coords()));
    let y = y0.divided(spec.norm_unchecked(y0.coords()));
    let lhs = spec.norm_unchecked(x.add(&y).coords());

    let mut evaluations = 0u64;
    let (mut best_gamma, mut best_rhs) = (1.0, f64::INFINITY);
    for &g in grid {
        let r = lorch_rhs(spec, &x, &y, g);
        evaluations += 1;
        if r < best_rhs {
            best_rhs = r;
            best_gamma = g;
        }
    }

    // Golden-section refinement in log|gamma| over one grid cell each side.
    let sign = best_gamma.signum();
    let h = (LORCH_GAMMA_MAX_LOG10 - LORCH_GAMMA_MIN_LOG10) / (LORCH_GRID_POINTS - 1) as f64
        * std::f64::consts::LN_10;
    let centre = best_gamma.abs().ln();
    let (mut lo, mut hi) = (centre - h, centre + h);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let eval = |t: f64, evaluations: &mut u64| {
        *evaluations += 1;
        lorch_rhs(spec, &x, &y, sign * t.exp())
    };
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let mut fc = eval(c, &mut evaluations);
    let mut fd = eval(d, &mut evaluations);
    for _ in 0..REFINE_ITERS {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = eval(c, &mut evaluations);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = eval(d, &mut evaluations);
        }
    }
    for (t, f) in [(c, fc), (d, fd)] {
        if f < best_rhs {
            best_rhs = f;
            best_gamma = sign * t.exp();
        }
    }
    LorchCandidate { x, y, gamma: best_gamma, lhs, rhs: best_rhs, evaluations }
}

/// Samples `budget` equal-norm pairs (`|x| = |y| = 1`) and, for each, the
/// `gamma` minimizing `|gamma x + y / gamma|`. Returns the pair with the
/// largest margin `|x + y| - |gamma x + y / gamma|` if that margin exceeds
/// `1e-9 |x + y|`.
pub fn lorch_test(spec: &NormSpec, budget: usize, seed: u64) -> Result<LorchOutcome> {
    if budget == 0 {
        return Err(Error::InvalidConfig("lorch budget must be positive".into()));
    }
    let grid = lorch_gamma_grid();
    let candidates: Vec<LorchCandidate> = (0..budget)
        .into_par_iter()
        .map(|i| lorch_pair(spec, seed, i, &grid))
        .collect();
    let evaluations = candidates.iter().map(|c| c.evaluations).sum();
    let best = candidates
        .iter()
        .fold(None::<&LorchCandidate>, |acc, c| match acc {
            Some(b) if b.lhs - b.rhs >= c.lhs - c.rhs => acc,
            _ => Some(c),
        })
        .expect("budget is positive");
    let margin = best.lhs - best.rhs;
    let stats = LorchStats { best_margin: margin, pairs: budget, evaluations };
    if margin > LORCH_MARGIN_TOL * best.lhs {
        let witness = LorchWitness {
            x: best.x.clone(),
            y: best.y.clone(),
            gamma: best.gamma,
            lhs: best.lhs,
            rhs: best.rhs,
            margin,
        };
        Ok(LorchOutcome::Witness(witness, stats))
    } else {
        Ok(LorchOutcome::NotFound(stats))
    }
}

/// `s_n = |gamma^(p^n) x + gamma^(-p^n) y|` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSequence {
    pub gamma: f64,
    pub p: f64,
    pub values: Vec<f64>,
    /// `|x + y|`, the limit as `gamma^(p^n) -> 1`.
    pub limit: f64,
    /// First `n` with `s_(n+1) > s_n (1 + 1e-12)`, if any.
    pub first_increase: Option<usize>,
}

pub const SEQUENCE_STEP_TOL: f64 = 1e-12;

impl ScalingSequence {
    pub fn is_non_increasing(&self) -> bool {
        self.first_increase.is_none()
    }

    /// For each `n`, the pair `(c_n s_(n+1), s_n)` where
    /// `c_n = ((gamma^(p^n (1-p) q) + gamma^(-p^n (1-p) q)) / 2)^(1/q) >= 1`.
    /// The characterizing inequality with exponent `q` forces the first
    /// component not to exceed the second.
    pub fn step_inequality(&self, q: QExponent) -> Vec<(f64, f64)> {
        let q = q.value();
        self.values
            .windows(2)
            .enumerate()
            .map(|(n, w)| {
                let t = self.p.powi(n as i32) * (1.0 - self.p) * q * self.gamma.ln();
                let factor = (0.5 * (t.exp() + (-t).exp())).powf(1.0 / q);
                (factor * w[1], w[0])
            })
            .collect()
    }
}

pub fn scaling_sequence(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    gamma: f64,
    p: f64,
    n_max: usize,
) -> Result<ScalingSequence> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidConfig(format!("gamma must be positive and finite, got {gamma}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::PExponentOutOfRange(p));
    }
    let nx = spec.norm(x)?;
    let ny = spec.norm(y)?;
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::ZeroVector);
    }
    if (nx - ny).abs() > 1e-12 * nx.max(ny) {
        return Err(Error::NormMismatch { x_norm: nx, y_norm: ny });
    }
    let values: Vec<f64> = (0..=n_max)
        .map(|n| {
            let g = gamma.powf(p.powi(n as i32));
            spec.norm_unchecked(x.combine(g, y, 1.0 / g).coords())
        })
        .collect();
    let first_increase = values
        .windows(2)
        .position(|w| w[1] > w[0] * (1.0 + SEQUENCE_STEP_TOL));
    let limit = spec.norm_unchecked(x.add(y).coords());
    Ok(ScalingSequence { gamma, p, values, limit, first_increase })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn cfg(p: f64, q: f64) -> SearchConfig {
        SearchConfig::new(PExponent::new(p).unwrap(), QExponent::new(q).unwrap())
    }

    #[test]
    fn direction_is_unit() {
        for angles in [vec![0.3], vec![1.0, 2.0], vec![0.1, 4.0, 5.5, 2.2]] {
            let d = direction(&angles);
            let n: f64 = d.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-15);
            assert_eq!(d.len(), angles.len() + 1);
        }
    }

    #[test]
    fn config_validation() {
        assert!(cfg(0.0, 1.0).validate().is_ok());
        assert!(cfg(1.0, 1.0).validate().is_err());
        let mut c = cfg(0.0, 1.0);
        c.ratio_threshold = 1.0;
        assert!(c.validate().is_err());
        let mut c = cfg(0.0, 1.0);
        c.shrink_factor = 1.0;
        assert!(c.validate().is_err());
        let mut c = cfg(0.0, 1.0);
        c.initial_step = 0.0;
        assert!(c.validate().is_err());
        assert!(cfg(0.0, 1.0).with_budget(0, 10).validate().is_err());
        let spec = NormSpec::l2(2).unwrap();
        assert!(search_violation(&spec, &cfg(1.0, 1.0)).is_err());
    }

    #[test]
    fn linf_search_finds_large_violation() {
        let spec = NormSpec::linf(2).unwrap();
        let out = search_violation(&spec, &cfg(0.0, 1.0).with_seed(1)).unwrap();
        match out {
            SearchOutcome::Violation(w) => {
                assert!(w.ratio >= 1.49, "ratio {}", w.ratio);
                let again = pangular::bound_report(
                    &spec,
                    &w.x,
                    &w.y,
                    PExponent::ZERO,
                    BoundKind::Characterizing(QExponent::ONE),
                )
                .unwrap();
                assert!((again.ratio - w.ratio).abs() <= 1e-12 * w.ratio);
            }
            SearchOutcome::NotFound(s) => panic!("no witness, best {}", s.best_ratio),
        }
    }

    #[test]
    fn l2_search_finds_nothing() {
        let spec = NormSpec::l2(2).unwrap();
        for (p, q) in [(0.0, 1.0), (0.5, 0.5), (0.9, 0.1)] {
            let out = search_violation(&spec, &cfg(p, q).with_budget(10, 200).with_seed(3)).unwrap();
            match out {
                SearchOutcome::NotFound(s) => assert!(s.best_ratio <= 1.0 + 1e-9, "{}", s.best_ratio),
                SearchOutcome::Violation(w) => panic!("spurious witness {w:?}"),
            }
        }
    }

    #[test]
    fn search_is_deterministic() {
        let spec = NormSpec::l1(2).unwrap();
        let c = cfg(0.2, 0.7).with_budget(5, 100).with_seed(9);
        let a = search_violation(&spec, &c).unwrap();
        let b = search_violation(&spec, &c).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn verdicts() {
        let c = cfg(0.0, 1.0).with_budget(10, 300).with_seed(1);
        let v = certify_ips(&NormSpec::linf(2).unwrap(), &c).unwrap();
        assert_eq!(v.label(), "NotInnerProduct");
        let v = certify_ips(&NormSpec::l2(3).unwrap(), &c).unwrap();
        assert_eq!(v.label(), "ConsistentWithInnerProduct");
        let v = certify_ips(&NormSpec::weighted_l2(vec![1.0, 4.0]).unwrap(), &c).unwrap();
        match v {
            Verdict::ConsistentWithInnerProduct { caveat, q_in_unit_interval, .. } => {
                assert_eq!(caveat, NOT_A_PROOF);
                assert!(q_in_unit_interval);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lorch_derived_witness() {
        let spec = NormSpec::linf(2).unwrap();
        let x = v(&[1.0, 1.0]);
        let y = v(&[0.5, -1.0]);
        assert_eq!(spec.norm(&x).unwrap(), spec.norm(&y).unwrap());
        let lhs = spec.norm(&x.add(&y)).unwrap();
        let rhs = lorch_rhs(&spec, &x, &y, 0.9);
        assert_eq!(lhs, 1.5);
        assert!((rhs - (0.9 + 0.5 / 0.9)).abs() < 1e-15);
        assert!(lhs - rhs > 0.02);
    }

    #[test]
    fn lorch_gamma_grid_shape() {
        let grid = lorch_gamma_grid();
        assert_eq!(grid.len(), 2 * LORCH_GRID_POINTS);
        assert!(grid.contains(&1.0) && grid.contains(&-1.0));
        assert!((grid[LORCH_GRID_POINTS] - 1e-2).abs() < 1e-17);
        assert!((grid[2 * LORCH_GRID_POINTS - 1] - 1e2).abs() < 1e-12);
    }

    #[test]
    fn negative_gamma_mirrors_positive() {
        for spec in [NormSpec::linf(3).unwrap(), NormSpec::l1(3).unwrap(), NormSpec::l2(3).unwrap()] {
            let x = v(&[0.3, -1.0, 0.2]);
            let y = v(&[1.0, 0.1, -0.4]);
            for mu in [0.01, 0.5, 3.0] {
                assert_eq!(lorch_rhs(&spec, &x, &y, -mu), lorch_rhs(&spec, &x, &y, mu));
            }
        }
    }

    #[test]
    fn lorch_outcomes() {
        let out = lorch_test(&NormSpec::linf(2).unwrap(), 200, 4).unwrap();
        assert!(matches!(out, LorchOutcome::Witness(..)));
        let out = lorch_test(&NormSpec::l2(2).unwrap(), 200, 4).unwrap();
        assert!(matches!(out, LorchOutcome::NotFound(_)));
        assert!(lorch_test(&NormSpec::l2(2).unwrap(), 0, 4).is_err());
    }

    #[test]
    fn scaling_sequence_examples() {
        let l2 = NormSpec::l2(2).unwrap();
        let x = v(&[1.0, 0.0]);
        let y = v(&[0.0, 1.0]);
        let seq = scaling_sequence(&l2, &x, &y, 2.0, 0.5, 30).unwrap();
        assert!(seq.is_non_increasing());
        assert!((seq.values[0] - 4.25f64.sqrt()).abs() < 1e-15);
        assert!((seq.values[30] - 2f64.sqrt()).abs() < 1e-6);

        for spec in [l2.clone(), NormSpec::linf(2).unwrap()] {
            let seq = scaling_sequence(&spec, &x, &y, 1.0, 0.3, 10).unwrap();
            assert!(seq.values.iter().all(|s| *s == seq.limit));
        }
    }

    #[test]
    fn scaling_sequence_errors() {
        let l2 = NormSpec::l2(2).unwrap();
        let x = v(&[1.0, 0.0]);
        let y = v(&[0.0, 2.0]);
        assert!(matches!(
            scaling_sequence(&l2, &x, &y, 2.0, 0.5, 5),
            Err(Error::NormMismatch { .. })
        ));
        let y = v(&[0.0, 1.0]);
        assert!(scaling_sequence(&l2, &x, &y, 0.0, 0.5, 5).is_err());
        assert!(scaling_sequence(&l2, &x, &y, -2.0, 0.5, 5).is_err());
        assert!(scaling_sequence(&l2, &x, &y, 2.0, 1.0, 5).is_err());
        assert!(scaling_sequence(&l2, &x, &y, 2.0, 0.0, 5).is_err());
    }
}
