//! Finite-dimensional real vectors and the norm families on `R^n`.
//!
//! A [`NormSpec`] is one of
//!
//! * `Lq(q)` for `q >= 1`: `(sum |v_i|^q)^(1/q)`,
//! * `LInf`: `max |v_i|`,
//! * `WeightedL2(w)`: `sqrt(sum w_i v_i^2)` with `w_i > 0`.
//!
//! The inner-product norms among these are `Lq(2)` and every `WeightedL2`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling;

/// A finite real vector. Coordinates are finite when built through
/// [`Vector::new`]; arithmetic results are re-checked on norm evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate { index, value });
        }
        Ok(Self { coords })
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0.0)
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self::from_raw(self.coords.iter().map(|c| c * t).collect())
    }

    /// Coordinate-wise division; used for `x / |x|^(1-p)`.
    pub fn divided(&self, d: f64) -> Self {
        Self::from_raw(self.coords.iter().map(|c| c / d).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        self.zip_with(other, |u, v| a * u + b * v)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self::from_raw(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        )
    }

    fn check_finite(&self) -> Result<()> {
        match self.coords.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            Some((index, &value)) => Err(Error::NonFiniteCoordinate { index, value }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The family a norm belongs to, without its dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    Lq(f64),
    LInf,
    WeightedL2(Vec<f64>),
}

impl NormKind {
    fn validate(&self) -> Result<()> {
        match self {
            NormKind::Lq(q) if !(q.is_finite() && *q >= 1.0) => Err(Error::InvalidNorm(format!(
                "lq exponent must be finite and >= 1, got {q}"
            ))),
            NormKind::WeightedL2(w) if w.is_empty() => {
                Err(Error::InvalidNorm("wl2 needs at least one weight".into()))
            }
            NormKind::WeightedL2(w) if w.iter().any(|x| !(x.is_finite() && *x > 0.0)) => Err(
                Error::InvalidNorm(format!("wl2 weights must be finite and positive, got {w:?}")),
            ),
            _ => Ok(()),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_real = |t: &str| -> Result<f64> {
            // `f64::from_str` accepts "inf" and "nan"; neither is a valid parameter.
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() && !t.is_empty() => Ok(v),
                _ => Err(Error::NormParse(s.to_string())),
            }
        };
        let kind = match s {
            "l1" => NormKind::Lq(1.0),
            "l2" => NormKind::Lq(2.0),
            "linf" => NormKind::LInf,
            _ => {
                if let Some(rest) = s.strip_prefix("lq:") {
                    NormKind::Lq(parse_real(rest)?)
                } else if let Some(rest) = s.strip_prefix("wl2:") {
                    let weights = rest.split(',').map(parse_real).collect::<Result<Vec<_>>>()?;
                    NormKind::WeightedL2(weights)
                } else {
                    return Err(Error::NormParse(s.to_string()));
                }
            }
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::Lq(q) if *q == 1.0 => write!(f, "l1"),
            NormKind::Lq(q) if *q == 2.0 => write!(f, "l2"),
            NormKind::Lq(q) => write!(f, "lq:{q}"),
            NormKind::LInf => write!(f, "linf"),
            NormKind::WeightedL2(w) => {
                write!(f, "wl2:")?;
                for (i, x) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

/// A validated norm on `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    kind: NormKind,
    dim: usize,
}

impl NormSpec {
    pub fn new(kind: NormKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidNorm("dimension must be positive".into()));
        }
        kind.validate()?;
        if let NormKind::WeightedL2(w) = &kind {
            if w.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: w.len() });
            }
        }
        Ok(Self { kind, dim })
    }

    pub fn lq(q: f64, dim: usize) -> Result<Self> {
        Self::new(NormKind::Lq(q), dim)
    }

    pub fn l1(dim: usize) -> Result<Self> {
        Self::lq(1.0, dim)
    }

    pub fn l2(dim: usize) -> Result<Self> {
        Self::lq(2.0, dim)
    }

    pub fn linf(dim: usize) -> Result<Self> {
        Self::new(NormKind::LInf, dim)
    }

    pub fn weighted_l2(weights: Vec<f64>) -> Result<Self> {
        let dim = weights.len();
        Self::new(NormKind::WeightedL2(weights), dim)
    }

    /// Parses the textual form. `dim` may be omitted for `wl2`, where the
    /// weight count fixes it; other families need it.
    pub fn parse(text: &str, dim: Option<usize>) -> Result<Self> {
        let kind: NormKind = text.parse()?;
        let dim = match (&kind, dim) {
            (_, Some(d)) => d,
            (NormKind::WeightedL2(w), None) => w.len(),
            (_, None) => {
                return Err(Error::InvalidNorm(format!("dimension required for {text}")));
            }
        };
        Self::new(kind, dim)
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_inner_product(&self) -> bool {
        match self.kind {
            NormKind::Lq(q) => q == 2.0,
            NormKind::LInf => false,
            NormKind::WeightedL2(_) => true,
        }
    }

    /// `|v|` under this norm.
    pub fn norm(&self, v: &Vector) -> Result<f64> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        v.check_finite()?;
        Ok(self.norm_unchecked(v.coords()))
    }

    /// Norm of a coordinate slice whose length and finiteness the caller
    /// has already established.
    pub(crate) fn norm_unchecked(&self, c: &[f64]) -> f64 {
        match &self.kind {
            NormKind::Lq(q) if *q == 1.0 => c.iter().map(|x| x.abs()).sum(),
            NormKind::Lq(q) if *q == 2.0 => euclidean(c.iter().copied()),
            NormKind::Lq(q) => {
                let m = max_abs(c.iter().copied());
                if m == 0.0 {
                    return 0.0;
                }
                let sum: f64 = c.iter().map(|x| (x.abs() / m).powf(*q)).sum();
                m * sum.powf(1.0 / q)
            }
            NormKind::LInf => max_abs(c.iter().copied()),
            NormKind::WeightedL2(w) => {
                euclidean(c.iter().zip(w).map(|(x, wi)| wi.sqrt() * x))
            }
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

fn max_abs(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |m, x| m.max(x.abs()))
}

// Rescaled by the largest magnitude so squares cannot overflow or underflow.
fn euclidean(it: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = max_abs(it.clone());
    if m == 0.0 {
        return 0.0;
    }
    let sum: f64 = it.map(|x| (x / m) * (x / m)).sum();
    m * sum.sqrt()
}

/// A failed norm axiom with the inputs that exposed it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AxiomFailure {
    Definiteness { v: Vector, norm: f64 },
    Homogeneity { v: Vector, t: f64, lhs: f64, rhs: f64 },
    Triangle { u: Vector, v: Vector, lhs: f64, rhs: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const AXIOM_TOL: f64 = 1e-12;

/// Checks definiteness, absolute homogeneity and the triangle inequality on
/// `sample_count` seeded draws, to relative tolerance `1e-12`.
pub fn validate_norm_axioms(spec: &NormSpec, sample_count: usize, seed: u64) -> AxiomReport {
    let mut rng = sampling::seeded_rng(seed);
    let mut failures = Vec::new();
    let zero = Vector::from_raw(vec![0.0; spec.dim()]);
    let n0 = spec.norm_unchecked(zero.coords());
    if n0 != 0.0 {
        failures.push(AxiomFailure::Definiteness { v: zero, norm: n0 });
    }
    for _ in 0..sample_count {
        let u = sampling::random_vector(&mut rng, spec.dim(), 3.0);
        let v = sampling::random_vector(&mut rng, spec.dim(), 3.0);
        let t = rng.random_range(-10.0..=10.0) * 10f64.powf(rng.random_range(-3.0..=3.0));

        let nu = spec.norm_unchecked(u.coords());
        let nv = spec.norm_unchecked(v.coords());
        if nu.is_nan() || nu <= 0.0 {
            failures.push(AxiomFailure::Definiteness { v: u.clone(), norm: nu });
        }

        let lhs = spec.norm_unchecked(u.scaled(t).coords());
        let rhs = t.abs() * nu;
        if (lhs - rhs).abs() > AXIOM_TOL * rhs.abs().max(lhs.abs()) {
            failures.push(AxiomFailure::Homogeneity { v: u.clone(), t, lhs, rhs });
        }

        let lhs = spec.norm_unchecked(u.add(&v).coords());
        let rhs = nu + nv;
        if lhs > rhs + AXIOM_TOL * rhs {
            failures.push(AxiomFailure::Triangle { u, v, lhs, rhs });
        }
    }
    AxiomReport { samples: sample_count, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(NormSpec::l2(2).unwrap().norm(&v(&[3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(NormSpec::linf(2).unwrap().norm(&v(&[1.0, -3.0])).unwrap(), 3.0);
        assert_eq!(NormSpec::l1(2).unwrap().norm(&v(&[1.0, -1.0])).unwrap(), 2.0);
        assert_eq!(NormSpec::l2(3).unwrap().norm(&v(&[0.0, 0.0, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn lq_and_weighted_values() {
        let n = NormSpec::lq(3.0, 2).unwrap().norm(&v(&[1.0, 1.0])).unwrap();
        assert!((n - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
        let n = NormSpec::weighted_l2(vec![1.0, 4.0]).unwrap().norm(&v(&[1.0, 1.0])).unwrap();
        assert!((n - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn extreme_magnitudes_do_not_overflow() {
        let big = v(&[1e300, 1e300]);
        let n = NormSpec::lq(3.0, 2).unwrap().norm(&big).unwrap();
        assert!((n / 1e300 - 2f64.powf(1.0 / 3.0)).abs() < 1e-14);
        let n = NormSpec::l2(2).unwrap().norm(&big).unwrap();
        assert!((n / 1e300 - 2f64.sqrt()).abs() < 1e-15);
        let tiny = v(&[1e-300, 1e-300]);
        let n = NormSpec::lq(7.5, 2).unwrap().norm(&tiny).unwrap();
        assert!(n > 0.0);
    }

    #[test]
    fn dimension_mismatch_is_error() {
        let spec = NormSpec::l2(3).unwrap();
        assert_eq!(
            spec.norm(&v(&[1.0, 2.0])),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(
            Vector::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteCoordinate { index: 1, .. })
        ));
        assert!(matches!(Vector::new(vec![]), Err(Error::EmptyVector)));
        let spec = NormSpec::l2(2).unwrap();
        let overflowed = v(&[f64::MAX, 0.0]).scaled(10.0);
        assert!(matches!(spec.norm(&overflowed), Err(Error::NonFiniteCoordinate { .. })));
    }

    #[test]
    fn invalid_specs_rejected_at_construction() {
        assert!(NormSpec::lq(0.5, 2).is_err());
        assert!(NormSpec::lq(f64::INFINITY, 2).is_err());
        assert!(NormSpec::weighted_l2(vec![1.0, 0.0]).is_err());
        assert!(NormSpec::weighted_l2(vec![1.0, -2.0]).is_err());
        assert!(NormSpec::new(NormKind::WeightedL2(vec![1.0, 2.0]), 3).is_err());
        assert!(NormSpec::l2(0).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for text in ["l1", "l2", "linf", "lq:1.5", "lq:3", "wl2:1,4"] {
            let kind: NormKind = text.parse().unwrap();
            assert_eq!(kind.to_string(), text);
        }
        assert_eq!("lq:2".parse::<NormKind>().unwrap(), NormKind::Lq(2.0));
        let spec = NormSpec::parse("wl2:1,4", None).unwrap();
        assert_eq!(spec.dim(), 2);
        assert!(NormSpec::parse("wl2:1,4", Some(3)).is_err());
        assert!(NormSpec::parse("l2", None).is_err());
    }

    #[test]
    fn malformed_specs_rejected() {
        for text in [
            "", "L2", "l3", " l2", "l2 ", "lq:", "lq:abc", "lq:0.5", "lq:inf", "lq:nan", "wl2:",
            "wl2:1,,2", "wl2:1,-1", "max", "linf:2",
        ] {
            assert!(text.parse::<NormKind>().is_err(), "{text:?} should not parse");
        }
    }

    #[test]
    fn inner_product_flag() {
        assert!(NormSpec::l2(2).unwrap().is_inner_product());
        assert!(NormSpec::weighted_l2(vec![1.0, 4.0]).unwrap().is_inner_product());
        assert!(!NormSpec::l1(2).unwrap().is_inner_product());
        assert!(!NormSpec::linf(2).unwrap().is_inner_product());
        assert!(!NormSpec::lq(2.5, 2).unwrap().is_inner_product());
    }

    #[test]
    fn axioms_hold_for_supported_norms() {
        for spec in [
            NormSpec::l2(2).unwrap(),
            NormSpec::linf(2).unwrap(),
            NormSpec::l1(3).unwrap(),
            NormSpec::lq(1.5, 4).unwrap(),
            NormSpec::lq(3.0, 5).unwrap(),
            NormSpec::weighted_l2(vec![1.0, 4.0, 0.25]).unwrap(),
        ] {
            let report = validate_norm_axioms(&spec, 1000, 7);
            assert!(report.passed(), "{spec}: {:?}", report.failures);
            assert_eq!(report.samples, 1000);
        }
    }

    #[test]
    fn unit_weights_agree_with_euclidean() {
        let l2 = NormSpec::l2(4).unwrap();
        let w = NormSpec::weighted_l2(vec![1.0; 4]).unwrap();
        let mut rng = sampling::seeded_rng(1);
        for _ in 0..2000 {
            let x = sampling::random_vector(&mut rng, 4, 6.0);
            let a = l2.norm(&x).unwrap();
            let b = w.norm(&x).unwrap();
            assert!((a - b).abs() <= 1e-15 * a, "{a} vs {b}");
        }
    }
}
