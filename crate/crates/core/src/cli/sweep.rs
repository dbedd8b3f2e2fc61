//! Batch evaluation of every bound over seeded pairs and a grid of `p`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pangular::{BoundKind, PExponent, Pair, QExponent};
use crate::sampling;
use crate::vectorspace::{NormSpec, Vector};

/// Tolerance above 1 before a row's maximum ratio counts as exceeding its bound.
pub const SWEEP_TOL: f64 = 1e-9;

/// Log10 spread of the sampled vector magnitudes.
const SAMPLE_SPREAD: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RowFlag {
    #[serde(rename = "ok")]
    Ok,
    /// Ratio above 1 where no theorem claims the bound (non-inner-product
    /// norm, or `char:q` with `q > 1`).
    #[serde(rename = "violation")]
    Violation,
    /// Ratio above 1 for a bound that is a theorem for this norm.
    #[serde(rename = "ERROR")]
    Error,
}

impl RowFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            RowFlag::Ok => "ok",
            RowFlag::Violation => "violation",
            RowFlag::Error => "ERROR",
        }
    }
}

/// Whether `kind` is a theorem for `spec` (must hold for every pair).
pub fn bound_is_guaranteed(spec: &NormSpec, kind: BoundKind) -> bool {
    match kind {
        BoundKind::Maligranda | BoundKind::DwGeneral(_) => true,
        BoundKind::IpsBound => spec.is_inner_product(),
        BoundKind::Characterizing(q) => spec.is_inner_product() && q.value() <= 1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub q: Option<f64>,
    pub kind: BoundKind,
    pub max_ratio: f64,
    pub flag: RowFlag,
    pub sample: usize,
    pub x: Vector,
    pub y: Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    #[serde(serialize_with = "display")]
    pub spec: NormSpec,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
    pub errors: usize,
}

fn display<S: serde::Serializer>(v: &NormSpec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub const CSV_HEADER: &str = "p,q,kind,max_ratio,flag,sample,x,y";

impl SweepReport {
    pub fn to_csv(&self) -> String {
        use super::report::{fmt_coords, fmt_f64};
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                fmt_f64(r.p),
                r.q.map(fmt_f64).unwrap_or_default(),
                r.kind,
                fmt_f64(r.max_ratio),
                r.flag.as_str(),
                r.sample,
                fmt_coords(&r.x),
                fmt_coords(&r.y),
            ));
        }
        out
    }
}

/// The kinds evaluated for a `q` set, in report order.
pub fn kinds_for(q_set: &[QExponent]) -> Vec<BoundKind> {
    let mut kinds = vec![BoundKind::Maligranda];
    kinds.extend(q_set.iter().map(|q| BoundKind::DwGeneral(*q)));
    kinds.push(BoundKind::IpsBound);
    kinds.extend(q_set.iter().map(|q| BoundKind::Characterizing(*q)));
    kinds
}

/// Maximum of `alpha_p / bound` over `samples` seeded pairs for every
/// `p` on a `p_grid`-point uniform grid of `[0, 1]` and every kind.
pub fn check_bounds_sweep(
    spec: &NormSpec,
    p_grid: usize,
    kinds: &[BoundKind],
    samples: usize,
    seed: u64,
) -> Result<SweepReport> {
    if p_grid < 2 {
        return Err(Error::InvalidConfig(format!("p grid needs >= 2 points, got {p_grid}")));
    }
    if kinds.is_empty() || samples == 0 {
        return Err(Error::InvalidConfig("sweep needs at least one kind and one sample".into()));
    }
    let pairs = sampling::pair_batch(seed, samples, spec.dim(), SAMPLE_SPREAD);
    let prepared: Vec<Pair<'_>> = pairs
        .iter()
        .map(|(x, y)| Pair::new(spec, x, y))
        .collect::<Result<_>>()?;

    let per_p: Vec<Vec<SweepRow>> = (0..p_grid)
        .into_par_iter()
        .map(|i| {
            let p = PExponent::new(i as f64 / (p_grid - 1) as f64).expect("grid lies in [0, 1]");
            let mut best = vec![(f64::NEG_INFINITY, 0usize); kinds.len()];
            for (s, pair) in prepared.iter().enumerate() {
                if pair.is_degenerate() {
                    continue;
                }
                let alpha = pair.alpha_p(p);
                for (k, kind) in kinds.iter().enumerate() {
                    let ratio = alpha / pair.bound(p, *kind);
                    if ratio > best[k].0 {
                        best[k] = (ratio, s);
                    }
                }
            }
            kinds
                .iter()
                .zip(best)
                .map(|(kind, (max_ratio, s))| {
                    let flag = if max_ratio <= 1.0 + SWEEP_TOL {
                        RowFlag::Ok
                    } else if bound_is_guaranteed(spec, *kind) {
                        RowFlag::Error
                    } else {
                        RowFlag::Violation
                    };
                    SweepRow {
                        p: p.value(),
                        q: kind.q(),
                        kind: *kind,
                        max_ratio,
                        flag,
                        sample: s,
                        x: pairs[s].0.clone(),
                        y: pairs[s].1.clone(),
                    }
                })
                .collect()
        })
        .collect();
    let rows: Vec<SweepRow> = per_p.into_iter().flatten().collect();
    let errors = rows.iter().filter(|r| r.flag == RowFlag::Error).count();
    Ok(SweepReport { spec: spec.clone(), dim: spec.dim(), samples, seed, rows, errors })
}
