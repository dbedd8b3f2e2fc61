//! The p-angular distance, the normed-space angle and the upper bounds on
//! the p-angular distance.
//!
//! For nonzero `x`, `y` and `p` in `[0, 1]`
//!
//! ```text
//! alpha_p[x, y] = | x / |x|^(1-p) - y / |y|^(1-p) |
//! ```
//!
//! which is the angular distance at `p = 0` and `|x - y|` at `p = 1`. The
//! bounds ([`BoundKind`]) all have the shape `C * |x - y| / D(|x|, |y|)`,
//! where `D` is homogeneous of degree `1 - p`; the ratio `alpha_p / bound`
//! is therefore invariant under joint scaling of the pair.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::vectorspace::{NormSpec, Vector};

/// Exponent `p` of the p-angular distance, restricted to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct PExponent(f64);

impl PExponent {
    pub const ZERO: PExponent = PExponent(0.0);
    pub const ONE: PExponent = PExponent(1.0);

    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(Error::PExponentOutOfRange(p))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Exponent `q > 0` of the power-mean bounds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct QExponent(f64);

impl QExponent {
    pub const ONE: QExponent = QExponent(1.0);

    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 {
            Ok(Self(q))
        } else {
            Err(Error::QExponentOutOfRange(q))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Upper bounds for `alpha_p[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundKind {
    /// `(2 - p) |x - y| / max(|x|, |y|)^(1-p)`; valid in every normed space.
    Maligranda,
    /// `2^(1 + 1/q) |x - y| / (|x|^((1-p)q) + |y|^((1-p)q))^(1/q)`; valid in
    /// every normed space for every `q > 0`.
    DwGeneral(QExponent),
    /// `2 |x - y| / (|x|^(1-p) + |y|^(1-p))`; valid in inner-product spaces.
    IpsBound,
    /// `2^(1/q) |x - y| / (|x|^((1-p)q) + |y|^((1-p)q))^(1/q)`. Holding for
    /// all pairs with some `q > 0` and `p < 1` forces an inner-product norm.
    Characterizing(QExponent),
}

impl BoundKind {
    pub fn q(&self) -> Option<f64> {
        match self {
            BoundKind::DwGeneral(q) | BoundKind::Characterizing(q) => Some(q.value()),
            BoundKind::Maligranda | BoundKind::IpsBound => None,
        }
    }

    /// Whether the bound holds in every normed space.
    pub fn is_universal(&self) -> bool {
        matches!(self, BoundKind::Maligranda | BoundKind::DwGeneral(_))
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let q_of = |t: &str| -> Result<QExponent> {
            let q: f64 = t.parse().map_err(|_| Error::BoundParse(s.to_string()))?;
            QExponent::new(q)
        };
        match s {
            "maligranda" => Ok(BoundKind::Maligranda),
            "ips" => Ok(BoundKind::IpsBound),
            _ => {
                if let Some(rest) = s.strip_prefix("dw:") {
                    Ok(BoundKind::DwGeneral(q_of(rest)?))
                } else if let Some(rest) = s.strip_prefix("char:") {
                    Ok(BoundKind::Characterizing(q_of(rest)?))
                } else {
                    Err(Error::BoundParse(s.to_string()))
                }
            }
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::Maligranda => write!(f, "maligranda"),
            BoundKind::DwGeneral(q) => write!(f, "dw:{}", q.value()),
            BoundKind::IpsBound => write!(f, "ips"),
            BoundKind::Characterizing(q) => write!(f, "char:{}", q.value()),
        }
    }
}

impl Serialize for BoundKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `alpha_p` together with a bound and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub alpha_p: f64,
    pub bound: f64,
    pub ratio: f64,
    pub kind: BoundKind,
    pub p: f64,
    pub q: Option<f64>,
}

/// Pairs closer than this (relative to the larger norm) are degenerate.
pub const DEGENERATE_SEPARATION: f64 = 1e-12;

/// Slack allowed on the arccos argument before it is reported as out of range.
pub const ANGLE_CLAMP_TOL: f64 = 1e-12;

/// A validated nonzero pair with its three norms `|x|`, `|y|`, `|x - y|`
/// evaluated once.
#[derive(Debug, Clone)]
pub struct Pair<'a> {
    spec: &'a NormSpec,
    x: &'a Vector,
    y: &'a Vector,
    x_norm: f64,
    y_norm: f64,
    diff_norm: f64,
}

impl<'a> Pair<'a> {
    pub fn new(spec: &'a NormSpec, x: &'a Vector, y: &'a Vector) -> Result<Self> {
        let x_norm = spec.norm(x)?;
        let y_norm = spec.norm(y)?;
        if x_norm == 0.0 || y_norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let diff_norm = spec.norm(&x.sub(y))?;
        Ok(Self { spec, x, y, x_norm, y_norm, diff_norm })
    }

    pub fn x_norm(&self) -> f64 {
        self.x_norm
    }

    pub fn y_norm(&self) -> f64 {
        self.y_norm
    }

    pub fn diff_norm(&self) -> f64 {
        self.diff_norm
    }

    pub fn alpha_p(&self, p: PExponent) -> f64 {
        let e = 1.0 - p.value();
        let dx = self.x_norm.powf(e);
        let dy = self.y_norm.powf(e);
        let diff: Vec<f64> = self
            .x
            .coords()
            .iter()
            .zip(self.y.coords())
            .map(|(a, b)| a / dx - b / dy)
            .collect();
        self.spec.norm_unchecked(&diff)
    }

    /// Bound value. Powers are taken of the norms rescaled so the larger is
    /// 1, then the common factor `max(|x|, |y|)^(1-p)` is divided out.
    pub fn bound(&self, p: PExponent, kind: BoundKind) -> f64 {
        let p = p.value();
        let e = 1.0 - p;
        let m = self.x_norm.max(self.y_norm);
        let rx = self.x_norm / m;
        let ry = self.y_norm / m;
        let scale = m.powf(e);
        let d = self.diff_norm;
        match kind {
            BoundKind::Maligranda => (2.0 - p) * d / scale,
            BoundKind::DwGeneral(q) => {
                let q = q.value();
                let s = rx.powf(e * q) + ry.powf(e * q);
                2f64.powf(1.0 + 1.0 / q) * d / (scale * s.powf(1.0 / q))
            }
            BoundKind::IpsBound => {
                let s = rx.powf(e) + ry.powf(e);
                2.0 * d / (scale * s)
            }
            BoundKind::Characterizing(q) => {
                let q = q.value();
                let s = rx.powf(e * q) + ry.powf(e * q);
                2f64.powf(1.0 / q) * d / (scale * s.powf(1.0 / q))
            }
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.diff_norm < DEGENERATE_SEPARATION * self.x_norm.max(self.y_norm)
    }

    pub fn report(&self, p: PExponent, kind: BoundKind) -> Result<BoundReport> {
        if self.x == self.y {
            return Err(Error::IdenticalArguments);
        }
        if self.is_degenerate() {
            return Err(Error::DegeneratePair {
                separation: self.diff_norm,
                scale: self.x_norm.max(self.y_norm),
            });
        }
        let alpha_p = self.alpha_p(p);
        let bound = self.bound(p, kind);
        Ok(BoundReport {
            alpha_p,
            bound,
            ratio: alpha_p / bound,
            kind,
            p: p.value(),
            q: kind.q(),
        })
    }
}

pub fn p_angular_distance(spec: &NormSpec, x: &Vector, y: &Vector, p: PExponent) -> Result<f64> {
    Ok(Pair::new(spec, x, y)?.alpha_p(p))
}

/// `alpha[x, y] = alpha_0[x, y]`.
pub fn angular_distance(spec: &NormSpec, x: &Vector, y: &Vector) -> Result<f64> {
    p_angular_distance(spec, x, y, PExponent::ZERO)
}

/// `A(x, y) = arccos(1 - alpha[x, y]^2 / 2)`, in `[0, pi]`.
pub fn angle(spec: &NormSpec, x: &Vector, y: &Vector) -> Result<f64> {
    let a = angular_distance(spec, x, y)?;
    let arg = 0.5 * (2.0 - a * a);
    if !(-1.0 - ANGLE_CLAMP_TOL..=1.0 + ANGLE_CLAMP_TOL).contains(&arg) {
        return Err(Error::AngleOutOfRange(arg));
    }
    Ok(arg.clamp(-1.0, 1.0).acos())
}

pub fn bound_value(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    p: PExponent,
    kind: BoundKind,
) -> Result<f64> {
    Ok(Pair::new(spec, x, y)?.bound(p, kind))
}

pub fn bound_report(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    p: PExponent,
    kind: BoundKind,
) -> Result<BoundReport> {
    Pair::new(spec, x, y)?.report(p, kind)
}

/// Classical Dunkl–Williams bound `4 |x - y| / (|x| + |y|)`.
pub fn dunkl_williams_bound(spec: &NormSpec, x: &Vector, y: &Vector) -> Result<f64> {
    let pair = Pair::new(spec, x, y)?;
    Ok(4.0 * pair.diff_norm / (pair.x_norm + pair.y_norm))
}

/// Kirk–Smiley bound `2 |x - y| / (|x| + |y|)`.
pub fn kirk_smiley_bound(spec: &NormSpec, x: &Vector, y: &Vector) -> Result<f64> {
    let pair = Pair::new(spec, x, y)?;
    Ok(2.0 * pair.diff_norm / (pair.x_norm + pair.y_norm))
}

/// Al-Rashed bound `2^(1/q) |x - y| / (|x|^q + |y|^q)^(1/q)`.
pub fn al_rashed_bound(spec: &NormSpec, x: &Vector, y: &Vector, q: QExponent) -> Result<f64> {
    let pair = Pair::new(spec, x, y)?;
    let q = q.value();
    let s = pair.x_norm.powf(q) + pair.y_norm.powf(q);
    Ok(2f64.powf(1.0 / q) * pair.diff_norm / s.powf(1.0 / q))
}

/// `alpha_p^2` through the polarization expansion
///
/// ```text
/// |x|^(2p) - (|x|^2 + |y|^2 - |x - y|^2) / (|x|^(1-p) |y|^(1-p)) + |y|^(2p)
/// ```
///
/// which holds only for inner-product norms. Evaluated on the norms rescaled
/// so the larger is 1, then multiplied back by `max(|x|, |y|)^(2p)`.
pub fn l1_expansion_alpha_sq(spec: &NormSpec, x: &Vector, y: &Vector, p: PExponent) -> Result<f64> {
    if !spec.is_inner_product() {
        return Err(Error::NotInnerProduct(spec.to_string()));
    }
    let pair = Pair::new(spec, x, y)?;
    let p = p.value();
    let e = 1.0 - p;
    let m = pair.x_norm.max(pair.y_norm);
    let (rx, ry, rd) = (pair.x_norm / m, pair.y_norm / m, pair.diff_norm / m);
    let cross = (rx * rx + ry * ry - rd * rd) / (rx.powf(e) * ry.powf(e));
    let value = rx.powf(2.0 * p) - cross + ry.powf(2.0 * p);
    Ok(value * m.powf(2.0 * p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn p(x: f64) -> PExponent {
        PExponent::new(x).unwrap()
    }

    fn q(x: f64) -> QExponent {
        QExponent::new(x).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn exponent_validation() {
        assert!(PExponent::new(-0.1).is_err());
        assert!(PExponent::new(1.0001).is_err());
        assert!(PExponent::new(f64::NAN).is_err());
        assert!(QExponent::new(0.0).is_err());
        assert!(QExponent::new(-1.0).is_err());
        assert!(QExponent::new(f64::INFINITY).is_err());
    }

    #[test]
    fn p_angular_examples() {
        let l2 = NormSpec::l2(2).unwrap();
        let d = p_angular_distance(&l2, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), p(0.0)).unwrap();
        assert!(close(d, SQRT_2, 1e-15));
        // x / |x|^(1/2) = (2, 0) and y stays (0, 1).
        let d = p_angular_distance(&l2, &v(&[4.0, 0.0]), &v(&[0.0, 1.0]), p(0.5)).unwrap();
        assert!(close(d, 5f64.sqrt(), 1e-15));
        for spec in [l2.clone(), NormSpec::linf(2).unwrap(), NormSpec::l1(2).unwrap()] {
            let x = v(&[0.3, -2.0]);
            for pv in [0.0, 0.4, 1.0] {
                assert_eq!(p_angular_distance(&spec, &x, &x, p(pv)).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn zero_vector_rejected() {
        let l2 = NormSpec::l2(2).unwrap();
        let z = v(&[0.0, 0.0]);
        let x = v(&[1.0, 0.0]);
        assert_eq!(p_angular_distance(&l2, &z, &x, p(0.5)), Err(Error::ZeroVector));
        assert_eq!(angle(&l2, &x, &z), Err(Error::ZeroVector));
        assert_eq!(bound_value(&l2, &x, &z, p(0.0), BoundKind::IpsBound), Err(Error::ZeroVector));
    }

    #[test]
    fn angle_examples() {
        let l2 = NormSpec::l2(2).unwrap();
        let x = v(&[1.0, 0.0]);
        assert!(close(angle(&l2, &x, &v(&[0.0, 1.0])).unwrap(), FRAC_PI_2, 1e-15));
        assert!(close(angle(&l2, &x, &v(&[-1.0, 0.0])).unwrap(), PI, 1e-15));
        for spec in [l2, NormSpec::linf(2).unwrap(), NormSpec::lq(3.0, 2).unwrap()] {
            let x = v(&[0.7, -1.3]);
            assert_eq!(angle(&spec, &x, &x.scaled(2.0)).unwrap(), 0.0);
        }
    }

    #[test]
    fn bound_examples() {
        let l2 = NormSpec::l2(2).unwrap();
        let x = v(&[1.0, 0.0]);
        let y = v(&[0.0, 1.0]);
        let b = bound_value(&l2, &x, &y, p(0.0), BoundKind::IpsBound).unwrap();
        assert!(close(b, SQRT_2, 1e-15));
        let b = bound_value(&l2, &x, &y, p(0.0), BoundKind::DwGeneral(q(1.0))).unwrap();
        assert!(close(b, 2.0 * SQRT_2, 1e-15));

        let linf = NormSpec::linf(2).unwrap();
        let b = bound_value(
            &linf,
            &v(&[2.0, 0.0]),
            &v(&[1.0, 1.0]),
            p(0.0),
            BoundKind::Characterizing(q(1.0)),
        )
        .unwrap();
        assert!(close(b, 2.0 / 3.0, 1e-15));
    }

    #[test]
    fn report_examples() {
        let linf = NormSpec::linf(2).unwrap();
        let r = bound_report(
            &linf,
            &v(&[2.0, 0.0]),
            &v(&[1.0, 1.0]),
            p(0.0),
            BoundKind::Characterizing(q(1.0)),
        )
        .unwrap();
        assert!(close(r.alpha_p, 1.0, 1e-15));
        assert!(close(r.ratio, 1.5, 1e-15));
        assert_eq!(r.q, Some(1.0));

        let l2 = NormSpec::l2(2).unwrap();
        let r = bound_report(&l2, &v(&[3.0, 0.0]), &v(&[0.0, 1.0]), p(0.0), BoundKind::IpsBound)
            .unwrap();
        assert!(r.ratio <= 1.0);
        assert!(close(r.ratio * r.bound, r.alpha_p, 1e-12));
    }

    #[test]
    fn report_rejects_identical_and_degenerate_pairs() {
        let l2 = NormSpec::l2(2).unwrap();
        let x = v(&[1.0, 2.0]);
        assert_eq!(
            bound_report(&l2, &x, &x, p(0.3), BoundKind::IpsBound),
            Err(Error::IdenticalArguments)
        );
        let y = v(&[1.0, 2.0 + 1e-14]);
        assert!(matches!(
            bound_report(&l2, &x, &y, p(0.3), BoundKind::IpsBound),
            Err(Error::DegeneratePair { .. })
        ));
        // Distances themselves are fine for identical inputs.
        assert_eq!(bound_value(&l2, &x, &x, p(0.3), BoundKind::IpsBound).unwrap(), 0.0);
    }

    #[test]
    fn equal_norms_give_unit_ratio() {
        for spec in [
            NormSpec::l1(2).unwrap(),
            NormSpec::linf(2).unwrap(),
            NormSpec::lq(3.0, 2).unwrap(),
        ] {
            let x = v(&[1.0, 0.5]);
            let y = v(&[-0.5, 1.0]);
            for pv in [0.0, 0.25, 0.9] {
                for qv in [0.25, 1.0, 5.0] {
                    let r = bound_report(&spec, &x, &y, p(pv), BoundKind::Characterizing(q(qv)))
                        .unwrap();
                    assert!(close(r.ratio, 1.0, 1e-12), "{spec} p={pv} q={qv}: {}", r.ratio);
                }
            }
        }
    }

    #[test]
    fn classical_specializations_at_p_zero() {
        let x = v(&[2.0, -0.5, 1.0]);
        let y = v(&[0.1, 0.7, -3.0]);
        for spec in [NormSpec::l1(3).unwrap(), NormSpec::l2(3).unwrap(), NormSpec::linf(3).unwrap()]
        {
            let pair = Pair::new(&spec, &x, &y).unwrap();
            let dw = dunkl_williams_bound(&spec, &x, &y).unwrap();
            assert!(close(pair.bound(p(0.0), BoundKind::DwGeneral(q(1.0))), dw, 1e-14));
            let ks = kirk_smiley_bound(&spec, &x, &y).unwrap();
            assert!(close(pair.bound(p(0.0), BoundKind::Characterizing(q(1.0))), ks, 1e-14));
            for qv in [0.1, 0.5, 1.0] {
                let ar = al_rashed_bound(&spec, &x, &y, q(qv)).unwrap();
                let ch = pair.bound(p(0.0), BoundKind::Characterizing(q(qv)));
                assert!(close(ch, ar, 1e-14), "q={qv}: {ch} vs {ar}");
            }
        }
    }

    #[test]
    fn characterizing_q1_is_ips_exactly() {
        let spec = NormSpec::lq(1.5, 2).unwrap();
        let x = v(&[1.0, 3.0]);
        let y = v(&[-0.2, 0.4]);
        let pair = Pair::new(&spec, &x, &y).unwrap();
        for i in 0..=20 {
            let pe = p(i as f64 / 20.0);
            assert_eq!(
                pair.bound(pe, BoundKind::Characterizing(QExponent::ONE)),
                pair.bound(pe, BoundKind::IpsBound)
            );
        }
    }

    #[test]
    fn characterizing_equals_alpha_at_p_one() {
        let spec = NormSpec::linf(2).unwrap();
        let x = v(&[1.0, 3.0]);
        let y = v(&[-0.2, 0.4]);
        let pair = Pair::new(&spec, &x, &y).unwrap();
        for qv in [0.25, 1.0, 5.0] {
            let b = pair.bound(PExponent::ONE, BoundKind::Characterizing(q(qv)));
            assert!(close(b, pair.alpha_p(PExponent::ONE), 1e-15));
        }
    }

    #[test]
    fn l1_expansion_examples() {
        let w = NormSpec::weighted_l2(vec![1.0, 1.0]).unwrap();
        let a = l1_expansion_alpha_sq(&w, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), p(0.0)).unwrap();
        assert!(close(a, 2.0, 1e-15));
        let x = v(&[1.0, 1.0]);
        let a = l1_expansion_alpha_sq(&w, &x, &x, p(0.37)).unwrap();
        assert!(a.abs() < 1e-15);
        let a = l1_expansion_alpha_sq(&w, &v(&[4.0, 0.0]), &v(&[0.0, 1.0]), p(0.5)).unwrap();
        assert!(close(a, 5.0, 1e-15));
        let linf = NormSpec::linf(2).unwrap();
        assert!(matches!(
            l1_expansion_alpha_sq(&linf, &x, &v(&[0.0, 1.0]), p(0.0)),
            Err(Error::NotInnerProduct(_))
        ));
    }

    #[test]
    fn bound_kind_text_form() {
        for text in ["maligranda", "dw:0.5", "ips", "char:1", "char:0.25", "dw:5"] {
            let k: BoundKind = text.parse().unwrap();
            assert_eq!(k.to_string(), text);
        }
        for bad in ["", "dw", "dw:", "dw:0", "char:-1", "char:x", "IPS", "mal"] {
            assert!(bad.parse::<BoundKind>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn extreme_scales_stay_finite() {
        let spec = NormSpec::lq(3.0, 2).unwrap();
        let x = v(&[1e200, 3e199]);
        let y = v(&[-2e199, 1e200]);
        let pair = Pair::new(&spec, &x, &y).unwrap();
        for kind in [BoundKind::DwGeneral(q(5.0)), BoundKind::Characterizing(q(5.0))] {
            let b = pair.bound(p(0.0), kind);
            assert!(b.is_finite() && b > 0.0);
        }
    }
}
