//! Boundary behavior at a point: vanishing order, relative infinitesimality,
//! and certification that boundary values land in a target region.

use serde::Serialize;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::FunctionHandle;
use crate::geometry::{PathSpec, Region};

/// Moduli below this are treated as underflowed.
const MODULUS_FLOOR: f64 = f64::MIN_POSITIVE;

/// Slopes within this band of each other (and of an integer) count as stable.
const STABLE_BAND: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Classification {
    Order { k: u32 },
    InfiniteOrderUpTo { n_max: u32 },
    Nonvanishing,
}

#[derive(Debug, Clone, Serialize)]
pub struct VanishingReport {
    pub point: Complex64,
    pub classification: Classification,
    /// `(scale, local order)` from coarse to fine.
    pub slope_trace: Vec<(f64, f64)>,
    pub n_max: u32,
}

/// Sampling plan for geometric scales `base^{-k}`.
#[derive(Debug, Clone, Copy)]
pub struct ScalePlan {
    pub base: f64,
    /// First scale is the largest `base^{-k}` not above this.
    pub coarsest: f64,
    /// Sampling stops below this scale.
    pub finest: f64,
}

impl Default for ScalePlan {
    fn default() -> Self {
        ScalePlan { base: 2.0, coarsest: 1.0 / 16.0, finest: 1e-60 }
    }
}

impl ScalePlan {
    fn scales(&self) -> Result<Vec<f64>> {
        if !(self.base > 1.0 && self.coarsest > self.finest && self.finest > 0.0) {
            return Err(Error::InvalidInput(format!("bad scale plan {self:?}")));
        }
        let k0 = (-self.coarsest.ln() / self.base.ln() - 1e-9).ceil() as i32;
        let mut out = Vec::new();
        let mut k = k0;
        loop {
            let s = self.base.powi(-k);
            if s < self.finest {
                break;
            }
            out.push(s);
            k += 1;
        }
        Ok(out)
    }
}

/// The point of `approach` at distance `s` from its endpoint `a`, found by
/// bisection on the final piece.
pub fn approach_point(approach: &PathSpec, a: Complex64, s: f64) -> Result<Complex64> {
    if (approach.end() - a).norm() > 1e-12 * approach.diameter().max(1.0) {
        return Err(Error::InvalidInput("approach path does not terminate at the point".into()));
    }
    let piece = approach.pieces()[approach.pieces().len() - 1];
    if (piece.start() - a).norm() < s {
        return Err(Error::InvalidInput(format!("approach path is shorter than scale {s}")));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (piece.point(mid) - a).norm() > s {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    // On a straight final piece the exact point is available.
    if let crate::geometry::Piece::Segment { from, .. } = piece {
        let dir = (from - a) / (from - a).norm();
        return Ok(a + dir * s);
    }
    Ok(piece.point(0.5 * (lo + hi)))
}

/// Estimates the vanishing order of `f` at `a` from log–log secant slopes of
/// `|f|` along `approach` at geometric scales.
pub fn vanishing_order(f: &FunctionHandle, a: Complex64, approach: &PathSpec, n_max: u32) -> Result<VanishingReport> {
    vanishing_order_with(f, a, approach, n_max, ScalePlan::default())
}

pub fn vanishing_order_with(
    f: &FunctionHandle,
    a: Complex64,
    approach: &PathSpec,
    n_max: u32,
    plan: ScalePlan,
) -> Result<VanishingReport> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be positive".into()));
    }
    let mut samples: Vec<(f64, f64)> = Vec::new();
    let mut underflowed = false;
    for s in plan.scales()? {
        let m = f.eval(approach_point(approach, a, s)?).norm();
        if !(m >= MODULUS_FLOOR) {
            underflowed = true;
            break;
        }
        samples.push((s, m.ln()));
    }
    let slope_trace: Vec<(f64, f64)> = samples
        .windows(2)
        .map(|w| (w[1].0, (w[0].1 - w[1].1) / (w[0].0.ln() - w[1].0.ln())))
        .collect();
    let deepest = samples.last().map_or(f64::NAN, |s| s.0);
    let report = |classification| VanishingReport { point: a, classification, slope_trace: slope_trace.clone(), n_max };

    if let Some(&(_, last)) = slope_trace.last() {
        if last > n_max as f64 {
            return Ok(report(Classification::InfiniteOrderUpTo { n_max }));
        }
    }
    if slope_trace.len() >= 3 {
        let tail: Vec<f64> = slope_trace[slope_trace.len() - 3..].iter().map(|p| p.1).collect();
        let (lo, hi) = tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
        let mean = tail.iter().sum::<f64>() / 3.0;
        let k = mean.round();
        if hi - lo < STABLE_BAND && tail.iter().all(|x| (x - k).abs() < STABLE_BAND) && k >= 0.0 {
            return Ok(report(if k == 0.0 {
                Classification::Nonvanishing
            } else {
                Classification::Order { k: k as u32 }
            }));
        }
    }
    if underflowed {
        return Err(Error::UnderflowDominated { deepest_scale: deepest });
    }
    Err(Error::InvalidInput(format!(
        "local order did not settle on an integer; last slopes {:?}",
        &slope_trace[slope_trace.len().saturating_sub(3)..]
    )))
}

#[derive(Debug, Clone, Serialize)]
pub struct InfinitesimalReport {
    pub holds: bool,
    /// `(N, passed)` for `N = 1..=n_max`.
    pub per_power: Vec<(u32, bool)>,
    /// `(scale, ln|f|, ln|g|)` from coarse to fine.
    pub trace: Vec<(f64, f64, f64)>,
}

/// Tests whether `|f|/|g|^N` decreases toward zero over the last three
/// sampled scales for every `N ≤ n_max`.
pub fn infinitesimal_wrt(
    f: &FunctionHandle,
    g: &FunctionHandle,
    a: Complex64,
    approach: &PathSpec,
    n_max: u32,
) -> Result<InfinitesimalReport> {
    infinitesimal_wrt_with(f, g, a, approach, n_max, ScalePlan { coarsest: 0.5, ..Default::default() })
}

pub fn infinitesimal_wrt_with(
    f: &FunctionHandle,
    g: &FunctionHandle,
    a: Complex64,
    approach: &PathSpec,
    n_max: u32,
    plan: ScalePlan,
) -> Result<InfinitesimalReport> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be positive".into()));
    }
    let mut trace = Vec::new();
    for s in plan.scales()? {
        let z = approach_point(approach, a, s)?;
        let gm = g.eval(z).norm();
        if !(gm >= 1e-300) {
            if trace.len() < 3 {
                return Err(Error::GVanishes(z));
            }
            break;
        }
        let fm = f.eval(z).norm();
        if !(fm >= MODULUS_FLOOR) {
            if trace.len() < 3 {
                return Err(Error::UnderflowDominated { deepest_scale: trace.last().map_or(s, |t: &(f64, f64, f64)| t.0) });
            }
            break;
        }
        trace.push((s, fm.ln(), gm.ln()));
    }
    if trace.len() < 3 {
        return Err(Error::InvalidInput("fewer than three usable scales".into()));
    }
    let last = &trace[trace.len() - 3..];
    let per_power: Vec<(u32, bool)> = (1..=n_max)
        .map(|n| {
            let l: Vec<f64> = last.iter().map(|&(_, lf, lg)| lf - n as f64 * lg).collect();
            (n, l[0] > l[1] && l[1] > l[2] && l[2] < 0.0)
        })
        .collect();
    Ok(InfinitesimalReport { holds: per_power.iter().all(|p| p.1), per_power, trace })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConeCertificate {
    pub ok: bool,
    pub worst_margin: f64,
    /// A sample point whose image leaves the region.
    pub witness: Option<Complex64>,
}

/// Samples `f` on the real interval `[lo, hi]` and checks every image lies in
/// `region`.
pub fn cone_certify(f: &FunctionHandle, interval: (f64, f64), region: &Region, samples: usize) -> Result<ConeCertificate> {
    cone_certify_tol(f, interval, region, samples, 0.0)
}

pub fn cone_certify_tol(
    f: &FunctionHandle,
    (lo, hi): (f64, f64),
    region: &Region,
    samples: usize,
    tol: f64,
) -> Result<ConeCertificate> {
    if !(lo < hi) || samples < 2 {
        return Err(Error::InvalidInput(format!("need lo < hi and >= 2 samples, got ({lo}, {hi}), {samples}")));
    }
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for k in 0..samples {
        let x = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
        let z = Complex64::new(x, 0.0);
        let w = f.eval(z);
        worst = worst.min(region.margin(w));
        if witness.is_none() && !region.contains(w, tol) {
            witness = Some(z);
        }
    }
    Ok(ConeCertificate { ok: witness.is_none(), worst_margin: worst, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn radial() -> PathSpec {
        PathSpec::segment(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap()
    }

    #[test]
    fn scale_plan_starts_at_sixteenth() {
        let s = ScalePlan::default().scales().unwrap();
        assert_eq!(s[0], 1.0 / 16.0);
        assert_eq!(s[1], 1.0 / 32.0);
        let s3 = ScalePlan { base: 3.0, ..Default::default() }.scales().unwrap();
        assert!(s3[0] <= 1.0 / 16.0 && s3[0] * 3.0 > 1.0 / 16.0);
    }

    #[test]
    fn monomial_order() {
        let r = vanishing_order(&FunctionHandle::monomial(3), Complex64::new(0.0, 0.0), &radial(), 40).unwrap();
        assert_eq!(r.classification, Classification::Order { k: 3 });
    }

    #[test]
    fn nonvanishing() {
        let f = FunctionHandle::new("1+z", |z| 1.0 + z);
        let r = vanishing_order(&f, Complex64::new(0.0, 0.0), &radial(), 40).unwrap();
        assert_eq!(r.classification, Classification::Nonvanishing);
    }

    #[test]
    fn fractional_order_is_not_classified() {
        let f = FunctionHandle::new("|z|^2.5", |z: Complex64| Complex64::new(z.norm().powf(2.5), 0.0));
        assert!(vanishing_order(&f, Complex64::new(0.0, 0.0), &radial(), 40).is_err());
    }

    #[test]
    fn approach_point_on_semicircle() {
        // Final piece is a semicircle of radius 1 about 0 ending at -1.
        let path = PathSpec::semicircle(1.0).unwrap();
        let a = Complex64::new(-1.0, 0.0);
        let p = approach_point(&path, a, 0.25).unwrap();
        assert!(((p - a).norm() - 0.25).abs() < 1e-12);
        assert!((p.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn self_comparison_is_not_infinitesimal() {
        let g = FunctionHandle::new("env", |z: Complex64| Complex64::new((-FRAC_PI_2 / z.norm_sqr()).exp(), 0.0));
        let r = infinitesimal_wrt(&g, &g, Complex64::new(0.0, 0.0), &radial(), 2).unwrap();
        assert!(!r.holds);
        assert!(!r.per_power[0].1);
    }

    #[test]
    fn vanishing_comparison_is_rejected() {
        let zero = FunctionHandle::new("0", |_| Complex64::new(0.0, 0.0));
        let one = FunctionHandle::new("1", |_| Complex64::new(1.0, 0.0));
        let err = infinitesimal_wrt(&one, &zero, Complex64::new(0.0, 0.0), &radial(), 1).unwrap_err();
        assert!(matches!(err, Error::GVanishes(_)));
    }

    #[test]
    fn cone_certify_examples() {
        let sq = FunctionHandle::new("z^2", |z| z * z);
        let c = cone_certify(&sq, (-0.9, 0.9), &Region::cone(1.0).unwrap(), 101).unwrap();
        assert!(c.ok && c.witness.is_none());
        let iz = FunctionHandle::new("iz", |z| Complex64::i() * z);
        let c = cone_certify(&iz, (-0.9, 0.9), &Region::ConeInfinity, 101).unwrap();
        assert!(!c.ok);
        assert!(c.witness.unwrap().re != 0.0);
        assert!(c.worst_margin <= 0.0);
    }
}
