//! Points, target regions and piecewise-smooth paths in the complex plane.
//!
//! Paths are stored as their primitive pieces, never as sampled geometry, so
//! the index engines can refine each piece adaptively. Every piece carries a
//! smooth parametrization on `[0, 1]` with an exact analytic tangent.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the complex plane. Components must be finite.
pub type ComplexPoint = Complex64;

/// Default slack used when classifying zeros as lying on the diameter.
pub const BOUNDARY_TOL: f64 = 1e-10;

pub(crate) fn ensure_finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::InvalidInput(format!("{what} is not finite: {z}")))
    }
}

/// The regions that appear as hypotheses on boundary values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    /// `{w : |Im w| <= C |Re w|}` with `C > 0`.
    Cone { c: f64 },
    /// `{w : Re w != 0} ∪ {0}`.
    ConeInfinity,
    /// `{w : Re(a w) >= 0}` with `a != 0`.
    HalfPlane { a: Complex64 },
    /// `{|z| < 1, Im z > 0}`.
    UpperHalfDisc,
    /// `{Im z > 0}`.
    UpperHalfPlane,
    /// The plane minus the open positive imaginary axis `{iy : y > 0}`.
    SlitPlane,
}

impl Region {
    pub fn cone(c: f64) -> Result<Self> {
        if c > 0.0 && c.is_finite() {
            Ok(Region::Cone { c })
        } else {
            Err(Error::InvalidInput(format!("cone parameter must be positive, got {c}")))
        }
    }

    pub fn half_plane(a: Complex64) -> Result<Self> {
        ensure_finite(a, "half-plane coefficient")?;
        if a.norm() == 0.0 {
            return Err(Error::InvalidInput("half-plane coefficient must be nonzero".into()));
        }
        Ok(Region::HalfPlane { a })
    }

    /// Membership in the closed region, with boundary comparisons slackened by `tol`.
    pub fn contains(&self, w: Complex64, tol: f64) -> bool {
        match *self {
            Region::Cone { c } => w.im.abs() <= c * w.re.abs() + tol,
            Region::ConeInfinity => w.re != 0.0 || w.norm() <= tol,
            Region::HalfPlane { a } => (a * w).re >= -tol * a.norm(),
            Region::UpperHalfDisc => w.norm() < 1.0 + tol && w.im > -tol,
            Region::UpperHalfPlane => w.im > -tol,
            Region::SlitPlane => !(w.re == 0.0 && w.im > tol),
        }
    }

    /// Signed, distance-like margin: positive well inside, nonpositive outside.
    pub fn margin(&self, w: Complex64) -> f64 {
        match *self {
            Region::Cone { c } => c * w.re.abs() - w.im.abs(),
            Region::ConeInfinity => {
                if w == Complex64::new(0.0, 0.0) {
                    f64::INFINITY
                } else {
                    w.re.abs()
                }
            }
            Region::HalfPlane { a } => (a * w).re / a.norm(),
            Region::UpperHalfDisc => w.im.min(1.0 - w.norm()),
            Region::UpperHalfPlane => w.im,
            Region::SlitPlane => {
                if w.im > 0.0 {
                    w.re.abs()
                } else {
                    w.norm()
                }
            }
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Cone { c } => write!(f, "cone:{c}"),
            Region::ConeInfinity => write!(f, "cone-infinity"),
            Region::HalfPlane { a } => write!(f, "half-plane:{}:{}", a.re, a.im),
            Region::UpperHalfDisc => write!(f, "upper-half-disc"),
            Region::UpperHalfPlane => write!(f, "upper-half-plane"),
            Region::SlitPlane => write!(f, "slit-plane"),
        }
    }
}

impl FromStr for Region {
    type Err = Error;

    /// Parses `cone:C`, `cone-infinity`, `half-plane:RE:IM`, `upper-half-disc`,
    /// `upper-half-plane` or `slit-plane`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad number {p:?} in region {s:?}")))
        };
        match parts.as_slice() {
            ["cone", c] => Region::cone(num(c)?),
            ["cone-infinity"] => Ok(Region::ConeInfinity),
            ["half-plane", re, im] => Region::half_plane(Complex64::new(num(re)?, num(im)?)),
            ["upper-half-disc"] => Ok(Region::UpperHalfDisc),
            ["upper-half-plane"] => Ok(Region::UpperHalfPlane),
            ["slit-plane"] => Ok(Region::SlitPlane),
            _ => Err(Error::InvalidInput(format!("unknown region {s:?}"))),
        }
    }
}

/// Traversal direction of a circular piece; counterclockwise is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Counterclockwise => 1.0,
            Orientation::Clockwise => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Counterclockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::Counterclockwise,
        }
    }
}

/// A primitive smooth piece parametrized on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    /// Upper half of the circle `|z - center| = radius`. Counterclockwise runs
    /// from `center + radius` through the top to `center - radius`.
    UpperSemicircle { center: Complex64, radius: f64, orientation: Orientation },
    Segment { from: Complex64, to: Complex64 },
    /// Full circle starting and ending at `center + radius`.
    FullCircle { center: Complex64, radius: f64, orientation: Orientation },
}

impl Piece {
    fn validate(&self) -> Result<()> {
        match *self {
            Piece::UpperSemicircle { center, radius, .. } | Piece::FullCircle { center, radius, .. } => {
                ensure_finite(center, "center")?;
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
                }
            }
            Piece::Segment { from, to } => {
                ensure_finite(from, "segment start")?;
                ensure_finite(to, "segment end")?;
                if (to - from).norm() == 0.0 {
                    return Err(Error::InvalidInput("segment has zero length".into()));
                }
            }
        }
        Ok(())
    }

    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Piece::UpperSemicircle { center, radius, orientation } => {
                let theta = match orientation {
                    Orientation::Counterclockwise => PI * t,
                    Orientation::Clockwise => PI * (1.0 - t),
                };
                center + Complex64::from_polar(radius, theta)
            }
            Piece::Segment { from, to } => from + (to - from) * t,
            Piece::FullCircle { center, radius, orientation } => {
                center + Complex64::from_polar(radius, 2.0 * PI * orientation.sign() * t)
            }
        }
    }

    /// Exact derivative of [`Piece::point`] with respect to `t`.
    pub fn tangent(&self, t: f64) -> Complex64 {
        let i = Complex64::i();
        match *self {
            Piece::UpperSemicircle { center, orientation, .. } => {
                (self.point(t) - center) * i * (PI * orientation.sign())
            }
            Piece::Segment { from, to } => to - from,
            Piece::FullCircle { center, orientation, .. } => {
                (self.point(t) - center) * i * (2.0 * PI * orientation.sign())
            }
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Piece::UpperSemicircle { radius, .. } => PI * radius,
            Piece::Segment { from, to } => (to - from).norm(),
            Piece::FullCircle { radius, .. } => 2.0 * PI * radius,
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn reversed(&self) -> Piece {
        match *self {
            Piece::UpperSemicircle { center, radius, orientation } => Piece::UpperSemicircle {
                center,
                radius,
                orientation: orientation.flipped(),
            },
            Piece::Segment { from, to } => Piece::Segment { from: to, to: from },
            Piece::FullCircle { center, radius, orientation } => Piece::FullCircle {
                center,
                radius,
                orientation: orientation.flipped(),
            },
        }
    }

    /// Bound on `|z|` over the piece.
    fn extent(&self) -> f64 {
        match *self {
            Piece::UpperSemicircle { center, radius, .. } | Piece::FullCircle { center, radius, .. } => {
                center.norm() + radius
            }
            Piece::Segment { from, to } => from.norm().max(to.norm()),
        }
    }
}

/// An immutable chain of primitive pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    pieces: Vec<Piece>,
    closed: bool,
}

impl PathSpec {
    /// Builds an open chain; consecutive pieces must join within `1e-12` of
    /// the chain's diameter.
    pub fn chain(pieces: Vec<Piece>) -> Result<Self> {
        Self::build(pieces, false)
    }

    /// Builds a closed chain; additionally the end must meet the start.
    pub fn closed(pieces: Vec<Piece>) -> Result<Self> {
        Self::build(pieces, true)
    }

    fn build(pieces: Vec<Piece>, closed: bool) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidInput("path has no pieces".into()));
        }
        for p in &pieces {
            p.validate()?;
        }
        let path = PathSpec { pieces, closed };
        let slack = 1e-12 * path.diameter().max(f64::MIN_POSITIVE);
        for w in path.pieces.windows(2) {
            let gap = (w[0].end() - w[1].start()).norm();
            if gap > slack {
                return Err(Error::InvalidInput(format!("pieces do not join (gap {gap:e})")));
            }
        }
        if closed {
            let gap = (path.end() - path.start()).norm();
            if gap > slack {
                return Err(Error::InvalidInput(format!("closed path does not close (gap {gap:e})")));
            }
        }
        Ok(path)
    }

    /// The upper semicircle `γ_r` of radius `r` about the origin, counterclockwise.
    pub fn semicircle(r: f64) -> Result<Self> {
        Self::chain(vec![Piece::UpperSemicircle {
            center: Complex64::new(0.0, 0.0),
            radius: r,
            orientation: Orientation::Counterclockwise,
        }])
    }

    pub fn upper_semicircle(center: Complex64, radius: f64, orientation: Orientation) -> Result<Self> {
        Self::chain(vec![Piece::UpperSemicircle { center, radius, orientation }])
    }

    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Self::closed(vec![Piece::FullCircle {
            center,
            radius,
            orientation: Orientation::Counterclockwise,
        }])
    }

    pub fn segment(from: Complex64, to: Complex64) -> Result<Self> {
        Self::chain(vec![Piece::Segment { from, to }])
    }

    /// Boundary of the upper half-annulus `r_inner < |z| < r_outer`, traversed
    /// counterclockwise, with small upper semicircular notches that step over
    /// the given diameter points. Each notch is `(center, radius)` with the
    /// center real and the notch contained in the corresponding side segment.
    pub fn notched_half_annulus(r_outer: f64, r_inner: f64, notches: &[(f64, f64)]) -> Result<Self> {
        if !(0.0 < r_inner && r_inner < r_outer) {
            return Err(Error::InvalidInput(format!(
                "need 0 < r_inner < r_outer, got {r_inner}, {r_outer}"
            )));
        }
        let c = |x: f64| Complex64::new(x, 0.0);
        let mut sorted: Vec<(f64, f64)> = notches.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        for &(b, eps) in &sorted {
            let inside = (b - eps > -r_outer && b + eps < -r_inner) || (b - eps > r_inner && b + eps < r_outer);
            if !inside || eps <= 0.0 {
                return Err(Error::InvalidInput(format!("notch ({b}, {eps}) does not fit on the diameter")));
            }
        }
        for w in sorted.windows(2) {
            if w[0].0 + w[0].1 >= w[1].0 - w[1].1 {
                return Err(Error::InvalidInput("notches overlap".into()));
            }
        }

        let mut pieces = vec![Piece::UpperSemicircle {
            center: c(0.0),
            radius: r_outer,
            orientation: Orientation::Counterclockwise,
        }];
        let walk = |from: f64, to: f64, pieces: &mut Vec<Piece>| {
            let mut x = from;
            for &(b, eps) in sorted.iter().filter(|(b, _)| *b > from && *b < to) {
                pieces.push(Piece::Segment { from: c(x), to: c(b - eps) });
                pieces.push(Piece::UpperSemicircle {
                    center: c(b),
                    radius: eps,
                    orientation: Orientation::Clockwise,
                });
                x = b + eps;
            }
            pieces.push(Piece::Segment { from: c(x), to: c(to) });
        };
        walk(-r_outer, -r_inner, &mut pieces);
        pieces.push(Piece::UpperSemicircle {
            center: c(0.0),
            radius: r_inner,
            orientation: Orientation::Clockwise,
        });
        walk(r_inner, r_outer, &mut pieces);
        Self::closed(pieces)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn start(&self) -> Complex64 {
        self.pieces[0].start()
    }

    pub fn end(&self) -> Complex64 {
        self.pieces[self.pieces.len() - 1].end()
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(Piece::length).sum()
    }

    /// Upper bound on the distance between any two points of the path.
    pub fn diameter(&self) -> f64 {
        2.0 * self.pieces.iter().map(Piece::extent).fold(0.0, f64::max)
    }

    pub fn reversed(&self) -> PathSpec {
        PathSpec {
            pieces: self.pieces.iter().rev().map(Piece::reversed).collect(),
            closed: self.closed,
        }
    }

    /// Concatenates `other` after `self`.
    pub fn then(&self, other: &PathSpec) -> Result<PathSpec> {
        let mut pieces = self.pieces.clone();
        pieces.extend_from_slice(&other.pieces);
        Self::chain(pieces)
    }
}

/// One sample of a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    /// Global parameter: piece index plus the local parameter in `[0, 1]`.
    pub parameter: f64,
    pub point: Complex64,
    pub tangent: Complex64,
}

/// Samples every piece at `n` equally spaced local parameters. Piece
/// boundaries appear twice, once with each one-sided tangent.
pub fn sample_path(path: &PathSpec, n: usize) -> Result<Vec<PathSample>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 samples per piece, got {n}")));
    }
    let mut out = Vec::with_capacity(n * path.pieces.len());
    for (k, piece) in path.pieces.iter().enumerate() {
        for j in 0..n {
            let t = j as f64 / (n - 1) as f64;
            out.push(PathSample {
                parameter: k as f64 + t,
                point: piece.point(t),
                tangent: piece.tangent(t),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn region_membership_examples() {
        assert!(Region::cone(1.0).unwrap().contains(c(1.0, 0.5), 0.0));
        assert!(!Region::ConeInfinity.contains(c(0.0, 0.3), 0.0));
        assert!(Region::ConeInfinity.contains(c(0.0, 0.0), 0.0));
        assert!(Region::SlitPlane.contains(c(0.0, 0.0), 0.0));
        assert!(Region::SlitPlane.contains(c(0.0, -2.0), 0.0));
        assert!(!Region::SlitPlane.contains(c(0.0, 2.0), 0.0));
        let hp = Region::half_plane(c(0.0, 1.0)).unwrap();
        assert!(hp.contains(c(3.0, -1.0), 0.0));
        assert!(!hp.contains(c(3.0, 1.0), 0.0));
        assert!(Region::cone(0.0).is_err());
        assert!(Region::half_plane(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn region_parse_round_trip() {
        for s in ["cone:2", "cone-infinity", "half-plane:1:-1", "upper-half-disc", "slit-plane"] {
            let r: Region = s.parse().unwrap();
            assert_eq!(r, r.to_string().parse().unwrap());
        }
        assert!("cone:-1".parse::<Region>().is_err());
        assert!("wedge".parse::<Region>().is_err());
    }

    #[test]
    fn semicircle_samples() {
        let path = PathSpec::semicircle(1.0).unwrap();
        let s = sample_path(&path, 3).unwrap();
        assert_abs_diff_eq!((s[0].point - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((s[1].point - c(0.0, 1.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((s[2].point - c(-1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        for x in &s {
            let expected = Complex64::i() * PI * x.point;
            assert_abs_diff_eq!((x.tangent - expected).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn segment_samples() {
        let path = PathSpec::segment(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let s = sample_path(&path, 2).unwrap();
        assert_eq!(s[0].parameter, 0.0);
        assert_eq!(s[0].point, c(0.0, 0.0));
        assert_eq!(s[0].tangent, c(1.0, 0.0));
        assert_eq!(s[1].parameter, 1.0);
        assert_eq!(s[1].point, c(1.0, 0.0));
        assert_eq!(s[1].tangent, c(1.0, 0.0));
        assert!(sample_path(&path, 1).is_err());
    }

    #[test]
    fn notched_composite_closes() {
        let path = PathSpec::notched_half_annulus(0.5, 0.4, &[]).unwrap();
        assert!((path.start() - path.end()).norm() <= 1e-12 * path.diameter());
        let notched = PathSpec::notched_half_annulus(0.6, 0.3, &[(0.45, 0.01), (-0.45, 0.02)]).unwrap();
        assert!(notched.is_closed());
        assert_eq!(notched.pieces().len(), 1 + 3 + 1 + 3);
        assert!(PathSpec::notched_half_annulus(0.6, 0.3, &[(0.59, 0.05)]).is_err());
    }

    #[test]
    fn rejects_degenerate_pieces() {
        assert!(PathSpec::semicircle(0.0).is_err());
        assert!(PathSpec::segment(c(1.0, 1.0), c(1.0, 1.0)).is_err());
        assert!(PathSpec::segment(c(f64::NAN, 0.0), c(1.0, 1.0)).is_err());
        let broken = vec![
            Piece::Segment { from: c(0.0, 0.0), to: c(1.0, 0.0) },
            Piece::Segment { from: c(2.0, 0.0), to: c(3.0, 0.0) },
        ];
        assert!(PathSpec::chain(broken).is_err());
    }

    #[test]
    fn reversal_negates_tangents() {
        let pieces = [
            Piece::UpperSemicircle { center: c(0.2, 0.0), radius: 0.7, orientation: Orientation::Counterclockwise },
            Piece::Segment { from: c(-1.0, 0.5), to: c(2.0, -0.25) },
            Piece::FullCircle { center: c(0.0, 1.0), radius: 2.0, orientation: Orientation::Clockwise },
        ];
        for p in pieces {
            let r = p.reversed();
            for k in 0..=10 {
                let t = k as f64 / 10.0;
                assert_abs_diff_eq!((r.point(t) - p.point(1.0 - t)).norm(), 0.0, epsilon = 1e-13);
                assert_abs_diff_eq!((r.tangent(t) + p.tangent(1.0 - t)).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn tangents_match_finite_differences() {
        let p = Piece::FullCircle { center: c(0.3, -0.1), radius: 1.5, orientation: Orientation::Counterclockwise };
        let h = 1e-6;
        for k in 1..10 {
            let t = k as f64 / 10.0;
            let fd = (p.point(t + h) - p.point(t - h)) / (2.0 * h);
            assert!((fd - p.tangent(t)).norm() < 1e-6);
        }
    }
}
