//! Winding indices of open and closed curves.
//!
//! The index of a curve `w: [a, b] → ℂ*` is `Re (1/2πi) ∫ dw/w`, i.e. the
//! total continuous change of `arg w` divided by `2π`. It is real-valued for
//! open curves and an integer only for closed ones.
//!
//! Two independent engines are provided. Phase unwrapping bisects until
//! every accepted step changes the argument by less than `π/2` and agrees
//! with its midpoint split; it is the authority. Quadrature integrates
//! `Im(f'/f(γ) γ')/2π` with adaptive Gauss–Kronrod and serves as a
//! cross-check when an analytic derivative is available.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function::FunctionHandle;
use crate::geometry::{PathSpec, Piece, Region};
use crate::quadrature::{integrate, QuadratureConfig};

/// Hard stop on bisection depth per initial interval.
pub const MAX_REFINEMENT_DEPTH: u32 = 30;

/// Accepted steps must change the argument by less than this.
const MAX_STEP_ARG: f64 = FRAC_PI_2;

/// Midpoint additivity slack, in radians.
const ADDITIVITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct IndexResult {
    pub value: f64,
    pub estimated_error: f64,
    pub refinement_depth: u32,
    /// `(global parameter, unwrapped argument)` when requested.
    pub phase_track: Option<Vec<(f64, f64)>>,
    /// Value from the `f'/f` quadrature, when that engine ran.
    pub quadrature_value: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct IndexConfig {
    pub initial_intervals: usize,
    pub max_depth: u32,
    pub record_phase: bool,
    /// Allow the central-difference derivative in the quadrature engine.
    pub allow_derivative_fallback: bool,
    /// Run the quadrature cross-check when a derivative is available.
    pub cross_check: bool,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig {
            initial_intervals: 64,
            max_depth: MAX_REFINEMENT_DEPTH,
            record_phase: false,
            allow_derivative_fallback: false,
            cross_check: true,
        }
    }
}

/// Principal value of `arg(w1) - arg(w0)`.
#[inline]
fn arg_step(w0: Complex64, w1: Complex64) -> f64 {
    let a = w0 / w0.norm();
    let b = w1 / w1.norm();
    (b * a.conj()).arg()
}

struct Track {
    total: f64,
    steps: usize,
    depth: u32,
    points: Vec<(f64, f64)>,
}

/// Unwraps the argument of `curve` over `t ∈ [0, 1]`. `check` vets every
/// evaluated point and may abort the run.
///
/// `reach` bounds how far the path may move from a point before the phase
/// can turn quickly: for `f∘γ` it is the Newton distance `|f/f'|`, for a bare
/// curve the distance to the origin. Steps whose arc length (`speed` per
/// unit parameter) exceeds half the smaller endpoint reach are split, so a
/// full turn cannot hide between samples.
fn unwrap_piece<F, G, R>(
    curve: &F,
    check: &G,
    reach: &R,
    speed: f64,
    offset: f64,
    cfg: &IndexConfig,
    tol: f64,
) -> Result<Track>
where
    F: Fn(f64) -> Complex64,
    G: Fn(f64, Complex64) -> Result<()>,
    R: Fn(f64, Complex64) -> f64,
{
    let n = cfg.initial_intervals.max(1);
    let eval = |t: f64| -> Result<(Complex64, f64)> {
        let w = curve(t);
        check(t, w)?;
        Ok((w, reach(t, w)))
    };
    let mut track = Track { total: 0.0, steps: 0, depth: 0, points: Vec::new() };
    let mut prev = eval(0.0)?;
    let start_arg = prev.0.arg();
    if cfg.record_phase {
        track.points.push((offset, start_arg));
    }
    type Node = (Complex64, f64);
    let mut stack: Vec<(f64, f64, Node, Node, u32)> = Vec::new();
    for k in 0..n {
        let (a, b) = (k as f64 / n as f64, (k + 1) as f64 / n as f64);
        let end = eval(b)?;
        stack.push((a, b, prev, end, 0));
        while let Some((a, b, na, nb, depth)) = stack.pop() {
            let m = 0.5 * (a + b);
            let nm = eval(m)?;
            let (wa, wm, wb) = (na.0, nm.0, nb.0);
            let whole = arg_step(wa, wb);
            let (left, right) = (arg_step(wa, wm), arg_step(wm, wb));
            let short = speed * (b - a) <= 0.5 * na.1.min(nb.1);
            if short && whole.abs() < MAX_STEP_ARG && (whole - left - right).abs() < ADDITIVITY_SLACK {
                track.total += left + right;
                track.steps += 2;
                track.depth = track.depth.max(depth);
                if cfg.record_phase {
                    let base = start_arg + track.total;
                    track.points.push((offset + m, base - right));
                    track.points.push((offset + b, base));
                }
            } else {
                if depth + 1 > cfg.max_depth {
                    return Err(Error::RefinementExhausted { depth: cfg.max_depth, tol });
                }
                stack.push((m, b, nm, nb, depth + 1));
                stack.push((a, m, na, nm, depth + 1));
            }
        }
        prev = end;
    }
    Ok(track)
}

fn assemble(tracks: Vec<Track>, tol: f64, record: bool) -> Result<IndexResult> {
    let total: f64 = tracks.iter().map(|t| t.total).sum();
    let steps: usize = tracks.iter().map(|t| t.steps).sum();
    let depth = tracks.iter().map(|t| t.depth).max().unwrap_or(0);
    let estimated_error = steps as f64 * 8.0 * f64::EPSILON / (2.0 * PI);
    if estimated_error > tol {
        return Err(Error::RefinementExhausted { depth, tol });
    }
    let phase_track = record.then(|| {
        // Pieces are unwrapped independently; chain them continuously.
        let mut out: Vec<(f64, f64)> = Vec::new();
        for t in tracks {
            let shift = match (out.last(), t.points.first()) {
                (Some(&(_, last)), Some(&(_, first))) => ((last - first) / (2.0 * PI)).round() * 2.0 * PI,
                _ => 0.0,
            };
            out.extend(t.points.into_iter().map(|(p, a)| (p, a + shift)));
        }
        out
    });
    Ok(IndexResult {
        value: total / (2.0 * PI),
        estimated_error,
        refinement_depth: depth,
        phase_track,
        quadrature_value: None,
    })
}

fn validate_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")))
    }
}

/// Index of the curve traced by `path` itself, with respect to the origin.
pub fn index_of_curve(path: &PathSpec, tol: f64) -> Result<IndexResult> {
    index_of_curve_with(path, tol, IndexConfig::default())
}

pub fn index_of_curve_with(path: &PathSpec, tol: f64, cfg: IndexConfig) -> Result<IndexResult> {
    validate_tol(tol)?;
    let floor = 1e-13 * path.diameter();
    let check = |_t: f64, w: Complex64| {
        let d = w.norm();
        if d <= floor {
            Err(Error::OriginTooClose { distance: d })
        } else {
            Ok(())
        }
    };
    let tracks = path
        .pieces()
        .par_iter()
        .enumerate()
        .map(|(k, piece)| {
            unwrap_piece(&|t| piece.point(t), &check, &|_, w: Complex64| w.norm(), piece.length(), k as f64, &cfg, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(tracks, tol, cfg.record_phase)
}

/// Vets the path against the declared zeros and returns the point checker
/// used while sampling `f` along it.
fn zero_guard<'a>(f: &'a FunctionHandle, path: &PathSpec) -> Result<impl Fn(Complex64, Complex64) -> Result<()> + 'a> {
    let scale = path.diameter();
    if let Some(zeros) = f.declared_zeros() {
        for z in zeros {
            if distance_to_path(path, z.location) <= 1e-12 * scale.max(1e-300) {
                return Err(Error::ZeroOnPath { at: z.location });
            }
        }
    }
    let newton_floor = 1e-12 * scale;
    Ok(move |z: Complex64, w: Complex64| {
        if !(w.re.is_finite() && w.im.is_finite()) || w.norm() == 0.0 {
            return Err(Error::ZeroOnPath { at: z });
        }
        if let Some(g) = f.log_derivative_at(z, false) {
            // |f/f'| estimates the distance to the nearest zero.
            if g.norm() * newton_floor > 1.0 {
                return Err(Error::ZeroOnPath { at: z });
            }
        }
        Ok(())
    })
}

/// Euclidean distance from `p` to the path.
pub fn distance_to_path(path: &PathSpec, p: Complex64) -> f64 {
    path.pieces()
        .iter()
        .map(|piece| match *piece {
            Piece::Segment { from, to } => {
                let d = to - from;
                let t = (((p - from) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
                (from + d * t - p).norm()
            }
            Piece::FullCircle { center, radius, .. } => ((p - center).norm() - radius).abs(),
            Piece::UpperSemicircle { center, radius, .. } => {
                let q = p - center;
                if q.im >= 0.0 {
                    (q.norm() - radius).abs()
                } else {
                    (q - radius).norm().min((q + radius).norm())
                }
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Index of `f∘γ` by phase unwrapping only.
pub fn phase_index_of_image(f: &FunctionHandle, path: &PathSpec, tol: f64, cfg: IndexConfig) -> Result<IndexResult> {
    validate_tol(tol)?;
    let guard = zero_guard(f, path)?;
    let tracks = path
        .pieces()
        .par_iter()
        .enumerate()
        .map(|(k, piece)| {
            let check = |t: f64, w: Complex64| guard(piece.point(t), w);
            let reach = |t: f64, _w: Complex64| {
                f.log_derivative_at(piece.point(t), false).map_or(f64::INFINITY, |g| 1.0 / g.norm())
            };
            unwrap_piece(&|t| f.eval(piece.point(t)), &check, &reach, piece.length(), k as f64, &cfg, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(tracks, tol, cfg.record_phase)
}

/// Index of `f∘γ` as `Re (1/2πi) ∫ f'(γ)/f(γ) γ' dt`, or `None` when no
/// derivative is available and the fallback is not allowed.
pub fn quadrature_index_of_image(
    f: &FunctionHandle,
    path: &PathSpec,
    tol: f64,
    allow_fallback: bool,
) -> Result<Option<(f64, f64)>> {
    validate_tol(tol)?;
    if !f.has_analytic_derivative() && !allow_fallback {
        return Ok(None);
    }
    let pieces = path.pieces();
    let cfg = QuadratureConfig {
        abs_tol: 0.25 * tol * 2.0 * PI / pieces.len() as f64,
        rel_tol: 0.0,
        max_intervals: 20_000,
        max_depth: MAX_REFINEMENT_DEPTH,
    };
    let parts = pieces
        .par_iter()
        .map(|piece| {
            integrate(
                |t| {
                    let z = piece.point(t);
                    let g = f.log_derivative_at(z, allow_fallback).unwrap_or(Complex64::new(f64::NAN, 0.0));
                    (g * piece.tangent(t)).im
                },
                0.0,
                1.0,
                cfg,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let value = parts.iter().map(|q| q.value).sum::<f64>() / (2.0 * PI);
    let error = parts.iter().map(|q| q.error).sum::<f64>() / (2.0 * PI);
    Ok(Some((value, error)))
}

/// Index of `f∘γ`, computed by phase unwrapping and cross-checked against
/// the `f'/f` quadrature whenever a derivative is available.
pub fn index_of_image(f: &FunctionHandle, path: &PathSpec, tol: f64) -> Result<IndexResult> {
    index_of_image_with(f, path, tol, IndexConfig::default())
}

pub fn index_of_image_with(f: &FunctionHandle, path: &PathSpec, tol: f64, cfg: IndexConfig) -> Result<IndexResult> {
    let mut result = phase_index_of_image(f, path, tol, cfg)?;
    if cfg.cross_check {
        if let Some((q, _err)) = quadrature_index_of_image(f, path, tol, cfg.allow_derivative_fallback)? {
            if (q - result.value).abs() > 5.0 * tol {
                return Err(Error::QuadratureMismatch { phase: result.value, quadrature: q });
            }
            result.quadrature_value = Some(q);
        }
    }
    Ok(result)
}

/// Index of `f` around a closed path; by the argument principle this is the
/// number of zeros enclosed. Fails unless the value is within `tol` of an
/// integer.
pub fn closed_path_zero_count(f: &FunctionHandle, closed: &PathSpec, tol: f64) -> Result<f64> {
    if !closed.is_closed() {
        return Err(Error::InvalidInput("path is not closed".into()));
    }
    let value = index_of_image(f, closed, tol)?.value;
    if (value - value.round()).abs() > tol {
        return Err(Error::NonIntegerResult { value, tol });
    }
    Ok(value)
}

/// The strict index bound a curve inside `region` must obey: `1/2` for curves
/// in `Γ_∞ \ {0}` (and hence in any cone `Γ_C`), `1` for curves avoiding the
/// positive imaginary axis.
pub fn region_index_bound(region: &Region) -> Result<f64> {
    match region {
        Region::ConeInfinity | Region::Cone { .. } => Ok(0.5),
        Region::SlitPlane => Ok(1.0),
        _ => Err(Error::UnsupportedRegion),
    }
}

/// Whether a computed index obeys the bound for its image region.
pub fn index_bound_check(region: &Region, index: &IndexResult) -> Result<bool> {
    let bound = region_index_bound(region)?;
    Ok(index.value.abs() < bound)
}
