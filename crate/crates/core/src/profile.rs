//! The semicircle index profile `I(r)`, its one-sided limits and jumps, the
//! telescoping relation with segment indices, the radial-derivative identity
//! and the log-averaged profile `J(r)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::cone_certify_tol;
use crate::contour::index_of_image;
use crate::error::{Error, Result};
use crate::function::{FunctionHandle, Placement};
use crate::geometry::{PathSpec, Region};
use crate::quadrature::{integrate, QuadratureConfig};

/// Default exclusion margin and base step of one-sided limits.
pub const DEFAULT_DELTA: f64 = 1e-4;

/// Two Richardson estimates closer than this count as converged.
pub const EXTRAPOLATION_AGREEMENT: f64 = 1e-4;

/// Zero counts carried by one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub radius: f64,
    /// Zeros on the open upper semicircle, with multiplicity.
    pub interior: u32,
    /// Zeros at `±radius`, with multiplicity.
    pub boundary: u32,
    /// Distinct points among the boundary zeros.
    pub boundary_distinct: u32,
}

/// Zero counts per radius, radii strictly decreasing.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ZeroLedger {
    entries: Vec<LedgerEntry>,
}

impl ZeroLedger {
    pub fn new(entries: Vec<LedgerEntry>) -> Result<Self> {
        for e in &entries {
            if !(e.radius > 0.0 && e.radius <= 1.0) {
                return Err(Error::InvalidInput(format!("ledger radius {} outside (0, 1]", e.radius)));
            }
            if e.boundary_distinct > e.boundary {
                return Err(Error::InvalidInput(format!(
                    "at radius {}: {} distinct boundary zeros exceed multiplicity count {}",
                    e.radius, e.boundary_distinct, e.boundary
                )));
            }
        }
        if entries.windows(2).any(|w| w[1].radius >= w[0].radius) {
            return Err(Error::InvalidInput("ledger radii must be strictly decreasing".into()));
        }
        Ok(ZeroLedger { entries })
    }

    /// Tallies the declared zeros of `f` with modulus in `(0, 1)`. Zeros whose
    /// moduli agree within `1e-12` share a radius.
    pub fn from_declared(f: &FunctionHandle) -> Result<Self> {
        let mut zeros: Vec<_> = f
            .declared_zeros()
            .unwrap_or(&[])
            .iter()
            .filter(|z| z.radius() > 0.0 && z.radius() < 1.0)
            .copied()
            .collect();
        zeros.sort_by(|a, b| b.radius().total_cmp(&a.radius()));
        let mut entries: Vec<LedgerEntry> = Vec::new();
        let mut seen: Vec<Complex64> = Vec::new();
        for z in zeros {
            let r = z.radius();
            let fresh = entries.last().map_or(true, |e| (e.radius - r).abs() > 1e-12);
            if fresh {
                entries.push(LedgerEntry { radius: r, interior: 0, boundary: 0, boundary_distinct: 0 });
                seen.clear();
            }
            let e = entries.last_mut().expect("entry pushed above");
            match z.placement {
                Placement::Interior => e.interior += z.multiplicity,
                Placement::BoundaryDiameter => {
                    e.boundary += z.multiplicity;
                    if !seen.iter().any(|p| (*p - z.location).norm() <= 1e-12) {
                        seen.push(z.location);
                        e.boundary_distinct += 1;
                    }
                }
            }
        }
        ZeroLedger::new(entries)
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.radius).collect()
    }

    pub fn entry_at(&self, radius: f64) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| (e.radius - radius).abs() <= 1e-12 * radius.max(1.0))
    }

    /// The jump `κ + κ̃/2` predicted at `radius`; zero off the ledger.
    pub fn predicted_jump(&self, radius: f64) -> f64 {
        self.entry_at(radius).map_or(0.0, |e| e.interior as f64 + 0.5 * e.boundary as f64)
    }
}

/// Limits of `I` on both sides of a radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpRecord {
    pub radius: f64,
    pub left: f64,
    pub right: f64,
    pub jump: f64,
    pub expected: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexProfile {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub jumps: Vec<JumpRecord>,
    /// Name of the profiled function.
    pub source: String,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty radius grid".into()));
    }
    if let Some(r) = grid.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
        return Err(Error::InvalidInput(format!("radius {r} outside (0, 1]")));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("radii must be strictly decreasing".into()));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")))
    }
}

/// `I(r)`, the index of `f` along the upper semicircle of radius `r`.
pub fn semicircle_index(f: &FunctionHandle, r: f64, tol: f64) -> Result<f64> {
    Ok(index_of_image(f, &PathSpec::semicircle(r)?, tol)?.value)
}

/// Evaluates `I` on `grid`, refusing radii within `delta` of a declared zero.
pub fn profile(f: &FunctionHandle, grid: &[f64], tol: f64, delta: f64) -> Result<IndexProfile> {
    check_grid(grid)?;
    check_tol(tol)?;
    for &r in grid {
        for z in f.declared_zeros().unwrap_or(&[]) {
            if (z.radius() - r).abs() < delta {
                return Err(Error::ZeroOnRadius { radius: r });
            }
        }
    }
    let results = grid
        .par_iter()
        .map(|&r| index_of_image(f, &PathSpec::semicircle(r)?, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(IndexProfile {
        radii: grid.to_vec(),
        values: results.iter().map(|r| r.value).collect(),
        errors: results.iter().map(|r| r.estimated_error.max(tol)).collect(),
        jumps: Vec::new(),
        source: f.name().to_string(),
    })
}

/// Three-level Richardson extrapolation to `h → 0` of values at `4h, 2h, h`
/// (in that order), assuming an expansion in integer powers of `h`.
/// Returns `(second-order estimate, first-order estimates)`.
pub fn richardson(v4: f64, v2: f64, v1: f64) -> (f64, [f64; 2]) {
    let fine = 2.0 * v1 - v2;
    let coarse = 2.0 * v2 - v4;
    ((4.0 * fine - coarse) / 3.0, [coarse, fine])
}

/// Which side of a radius a one-sided limit approaches from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Inner,
    Outer,
}

/// `I(r^∓)` by Richardson extrapolation of `I(r ∓ kδ)`, `k ∈ {4, 2, 1}`.
pub fn one_sided_limit(f: &FunctionHandle, r: f64, side: Side, delta: f64, tol: f64) -> Result<f64> {
    let sign = match side {
        Side::Inner => -1.0,
        Side::Outer => 1.0,
    };
    let radii = [4.0, 2.0, 1.0].map(|k| r + sign * k * delta);
    if radii.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::InvalidInput(format!("delta {delta} too large for radius {r}")));
    }
    let v = radii.par_iter().map(|&s| semicircle_index(f, s, tol)).collect::<Result<Vec<_>>>()?;
    Ok(richardson(v[0], v[1], v[2]).0)
}

fn zeros_confined_to_radius(f: &FunctionHandle, r: f64, reach: f64) -> Result<()> {
    for z in f.declared_zeros().unwrap_or(&[]) {
        let m = z.radius();
        if (m - r).abs() <= reach && (m - r).abs() > 1e-12 * r.max(1.0) {
            return Err(Error::ZeroOffRadius { at: z.location, radius: r });
        }
    }
    Ok(())
}

/// Measures `I(r^+) - I(r^-)` and compares it with the ledger's `κ + κ̃/2`.
pub fn jump_at(f: &FunctionHandle, r: f64, ledger: &ZeroLedger, delta: f64, tol: f64) -> Result<JumpRecord> {
    check_tol(tol)?;
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!("delta must be positive, got {delta}")));
    }
    zeros_confined_to_radius(f, r, 4.0 * delta)?;
    let left = one_sided_limit(f, r, Side::Inner, delta, tol)?;
    let right = one_sided_limit(f, r, Side::Outer, delta, tol)?;
    let expected = ledger.predicted_jump(r);
    let jump = right - left;
    Ok(JumpRecord { radius: r, left, right, jump, expected, residual: jump - expected })
}

impl IndexProfile {
    /// Attaches the measured jumps at every ledger radius.
    pub fn with_jumps(mut self, f: &FunctionHandle, ledger: &ZeroLedger, delta: f64, tol: f64) -> Result<Self> {
        self.jumps = ledger
            .entries()
            .iter()
            .map(|e| jump_at(f, e.radius, ledger, delta, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(self)
    }
}

/// Oscillation of `I` across one zero-free annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusOscillation {
    pub outer: f64,
    pub inner: f64,
    pub oscillation: f64,
    pub pass: bool,
}

/// Samples `I` at `points` radii inside every zero-free annulus cut out by
/// the ledger radii, keeping `margin` away from each, and checks
/// `max I - min I < bound - slack`. The innermost annulus stops at a hundredth
/// of the smallest ledger radius.
pub fn annulus_oscillations(
    f: &FunctionHandle,
    ledger: &ZeroLedger,
    points: usize,
    margin: f64,
    bound: f64,
    slack: f64,
    tol: f64,
) -> Result<Vec<AnnulusOscillation>> {
    if points < 2 {
        return Err(Error::InvalidInput("need at least two radii per annulus".into()));
    }
    let mut edges = vec![1.0];
    edges.extend(ledger.radii());
    let last = *edges.last().expect("edges start with 1");
    edges.push(0.01 * last);
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let (hi, lo) = (w[0] - margin, w[1] + margin);
        if !(lo < hi) {
            continue;
        }
        let grid: Vec<f64> = (0..points).map(|k| hi - (hi - lo) * k as f64 / (points - 1) as f64).collect();
        let p = profile(f, &grid, tol, 0.0)?;
        let max = p.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = p.values.iter().copied().fold(f64::INFINITY, f64::min);
        let oscillation = max - min;
        out.push(AnnulusOscillation { outer: hi, inner: lo, oscillation, pass: oscillation < bound - slack });
    }
    Ok(out)
}

/// Index of `f` along the real segment `[a, b]`.
fn segment_index(f: &FunctionHandle, a: f64, b: f64, tol: f64) -> Result<f64> {
    let path = PathSpec::segment(Complex64::new(a, 0.0), Complex64::new(b, 0.0))?;
    Ok(index_of_image(f, &path, tol)?.value)
}

/// `s(n)`: the `ε → 0` limit of the indices along `[r_{n+1}+ε, r_n-ε]` and
/// `[-r_n+ε, -r_{n+1}-ε]`, extrapolated from `ε ∈ {4δ, 2δ, δ}`.
pub fn segment_sum(f: &FunctionHandle, outer: f64, inner: f64, delta: f64, tol: f64) -> Result<f64> {
    if !(0.0 < inner && inner < outer) || !(8.0 * delta < outer - inner) {
        return Err(Error::InvalidInput(format!("cannot fit segments between {inner} and {outer} with delta {delta}")));
    }
    let eps = [4.0 * delta, 2.0 * delta, delta];
    let v = eps
        .par_iter()
        .map(|&e| {
            Ok(segment_index(f, inner + e, outer - e, tol)? + segment_index(f, -outer + e, -inner - e, tol)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (estimate, [coarse, fine]) = richardson(v[0], v[1], v[2]);
    let (d1, d2) = (v[1] - v[0], v[2] - v[1]);
    let settled = (fine - coarse).abs() < EXTRAPOLATION_AGREEMENT && d2.abs() <= d1.abs() + 4.0 * tol;
    if !settled {
        return Err(Error::ExtrapolationDiverged(v));
    }
    Ok(estimate)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummationReport {
    /// `I(r_1^+)`.
    pub top: f64,
    /// `I(r_{N+1}^+)`.
    pub bottom: f64,
    pub sum_interior: f64,
    pub sum_boundary: f64,
    /// `s(1), …, s(N)`.
    pub segment_sums: Vec<f64>,
    /// `I(r_1^+) - I(r_{N+1}^+) - Σκ - ½Σκ̃ + Σs`.
    pub residual: f64,
}

/// Telescoped jump relation over the first `n` ledger radii; the ledger must
/// list at least `n + 1` radii.
pub fn summation_relation(f: &FunctionHandle, ledger: &ZeroLedger, n: usize, delta: f64, tol: f64) -> Result<SummationReport> {
    check_tol(tol)?;
    let e = ledger.entries();
    if n == 0 || e.len() < n + 1 {
        return Err(Error::InvalidInput(format!("need N >= 1 and N + 1 ledger radii, got N = {n}, {} radii", e.len())));
    }
    let top = one_sided_limit(f, e[0].radius, Side::Outer, delta, tol)?;
    let bottom = one_sided_limit(f, e[n].radius, Side::Outer, delta, tol)?;
    let segment_sums = (0..n)
        .map(|k| segment_sum(f, e[k].radius, e[k + 1].radius, delta, tol))
        .collect::<Result<Vec<_>>>()?;
    let sum_interior: f64 = e[..n].iter().map(|x| x.interior as f64).sum();
    let sum_boundary: f64 = e[..n].iter().map(|x| x.boundary as f64).sum();
    let residual = top - bottom - sum_interior - 0.5 * sum_boundary + segment_sums.iter().sum::<f64>();
    Ok(SummationReport { top, bottom, sum_interior, sum_boundary, segment_sums, residual })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentBound {
    pub holds: bool,
    /// Partial sums `Σ_{n≤k} s(n)`.
    pub partial_sums: Vec<f64>,
    /// Matching right-hand sides.
    pub bounds: Vec<f64>,
}

/// Checks `Σ_{n≤k} s(n) ≤ Σ_{n≤k} κ'(n)` for images in the slit plane, or
/// `≤ ½ Σ κ'(n)` for images in a line complement (`Γ_∞`, cones, half
/// planes), for every `k ≤ n`. The boundary image on `[-r_1, r_1]` must
/// certify into `region` first.
pub fn s_bound_check(
    f: &FunctionHandle,
    ledger: &ZeroLedger,
    n: usize,
    region: &Region,
    delta: f64,
    tol: f64,
) -> Result<SegmentBound> {
    let factor = match region {
        Region::SlitPlane => 1.0,
        Region::ConeInfinity | Region::Cone { .. } | Region::HalfPlane { .. } => 0.5,
        _ => return Err(Error::UnsupportedRegion),
    };
    let e = ledger.entries();
    if n == 0 || e.len() < n + 1 {
        return Err(Error::InvalidInput(format!("need N >= 1 and N + 1 ledger radii, got N = {n}, {} radii", e.len())));
    }
    let r1 = e[0].radius;
    let cert = cone_certify_tol(f, (-r1, r1), region, 2001, 1e-12)?;
    if !cert.ok {
        return Err(Error::InvalidInput(format!(
            "boundary image leaves {region} near {}",
            cert.witness.map_or(String::new(), |w| w.to_string())
        )));
    }
    let s = (0..n)
        .map(|k| segment_sum(f, e[k].radius, e[k + 1].radius, delta, tol))
        .collect::<Result<Vec<_>>>()?;
    let slack = 1e-6_f64.max(100.0 * tol);
    let (mut acc_s, mut acc_b) = (0.0, 0.0);
    let (mut partial_sums, mut bounds) = (Vec::new(), Vec::new());
    let mut holds = true;
    for k in 0..n {
        acc_s += s[k];
        acc_b += factor * e[k].boundary_distinct as f64;
        holds &= acc_s <= acc_b + slack;
        partial_sums.push(acc_s);
        bounds.push(acc_b);
    }
    Ok(SegmentBound { holds, partial_sums, bounds })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialIdentity {
    pub index: f64,
    /// `(1/2π) ∫_0^π r ∂_r ln|f(re^{iθ})| dθ`.
    pub integral: f64,
    pub residual: f64,
}

/// Compares `I(r)` with the angular mean of `r ∂_r ln|f|`, the radial
/// derivative taken by central difference with step `1e-6 r`.
pub fn radial_identity_check(f: &FunctionHandle, r: f64, tol: f64) -> Result<RadialIdentity> {
    check_tol(tol)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    let h = 1e-6 * r;
    for z in f.declared_zeros().unwrap_or(&[]) {
        if (z.radius() - r).abs() <= 2.0 * h {
            return Err(Error::ZeroNearRadius { radius: r });
        }
    }
    let index = semicircle_index(f, r, tol)?;
    let log_modulus = |rho: f64, theta: f64| f.eval(Complex64::from_polar(rho, theta)).norm().ln();
    let cfg = QuadratureConfig { abs_tol: 0.1 * tol * 2.0 * PI, rel_tol: 0.0, ..Default::default() };
    let q = integrate(|theta| r * (log_modulus(r + h, theta) - log_modulus(r - h, theta)) / (2.0 * h), 0.0, PI, cfg)
        .map_err(|e| match e {
            Error::QuadratureFailed(_) => Error::ZeroNearRadius { radius: r },
            other => other,
        })?;
    let integral = q.value / (2.0 * PI);
    Ok(RadialIdentity { index, integral, residual: index - integral })
}

/// `J(r)` with its grid-halving error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogAverage {
    pub radius: f64,
    pub value: f64,
    pub error: f64,
}

/// `J(r) = (1/ln(1/r)) ∫_r^1 I(t)/t dt` by the trapezoid rule in `s = ln t`.
///
/// The profile must start at `t = 1`, contain `r` as a node, and be uniform
/// in `ln t` down to `r` with an even number of steps so the halved grid
/// yields the error estimate `|T_h - T_{2h}|/3`.
pub fn j_profile(profile: &IndexProfile, r: f64) -> Result<LogAverage> {
    let radii = &profile.radii;
    if radii.first().map_or(true, |t| (t - 1.0).abs() > 1e-12) {
        return Err(Error::GridTooCoarse("profile must start at t = 1".into()));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidInput(format!("J needs r in (0, 1), got {r}")));
    }
    let end = radii
        .iter()
        .position(|t| (t - r).abs() <= 1e-12 * r)
        .ok_or_else(|| Error::GridTooCoarse(format!("r = {r} is not a grid node")))?;
    if end < 2 || end % 2 == 1 {
        return Err(Error::GridTooCoarse(format!("{end} steps down to r = {r}; need an even count >= 2")));
    }
    let s: Vec<f64> = radii[..=end].iter().map(|t| t.ln()).collect();
    let h = s[0] - s[1];
    if s.windows(2).any(|w| ((w[0] - w[1]) - h).abs() > 1e-9 * h) {
        return Err(Error::GridTooCoarse("grid is not uniform in ln t".into()));
    }
    let y = &profile.values[..=end];
    let trapezoid = |stride: usize| {
        let idx: Vec<usize> = (0..=end).step_by(stride).collect();
        let inner: f64 = idx[1..idx.len() - 1].iter().map(|&i| y[i]).sum();
        stride as f64 * h * (0.5 * (y[0] + y[end]) + inner)
    };
    let (fine, coarse) = (trapezoid(1), trapezoid(2));
    let scale = (1.0 / r).ln();
    Ok(LogAverage { radius: r, value: fine / scale, error: (fine - coarse).abs() / 3.0 / scale })
}

/// `count + 1` radii `start · (end/start)^{k/count}`.
pub fn geometric_grid(start: f64, end: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && end > 0.0 && start.is_finite() && end.is_finite()) || count == 0 {
        return Err(Error::InvalidInput(format!("bad geometric grid {start}:{end}:{count}")));
    }
    let ratio = (end / start).ln() / count as f64;
    Ok((0..=count).map(|k| start * (ratio * k as f64).exp()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::ZeroRecord;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quadratic() -> FunctionHandle {
        FunctionHandle::new("z^2-1/4", |z| (z - 0.5) * (z + 0.5))
            .with_log_derivative(|z| 1.0 / (z - 0.5) + 1.0 / (z + 0.5))
            .with_declared_zeros(vec![ZeroRecord::at(c(0.5, 0.0), 1).unwrap(), ZeroRecord::at(c(-0.5, 0.0), 1).unwrap()])
            .unwrap()
    }

    #[test]
    fn richardson_removes_linear_and_quadratic_terms() {
        let g = |h: f64| 3.0 + 2.0 * h - 5.0 * h * h;
        let (v, _) = richardson(g(4e-2), g(2e-2), g(1e-2));
        assert!((v - 3.0).abs() < 1e-13);
    }

    #[test]
    fn ledger_from_declared_zeros() {
        let f = quadratic();
        let l = ZeroLedger::from_declared(&f).unwrap();
        assert_eq!(l.entries(), &[LedgerEntry { radius: 0.5, interior: 0, boundary: 2, boundary_distinct: 2 }]);
        assert_eq!(l.predicted_jump(0.5), 1.0);
        assert!(ZeroLedger::new(vec![LedgerEntry { radius: 0.5, interior: 0, boundary: 1, boundary_distinct: 2 }]).is_err());
    }

    #[test]
    fn monomial_profile_is_constant() {
        let p = profile(&FunctionHandle::monomial(1), &[0.9, 0.5, 0.1], 1e-10, DEFAULT_DELTA).unwrap();
        for v in p.values {
            assert!((v - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn profile_refuses_zero_radius() {
        let err = profile(&quadratic(), &[0.9, 0.50005], 1e-10, DEFAULT_DELTA).unwrap_err();
        assert_eq!(err, Error::ZeroOnRadius { radius: 0.50005 });
    }

    #[test]
    fn boundary_pair_jumps_by_one() {
        let f = quadratic();
        let l = ZeroLedger::from_declared(&f).unwrap();
        let j = jump_at(&f, 0.5, &l, DEFAULT_DELTA, 1e-10).unwrap();
        assert!(j.residual.abs() < 1e-9, "{j:?}");
    }

    #[test]
    fn off_radius_zero_is_rejected() {
        let f = quadratic();
        let l = ZeroLedger::default();
        assert!(matches!(jump_at(&f, 0.5002, &l, DEFAULT_DELTA, 1e-10), Err(Error::ZeroOffRadius { .. })));
    }

    #[test]
    fn summation_for_interior_zero() {
        let a = c(0.0, 0.5);
        let f = FunctionHandle::new("z-0.5i", move |z| z - a)
            .with_log_derivative(move |z| 1.0 / (z - a))
            .with_declared_zeros(vec![ZeroRecord::at(a, 1).unwrap()])
            .unwrap();
        let ledger = ZeroLedger::new(vec![
            LedgerEntry { radius: 0.5, interior: 1, boundary: 0, boundary_distinct: 0 },
            LedgerEntry { radius: 0.2, interior: 0, boundary: 0, boundary_distinct: 0 },
        ])
        .unwrap();
        let rep = summation_relation(&f, &ledger, 1, DEFAULT_DELTA, 1e-10).unwrap();
        assert!(rep.residual.abs() < 1e-8, "{rep:?}");
        // Closed form: each segment turns by atan(5/2) - π/4.
        let s = ((2.5f64).atan() - PI / 4.0) / PI;
        assert!((rep.segment_sums[0] - s).abs() < 1e-8);
    }

    #[test]
    fn radial_identity_for_monomial() {
        let r = radial_identity_check(&FunctionHandle::monomial(1), 0.5, 1e-8).unwrap();
        assert!((r.integral - 0.5).abs() < 1e-6 && r.residual.abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn j_of_constant_profile() {
        let grid = geometric_grid(1.0, 1.0 / 16.0, 8).unwrap();
        let p = IndexProfile { values: vec![0.7; grid.len()], errors: vec![0.0; grid.len()], radii: grid.clone(), jumps: vec![], source: "c".into() };
        let j = j_profile(&p, grid[8]).unwrap();
        assert!((j.value - 0.7).abs() < 1e-14 && j.error < 1e-14);
        assert!(matches!(j_profile(&p, grid[3]), Err(Error::GridTooCoarse(_))));
        assert!(matches!(j_profile(&p, 0.3), Err(Error::GridTooCoarse(_))));
    }
}
