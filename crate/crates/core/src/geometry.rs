//! Pointwise convexity and starlikeness criteria evaluated on disk grids, plus
//! a purely geometric convexity check on sampled image curves.
//!
//! Grid verdicts are evidence only: a pass is labelled `grid_pass`, while a
//! failure comes with a witness point and disproves membership up to rounding.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{Derivatives, DiskPoint, HarmonicMap};

/// Residuals down to `-SCAN_TOL` count as nonnegative.
pub const SCAN_TOL: f64 = 1e-9;
/// Strict positivity threshold on the `zeta = 0` slice of the starlike scan.
pub const STRICT_TOL: f64 = 1e-12;
const DENOM_TOL: f64 = 1e-14;
const TURN_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub radial_count: usize,
    pub angular_count: usize,
    pub max_radius: f64,
}

impl GridSpec {
    pub fn new(radial_count: usize, angular_count: usize, max_radius: f64) -> Result<Self> {
        if radial_count < 4 || angular_count < 8 {
            return Err(Error::Invalid(format!(
                "grid needs >= 4 radii and >= 8 angles, got {radial_count} x {angular_count}"
            )));
        }
        if !(max_radius > 0.0 && max_radius < 1.0) {
            return Err(Error::Invalid(format!("max_radius = {max_radius} must lie in (0, 1)")));
        }
        Ok(Self { radial_count, angular_count, max_radius })
    }

    /// 24 radii x 48 angles, for single-point scans.
    pub fn single_default() -> Self {
        Self { radial_count: 24, angular_count: 48, max_radius: 0.95 }
    }

    /// 12 radii x 24 angles per variable, for pair scans.
    pub fn pair_default() -> Self {
        Self { radial_count: 12, angular_count: 24, max_radius: 0.95 }
    }

    /// The origin followed by rings uniform in `r^2`; odd rings are offset
    /// by half an angular step.
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(1 + self.radial_count * self.angular_count);
        pts.push(Complex64::new(0.0, 0.0));
        for k in 1..=self.radial_count {
            let r = self.max_radius * (k as f64 / self.radial_count as f64).sqrt();
            let shift = if k % 2 == 1 { 0.5 } else { 0.0 };
            for j in 0..self.angular_count {
                let t = 2.0 * PI * (j as f64 + shift) / self.angular_count as f64;
                pts.push(Complex64::from_polar(r, t));
            }
        }
        pts
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    GridPass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub criterion: &'static str,
    pub min_residual: f64,
    pub argmin: Vec<Complex64>,
    pub verdict: Verdict,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_slice_min: Option<f64>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::GridPass
    }
}

fn require_sense_preserving(f: &HarmonicMap, pts: &[Complex64]) -> Result<()> {
    for &z in pts {
        let j = f.jacobian_raw(z);
        if !(j > 0.0) {
            return Err(Error::NotSensePreserving { witness: z, jacobian: j });
        }
    }
    Ok(())
}

/// Errors with a witness if the Jacobian is not positive at every grid point.
pub fn check_sense_preserving(f: &HarmonicMap, grid: &GridSpec) -> Result<()> {
    require_sense_preserving(f, &grid.points())
}

struct PairMin {
    value: f64,
    i: usize,
    j: usize,
    count: usize,
}

/// Minimum of `residual(i, j)` over all index pairs (skipping `None`),
/// reduced in a fixed order so ties resolve identically on every run.
fn pair_min(n: usize, residual: impl Fn(usize, usize) -> Result<Option<f64>> + Sync) -> Result<PairMin> {
    let rows: Vec<Result<PairMin>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = PairMin { value: f64::INFINITY, i, j: 0, count: 0 };
            for j in 0..n {
                if let Some(v) = residual(i, j)? {
                    best.count += 1;
                    if v < best.value {
                        best.value = v;
                        best.j = j;
                    }
                }
            }
            Ok(best)
        })
        .collect();
    let mut out = PairMin { value: f64::INFINITY, i: 0, j: 0, count: 0 };
    for row in rows {
        let row = row?;
        out.count += row.count;
        if row.value < out.value {
            out = PairMin { count: out.count, ..row };
        }
    }
    Ok(out)
}

/// The uniform-convexity functional `P(z, zeta)`.
pub fn p_functional(f: &HarmonicMap, z: DiskPoint, zeta: DiskPoint) -> Result<Complex64> {
    let (z, zeta) = (z.value(), zeta.value());
    if z == zeta {
        return Err(Error::CoincidentPoints(z));
    }
    p_from_derivs(&f.derivatives_raw(z), z, zeta)
}

fn p_from_derivs(d: &Derivatives, z: Complex64, zeta: Complex64) -> Result<Complex64> {
    let w = z - zeta;
    let den = w * d.h1 - (w * d.g1).conj();
    if den.norm() <= DENOM_TOL {
        return Err(Error::VanishingDenominator { z, zeta });
    }
    let num = w * d.h1 + w * w * d.h2 + (w * d.g1).conj() + (w * w * d.g2).conj();
    Ok(num / den)
}

/// Minimum of `Re P(z, zeta)` over distinct grid pairs.
pub fn uniformly_convex_scan(f: &HarmonicMap, grid: &GridSpec) -> Result<OracleReport> {
    let pts = grid.points();
    require_sense_preserving(f, &pts)?;
    let derivs: Vec<Derivatives> = pts.par_iter().map(|&z| f.derivatives_raw(z)).collect();
    let m = pair_min(pts.len(), |i, j| {
        if i == j {
            return Ok(None);
        }
        Ok(Some(p_from_derivs(&derivs[i], pts[i], pts[j])?.re))
    })?;
    Ok(OracleReport {
        criterion: "uniformly_convex",
        min_residual: m.value,
        argmin: vec![pts[m.i], pts[m.j]],
        verdict: if m.value >= -SCAN_TOL { Verdict::GridPass } else { Verdict::Fail },
        samples: m.count,
        zero_slice_min: None,
    })
}

/// Minimum over distinct grid pairs of
/// `Re{(f(z) - f(zeta)) / ((z - zeta) f_z(z) - conj(z - zeta) f_zbar(z))}`,
/// with strict positivity demanded on the `zeta = 0` slice.
pub fn uniformly_starlike_scan(f: &HarmonicMap, grid: &GridSpec) -> Result<OracleReport> {
    let pts = grid.points();
    require_sense_preserving(f, &pts)?;
    let vals: Vec<Complex64> = pts.par_iter().map(|&z| f.eval_raw(z)).collect();
    let derivs: Vec<Derivatives> = pts.par_iter().map(|&z| f.derivatives_raw(z)).collect();
    let ratio = |i: usize, j: usize| -> Result<f64> {
        let w = pts[i] - pts[j];
        let d = &derivs[i];
        let den = w * d.h1 - (w * d.g1).conj();
        if den.norm() <= DENOM_TOL {
            return Err(Error::VanishingDenominator { z: pts[i], zeta: pts[j] });
        }
        Ok(((vals[i] - vals[j]) / den).re)
    };
    let m = pair_min(pts.len(), |i, j| if i == j { Ok(None) } else { ratio(i, j).map(Some) })?;
    // pts[0] is the origin
    let mut zero_min = f64::INFINITY;
    for i in 1..pts.len() {
        zero_min = zero_min.min(ratio(i, 0)?);
    }
    let pass = m.value >= -SCAN_TOL && zero_min > STRICT_TOL;
    Ok(OracleReport {
        criterion: "uniformly_starlike",
        min_residual: m.value,
        argmin: vec![pts[m.i], pts[m.j]],
        verdict: if pass { Verdict::GridPass } else { Verdict::Fail },
        samples: m.count,
        zero_slice_min: Some(zero_min),
    })
}

fn fully_convex_from_derivs(d: &Derivatives, z: Complex64) -> f64 {
    let r2 = z.norm_sqr();
    let th = (r2 * d.h1.conj() * (d.h1 + z * d.h2)).re;
    let tg = (r2 * d.g1.conj() * (d.g1 + z * d.g2)).re;
    let cross = (z * z * z * (d.h2 * d.g1 - d.h1 * d.g2)).re;
    th - tg - cross
}

/// Full-convexity residual
/// `|zh'|^2 Re{1 + zh''/h'} - |zg'|^2 Re{1 + zg''/g'} - Re{z^3 (h''g' - h'g'')}`,
/// evaluated without dividing by `h'` or `g'`.
pub fn fully_convex_residual(f: &HarmonicMap, z: DiskPoint) -> Result<f64> {
    let z = z.value();
    require_sense_preserving(f, &[z])?;
    Ok(fully_convex_from_derivs(&f.derivatives_raw(z), z))
}

/// Scan over the grid without the origin, where the residual vanishes identically.
pub fn fully_convex_scan(f: &HarmonicMap, grid: &GridSpec) -> Result<OracleReport> {
    let mut pts = grid.points();
    require_sense_preserving(f, &pts)?;
    pts.remove(0);
    let res: Vec<f64> = pts.par_iter().map(|&z| fully_convex_from_derivs(&f.derivatives_raw(z), z)).collect();
    let (idx, min) = res
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
    Ok(OracleReport {
        criterion: "fully_convex",
        min_residual: min,
        argmin: vec![pts[idx]],
        verdict: if min >= -SCAN_TOL { Verdict::GridPass } else { Verdict::Fail },
        samples: pts.len(),
        zero_slice_min: None,
    })
}

fn absolutely_convex_from_derivs(d: &Derivatives, zeta: Complex64, b: Complex64) -> f64 {
    let x = (zeta - b) * (1.0 - zeta * b.conj());
    let base = 1.0 + b.norm_sqr() - (2.0 * b.conj() * zeta).re;
    let lhs = d.h1.norm_sqr() * base + (x * d.h2 * d.h1.conj()).re;
    let rhs = d.g1.norm_sqr() * base + (x * d.g2 * d.g1.conj()).re;
    let x2 = x.norm_sqr();
    let cross = if x2 == 0.0 { 0.0 } else { (x * x * x * (d.h2 * d.g1 - d.h1 * d.g2)).re / x2 };
    lhs - rhs - cross
}

/// Absolute-convexity residual at `(zeta, b)`; nonnegative for every pair in
/// the disk exactly when the map is absolutely convex. The cross term is
/// taken as zero at `zeta = b`.
pub fn absolutely_convex_residual(f: &HarmonicMap, zeta: DiskPoint, b: DiskPoint) -> Result<f64> {
    let zeta = zeta.value();
    require_sense_preserving(f, &[zeta])?;
    Ok(absolutely_convex_from_derivs(&f.derivatives_raw(zeta), zeta, b.value()))
}

/// Minimum absolute-convexity residual over all grid pairs `(zeta, b)`.
pub fn absolutely_convex_scan(f: &HarmonicMap, grid: &GridSpec) -> Result<OracleReport> {
    let pts = grid.points();
    require_sense_preserving(f, &pts)?;
    let derivs: Vec<Derivatives> = pts.par_iter().map(|&z| f.derivatives_raw(z)).collect();
    let m = pair_min(pts.len(), |i, j| Ok(Some(absolutely_convex_from_derivs(&derivs[i], pts[i], pts[j]))))?;
    Ok(OracleReport {
        criterion: "absolutely_convex",
        min_residual: m.value,
        argmin: vec![pts[m.i], pts[m.j]],
        verdict: if m.value >= -SCAN_TOL { Verdict::GridPass } else { Verdict::Fail },
        samples: m.count,
        zero_slice_min: None,
    })
}

/// Discrete convexity of a closed polyline.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolylineConvexity {
    pub convex: bool,
    /// Smallest signed `sin` of the turning angle, oriented by the total turn.
    pub min_turn: f64,
    pub total_turning: f64,
}

/// A closed polyline is convex when every edge pair turns the same way and
/// the turning angles add up to one full revolution.
pub fn polyline_convexity(pts: &[Complex64]) -> Result<PolylineConvexity> {
    let n = pts.len();
    if n < 3 {
        return Err(Error::Invalid("polyline needs at least three vertices".into()));
    }
    let edges: Vec<Complex64> = (0..n).map(|k| pts[(k + 1) % n] - pts[k]).collect();
    let scale = edges.iter().map(|e| e.norm()).fold(0.0, f64::max);
    for (k, e) in edges.iter().enumerate() {
        if !(e.norm() > 1e-14 * scale) {
            return Err(Error::DegeneratePolyline(pts[k]));
        }
    }
    let mut total = 0.0;
    let mut sines = Vec::with_capacity(n);
    for k in 0..n {
        let (e0, e1) = (edges[k], edges[(k + 1) % n]);
        let cross = e0.re * e1.im - e0.im * e1.re;
        let dot = e0.re * e1.re + e0.im * e1.im;
        total += cross.atan2(dot);
        sines.push(cross / (e0.norm() * e1.norm()));
    }
    let orient = if total >= 0.0 { 1.0 } else { -1.0 };
    let min_turn = sines.iter().map(|s| s * orient).fold(f64::INFINITY, f64::min);
    let convex = min_turn >= -TURN_TOL && (total.abs() - 2.0 * PI).abs() < 1e-6;
    Ok(PolylineConvexity { convex, min_turn, total_turning: total })
}

fn circle_points(center: Complex64, radius: f64, samples: usize, phase: f64) -> Vec<Complex64> {
    (0..samples)
        .map(|k| center + Complex64::from_polar(radius, phase + 2.0 * PI * k as f64 / samples as f64))
        .collect()
}

pub(crate) fn circle_convexity_with_phase(
    f: &HarmonicMap,
    center: DiskPoint,
    radius: f64,
    samples: usize,
    phase: f64,
) -> Result<PolylineConvexity> {
    let c = center.value();
    if samples < 64 {
        return Err(Error::Invalid(format!("need at least 64 samples, got {samples}")));
    }
    if !(radius > 0.0 && c.norm() + radius <= 1.0 - 1e-9) {
        return Err(Error::Invalid(format!("circle |z - {c}| = {radius} is not inside the disk")));
    }
    let zs = circle_points(c, radius, samples, phase);
    let img: Vec<Complex64> = zs.iter().map(|&z| f.eval_raw(z)).collect();
    let mut out = polyline_convexity(&img)?;
    // a sense-preserving map keeps the counter-clockwise orientation
    out.convex &= out.total_turning > 0.0;
    Ok(out)
}

/// Samples `f` on `|z - center| = radius` and tests the image polyline for
/// convexity. The image must also turn counter-clockwise, as it does under a
/// sense-preserving map; no Jacobian check is made.
pub fn image_circle_convexity(f: &HarmonicMap, center: DiskPoint, radius: f64, samples: usize) -> Result<bool> {
    circle_convexity_with_phase(f, center, radius, samples, 0.0).map(|c| c.convex)
}

pub fn image_circle_report(f: &HarmonicMap, center: DiskPoint, radius: f64, samples: usize) -> Result<PolylineConvexity> {
    circle_convexity_with_phase(f, center, radius, samples, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: Complex64 = Complex64::new(1.0, 0.0);
    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(c(re, im)).unwrap()
    }

    fn sharp() -> HarmonicMap {
        HarmonicMap::from_coeffs(&[ONE], &[ZERO, c(-1.0 / 6.0, 0.0)], 8).unwrap()
    }

    fn half_plane() -> HarmonicMap {
        HarmonicMap::from_coeffs(&vec![ONE; 200], &[], 200).unwrap()
    }

    fn small_grid() -> GridSpec {
        GridSpec::new(6, 12, 0.9).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(3, 12, 0.5).is_err());
        assert!(GridSpec::new(4, 7, 0.5).is_err());
        assert!(GridSpec::new(4, 8, 1.0).is_err());
        assert_eq!(GridSpec::new(4, 8, 0.5).unwrap().points().len(), 33);
    }

    #[test]
    fn p_functional_examples() {
        let id = HarmonicMap::identity(4);
        let v = p_functional(&id, p(0.3, 0.2), p(-0.5, 0.1)).unwrap();
        assert!((v - ONE).norm() < 1e-15);
        assert!(matches!(p_functional(&id, p(0.1, 0.0), p(0.1, 0.0)), Err(Error::CoincidentPoints(_))));

        // z = 1/2, zeta = 0 on z - conj(z^2/6): g' = -z/3, g'' = -1/3.
        // num = 1/2 + 0 - 1/12 - 1/12 = 1/3, den = 1/2 + 1/12 = 7/12.
        let v = p_functional(&sharp(), p(0.5, 0.0), DiskPoint::origin()).unwrap();
        assert!((v - c(4.0 / 7.0, 0.0)).norm() < 1e-15);

        let h = HarmonicMap::from_coeffs(&[ONE, c(0.2, 0.1), c(-0.05, 0.0)], &[], 4).unwrap();
        let (z, zeta) = (c(0.3, -0.4), c(-0.2, 0.6));
        let d = h.derivatives_raw(z);
        let want = 1.0 + (z - zeta) * d.h2 / d.h1;
        let got = p_functional(&h, DiskPoint::new(z).unwrap(), DiskPoint::new(zeta).unwrap()).unwrap();
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn scans_on_identity() {
        let id = HarmonicMap::identity(4);
        let r = uniformly_convex_scan(&id, &small_grid()).unwrap();
        assert!(r.passed() && (r.min_residual - 1.0).abs() < 1e-14);
        let r = uniformly_starlike_scan(&id, &small_grid()).unwrap();
        assert!(r.passed() && (r.min_residual - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scans_reject_sense_reversing() {
        let f = HarmonicMap::from_coeffs(&[ONE], &[c(2.0, 0.0)], 2).unwrap();
        assert!(matches!(uniformly_convex_scan(&f, &small_grid()), Err(Error::NotSensePreserving { .. })));
        assert!(matches!(uniformly_starlike_scan(&f, &small_grid()), Err(Error::NotSensePreserving { .. })));
        assert!(fully_convex_residual(&f, p(0.1, 0.0)).is_err());
    }

    #[test]
    fn sharp_map_is_uniformly_convex_on_grid() {
        let r = uniformly_convex_scan(&sharp(), &GridSpec::pair_default()).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn fully_convex_examples() {
        let id = HarmonicMap::identity(3);
        assert!((fully_convex_residual(&id, p(0.5, 0.0)).unwrap() - 0.25).abs() < 1e-15);
        assert!(fully_convex_scan(&half_plane(), &GridSpec::new(12, 24, 0.9).unwrap()).unwrap().passed());
        assert!(fully_convex_scan(&sharp(), &GridSpec::single_default()).unwrap().passed());
    }

    #[test]
    fn absolutely_convex_identity_closed_form() {
        let id = HarmonicMap::identity(3);
        for (zeta, b) in [(c(0.3, 0.1), c(-0.4, 0.2)), (c(0.0, 0.7), c(0.5, 0.5)), (c(0.2, 0.2), c(0.2, 0.2))] {
            let want = 1.0 + b.norm_sqr() - 2.0 * (b.conj() * zeta).re;
            let got = absolutely_convex_residual(&id, DiskPoint::new(zeta).unwrap(), DiskPoint::new(b).unwrap()).unwrap();
            assert!((got - want).abs() < 1e-15);
            assert!(got > 0.0);
        }
    }

    #[test]
    fn absolutely_convex_at_b_zero_matches_full_convexity() {
        let f = HarmonicMap::from_coeffs(&[ONE, c(0.1, 0.05)], &[c(0.1, 0.0), c(0.05, -0.02), c(0.01, 0.0)], 6).unwrap();
        for z in [c(0.3, 0.4), c(-0.6, 0.1), c(0.05, -0.8)] {
            let zp = DiskPoint::new(z).unwrap();
            let ak = absolutely_convex_residual(&f, zp, DiskPoint::origin()).unwrap();
            let fk = fully_convex_residual(&f, zp).unwrap();
            assert!((ak * z.norm_sqr() - fk).abs() < 1e-10);
        }
    }

    #[test]
    fn absolutely_convex_for_analytic_convex_map() {
        let grid = GridSpec::new(4, 16, 0.9).unwrap();
        let r = absolutely_convex_scan(&half_plane(), &grid).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn circle_images() {
        let id = HarmonicMap::identity(3);
        assert!(image_circle_convexity(&id, p(0.2, -0.3), 0.5, 64).unwrap());
        assert!(image_circle_convexity(&half_plane(), p(0.1, 0.3), 0.5, 256).unwrap());
        let wild = HarmonicMap::from_coeffs(&[ONE], &[ZERO, c(0.9, 0.0)], 2).unwrap();
        assert!(!image_circle_convexity(&wild, p(0.5, 0.0), 0.4, 256).unwrap());
        let reversed = HarmonicMap::from_coeffs(&[c(0.1, 0.0)], &[ONE], 1).unwrap();
        assert!(!image_circle_convexity(&reversed, p(0.0, 0.0), 0.5, 64).unwrap());
        assert!(image_circle_convexity(&id, p(0.5, 0.0), 0.6, 64).is_err());
        assert!(image_circle_convexity(&id, p(0.0, 0.0), 0.5, 32).is_err());
    }

    #[test]
    fn polyline_invariances() {
        let f = HarmonicMap::from_coeffs(&[ONE, c(0.1, 0.0)], &[ZERO, c(0.05, 0.02)], 4).unwrap();
        let base = circle_convexity_with_phase(&f, p(0.1, 0.2), 0.6, 128, 0.0).unwrap();
        assert!(base.convex);
        for phase in [0.3, 1.7, 4.0] {
            assert!(circle_convexity_with_phase(&f, p(0.1, 0.2), 0.6, 128, phase).unwrap().convex);
        }
        let img = f.image_of_circle(c(0.1, 0.2), 0.6, 128);
        let shifted: Vec<_> = img.iter().map(|&w| w + c(3.0, -7.0)).collect();
        assert!(polyline_convexity(&shifted).unwrap().convex);
        let square = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        assert!(polyline_convexity(&square).unwrap().convex);
        let dart = [c(0.0, 0.0), c(2.0, 1.0), c(0.0, 2.0), c(0.5, 1.0)];
        assert!(!polyline_convexity(&dart).unwrap().convex);
        let dup = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 1.0)];
        assert!(matches!(polyline_convexity(&dup), Err(Error::DegeneratePolyline(_))));
    }
}
