//! Cross-validation battery: every closed form checked against an
//! independent numerical route (quadrature, partial sums, grid scans).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{area_bounds, jacobian_bounds};
use crate::class_tests::uk_sufficient;
use crate::error::Result;
use crate::geometry::{
    absolutely_convex_scan, fully_convex_scan, image_circle_convexity, uniformly_convex_scan, GridSpec,
};
use crate::operators::{apply_hab, hab_integral_oracle, BKind, OperatorParams};
use crate::quadrature::integrate;
use crate::series::{DiskPoint, HarmonicMap};
use crate::special::{gauss_value, linear_weighted_sum, square_weighted_sum, HypergeometricParams};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
const PARTIAL_TERMS: usize = 2000;

type ClosedForm = fn(&HypergeometricParams) -> Result<Complex64>;

/// Closed forms under test; swapped out to confirm the battery notices a
/// perturbed formula.
#[derive(Clone, Copy)]
pub struct ClosedForms {
    pub gauss: ClosedForm,
    pub linear: ClosedForm,
    pub square: ClosedForm,
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self { gauss: gauss_value, linear: linear_weighted_sum, square: square_weighted_sum }
    }
}

#[derive(Clone, Copy)]
pub struct BatteryConfig {
    pub seed: u64,
    pub operator_maps: usize,
    pub points_per_map: usize,
    pub hierarchy_maps: usize,
    pub circles_per_map: usize,
    pub closed_forms: ClosedForms,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            operator_maps: 50,
            points_per_map: 20,
            hierarchy_maps: 20,
            circles_per_map: 10,
            closed_forms: ClosedForms::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn deviation(name: &'static str, worst: f64, tolerance: f64, detail: String) -> Self {
        Self { name, passed: worst < tolerance, worst, tolerance, detail }
    }
}

fn random_complex(rng: &mut impl Rng, max_mod: f64) -> Complex64 {
    Complex64::from_polar(max_mod * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn random_disk_point(rng: &mut impl Rng, max_mod: f64) -> DiskPoint {
    DiskPoint::new(random_complex(rng, max_mod)).expect("inside the disk")
}

/// Random normalized polynomial map of degree `2..=max_degree`.
pub fn random_polynomial(rng: &mut impl Rng, max_degree: usize) -> HarmonicMap {
    let deg = rng.gen_range(2..=max_degree);
    let mut h = vec![Complex64::new(1.0, 0.0)];
    let mut g = vec![random_complex(rng, 0.5)];
    for n in 2..=deg {
        let scale = 1.0 / (n * n) as f64;
        h.push(random_complex(rng, scale));
        g.push(random_complex(rng, scale));
    }
    HarmonicMap::from_coeffs(&h, &g, deg).expect("finite coefficients")
}

/// Random polynomial map strictly inside the uniform-convexity coefficient
/// region: weighted sum at most `0.98 (1 - |b1|)`.
pub fn random_uk_map(rng: &mut impl Rng, max_degree: usize) -> HarmonicMap {
    let deg = rng.gen_range(2..=max_degree);
    let b1 = random_complex(rng, 0.6);
    let raw: Vec<(Complex64, Complex64)> = (2..=deg).map(|_| (random_complex(rng, 1.0), random_complex(rng, 1.0))).collect();
    let weighted: f64 = raw
        .iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let n = (i + 2) as f64;
            n * (2.0 * n - 1.0) * (a.norm() + b.norm())
        })
        .sum();
    let budget = (1.0 - b1.norm()) * rng.gen_range(0.05..0.98);
    let s = budget / weighted;
    let mut h = vec![Complex64::new(1.0, 0.0)];
    let mut g = vec![b1];
    for (a, b) in raw {
        h.push(a * s);
        g.push(b * s);
    }
    HarmonicMap::from_coeffs(&h, &g, deg).expect("finite coefficients")
}

/// Random operator parameters with `a` in `(-0.9, 3]`, cycling through the three kinds.
pub fn random_params(rng: &mut impl Rng, k: usize) -> OperatorParams {
    let a: f64 = rng.gen_range(-0.9..=3.0);
    let kind = match k % 3 {
        0 => {
            let mut b: f64 = rng.gen_range(-0.9..=3.0);
            if (b - a).abs() < 1e-3 {
                b += 0.5;
            }
            BKind::Finite(b)
        }
        1 => BKind::Infinity,
        _ => BKind::EqualToA,
    };
    OperatorParams::new(a, kind).expect("valid parameters")
}

pub fn operator_check(cfg: &BatteryConfig) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for k in 0..cfg.operator_maps {
        let f = random_polynomial(&mut rng, 10);
        let p = random_params(&mut rng, k);
        let img = apply_hab(&p, &f);
        for _ in 0..cfg.points_per_map {
            let z = random_disk_point(&mut rng, 0.95);
            let dev = match hab_integral_oracle(&p, &f, z) {
                Ok(v) => (v - img.eval(z)).norm(),
                Err(e) => {
                    detail = format!("quadrature failed: {e}");
                    f64::INFINITY
                }
            };
            if dev > worst {
                worst = dev;
                if dev.is_finite() {
                    detail = format!("{p:?} at z = {}", z.value());
                }
            }
        }
    }
    CheckOutcome::deviation("operator_vs_quadrature", worst, 1e-8, detail)
}

fn partial(p: &HypergeometricParams, weight: impl Fn(f64) -> f64) -> Complex64 {
    p.terms(PARTIAL_TERMS).iter().enumerate().map(|(n, &t)| t * weight(n as f64)).sum()
}

/// Parameter grid with `c - a - b >= 6`, where 2000-term partial sums of all
/// three series are accurate well below `1e-8`.
pub fn identity_grid() -> Vec<HypergeometricParams> {
    let vals = [0.2, 0.5, 0.9, 1.3, 1.7];
    let offsets = [6.0, 6.5, 7.0, 8.0, 10.0];
    let mut out = Vec::with_capacity(125);
    for &a in &vals {
        for &b in &vals {
            for &o in &offsets {
                out.push(HypergeometricParams::real(a, b, a + b + o).expect("c > 0"));
            }
        }
    }
    out
}

pub fn series_identity_checks(forms: &ClosedForms) -> Vec<CheckOutcome> {
    let grid = identity_grid();
    let cases: [(&'static str, ClosedForm, fn(f64) -> f64); 3] = [
        ("gauss_sum", forms.gauss, |_| 1.0),
        ("linear_weighted_sum", forms.linear, |n| n + 1.0),
        ("square_weighted_sum", forms.square, |n| (n + 1.0) * (n + 1.0)),
    ];
    cases
        .iter()
        .map(|&(name, form, weight)| {
            let mut worst = 0.0f64;
            let mut detail = String::new();
            for p in &grid {
                let dev = match form(p) {
                    Ok(v) => (v - partial(p, weight)).norm(),
                    Err(_) => f64::INFINITY,
                };
                if dev > worst {
                    worst = dev;
                    detail = format!("(a, b, c) = ({}, {}, {})", p.a().re, p.b().re, p.c());
                }
            }
            CheckOutcome::deviation(name, worst, 1e-8, detail)
        })
        .collect()
}

/// Area bounds against quadrature of `2 pi rho J(rho)`, relative tolerance `1e-8`.
pub fn area_check() -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for &r in &[0.25, 0.5, 0.9] {
        for &b1 in &[0.0, 0.5] {
            let (lo, hi) = area_bounds(r, b1).expect("valid radius");
            let quad = |upper: bool| {
                integrate(
                    |t: f64| {
                        let (jl, ju) = jacobian_bounds(t, b1).expect("valid radius");
                        std::f64::consts::TAU * t * if upper { ju } else { jl }
                    },
                    0.0,
                    r,
                    1e-12,
                )
            };
            for (closed, q) in [(lo, quad(false)), (hi, quad(true))] {
                let dev = q.map(|q| (closed - q).abs() / q.abs().max(1.0)).unwrap_or(f64::INFINITY);
                if dev > worst {
                    worst = dev;
                    detail = format!("r = {r}, |b1| = {b1}");
                }
            }
        }
    }
    CheckOutcome::deviation("area_vs_quadrature", worst, 1e-8, detail)
}

/// Random admissible circle `|z - center| = radius`.
pub fn random_circle(rng: &mut impl Rng) -> (DiskPoint, f64) {
    let center = random_disk_point(rng, 0.9);
    let room = 1.0 - center.value().norm() - 1e-6;
    (center, rng.gen_range(0.05..1.0) * room)
}

/// Maps passing the uniform-convexity coefficient test must pass every
/// weaker geometric criterion.
pub fn hierarchy_check(cfg: &BatteryConfig) -> CheckOutcome {
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0a11);
    let pair = GridSpec::pair_default();
    let single = GridSpec::single_default();
    let mut violations = 0usize;
    let mut worst = 0.0f64;
    let mut detail = String::from("no violations");
    for k in 0..cfg.hierarchy_maps {
        let f = random_uk_map(&mut rng, 6);
        let mut note = |what: &str, v: f64| {
            if v < -TOL {
                violations += 1;
                detail = format!("map {k}: {what} residual {v:e}");
            }
            worst = worst.max(-v);
        };
        match uk_sufficient(&f) {
            Ok(v) if v.passed => {}
            _ => note("coefficient test", -1.0),
        }
        for (what, report) in [
            ("uniformly convex", uniformly_convex_scan(&f, &pair)),
            ("absolutely convex", absolutely_convex_scan(&f, &pair)),
            ("fully convex", fully_convex_scan(&f, &single)),
        ] {
            note(what, report.map(|r| r.min_residual).unwrap_or(-1.0));
        }
        for _ in 0..cfg.circles_per_map {
            let (c, r) = random_circle(&mut rng);
            let ok = image_circle_convexity(&f, c, r, 256).unwrap_or(false);
            note("circle image", if ok { 0.0 } else { -1.0 });
        }
    }
    CheckOutcome { name: "hierarchy", passed: violations == 0, worst: worst.max(0.0), tolerance: TOL, detail }
}

pub fn run_battery(cfg: &BatteryConfig) -> Vec<CheckOutcome> {
    let mut out = vec![operator_check(cfg)];
    out.extend(series_identity_checks(&cfg.closed_forms));
    out.push(area_check());
    out.push(hierarchy_check(cfg));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> BatteryConfig {
        BatteryConfig { operator_maps: 6, points_per_map: 4, hierarchy_maps: 2, circles_per_map: 3, ..Default::default() }
    }

    #[test]
    fn random_uk_maps_pass_coefficient_test() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let v = uk_sufficient(&random_uk_map(&mut rng, 8)).unwrap();
            assert!(v.passed && v.margin > 0.0);
        }
    }

    #[test]
    fn quick_battery_passes() {
        for c in run_battery(&quick()) {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn perturbed_formula_is_caught() {
        fn bent(p: &HypergeometricParams) -> Result<Complex64> {
            linear_weighted_sum(p).map(|v| v * (1.0 + 1e-3))
        }
        let forms = ClosedForms { linear: bent, ..Default::default() };
        let checks = series_identity_checks(&forms);
        let by_name = |n: &str| checks.iter().find(|c| c.name == n).unwrap().passed;
        assert!(!by_name("linear_weighted_sum"));
        assert!(by_name("gauss_sum") && by_name("square_weighted_sum"));
    }

    #[test]
    fn battery_is_deterministic() {
        assert_eq!(operator_check(&quick()), operator_check(&quick()));
    }
}
