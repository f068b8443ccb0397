//! Adaptive Gauss-Legendre quadrature on finite intervals.
//!
//! Used as an independent oracle for the operator and area formulas; never on
//! a production evaluation path.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const NODES: usize = 20;
const MAX_DEPTH: u32 = 60;

pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_rule(NODES))
}

fn panel<T: QuadValue>(f: &impl Fn(f64) -> T, lo: f64, hi: f64) -> T {
    let (x, w) = rule();
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    x.iter().zip(w).fold(T::zero(), |acc, (&xi, &wi)| acc + f(mid + half * xi) * (wi * half))
}

/// Integrates `f` over `[lo, hi]` by recursive bisection until each panel's
/// 20-point estimate agrees with the sum over its halves to within
/// `rel_tol * |total|` (with a tiny absolute floor).
pub fn integrate<T: QuadValue>(f: impl Fn(f64) -> T, lo: f64, hi: f64, rel_tol: f64) -> Result<T> {
    let whole = panel(&f, lo, hi);
    let scale = whole.magnitude().max(1e-300);
    recurse(&f, lo, hi, whole, rel_tol, scale, 0)
}

fn recurse<T: QuadValue>(f: &impl Fn(f64) -> T, lo: f64, hi: f64, whole: T, tol: f64, scale: f64, depth: u32) -> Result<T> {
    let mid = 0.5 * (lo + hi);
    let left = panel(f, lo, mid);
    let right = panel(f, mid, hi);
    let split = left + right;
    if (split - whole).magnitude() <= tol * scale || (hi - lo) < 1e-15 * (1.0 + lo.abs()) {
        return Ok(split);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature { lo, hi });
    }
    Ok(recurse(f, lo, mid, left, tol, scale, depth + 1)? + recurse(f, mid, hi, right, tol, scale, depth + 1)?)
}

/// Integrates over consecutive breakpoints.
pub fn integrate_pieces<T: QuadValue>(f: impl Fn(f64) -> T, breaks: &[f64], rel_tol: f64) -> Result<T> {
    let mut acc = T::zero();
    for w in breaks.windows(2) {
        acc = acc + integrate(&f, w[0], w[1], rel_tol)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre_rule(NODES);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 38 is within 2n - 1
        let s: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(38)).sum();
        assert!((s - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularities() {
        let v = integrate(|t: f64| t.sqrt().recip(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
        let v = integrate(|t: f64| if t > 0.0 { t.ln() } else { 0.0 }, 0.0, 1.0, 1e-13).unwrap();
        assert!((v + 1.0).abs() < 1e-11);
    }

    #[test]
    fn complex_integrand() {
        let v = integrate(|t: f64| Complex64::new(0.0, t).exp(), 0.0, std::f64::consts::PI, 1e-13).unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }
}
