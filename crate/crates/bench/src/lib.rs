//! Fixtures shared by the criterion benches.

use harmonic_atlas::{Complex64, HarmonicMap};

/// `z - conj(z^2)/6` padded to `order`.
pub fn sharp_map(order: usize) -> HarmonicMap {
    HarmonicMap::from_coeffs(
        &[Complex64::new(1.0, 0.0)],
        &[Complex64::new(0.0, 0.0), Complex64::new(-1.0 / 6.0, 0.0)],
        order,
    )
    .expect("valid coefficients")
}

/// Deterministic dense map with geometrically decaying coefficients.
pub fn dense_map(order: usize) -> HarmonicMap {
    let h: Vec<Complex64> = (1..=order)
        .map(|n| if n == 1 { Complex64::new(1.0, 0.0) } else { Complex64::from_polar(0.5f64.powi(n as i32), n as f64) })
        .collect();
    let g: Vec<Complex64> = (1..=order).map(|n| Complex64::from_polar(0.3f64.powi(n as i32), -(n as f64))).collect();
    HarmonicMap::from_coeffs(&h, &g, order).expect("valid coefficients")
}
