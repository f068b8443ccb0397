//! Gamma, Pochhammer and Gauss hypergeometric machinery.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance from a nonpositive integer that counts as hitting a pole.
pub const POLE_GUARD: f64 = 1e-9;

const SERIES_REL_TOL: f64 = 1e-16;
const SERIES_ABS_FLOOR: f64 = 1e-300;
const SERIES_MAX_TERMS: usize = 20_000;

/// Largest `|z|` accepted by [`hyp2f1`].
pub const SERIES_RADIUS: f64 = 0.95;

fn near_nonpositive_integer(x: Complex64) -> bool {
    x.re < 0.5 && x.im.abs() < POLE_GUARD && (x.re - x.re.round()).abs() < POLE_GUARD && x.re.round() <= 0.0
}

fn lanczos_sum(z: Complex64) -> Complex64 {
    // z is already shifted by -1
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    x
}

/// Gamma function (Lanczos, g = 7, nine terms; reflection below `Re x = 1/2`).
pub fn gamma(x: Complex64) -> Result<Complex64> {
    if near_nonpositive_integer(x) {
        return Err(Error::Pole { x });
    }
    if x.re < 0.5 {
        let s = (x * PI).sin();
        return Ok(PI / (s * gamma(1.0 - x)?));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * lanczos_sum(z))
}

pub fn gamma_real(x: f64) -> Result<f64> {
    gamma(Complex64::new(x, 0.0)).map(|g| g.re)
}

/// A branch of `ln Gamma(x)`; only `exp` of sums of these is meaningful.
pub fn ln_gamma(x: Complex64) -> Result<Complex64> {
    if near_nonpositive_integer(x) {
        return Err(Error::Pole { x });
    }
    if x.re < 0.5 {
        return Ok(Complex64::new(PI.ln(), 0.0) - (x * PI).sin().ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// `prod Gamma(num) / prod Gamma(den)`, via logarithms once arguments get large.
pub fn gamma_ratio(num: &[Complex64], den: &[Complex64]) -> Result<Complex64> {
    let large = num.iter().chain(den).any(|x| x.norm() > 100.0);
    if large {
        let mut s = Complex64::new(0.0, 0.0);
        for &x in num {
            s += ln_gamma(x)?;
        }
        for &x in den {
            s -= ln_gamma(x)?;
        }
        Ok(s.exp())
    } else {
        let mut p = Complex64::new(1.0, 0.0);
        for &x in num {
            p *= gamma(x)?;
        }
        for &x in den {
            p /= gamma(x)?;
        }
        Ok(p)
    }
}

/// Rising factorial `(x)_n = x (x + 1) ... (x + n - 1)`.
pub fn pochhammer(x: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (x + k as f64))
}

pub fn pochhammer_real(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (x + k as f64))
}

/// Parameters `(a, b; c)` of `2F1` with real `c > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypergeometricParams {
    a: Complex64,
    b: Complex64,
    c: f64,
    conjugate_pair: bool,
}

impl HypergeometricParams {
    pub fn new(a: Complex64, b: Complex64, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::ParameterDomain(format!("c = {c} must be positive")));
        }
        Ok(Self { a, b, c, conjugate_pair: b == a.conj() && a.im != 0.0 })
    }

    pub fn real(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0), c)
    }

    /// `b = conj(a)`.
    pub fn conjugate(a: Complex64, c: f64) -> Result<Self> {
        let mut p = Self::new(a, a.conj(), c)?;
        p.conjugate_pair = true;
        Ok(p)
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn is_conjugate_pair(&self) -> bool {
        self.conjugate_pair
    }

    /// `c - a - b` (complex in general, real for conjugate pairs).
    pub fn excess(&self) -> Complex64 {
        self.c - self.a - self.b
    }

    /// Series term `(a)_n (b)_n / ((c)_n n!)`.
    pub fn term(&self, n: usize) -> Complex64 {
        let mut t = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let k = k as f64;
            t *= (self.a + k) * (self.b + k) / ((self.c + k) * (k + 1.0));
        }
        t
    }

    /// Terms `0..count` by the ratio recurrence.
    pub fn terms(&self, count: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(count);
        let mut t = Complex64::new(1.0, 0.0);
        for k in 0..count {
            out.push(t);
            let kf = k as f64;
            t *= (self.a + kf) * (self.b + kf) / ((self.c + kf) * (kf + 1.0));
        }
        out
    }

    fn terminating_degree(&self) -> Option<usize> {
        [self.a, self.b]
            .iter()
            .filter(|x| x.im == 0.0 && x.re <= 0.0 && x.re.fract() == 0.0)
            .map(|x| (-x.re) as usize)
            .min()
    }
}

/// `2F1(a, b; c; z)` by direct summation, `|z| <= 0.95`.
pub fn hyp2f1(p: &HypergeometricParams, z: Complex64) -> Result<Complex64> {
    if !(z.norm() <= SERIES_RADIUS) {
        return Err(Error::ParameterDomain(format!("|z| = {} exceeds the series radius {SERIES_RADIUS}", z.norm())));
    }
    if let Some(deg) = p.terminating_degree() {
        let mut sum = Complex64::new(0.0, 0.0);
        for t in p.terms(deg + 1).into_iter().rev() {
            sum = sum * z + t;
        }
        return Ok(sum);
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        let ratio = (p.a + nf) * (p.b + nf) / ((p.c + nf) * (nf + 1.0)) * z;
        term *= ratio;
        sum += term;
        let small = term.norm() < SERIES_REL_TOL * sum.norm() || term.norm() < SERIES_ABS_FLOOR;
        if small && ratio.norm() < 1.0 {
            return Ok(sum);
        }
    }
    Err(Error::ConvergenceBudgetExceeded { terms: SERIES_MAX_TERMS, tail: term.norm() })
}

fn gauss_core(p: &HypergeometricParams, shift: f64) -> Result<Complex64> {
    let c = Complex64::new(p.c, 0.0);
    gamma_ratio(&[c, c - p.a - p.b - shift], &[c - p.a, c - p.b])
}

/// `2F1(a, b; c; 1) = Gamma(c) Gamma(c - a - b) / (Gamma(c - a) Gamma(c - b))`.
pub fn gauss_value(p: &HypergeometricParams) -> Result<Complex64> {
    // the series is the constant 1, whatever c - a - b is
    if p.a == Complex64::new(0.0, 0.0) || p.b == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if !(p.excess().re > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "Gauss summation needs Re(c - a - b) > 0, got {}",
            p.excess().re
        )));
    }
    gauss_core(p, 0.0)
}

/// Closed form of `sum_{n >= 0} (n + 1) (a)_n (b)_n / ((c)_n n!)`.
pub fn linear_weighted_sum(p: &HypergeometricParams) -> Result<Complex64> {
    let s = p.excess();
    if !(s.re > 1.0) {
        return Err(Error::ParameterDomain(format!("needs Re(c - a - b) > 1, got {}", s.re)));
    }
    Ok(gauss_core(p, 1.0)? * (p.a * p.b + s - 1.0))
}

/// Closed form of `sum_{n >= 0} (n + 1)^2 (a)_n (b)_n / ((c)_n n!)`.
pub fn square_weighted_sum(p: &HypergeometricParams) -> Result<Complex64> {
    let s = p.excess();
    if !(s.re > 2.0) {
        return Err(Error::ParameterDomain(format!("needs Re(c - a - b) > 2, got {}", s.re)));
    }
    let bracket = pochhammer(p.a, 2) * pochhammer(p.b, 2) / pochhammer(s - 2.0, 2) + 3.0 * p.a * p.b / (s - 1.0) + 1.0;
    Ok(gauss_core(p, 0.0)? * bracket)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn gamma_examples() {
        assert!(rel(gamma(r(1.0)).unwrap(), r(1.0)) < 1e-14);
        assert!(rel(gamma(r(5.0)).unwrap(), r(24.0)) < 1e-14);
        assert!(rel(gamma(r(0.5)).unwrap(), r(PI.sqrt())) < 1e-14);
        let x = Complex64::new(2.0, 1.0);
        let lhs = gamma(x).unwrap().norm();
        let rhs = (Complex64::new(1.0, 1.0) * gamma(Complex64::new(1.0, 1.0)).unwrap()).norm();
        assert!((lhs - rhs).abs() / rhs < 1e-12);
    }

    #[test]
    fn gamma_poles() {
        for k in 0..5 {
            assert!(matches!(gamma(r(-(k as f64))), Err(Error::Pole { .. })));
        }
        assert!(gamma(r(-2.0 + 1e-12)).is_err());
        assert!(gamma(r(-2.5)).is_ok());
    }

    #[test]
    fn gamma_factorials_to_thirty() {
        let mut fact = 1.0f64;
        for n in 1..=30 {
            let g = gamma_real(n as f64).unwrap();
            assert!((g - fact).abs() / fact < 1e-12, "Gamma({n})");
            fact *= n as f64;
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.3, 1.7, 12.5, 40.0] {
            let direct = gamma(r(x)).unwrap();
            let via_log = ln_gamma(r(x)).unwrap().exp();
            assert!(rel(via_log, direct) < 1e-12);
        }
        let z = Complex64::new(-1.3, 0.7);
        assert!(rel(ln_gamma(z).unwrap().exp(), gamma(z).unwrap()) < 1e-12);
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(Complex64::new(3.3, -1.0), 0), r(1.0));
        assert_eq!(pochhammer(r(-3.0), 2), r(6.0));
        // (-m)_n = (-1)^n m! / (m - n)!
        assert_eq!(pochhammer(r(-5.0), 3), r(-60.0));
    }

    #[test]
    fn hyp2f1_examples() {
        let p = HypergeometricParams::real(0.3, 2.0, 1.5).unwrap();
        assert_eq!(hyp2f1(&p, r(0.0)).unwrap(), r(1.0));
        let p = HypergeometricParams::real(1.0, 1.0, 2.0).unwrap();
        let v = hyp2f1(&p, r(0.5)).unwrap();
        assert!((v.re - 2.0 * 2f64.ln()).abs() < 1e-14);
        // terminating: F(-3, b; c; z) is a cubic
        let p = HypergeometricParams::real(-3.0, 1.5, 2.5).unwrap();
        let z = r(0.4);
        let cubic: Complex64 = (0..4).map(|n| p.term(n) * z.powi(n as i32)).sum();
        assert!((hyp2f1(&p, z).unwrap() - cubic).norm() < 1e-15);
        assert_eq!(p.term(4), r(0.0));
    }

    #[test]
    fn hyp2f1_domain() {
        let p = HypergeometricParams::real(1.0, 1.0, 2.0).unwrap();
        assert!(hyp2f1(&p, r(0.96)).is_err());
        assert!(HypergeometricParams::real(1.0, 1.0, 0.0).is_err());
        assert!(HypergeometricParams::real(1.0, 1.0, -2.0).is_err());
    }

    #[test]
    fn gauss_examples() {
        let p = HypergeometricParams::real(1.0, 1.0, 3.0).unwrap();
        assert!(rel(gauss_value(&p).unwrap(), r(2.0)) < 1e-13);
        let p = HypergeometricParams::real(0.0, 7.3, 2.2).unwrap();
        assert_eq!(gauss_value(&p).unwrap(), r(1.0));
        let p = HypergeometricParams::real(0.5, 0.5, 2.0).unwrap();
        assert!(rel(gauss_value(&p).unwrap(), r(4.0 / PI)) < 1e-13);
        let p = HypergeometricParams::real(1.0, 1.0, 2.0).unwrap();
        assert!(matches!(gauss_value(&p), Err(Error::ParameterDomain(_))));
    }

    #[test]
    fn weighted_sum_examples() {
        let p = HypergeometricParams::real(1.0, 1.0, 5.0).unwrap();
        assert!(rel(linear_weighted_sum(&p).unwrap(), r(2.0)) < 1e-13);
        // Partial fractions: 24 sum (n+1)/((n+2)(n+3)(n+4)) = 24 * (1/4) = 6.
        assert!(rel(square_weighted_sum(&p).unwrap(), r(6.0)) < 1e-13);
        let p = HypergeometricParams::real(0.0, 1.3, 4.0).unwrap();
        assert!(rel(linear_weighted_sum(&p).unwrap(), r(1.0)) < 1e-13);
        assert!(rel(square_weighted_sum(&p).unwrap(), r(1.0)) < 1e-13);
        let p = HypergeometricParams::real(1.0, 1.0, 3.0).unwrap();
        assert!(linear_weighted_sum(&p).is_err());
        assert!(square_weighted_sum(&p).is_err());
    }

    #[test]
    fn conjugate_pair_gauss_is_real() {
        let p = HypergeometricParams::conjugate(Complex64::new(0.4, 0.9), 3.0).unwrap();
        assert!(p.is_conjugate_pair());
        let g = gauss_value(&p).unwrap();
        assert!(g.im.abs() < 1e-14 * g.re.abs());
    }
}
