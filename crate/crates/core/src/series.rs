//! Truncated power-series representation of harmonic maps `f = h + conj(g)`.
//!
//! Both parts are stored densely from the linear term: `coeffs[0]` is the
//! coefficient of `z`, `coeffs[n - 1]` the coefficient of `z^n`. Constant
//! terms never appear in a stored map; they only exist transiently inside
//! [`HarmonicMap::koebe_transform`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation order for maps built by this crate.
pub const DEFAULT_ORDER: usize = 256;

/// `|h'|` below this is treated as a vanishing derivative.
pub const DEGENERATE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A point of the open unit disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() && z.norm() < 1.0 {
            Ok(Self(z))
        } else {
            Err(Error::OutsideDisk { z })
        }
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(r, theta))
    }

    pub fn origin() -> Self {
        Self(ZERO)
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

/// Coefficients `c_1, ..., c_N` of an analytic function vanishing at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexCoeffSeq {
    coeffs: Vec<Complex64>,
}

impl ComplexCoeffSeq {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("coefficient sequence must be non-empty".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Invalid(format!("non-finite coefficient {c}")));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(order: usize) -> Self {
        Self { coeffs: vec![ZERO; order.max(1)] }
    }

    /// Highest retained power `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero beyond the truncation order and for `n = 0`.
    pub fn coeff(&self, n: usize) -> Complex64 {
        if n == 0 {
            ZERO
        } else {
            self.coeffs.get(n - 1).copied().unwrap_or(ZERO)
        }
    }

    fn resized(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.max(1), ZERO);
        Self { coeffs }
    }

    fn map_indexed(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().enumerate().map(|(i, &c)| f(i + 1, c)).collect(),
        }
    }

    pub(crate) fn eval(&self, z: Complex64) -> Complex64 {
        let mut s = ZERO;
        for &c in self.coeffs.iter().rev() {
            s = s * z + c;
        }
        s * z
    }

    pub(crate) fn deriv1(&self, z: Complex64) -> Complex64 {
        let mut s = ZERO;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            s = s * z + c * (i + 1) as f64;
        }
        s
    }

    pub(crate) fn deriv2(&self, z: Complex64) -> Complex64 {
        let mut s = ZERO;
        for (i, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            let n = (i + 1) as f64;
            s = s * z + c * (n * (n - 1.0));
        }
        s
    }
}

/// `h', h'', g', g''` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derivatives {
    pub h1: Complex64,
    pub h2: Complex64,
    pub g1: Complex64,
    pub g2: Complex64,
}

/// A harmonic map `f = h + conj(g)` with `h(0) = g(0) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapJson", into = "MapJson")]
pub struct HarmonicMap {
    h: ComplexCoeffSeq,
    g: ComplexCoeffSeq,
}

impl HarmonicMap {
    pub fn new(h: ComplexCoeffSeq, g: ComplexCoeffSeq) -> Result<Self> {
        if h.order() != g.order() {
            return Err(Error::Invalid(format!(
                "h and g truncation orders differ ({} vs {})",
                h.order(),
                g.order()
            )));
        }
        Ok(Self { h, g })
    }

    /// Builds a map from leading coefficient lists, zero-padded to `order`.
    pub fn from_coeffs(h: &[Complex64], g: &[Complex64], order: usize) -> Result<Self> {
        let order = order.max(h.len()).max(g.len()).max(1);
        let pad = |s: &[Complex64]| {
            let mut v = s.to_vec();
            v.resize(order, ZERO);
            ComplexCoeffSeq::new(v)
        };
        Self::new(pad(h)?, pad(g)?)
    }

    pub fn identity(order: usize) -> Self {
        let mut h = ComplexCoeffSeq::zeros(order);
        h.coeffs[0] = ONE;
        Self { h, g: ComplexCoeffSeq::zeros(order) }
    }

    pub fn h(&self) -> &ComplexCoeffSeq {
        &self.h
    }

    pub fn g(&self) -> &ComplexCoeffSeq {
        &self.g
    }

    pub fn order(&self) -> usize {
        self.h.order()
    }

    /// `a_n`, the coefficient of `z^n` in `h`.
    pub fn a(&self, n: usize) -> Complex64 {
        self.h.coeff(n)
    }

    /// `b_n`, the coefficient of `z^n` in `g`.
    pub fn b(&self, n: usize) -> Complex64 {
        self.g.coeff(n)
    }

    pub fn b1(&self) -> Complex64 {
        self.g.coeff(1)
    }

    pub fn is_normalized(&self) -> bool {
        (self.a(1) - ONE).norm() <= 1e-12
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized { a1: self.a(1) })
        }
    }

    /// Same map, zero-padded or truncated to a new order.
    pub fn with_order(&self, order: usize) -> Self {
        Self { h: self.h.resized(order), g: self.g.resized(order) }
    }

    /// Multiplies `a_n` and `b_n` by `factor(n)` for every retained `n`.
    pub fn scale_coeffs(&self, factor: impl Fn(usize) -> f64) -> Self {
        Self {
            h: self.h.map_indexed(|n, c| c * factor(n)),
            g: self.g.map_indexed(|n, c| c * factor(n)),
        }
    }

    pub fn eval(&self, z: DiskPoint) -> Complex64 {
        self.eval_raw(z.0)
    }

    pub(crate) fn eval_raw(&self, z: Complex64) -> Complex64 {
        self.h.eval(z) + self.g.eval(z).conj()
    }

    pub fn derivatives(&self, z: DiskPoint) -> Derivatives {
        self.derivatives_raw(z.0)
    }

    pub(crate) fn derivatives_raw(&self, z: Complex64) -> Derivatives {
        Derivatives {
            h1: self.h.deriv1(z),
            h2: self.h.deriv2(z),
            g1: self.g.deriv1(z),
            g2: self.g.deriv2(z),
        }
    }

    /// `|h'(z)|^2 - |g'(z)|^2`.
    pub fn jacobian(&self, z: DiskPoint) -> f64 {
        self.jacobian_raw(z.0)
    }

    pub(crate) fn jacobian_raw(&self, z: Complex64) -> f64 {
        self.h.deriv1(z).norm_sqr() - self.g.deriv1(z).norm_sqr()
    }

    /// Renormalized composition with the disk automorphism
    /// `z -> e^{i theta} (z + a) / (1 + conj(a) z)`:
    ///
    /// `F(z) = [f(phi(z)) - f(a e^{i theta})] / [(1 - |a|^2) h'(a e^{i theta}) e^{i theta}]`.
    ///
    /// The composition is truncated at the order of `f`; the neglected tail
    /// is `O(|a|^N)`.
    pub fn koebe_transform(&self, a: DiskPoint, theta: f64) -> Result<Self> {
        self.require_normalized()?;
        let a = a.0;
        let rot = Complex64::from_polar(1.0, theta);
        let base = a * rot;
        let hp = self.h.deriv1(base);
        if hp.norm() < DEGENERATE_TOL {
            return Err(Error::DegenerateDerivative { at: base, modulus: hp.norm() });
        }
        let shrink = 1.0 - a.norm_sqr();
        let denom = hp * rot * shrink;
        let n = self.order();
        let compose = |s: &ComplexCoeffSeq| -> Vec<Complex64> {
            // Horner in the automorphism phi = rot * (a + shrink * z / (1 + conj(a) z)).
            // Multiplying by z / (1 + conj(a) z) is the recurrence t_k = s_{k-1} - conj(a) t_{k-1}.
            let mut acc = vec![ZERO; n + 1];
            let mut t = vec![ZERO; n + 1];
            for k in (1..=n).rev() {
                if k < n {
                    t[0] = ZERO;
                    for j in 1..=n {
                        t[j] = acc[j - 1] - a.conj() * t[j - 1];
                    }
                    for j in 0..=n {
                        acc[j] = rot * (a * acc[j] + shrink * t[j]);
                    }
                }
                acc[0] += s.coeff(k);
            }
            t[0] = ZERO;
            for j in 1..=n {
                t[j] = acc[j - 1] - a.conj() * t[j - 1];
            }
            (0..=n).map(|j| rot * (a * acc[j] + shrink * t[j])).collect()
        };
        let hc = compose(&self.h);
        let gc = compose(&self.g);
        let h = ComplexCoeffSeq::new(hc[1..].iter().map(|&c| c / denom).collect())?;
        let g = ComplexCoeffSeq::new(gc[1..].iter().map(|&c| c / denom.conj()).collect())?;
        Self::new(h, g)
    }

    /// `(f + c conj(f)) / (1 + c b_1)` for `|c| < 1`.
    pub fn affine_transform(&self, c: Complex64) -> Result<Self> {
        if !(c.norm() < 1.0) {
            return Err(Error::Invalid(format!("affine parameter |c| = {} must be < 1", c.norm())));
        }
        let k = ONE + c * self.b1();
        if k.norm() < DEGENERATE_TOL {
            return Err(Error::SingularNormalization { modulus: k.norm() });
        }
        let hs = self.h.as_slice();
        let gs = self.g.as_slice();
        let h = hs.iter().zip(gs).map(|(&hn, &gn)| (hn + c * gn) / k).collect();
        let g = hs.iter().zip(gs).map(|(&hn, &gn)| (gn + c.conj() * hn) / k.conj()).collect();
        Self::new(ComplexCoeffSeq::new(h)?, ComplexCoeffSeq::new(g)?)
    }

    /// Rotation `e^{-i t} f(e^{i t} z)`.
    pub fn rotate(&self, t: f64) -> Self {
        let w = Complex64::from_polar(1.0, t);
        Self {
            h: self.h.map_indexed(|n, c| c * w.powi(n as i32 - 1)),
            // conj(g(w z)) e^{-it} = conj(e^{it} g(w z))
            g: self.g.map_indexed(|n, c| c * w.powi(n as i32 + 1)),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Samples `f` on the circle `|z - center| = radius`, counter-clockwise.
    pub fn image_of_circle(&self, center: Complex64, radius: f64, samples: usize) -> Vec<Complex64> {
        (0..samples)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / samples as f64;
                self.eval_raw(center + Complex64::from_polar(radius, t))
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    h: Vec<[f64; 2]>,
    g: Vec<[f64; 2]>,
}

impl TryFrom<MapJson> for HarmonicMap {
    type Error = Error;

    fn try_from(m: MapJson) -> Result<Self> {
        let conv = |v: Vec<[f64; 2]>| v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect::<Vec<_>>();
        let (h, g) = (conv(m.h), conv(m.g));
        if h.is_empty() {
            return Err(Error::Invalid("h needs at least the linear coefficient".into()));
        }
        let order = h.len().max(g.len());
        Self::from_coeffs(&h, &g, order)
    }
}

impl From<HarmonicMap> for MapJson {
    fn from(f: HarmonicMap) -> Self {
        let conv = |s: &ComplexCoeffSeq| s.as_slice().iter().map(|c| [c.re, c.im]).collect();
        MapJson { h: conv(&f.h), g: conv(&f.g) }
    }
}
