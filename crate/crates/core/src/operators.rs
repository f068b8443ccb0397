//! Bernardi-type integral operators acting coefficientwise on harmonic maps,
//! the admissibility test for sending uniformly starlike maps to uniformly
//! convex ones, and the inverse construction.

use num_complex::Complex64;
use serde::Serialize;

use crate::class_tests::{us_sufficient, uk_sufficient, PASS_SLACK};
use crate::error::{Error, Result};
use crate::quadrature::integrate_pieces;
use crate::series::{DiskPoint, HarmonicMap};

/// Highest degree accepted by [`hab_integral_oracle`].
pub const ORACLE_MAX_DEGREE: usize = 64;
const ORACLE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "b")]
pub enum BKind {
    Finite(f64),
    Infinity,
    EqualToA,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OperatorParams {
    a: f64,
    b_kind: BKind,
}

impl OperatorParams {
    pub fn new(a: f64, b_kind: BKind) -> Result<Self> {
        if !(a > -1.0 && a.is_finite()) {
            return Err(Error::ParameterDomain(format!("a = {a} must exceed -1")));
        }
        if let BKind::Finite(b) = b_kind {
            if !(b > -1.0 && b.is_finite()) {
                return Err(Error::ParameterDomain(format!("b = {b} must exceed -1")));
            }
            if b == a {
                return Err(Error::ParameterDomain("finite b must differ from a; use EqualToA".into()));
            }
        }
        Ok(Self { a, b_kind })
    }

    pub fn finite(a: f64, b: f64) -> Result<Self> {
        Self::new(a, BKind::Finite(b))
    }

    pub fn infinity(a: f64) -> Result<Self> {
        Self::new(a, BKind::Infinity)
    }

    pub fn equal(a: f64) -> Result<Self> {
        Self::new(a, BKind::EqualToA)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b_kind(&self) -> BKind {
        self.b_kind
    }

    /// Multiplier applied to the `n`-th coefficient of both parts.
    pub fn factor(&self, n: usize) -> f64 {
        let (a, n) = (self.a, n as f64);
        match self.b_kind {
            BKind::Finite(b) => (a + 1.0) * (b + 1.0) / ((a + n) * (b + n)),
            BKind::Infinity => (a + 1.0) / (a + n),
            BKind::EqualToA => ((a + 1.0) / (a + n)).powi(2),
        }
    }
}

pub fn apply_hab(p: &OperatorParams, f: &HarmonicMap) -> HarmonicMap {
    f.scale_coeffs(|n| p.factor(n))
}

/// Highest index carrying a nonzero coefficient in either part.
fn degree(f: &HarmonicMap) -> usize {
    (1..=f.order()).rev().find(|&n| f.a(n) != Complex64::new(0.0, 0.0) || f.b(n) != Complex64::new(0.0, 0.0)).unwrap_or(0)
}

/// `Q(w)` with `h(w) = w Q(w)`.
fn quotient(coeffs: &[Complex64], w: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
}

/// Evaluates the operator at `z` by quadrature of its defining integral, for
/// polynomial maps of degree at most [`ORACLE_MAX_DEGREE`].
///
/// The substitution `t = u^q` with `q = 1/(min(a, b) + 1)` removes the
/// algebraic endpoint singularity; the log-weighted case keeps a `log u`
/// factor and is split at `t = 1e-3`.
pub fn hab_integral_oracle(p: &OperatorParams, f: &HarmonicMap, z: DiskPoint) -> Result<Complex64> {
    let deg = degree(f);
    if deg > ORACLE_MAX_DEGREE {
        return Err(Error::Invalid(format!("degree {deg} exceeds {ORACLE_MAX_DEGREE}")));
    }
    let z = z.value();
    let hs = &f.h().as_slice()[..deg.max(1)];
    let gs = &f.g().as_slice()[..deg.max(1)];
    let a = p.a;
    let lowest = match p.b_kind {
        BKind::Finite(b) => a.min(b),
        _ => a,
    };
    let q = 1.0 / (lowest + 1.0);
    // weight(u) * Q(tz) * z, with t = u^q, is the full transformed integrand
    let weight = move |u: f64| -> f64 {
        match p.b_kind {
            BKind::Finite(b) => {
                let k = (a + 1.0) * (b + 1.0) / (b - a);
                k * q * (u.powf(q * (a + 1.0) - 1.0) - u.powf(q * (b + 1.0) - 1.0))
            }
            BKind::Infinity => (a + 1.0) * q * u.powf(q * (a + 1.0) - 1.0),
            BKind::EqualToA => -(a + 1.0).powi(2) * q * q * u.ln(),
        }
    };
    let side = |coeffs: &[Complex64]| -> Result<Complex64> {
        let integrand = |u: f64| weight(u) * quotient(coeffs, u.powf(q) * z) * z;
        let breaks = match p.b_kind {
            BKind::EqualToA => vec![0.0, 1e-3f64.powf(1.0 / q), 1.0],
            _ => vec![0.0, 1.0],
        };
        integrate_pieces(integrand, &breaks, ORACLE_TOL)
    };
    Ok(side(hs)? + side(gs)?.conj())
}

/// `2n^2 - 2(1 + ab)n + (3ab + a + b + 1)`; nonnegative exactly when the
/// operator factor at index `n` satisfies `factor * (2n - 1) <= 2`.
pub fn phi(n: f64, a: f64, b: f64) -> f64 {
    2.0 * n * n - 2.0 * (1.0 + a * b) * n + (3.0 * a * b + a + b + 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferRule {
    LowProduct,
    NonPositiveDiscriminant,
    RootsShareFloor,
    LimitInfinity,
    EqualParameters,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferVerdict {
    pub rule_applied: TransferRule,
    pub admissible: bool,
    /// Minimum over the inspected integers `n >= 2` of the slack
    /// `2 / factor(n) - (2n - 1)`, scaled to a polynomial (`phi` for finite `b`).
    pub phi_min_over_n: f64,
    /// Real roots `(r1, r2)` of `phi`, larger first.
    pub roots: Option<(f64, f64)>,
}

fn min_over(range: std::ops::RangeInclusive<u64>, f: impl Fn(f64) -> f64) -> f64 {
    range.map(|n| f(n as f64)).fold(f64::INFINITY, f64::min)
}

fn check_ab(a: f64, b: f64) -> Result<()> {
    if a > -1.0 && b > -1.0 {
        Ok(())
    } else {
        Err(Error::ParameterDomain(format!("(a, b) = ({a}, {b}) must both exceed -1")))
    }
}

/// Decides whether `(a, b)` guarantees `phi(n) >= 0` for all integers `n >= 2`.
pub fn transfer_condition(a: f64, b: f64) -> Result<TransferVerdict> {
    check_ab(a, b)?;
    let ab = a * b;
    let vertex = (1.0 + ab) / 2.0;
    let hi = (vertex.ceil() + 2.0).max(2.0) as u64;
    let phi_min = min_over(2..=hi, |n| phi(n, a, b));
    // discriminant of phi over 4, up to the factor 1/4
    let quarter_disc = ab * ab - 4.0 * ab - 2.0 * (a + b) - 1.0;
    let roots = (quarter_disc >= 0.0).then(|| {
        let s = quarter_disc.sqrt();
        ((1.0 + ab + s) / 2.0, (1.0 + ab - s) / 2.0)
    });
    let (rule, admissible) = if ab <= 3.0 {
        (TransferRule::LowProduct, true)
    } else if quarter_disc <= 0.0 {
        (TransferRule::NonPositiveDiscriminant, true)
    } else {
        let (r1, r2) = roots.expect("positive discriminant");
        let top = (r1.ceil() + 1.0).max(2.0) as u64;
        if r1.floor() == r2.floor() && min_over(2..=top, |n| phi(n, a, b)) >= 0.0 {
            (TransferRule::RootsShareFloor, true)
        } else {
            (TransferRule::None, false)
        }
    };
    Ok(TransferVerdict { rule_applied: rule, admissible, phi_min_over_n: phi_min, roots })
}

/// `(sqrt2 n - sqrt(2n - 1)) / (sqrt(2n - 1) - sqrt2)`.
pub fn psi(n: f64) -> f64 {
    let s2 = 2f64.sqrt();
    let r = (2.0 * n - 1.0).sqrt();
    (s2 * n - r) / (r - s2)
}

/// Integer `n` in `[2, n_max]` minimizing [`psi`], with the minimum.
pub fn psi_argmin(n_max: u64) -> (u64, f64) {
    (2..=n_max).map(|n| (n, psi(n as f64))).fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

/// Largest `a` admitted when `b = a`: `(3 sqrt2 - sqrt5) / (sqrt5 - sqrt2)`.
pub fn equal_case_limit() -> f64 {
    let (s2, s5) = (2f64.sqrt(), 5f64.sqrt());
    (3.0 * s2 - s5) / (s5 - s2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialCase {
    BInfinity,
    AEqualsB,
}

/// Whether `a` lies in the admissible range of the limiting operator.
pub fn special_case_ranges(case: SpecialCase, a: f64) -> Result<bool> {
    if !(a > -1.0) {
        return Err(Error::ParameterDomain(format!("a = {a} must exceed -1")));
    }
    Ok(match case {
        SpecialCase::BInfinity => a <= 0.0,
        SpecialCase::AEqualsB => a <= equal_case_limit() + PASS_SLACK,
    })
}

fn special_verdict(p: &OperatorParams) -> Result<TransferVerdict> {
    let a = p.a;
    let (rule, case, slack): (_, _, Box<dyn Fn(f64) -> f64>) = match p.b_kind {
        BKind::Infinity => (
            TransferRule::LimitInfinity,
            SpecialCase::BInfinity,
            Box::new(move |n| 2.0 * (a + n) - (a + 1.0) * (2.0 * n - 1.0)),
        ),
        BKind::EqualToA => (
            TransferRule::EqualParameters,
            SpecialCase::AEqualsB,
            Box::new(move |n| 2.0 * (a + n).powi(2) - (a + 1.0).powi(2) * (2.0 * n - 1.0)),
        ),
        BKind::Finite(b) => return transfer_condition(a, b),
    };
    Ok(TransferVerdict {
        rule_applied: rule,
        admissible: special_case_ranges(case, a)?,
        phi_min_over_n: min_over(2..=100, slack),
        roots: None,
    })
}

/// Applies the operator to a map satisfying the uniform-starlikeness
/// coefficient test. The verdict is a sufficient gate only: an inadmissible
/// verdict still returns the transformed map, with no membership claim.
pub fn transfer_us_to_uk(f: &HarmonicMap, p: &OperatorParams) -> Result<(HarmonicMap, TransferVerdict)> {
    let us = us_sufficient(f)?;
    if !us.passed {
        return Err(Error::Hypothesis(format!("input fails the starlike coefficient test: {}", us.detail)));
    }
    Ok((apply_hab(p, f), special_verdict(p)?))
}

/// `h_a = (aH + zH') / (a + 1)` and likewise for `G`, i.e. coefficient `n`
/// scaled by `(a + n)/(a + 1)`.
pub fn inverse_transfer(big_f: &HarmonicMap, a: f64) -> Result<HarmonicMap> {
    if !(a >= 1.0) {
        return Err(Error::ParameterDomain(format!("a = {a} must be at least 1")));
    }
    if big_f.b1().norm() > PASS_SLACK {
        return Err(Error::Hypothesis(format!("G'(0) = {} must vanish", big_f.b1())));
    }
    let uk = uk_sufficient(big_f)?;
    if !uk.passed {
        return Err(Error::Hypothesis(format!("input fails the convex coefficient test: {}", uk.detail)));
    }
    Ok(big_f.scale_coeffs(|n| (a + n as f64) / (a + 1.0)))
}
