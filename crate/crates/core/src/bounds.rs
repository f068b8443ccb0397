//! Growth, covering, Jacobian and area bounds for the absolutely convex class
//! (order `2/sqrt 3`). The same growth bounds are used for uniformly convex
//! maps with `b1 = 0`: that class has a smaller second-coefficient bound, but
//! it is not linearly invariant, so the bound does not improve.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

fn sqrt3() -> f64 {
    3f64.sqrt()
}

/// Jacobian exponent `2 * order = 4/sqrt 3`.
fn jacobian_exponent() -> f64 {
    4.0 / sqrt3()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    #[serde(rename = "AK_H")]
    AkH,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ak_h" | "ak" | "akh" => Ok(Family::AkH),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

/// Order of a linear invariant family.
pub fn order_constant(family: Family) -> f64 {
    match family {
        Family::AkH => 2.0 / sqrt3(),
    }
}

/// Radius of the disk covered by the image of every normalized map with `b1 = 0`.
pub fn covering_radius() -> f64 {
    sqrt3() / (sqrt3() + 4.0)
}

fn check_r(r: f64, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero { (0.0..1.0).contains(&r) } else { r > 0.0 && r < 1.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::ParameterDomain(format!("r = {r} out of range")))
    }
}

fn check_b1(b1_mod: f64) -> Result<()> {
    if (0.0..1.0).contains(&b1_mod) {
        Ok(())
    } else {
        Err(Error::ParameterDomain(format!("|b1| = {b1_mod} must lie in [0, 1)")))
    }
}

/// Lower and upper bounds on `|f(z)|` for `|z| = r`.
pub fn growth_bounds(r: f64) -> Result<(f64, f64)> {
    check_r(r, false)?;
    let c = covering_radius();
    let p = (sqrt3() + 4.0) / (2.0 * sqrt3());
    let q = (1.0 - r) / (1.0 + r);
    Ok((c * (1.0 - q.powf(p)), c * (q.powf(-p) - 1.0)))
}

/// Lower and upper bounds on the Jacobian at `|z| = r`.
pub fn jacobian_bounds(r: f64, b1_mod: f64) -> Result<(f64, f64)> {
    check_r(r, true)?;
    check_b1(b1_mod)?;
    let k = jacobian_exponent();
    let s = 1.0 - b1_mod * b1_mod;
    let lower = s * (1.0 - r).powf(k - 2.0) / (1.0 + r).powf(k + 2.0);
    let upper = s * (1.0 + r).powf(k - 2.0) / (1.0 - r).powf(k + 2.0);
    Ok((lower, upper))
}

/// Lower and upper bounds on the area of the image of `|z| < r`.
pub fn area_bounds(r: f64, b1_mod: f64) -> Result<(f64, f64)> {
    check_r(r, false)?;
    check_b1(b1_mod)?;
    let k = jacobian_exponent();
    let s3 = sqrt3();
    let pre = std::f64::consts::PI * (1.0 - b1_mod * b1_mod) / 26.0;
    let lower = pre * (3.0 - (3.0 * r * r + 8.0 * s3 * r + 3.0) * (1.0 - r).powf(k - 1.0) / (1.0 + r).powf(k + 1.0));
    let upper = pre * (3.0 - (3.0 * r * r - 8.0 * s3 * r + 3.0) * (1.0 + r).powf(k - 1.0) / (1.0 - r).powf(k + 1.0));
    Ok((lower, upper))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub r: f64,
    pub b1_mod: f64,
    pub growth: (f64, f64),
    pub jacobian: (f64, f64),
    pub area: (f64, f64),
    pub covering_radius: f64,
}

impl BoundsReport {
    pub fn new(r: f64, b1_mod: f64) -> Result<Self> {
        Ok(Self {
            r,
            b1_mod,
            growth: growth_bounds(r)?,
            jacobian: jacobian_bounds(r, b1_mod)?,
            area: area_bounds(r, b1_mod)?,
            covering_radius: covering_radius(),
        })
    }
}
