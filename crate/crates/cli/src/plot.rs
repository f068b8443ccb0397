use std::fmt::Write as _;

use harmonic_atlas::geometry::polyline_convexity;
use harmonic_atlas::{Complex64, Error, HarmonicMap, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlotSpec {
    pub circles: Vec<Circle>,
    pub samples_per_circle: usize,
    pub width: u32,
    pub height: u32,
    pub stroke_width: f64,
}

impl PlotSpec {
    pub fn validate(&self) -> Result<()> {
        if self.circles.is_empty() {
            return Err(Error::Invalid("at least one circle is required".into()));
        }
        for c in &self.circles {
            if !(c.radius > 0.0 && c.center.norm() + c.radius <= 1.0 - 1e-9) {
                return Err(Error::Invalid(format!(
                    "circle center {} radius {} does not fit inside the disk",
                    c.center, c.radius
                )));
            }
        }
        if self.samples_per_circle < 8 || self.width == 0 || self.height == 0 || !(self.stroke_width > 0.0) {
            return Err(Error::Invalid("need >= 8 samples, a nonempty canvas and positive stroke".into()));
        }
        Ok(())
    }
}

pub struct Curve {
    pub circle: Circle,
    pub points: Vec<Complex64>,
    pub convex: bool,
}

pub fn curves(f: &HarmonicMap, spec: &PlotSpec) -> Vec<Curve> {
    spec.circles
        .iter()
        .map(|c| {
            let points = f.image_of_circle(c.center, c.radius, spec.samples_per_circle);
            let convex = polyline_convexity(&points).map(|p| p.convex && p.total_turning > 0.0).unwrap_or(false);
            Curve { circle: c.clone(), points, convex }
        })
        .collect()
}

/// Renders image curves with one uniform scale chosen so that all curves fit
/// with a 5% margin on every side.
pub fn render_svg(f: &HarmonicMap, spec: &PlotSpec) -> Result<(String, Vec<Curve>)> {
    spec.validate()?;
    let curves = curves(f, spec);
    let all = curves.iter().flat_map(|c| c.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in all {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    let (w, h) = (spec.width as f64, spec.height as f64);
    let span_x = (x1 - x0).max(1e-12);
    let span_y = (y1 - y0).max(1e-12);
    let scale = (0.9 * w / span_x).min(0.9 * h / span_y);
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let to_px = |p: Complex64| (w / 2.0 + (p.re - cx) * scale, h / 2.0 - (p.im - cy) * scale);

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#, spec.width, spec.height, spec.width, spec.height).unwrap();
    writeln!(s, "<!-- scale={scale:.9e} center=({cx:.9e},{cy:.9e}) -->").unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (i, c) in curves.iter().enumerate() {
        writeln!(
            s,
            "<!-- curve {i}: center=({:.6},{:.6}) radius={:.6} convex={} -->",
            c.circle.center.re, c.circle.center.im, c.circle.radius, c.convex
        )
        .unwrap();
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|&p| {
                let (x, y) = to_px(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let color = if c.convex { "#1f4e79" } else { "#b22222" };
        writeln!(
            s,
            r#"<polygon points="{}" fill="none" stroke="{color}" stroke-width="{}"/>"#,
            pts.join(" "),
            spec.stroke_width
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok((s, curves))
}
