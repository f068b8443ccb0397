mod plot;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use harmonic_atlas::bounds::BoundsReport;
use harmonic_atlas::class_tests::{a2_b2_sum, a2_necessary, uk_sufficient, us_sufficient, A2Family, ClassVerdict};
use harmonic_atlas::crosscheck::{run_battery, BatteryConfig, DEFAULT_SEED};
use harmonic_atlas::families::{build_family, convex_condition, starlike_condition, HyperFamily, HypergeometricSpec};
use harmonic_atlas::geometry::{
    absolutely_convex_scan, check_sense_preserving, fully_convex_scan, uniformly_convex_scan, uniformly_starlike_scan, GridSpec, OracleReport,
};
use harmonic_atlas::operators::{inverse_transfer, transfer_us_to_uk, BKind, OperatorParams};
use harmonic_atlas::special::HypergeometricParams;
use harmonic_atlas::{Complex64, Error, HarmonicMap};

use plot::{render_svg, Circle, PlotSpec};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "harmonic-atlas", version, about = "Membership tests, operators and bounds for planar harmonic maps")]
struct Cli {
    /// Print the machine-readable report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run coefficient tests and grid scans on a map.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated subset of tests; all applicable tests when omitted.
        #[arg(long, value_delimiter = ',')]
        tests: Vec<TestKind>,
        /// Write the JSON report here as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply an integral operator (or its inverse) to a map.
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: Option<f64>,
        /// Limiting operator with b -> infinity.
        #[arg(long)]
        binf: bool,
        /// Limiting operator with b = a.
        #[arg(long)]
        beq: bool,
        /// Inverse construction instead of the forward operator.
        #[arg(long)]
        inverse: bool,
        /// Write the transformed map JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a hypergeometric family member and evaluate its conditions.
    Family {
        #[arg(long)]
        which: String,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        /// Imaginary part of a; when nonzero, b is taken as conj(a).
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        a_im: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: Option<f64>,
        #[arg(long)]
        c: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        alpha_re: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        alpha_im: f64,
        /// Truncation order; chosen automatically when omitted.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Growth, Jacobian, area and covering bounds.
    Bounds {
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 0.0)]
        b1: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw images of circles as an SVG.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Circle as `re,im,radius`; repeatable. Defaults to four circles about 0.
        #[arg(long = "circle", allow_negative_numbers = true)]
        circles: Vec<String>,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 800)]
        height: u32,
        #[arg(long, default_value_t = 1.5)]
        stroke: f64,
    },
    /// Run the cross-validation battery.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TestKind {
    Uk,
    Us,
    A2Ak0,
    A2Uk0,
    A2General,
    A2B2,
    UkScan,
    UsScan,
    FkScan,
    AkScan,
}

const ALL_TESTS: [TestKind; 10] = [
    TestKind::Uk,
    TestKind::Us,
    TestKind::A2Ak0,
    TestKind::A2Uk0,
    TestKind::A2General,
    TestKind::A2B2,
    TestKind::UkScan,
    TestKind::UsScan,
    TestKind::FkScan,
    TestKind::AkScan,
];

/// Failure modes with their exit codes.
enum Failure {
    Input(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotSensePreserving { .. }
            | Error::NotNormalized { .. }
            | Error::Hypothesis(_)
            | Error::DegenerateDerivative { .. }
            | Error::SingularNormalization { .. }
            | Error::VanishingDenominator { .. }
            | Error::CoincidentPoints(_)
            | Error::DegeneratePolyline(_) => Failure::Precondition(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Outcome {
    passed: bool,
    report: Value,
    text: String,
}

fn read_map(path: &Path) -> Result<HarmonicMap, Failure> {
    let s = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(HarmonicMap::from_json(&s)?)
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, body).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn verdict_line(v: &ClassVerdict) -> String {
    format!("{} {:?} margin={:+.6e}", if v.passed { "PASS" } else { "FAIL" }, v.class_label, v.margin)
}

fn scan_line(r: &OracleReport) -> String {
    let at: Vec<String> = r.argmin.iter().map(|z| format!("{z:.4}")).collect();
    format!(
        "{} {} min={:+.6e} at [{}] ({} samples)",
        if r.passed() { "GRID-PASS" } else { "FAIL" },
        r.criterion,
        r.min_residual,
        at.join(", "),
        r.samples
    )
}

fn cmd_check(input: &Path, tests: &[TestKind], out: Option<&Path>) -> Result<Outcome, Failure> {
    let f = read_map(input)?;
    let explicit = !tests.is_empty();
    let tests: &[TestKind] = if explicit { tests } else { &ALL_TESTS };
    let single = GridSpec::single_default();
    let pair = GridSpec::pair_default();
    // sense preservation on the scan grid is required by every test
    check_sense_preserving(&f, &single)?;
    let b1_zero = f.b1().norm() <= 1e-12;
    let mut verdicts = Vec::new();
    let mut scans = Vec::new();
    let mut skipped = Vec::new();
    let mut lines = Vec::new();
    for &t in tests {
        let needs_b1_zero = matches!(t, TestKind::A2Ak0 | TestKind::A2Uk0 | TestKind::A2B2);
        if !explicit && needs_b1_zero && !b1_zero {
            skipped.push(format!("{t:?}: requires b1 = 0"));
            continue;
        }
        let verdict = match t {
            TestKind::Uk => Some(uk_sufficient(&f)?),
            TestKind::Us => Some(us_sufficient(&f)?),
            TestKind::A2Ak0 => Some(a2_necessary(&f, A2Family::Ak0)?),
            TestKind::A2Uk0 => Some(a2_necessary(&f, A2Family::Uk0)?),
            TestKind::A2General => Some(a2_necessary(&f, A2Family::AkGeneral)?),
            TestKind::A2B2 => {
                // rotate so that a2 is real and nonnegative
                let g = f.rotate(-f.a(2).arg());
                Some(a2_b2_sum(&g)?)
            }
            _ => None,
        };
        if let Some(v) = verdict {
            lines.push(verdict_line(&v));
            verdicts.push(v);
            continue;
        }
        let report = match t {
            TestKind::UkScan => uniformly_convex_scan(&f, &pair)?,
            TestKind::UsScan => uniformly_starlike_scan(&f, &pair)?,
            TestKind::FkScan => fully_convex_scan(&f, &single)?,
            TestKind::AkScan => absolutely_convex_scan(&f, &pair)?,
            _ => unreachable!(),
        };
        lines.push(scan_line(&report));
        scans.push(report);
    }
    for s in &skipped {
        lines.push(format!("SKIP {s}"));
    }
    let passed = verdicts.iter().all(|v| v.passed) && scans.iter().all(|s| s.passed());
    let report = json!({
        "schema": SCHEMA,
        "command": "check",
        "passed": passed,
        "truncation_order": f.order(),
        "verdicts": to_value(&verdicts),
        "scans": to_value(&scans),
        "skipped": skipped,
    });
    if let Some(p) = out {
        write_file(p, &serde_json::to_string_pretty(&report).expect("json"))?;
    }
    Ok(Outcome { passed, report, text: lines.join("\n") })
}

#[allow(clippy::too_many_arguments)]
fn cmd_transform(
    input: &Path,
    a: f64,
    b: Option<f64>,
    binf: bool,
    beq: bool,
    inverse: bool,
    out: Option<&Path>,
) -> Result<Outcome, Failure> {
    let chosen = [b.is_some(), binf, beq, inverse].iter().filter(|&&x| x).count();
    if chosen != 1 {
        return Err(Failure::Input("choose exactly one of --b, --binf, --beq, --inverse".into()));
    }
    let f = read_map(input)?;
    let (mapped, passed, mut report, text) = if inverse {
        let g = inverse_transfer(&f, a)?;
        let us = us_sufficient(&g)?;
        let text = format!("inverse a={a}\n{}", verdict_line(&us));
        let report = json!({ "operation": "inverse", "a": a, "us": to_value(&us) });
        (g, us.passed, report, text)
    } else {
        let kind = match (b, binf) {
            (Some(b), _) => BKind::Finite(b),
            (None, true) => BKind::Infinity,
            _ => BKind::EqualToA,
        };
        let p = OperatorParams::new(a, kind)?;
        let (g, verdict) = transfer_us_to_uk(&f, &p)?;
        let uk = uk_sufficient(&g)?;
        let mut text = format!("rule={:?} admissible={} phi_min={:.6e}", verdict.rule_applied, verdict.admissible, verdict.phi_min_over_n);
        if let Some((r1, r2)) = verdict.roots {
            text.push_str(&format!(" roots=({r1:.6}, {r2:.6})"));
        }
        text.push('\n');
        text.push_str(&verdict_line(&uk));
        let report = json!({
            "operation": "forward",
            "params": to_value(&p),
            "verdict": to_value(&verdict),
            "uk": to_value(&uk),
        });
        (g, verdict.admissible && uk.passed, report, text)
    };
    let map_json = mapped.to_json()?;
    if let Some(p) = out {
        write_file(p, &map_json)?;
    }
    let obj = report.as_object_mut().expect("object");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("command".into(), json!("transform"));
    obj.insert("passed".into(), json!(passed));
    obj.insert("map".into(), serde_json::from_str(&map_json).expect("json"));
    Ok(Outcome { passed, report, text })
}

#[allow(clippy::too_many_arguments)]
fn cmd_family(
    which: &str,
    a: f64,
    a_im: f64,
    b: Option<f64>,
    c: f64,
    alpha: Complex64,
    order: Option<usize>,
    out: Option<&Path>,
) -> Result<Outcome, Failure> {
    let family: HyperFamily = which.parse()?;
    let params = if a_im != 0.0 {
        HypergeometricParams::conjugate(Complex64::new(a, a_im), c)?
    } else {
        let b = b.ok_or_else(|| Failure::Input("--b is required for real parameters".into()))?;
        HypergeometricParams::real(a, b, c)?
    };
    let mut spec = HypergeometricSpec::new(params, alpha, family)?;
    if let Some(n) = order {
        spec = spec.with_truncation(n)?;
    }
    let map = build_family(&spec);
    let mut conditions = Vec::new();
    let mut lines = vec![format!("{family:?} regime={:?} truncation={}", spec.regime, spec.truncation_order)];
    for (name, r) in [("starlike", starlike_condition(&spec)), ("convex", convex_condition(&spec))] {
        match r {
            Ok(rep) => {
                lines.push(format!(
                    "{name}: lhs={:.9} threshold={} satisfied={}",
                    rep.lhs_value, rep.threshold, rep.satisfied
                ));
                conditions.push(to_value(&rep));
            }
            Err(e) => {
                lines.push(format!("{name}: not applicable ({e})"));
                conditions.push(json!({ "condition": name, "not_applicable": e.to_string() }));
            }
        }
    }
    let map_json = map.to_json()?;
    if let Some(p) = out {
        write_file(p, &map_json)?;
    }
    let report = json!({
        "schema": SCHEMA,
        "command": "family",
        "passed": true,
        "family": to_value(&family),
        "regime": to_value(&spec.regime),
        "truncation_order": spec.truncation_order,
        "conditions": conditions,
        "map": serde_json::from_str::<Value>(&map_json).expect("json"),
    });
    Ok(Outcome { passed: true, report, text: lines.join("\n") })
}

fn cmd_bounds(r: f64, b1: f64, out: Option<&Path>) -> Result<Outcome, Failure> {
    let rep = BoundsReport::new(r, b1)?;
    let mut report = to_value(&rep);
    let obj = report.as_object_mut().expect("object");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("command".into(), json!("bounds"));
    if let Some(p) = out {
        write_file(p, &serde_json::to_string_pretty(&report).expect("json"))?;
    }
    let text = format!(
        "growth   [{:.9e}, {:.9e}]\njacobian [{:.9e}, {:.9e}]\narea     [{:.9e}, {:.9e}]\ncovering {:.9}",
        rep.growth.0, rep.growth.1, rep.jacobian.0, rep.jacobian.1, rep.area.0, rep.area.1, rep.covering_radius
    );
    Ok(Outcome { passed: true, report, text })
}

fn parse_circle(s: &str) -> Result<Circle, Failure> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Input(format!("circle `{s}`: {e}")))?;
    match parts[..] {
        [re, im, radius] => Ok(Circle { center: Complex64::new(re, im), radius }),
        _ => Err(Failure::Input(format!("circle `{s}` must be re,im,radius"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_plot(
    input: &Path,
    out: &Path,
    circles: &[String],
    samples: usize,
    width: u32,
    height: u32,
    stroke: f64,
) -> Result<Outcome, Failure> {
    let f = read_map(input)?;
    let circles = if circles.is_empty() {
        [0.25, 0.5, 0.75, 0.9].iter().map(|&r| Circle { center: Complex64::new(0.0, 0.0), radius: r }).collect()
    } else {
        circles.iter().map(|s| parse_circle(s)).collect::<Result<Vec<_>, _>>()?
    };
    let spec = PlotSpec { circles, samples_per_circle: samples, width, height, stroke_width: stroke };
    let (svg, curves) = render_svg(&f, &spec)?;
    write_file(out, &svg)?;
    let entries: Vec<Value> = curves
        .iter()
        .map(|c| json!({ "center": [c.circle.center.re, c.circle.center.im], "radius": c.circle.radius, "convex": c.convex }))
        .collect();
    let text = curves
        .iter()
        .map(|c| format!("circle ({:.4}, {:.4}) r={:.4}: convex={}", c.circle.center.re, c.circle.center.im, c.circle.radius, c.convex))
        .collect::<Vec<_>>()
        .join("\n");
    let report = json!({ "schema": SCHEMA, "command": "plot", "passed": true, "svg": out.display().to_string(), "curves": entries });
    Ok(Outcome { passed: true, report, text })
}

fn cmd_verify(seed: u64, out: Option<&Path>) -> Result<Outcome, Failure> {
    let checks = run_battery(&BatteryConfig { seed, ..Default::default() });
    let passed = checks.iter().all(|c| c.passed);
    let mut lines: Vec<String> = checks
        .iter()
        .map(|c| {
            format!(
                "{:<24} {} worst={:.3e} tol={:.0e} {}",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.worst,
                c.tolerance,
                c.detail
            )
        })
        .collect();
    if let Some(first) = checks.iter().find(|c| !c.passed) {
        lines.push(format!("first failure: {}", first.name));
    }
    let report = json!({ "schema": SCHEMA, "command": "verify", "passed": passed, "seed": seed, "checks": to_value(&checks) });
    if let Some(p) = out {
        write_file(p, &serde_json::to_string_pretty(&report).expect("json"))?;
    }
    Ok(Outcome { passed, report, text: lines.join("\n") })
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.cmd {
        Cmd::Check { input, tests, out } => cmd_check(&input, &tests, out.as_deref()),
        Cmd::Transform { input, a, b, binf, beq, inverse, out } => cmd_transform(&input, a, b, binf, beq, inverse, out.as_deref()),
        Cmd::Family { which, a, a_im, b, c, alpha_re, alpha_im, order, out } => {
            cmd_family(&which, a, a_im, b, c, Complex64::new(alpha_re, alpha_im), order, out.as_deref())
        }
        Cmd::Bounds { r, b1, out } => cmd_bounds(r, b1, out.as_deref()),
        Cmd::Plot { input, out, circles, samples, width, height, stroke } => {
            cmd_plot(&input, &out, &circles, samples, width, height, stroke)
        }
        Cmd::Verify { seed, out } => cmd_verify(seed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    harmonic_atlas::init_thread_pool();
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(o) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&o.report).expect("json"));
            } else {
                println!("{}", o.text);
            }
            ExitCode::from(if o.passed { 0 } else { 1 })
        }
        Err(fail) => {
            let (code, kind, msg) = match fail {
                Failure::Input(m) => (2, "input", m),
                Failure::Precondition(m) => (3, "precondition", m),
            };
            if json {
                println!("{}", json!({ "schema": SCHEMA, "error": kind, "message": msg }));
            }
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
