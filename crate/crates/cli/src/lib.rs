//! Command logic behind the `clcurve` binary.
//!
//! Every command returns its rendered standard output as a string so the same
//! code path feeds both the binary and the golden-file tests.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cl_curves::hyper_trig::{angle_report, angle_report_for, unit_from_state, AngleReport};
use cl_curves::quadrature::{oracle_compare, ORACLE_REL_TOL};
use cl_curves::rosetta::{
    center_of, natural_readings, translate, translate_with_report, TranslationReport,
};
use cl_curves::{
    rel_diff, validate, BancorV2Params, CurveError, CurveGeometry, CurveSpec, FormTag, PoolState,
    SwapDelta, ValidatedSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "clcurve",
    version,
    about = "Concentrated-liquidity bonding curve toolkit"
)]
pub struct Cli {
    /// CurveSpec JSON file.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,

    /// Relative tolerance used by `verify`.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    X,
    Price,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quote a trade against a pool state.
    Quote(QuoteArgs),
    /// Re-express the curve in another parameterization.
    Translate {
        #[arg(long)]
        to: String,
    },
    /// Sample the curve.
    Sweep {
        #[arg(long, default_value_t = 11)]
        points: usize,
        #[arg(long, value_enum, default_value_t = SweepAxis::X)]
        axis: SweepAxis,
    },
    /// Hyperbolic angle of a price range.
    Angle {
        #[arg(long, requires = "p_low")]
        p_high: Option<f64>,
        #[arg(long, requires = "p_high")]
        p_low: Option<f64>,
    },
    /// Check closed forms against the quadrature oracle and each other.
    Verify {
        #[arg(long, default_value_t = 50)]
        curves: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Intercepts, asymptotes, price bounds and concentration of the curve.
    Geometry,
}

#[derive(Debug, Args)]
pub struct QuoteArgs {
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub y: f64,
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "dy",
        required_unless_present = "dy"
    )]
    pub dx: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub dy: Option<f64>,
}

#[derive(Debug)]
pub enum CliError {
    Curve(CurveError),
    Input(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Curve(e) => e.kind(),
            CliError::Input(_) => "InputError",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Curve(e) => e.to_string(),
            CliError::Input(m) => m.clone(),
        }
    }

    /// Error JSON written to standard error.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.message() }).to_string()
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        CliError::Curve(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message())
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Rendered standard output plus the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

pub fn load_spec(path: &Path) -> CliResult<ValidatedSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text)
}

pub fn parse_spec(text: &str) -> CliResult<ValidatedSpec> {
    let spec: CurveSpec = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("invalid CurveSpec JSON: {e}")))?;
    Ok(validate(spec)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data always serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quote {
    pub dx: f64,
    pub dy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effective_price: Option<f64>,
    pub marginal_before: f64,
    pub marginal_after: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trade {
    Dx(f64),
    Dy(f64),
}

pub fn cmd_quote(spec: &ValidatedSpec, state: PoolState, trade: Trade) -> CliResult<Quote> {
    let curve = spec.curve();
    let delta = match trade {
        Trade::Dx(dx) => curve.swap_given_dx(state, dx)?,
        Trade::Dy(dy) => curve.swap_given_dy(state, dy)?,
    };
    let marginal_before = curve.marginal_price(state)?;
    let marginal_after = curve.marginal_price(state.after(delta))?;
    let effective_price = if delta.dx == 0.0 {
        None
    } else {
        Some(curve.effective_price(state, delta)?)
    };
    Ok(Quote {
        dx: delta.dx,
        dy: delta.dy,
        effective_price,
        marginal_before,
        marginal_after,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Translation {
    pub spec: CurveSpec,
    pub report: TranslationReport,
}

pub fn cmd_translate(spec: &ValidatedSpec, to: &str) -> CliResult<Translation> {
    let target: FormTag = to
        .parse()
        .map_err(|_| CliError::Input(format!("unknown target form {to:?}")))?;
    let (out, report) = translate_with_report(spec, target)?;
    Ok(Translation {
        spec: *out.spec(),
        report,
    })
}

pub fn cmd_geometry(spec: &ValidatedSpec) -> CurveGeometry {
    spec.geometry()
}

pub fn cmd_angle(
    spec: Option<&ValidatedSpec>,
    prices: Option<(f64, f64)>,
) -> CliResult<AngleReport> {
    match (prices, spec) {
        (Some((p_high, p_low)), _) => Ok(angle_report(p_high, p_low)?),
        (None, Some(spec)) => Ok(angle_report_for(&spec.geometry())?),
        (None, None) => Err(CliError::Input(
            "angle needs --p-high and --p-low or --spec".into(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRequest {
    pub spec: CurveSpec,
    pub axis: SweepAxis,
    pub points: usize,
    pub output: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub x: f64,
    pub y: f64,
    pub marginal_price: f64,
    pub t_hat: f64,
    pub u_hat: f64,
}

pub const SWEEP_HEADER: &str = "x,y,marginal_price,t_hat,u_hat";

/// Evenly spaced samples across `[0, x_int]`, either in `x` or in price.
///
/// The unit-hyperbola columns are taken in virtual coordinates, measured
/// from the asymptotes.
pub fn cmd_sweep(req: &SweepRequest) -> CliResult<Vec<SweepRow>> {
    if req.points < 2 {
        return Err(CliError::Input("points must be at least 2".into()));
    }
    let spec = validate(req.spec)?;
    let g = spec.geometry();
    if !g.is_bounded() {
        return Err(CliError::Curve(CurveError::Domain {
            field: "form",
            reason: "the reference curve has no finite x range to sweep".into(),
        }));
    }
    let curve = spec.curve();
    let last = req.points - 1;
    let scale = g.c * g.x_asym * g.y_asym;
    (0..req.points)
        .map(|i| {
            let t = i as f64 / last as f64;
            let x = if i == 0 {
                0.0
            } else if i == last {
                g.x_int
            } else {
                match req.axis {
                    SweepAxis::X => t * g.x_int,
                    SweepAxis::Price => {
                        let p = g.p_high + t * (g.p_low - g.p_high);
                        (g.x_asym + (scale / p).sqrt()).clamp(0.0, g.x_int)
                    }
                }
            };
            let y = curve.y_at_x(x).max(0.0);
            let state = PoolState { x, y };
            let marginal_price = curve.marginal_price(state)?;
            let unit = unit_from_state(x - g.x_asym, y - g.y_asym)?;
            Ok(SweepRow {
                x,
                y,
                marginal_price,
                t_hat: unit.t_hat,
                u_hat: unit.u_hat,
            })
        })
        .collect()
}

pub fn render_sweep(rows: &[SweepRow], output: OutputFormat) -> String {
    match output {
        OutputFormat::Json => to_json(&rows),
        OutputFormat::Csv => {
            let mut s = String::from(SWEEP_HEADER);
            s.push('\n');
            for r in rows {
                let _ = writeln!(
                    s,
                    "{:?},{:?},{:?},{:?},{:?}",
                    r.x, r.y, r.marginal_price, r.t_hat, r.u_hat
                );
            }
            s
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub worst_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

struct Tally {
    check: Check,
    tol: f64,
}

impl Tally {
    fn new(name: &str, tol: f64) -> Self {
        Tally {
            check: Check {
                name: name.into(),
                cases: 0,
                failures: 0,
                worst_deviation: 0.0,
            },
            tol,
        }
    }

    fn record(&mut self, deviation: f64) {
        self.check.cases += 1;
        if deviation > self.check.worst_deviation || deviation.is_nan() {
            self.check.worst_deviation = deviation;
        }
        if !(deviation <= self.tol) {
            self.check.failures += 1;
        }
    }

    fn fail(&mut self) {
        self.check.cases += 1;
        self.check.failures += 1;
    }
}

/// Center-form readings within this fraction of `x0` of the center are
/// skipped: the form is 0/0 there and amplifies the state's rounding.
pub const CENTER_EXCLUSION: f64 = 0.05;

/// Runs the oracle suite on `spec`, or on a seeded battery of random
/// curves when no spec is given.
pub fn cmd_verify(
    spec: Option<&ValidatedSpec>,
    tol: f64,
    curves: usize,
    seed: u64,
) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs: Vec<ValidatedSpec> = match spec {
        Some(s) => vec![s.clone()],
        None => (0..curves)
            .filter_map(|_| random_bancor(&mut rng))
            .collect(),
    };
    let mut oracle = Tally::new("quadrature_oracle", tol);
    let mut forms = Tally::new("form_agreement", tol);
    let mut round_trip = Tally::new("round_trip", tol);
    let mut invariants = Tally::new("natural_invariants", tol);
    let mut angle = Tally::new("angle_concentration", tol);

    for s in &specs {
        let g = s.geometry();
        if !g.is_bounded() {
            reference_checks(s, &mut rng, &mut oracle);
            continue;
        }
        let family: Vec<ValidatedSpec> = FormTag::BOUNDED
            .iter()
            .filter_map(|&f| translate(s, f).ok())
            .collect();
        if family.len() != FormTag::BOUNDED.len() {
            round_trip.fail();
        }
        for t in &family {
            match translate(t, s.form()) {
                Ok(back) => round_trip.record(spec_deviation(s.spec(), back.spec())),
                Err(_) => round_trip.fail(),
            }
        }
        match angle_report_for(&g) {
            Ok(a) => angle.record(rel_diff(a.phi.exp(), g.c)),
            Err(_) => angle.fail(),
        }
        for _ in 0..5 {
            let x = rng.gen_range(0.0..1.0) * g.x_int;
            let state = PoolState {
                x,
                y: s.curve().y_at_x(x).max(0.0),
            };
            let dx = rng.gen_range(0.0..1.0) * (g.x_int - x);
            match oracle_compare(s, state, dx, tol) {
                Ok(r) => oracle.record(r.rel_deviation),
                Err(_) => oracle.fail(),
            }
            let deltas: Vec<Option<SwapDelta>> = family
                .iter()
                .map(|t| t.curve().swap_given_dx(state, dx).ok())
                .collect();
            match deltas.first().copied().flatten() {
                Some(first) => {
                    for d in &deltas[1..] {
                        match d {
                            Some(d) => forms.record(rel_diff(d.dy, first.dy)),
                            None => forms.fail(),
                        }
                    }
                }
                None => forms.fail(),
            }
            if let Ok(r) = natural_readings(state, &g) {
                let (x0, _) = center_of(&g);
                let center = r
                    .center
                    .filter(|_| (state.x - x0).abs() >= CENTER_EXCLUSION * x0);
                let mut worst = rel_diff(r.asymptotes, g.c);
                for v in [center, r.intercepts].into_iter().flatten() {
                    worst = worst.max(rel_diff(v, g.c));
                }
                invariants.record(worst);
            }
        }
    }

    let checks: Vec<Check> = [oracle, forms, round_trip, invariants, angle]
        .into_iter()
        .map(|t| t.check)
        .filter(|c| c.cases > 0)
        .collect();
    let pass = checks.iter().all(|c| c.failures == 0);
    VerifyReport {
        tolerance: tol,
        checks,
        pass,
    }
}

fn reference_checks(s: &ValidatedSpec, rng: &mut ChaCha8Rng, oracle: &mut Tally) {
    let curve = s.curve();
    for _ in 0..5 {
        let x = 10f64.powf(rng.gen_range(-2.0..2.0)) * curve.x_at_y(1.0).max(1e-300);
        let state = PoolState {
            x,
            y: curve.y_at_x(x),
        };
        let dx = rng.gen_range(0.0..4.0) * x;
        match oracle_compare(s, state, dx, oracle.tol) {
            Ok(r) => oracle.record(r.rel_deviation),
            Err(_) => oracle.fail(),
        }
    }
}

fn random_bancor(rng: &mut ChaCha8Rng) -> Option<ValidatedSpec> {
    let x0 = 10f64.powf(rng.gen_range(-3.0..9.0));
    let y0 = 10f64.powf(rng.gen_range(-3.0..9.0));
    let a = rng.gen_range(1.01..100.0);
    validate(CurveSpec::BancorV2(BancorV2Params {
        x0,
        y0,
        amplification: a,
    }))
    .ok()
}

/// Largest relative deviation between the numeric fields of two specs of
/// the same form.
pub fn spec_deviation(a: &CurveSpec, b: &CurveSpec) -> f64 {
    let va = serde_json::to_value(a).expect("spec serializes");
    let vb = serde_json::to_value(b).expect("spec serializes");
    value_deviation(&va, &vb)
}

fn value_deviation(a: &serde_json::Value, b: &serde_json::Value) -> f64 {
    use serde_json::Value;
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => rel_diff(
            x.as_f64().unwrap_or(f64::NAN),
            y.as_f64().unwrap_or(f64::NAN),
        ),
        (Value::Object(x), Value::Object(y)) if x.len() == y.len() => x
            .iter()
            .map(|(k, v)| y.get(k).map_or(f64::INFINITY, |w| value_deviation(v, w)))
            .fold(0.0, f64::max),
        (x, y) if x == y => 0.0,
        _ => f64::INFINITY,
    }
}

fn require_spec(cli: &Cli) -> CliResult<ValidatedSpec> {
    match &cli.spec {
        Some(path) => load_spec(path),
        None => Err(CliError::Input("this command needs --spec <file>".into())),
    }
}

fn json_only(cli: &Cli) -> CliResult<()> {
    if cli.output == OutputFormat::Csv {
        return Err(CliError::Input(
            "csv output is only available for sweep".into(),
        ));
    }
    Ok(())
}

/// Execute a parsed command line.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let ok = |stdout| {
        Ok(Outcome {
            stdout,
            code: EXIT_OK,
        })
    };
    match &cli.command {
        Command::Quote(args) => {
            json_only(cli)?;
            let spec = require_spec(cli)?;
            let state = PoolState::new(args.x, args.y)?;
            let trade = match (args.dx, args.dy) {
                (Some(dx), None) => Trade::Dx(dx),
                (None, Some(dy)) => Trade::Dy(dy),
                _ => return Err(CliError::Input("give exactly one of --dx or --dy".into())),
            };
            ok(to_json(&cmd_quote(&spec, state, trade)?))
        }
        Command::Translate { to } => {
            json_only(cli)?;
            let spec = require_spec(cli)?;
            ok(to_json(&cmd_translate(&spec, to)?))
        }
        Command::Sweep { points, axis } => {
            let spec = require_spec(cli)?;
            let req = SweepRequest {
                spec: *spec.spec(),
                axis: *axis,
                points: *points,
                output: cli.output,
            };
            let rows = cmd_sweep(&req)?;
            ok(render_sweep(&rows, req.output))
        }
        Command::Angle { p_high, p_low } => {
            json_only(cli)?;
            let spec = match &cli.spec {
                Some(path) => Some(load_spec(path)?),
                None => None,
            };
            let prices = p_high.zip(*p_low);
            ok(to_json(&cmd_angle(spec.as_ref(), prices)?))
        }
        Command::Verify { curves, seed } => {
            json_only(cli)?;
            let tol = cli.tolerance.unwrap_or(ORACLE_REL_TOL);
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::Input("tolerance must be positive".into()));
            }
            let spec = match &cli.spec {
                Some(path) => Some(load_spec(path)?),
                None => None,
            };
            let report = cmd_verify(spec.as_ref(), tol, *curves, *seed);
            let code = if report.pass {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            };
            Ok(Outcome {
                stdout: to_json(&report),
                code,
            })
        }
        Command::Geometry => {
            json_only(cli)?;
            let spec = require_spec(cli)?;
            ok(to_json(&cmd_geometry(&spec)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> ValidatedSpec {
        parse_spec(r#"{"form":"bancor_v2","x0":100,"y0":100,"A":2}"#).unwrap()
    }

    #[test]
    fn quote_worked_trade() {
        let q = cmd_quote(
            &worked(),
            PoolState { x: 100.0, y: 100.0 },
            Trade::Dx(100.0),
        )
        .unwrap();
        assert!(rel_diff(q.dy, -200.0 / 3.0) < 1e-15);
        assert!(rel_diff(q.effective_price.unwrap(), -2.0 / 3.0) < 1e-15);
        assert_eq!(q.marginal_before, -1.0);
    }

    #[test]
    fn zero_quote_omits_effective_price() {
        let q = cmd_quote(&worked(), PoolState { x: 100.0, y: 100.0 }, Trade::Dx(0.0)).unwrap();
        assert_eq!((q.dx, q.dy, q.effective_price), (0.0, 0.0, None));
        assert!(!to_json(&q).contains("effective_price"));
    }

    #[test]
    fn overshoot_is_bounds_exceeded() {
        let e = cmd_quote(
            &worked(),
            PoolState { x: 100.0, y: 100.0 },
            Trade::Dx(201.0),
        )
        .unwrap_err();
        assert_eq!(e.kind(), "BoundsExceeded");
    }

    #[test]
    fn sweep_worked_rows() {
        let req = SweepRequest {
            spec: *worked().spec(),
            axis: SweepAxis::X,
            points: 3,
            output: OutputFormat::Csv,
        };
        let rows = cmd_sweep(&req).unwrap();
        let xy: Vec<(f64, f64)> = rows.iter().map(|r| (r.x, r.y)).collect();
        assert_eq!(xy, vec![(0.0, 300.0), (150.0, 60.0), (300.0, 0.0)]);
        assert_eq!(rows[0].marginal_price, -4.0);
        for r in &rows {
            let v = (r.x + 100.0) * (r.y + 100.0) / 10_000.0;
            assert!(rel_diff(v, 4.0) < 1e-12);
        }
    }

    #[test]
    fn price_sweep_spans_bounds() {
        let req = SweepRequest {
            spec: *worked().spec(),
            axis: SweepAxis::Price,
            points: 5,
            output: OutputFormat::Json,
        };
        let rows = cmd_sweep(&req).unwrap();
        assert_eq!(rows[0].marginal_price, -4.0);
        assert_eq!(rows[4].marginal_price, -0.25);
        let step = (4.0 - 0.25) / 4.0;
        for (i, r) in rows.iter().enumerate() {
            assert!((r.marginal_price + 4.0 - step * i as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_rejects_reference_and_one_point() {
        let reference = parse_spec(r#"{"form":"reference","x0":100,"y0":100}"#).unwrap();
        let mut req = SweepRequest {
            spec: *reference.spec(),
            axis: SweepAxis::X,
            points: 3,
            output: OutputFormat::Csv,
        };
        assert_eq!(cmd_sweep(&req).unwrap_err().kind(), "DomainError");
        req.spec = *worked().spec();
        req.points = 1;
        assert_eq!(cmd_sweep(&req).unwrap_err().kind(), "InputError");
    }

    #[test]
    fn translate_rejects_unknown_target() {
        assert_eq!(
            cmd_translate(&worked(), "curve").unwrap_err().kind(),
            "InputError"
        );
    }

    #[test]
    fn identity_translation_keeps_fields() {
        let t = cmd_translate(&worked(), "bancor_v2").unwrap();
        assert_eq!(&t.spec, worked().spec());
    }

    #[test]
    fn verify_passes_on_worked_and_battery() {
        assert!(cmd_verify(Some(&worked()), ORACLE_REL_TOL, 0, 1).pass);
        let r = cmd_verify(None, ORACLE_REL_TOL, 10, 3);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.checks.len(), 5);
    }

    #[test]
    fn verify_on_reference_runs_oracle_only() {
        let reference = parse_spec(r#"{"form":"reference","x0":100,"y0":100}"#).unwrap();
        let r = cmd_verify(Some(&reference), ORACLE_REL_TOL, 0, 1);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.checks.len(), 1);
    }

    #[test]
    fn error_json_shape() {
        let e = parse_spec(r#"{"form":"bancor_v2","x0":100,"y0":100,"A":1}"#).unwrap_err();
        let v: serde_json::Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(v["error"], "DomainError");
        assert!(v["message"].as_str().unwrap().contains("A"));
    }
}
