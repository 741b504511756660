use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::value::RawValue;
use tscalc_core::dsl;
use tscalc_core::inequality::{
    cauchy_schwarz, holder, holder_negative, jensen, jensen_affine, jensen_concave, minkowski, minkowski_negative,
    DEFAULT_GRID,
};
use tscalc_core::{
    check_convexity, id_integral, ir_integral, CheckOptions, Error, InequalityKind, InequalityReport, Interval,
    IntervalFn, Side, TimeScale,
};

#[derive(Parser)]
#[command(name = "tscalc", version, about = "Interval delta integrals and inequality checks on time scales")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jump operators, graininess and classification of a point; the value of --fn there if given.
    Point(PointArgs),
    /// ID or IR delta integral of --fn over [--from, --to].
    Integrate(IntegrateArgs),
    /// Convexity classification or an inequality check.
    Check(CheckArgs),
}

#[derive(Args)]
struct Common {
    /// Time scale, e.g. "interval(-1, 0) u points(1, 3)".
    #[arg(long)]
    scale: String,
    /// Tolerance.
    #[arg(long, env = "TSCALC_TOL", default_value_t = 1e-8)]
    tol: f64,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Window {
    /// Lower end of the window; defaults to the minimum of the scale.
    #[arg(long, allow_hyphen_values = true)]
    from: Option<String>,
    /// Upper end of the window; defaults to the maximum of the scale.
    #[arg(long, allow_hyphen_values = true)]
    to: Option<String>,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    at: String,
    #[arg(long = "fn")]
    func: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Id,
    Ir,
}

#[derive(Args)]
struct IntegrateArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    window: Window,
    #[arg(long, value_enum, default_value = "id")]
    kind: Kind,
    #[arg(long = "fn")]
    func: String,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    window: Window,
    /// convexity, jensen, jensen-concave, jensen-affine, holder, holder-negative,
    /// cauchy-schwarz, minkowski or minkowski-negative.
    #[arg(long)]
    name: String,
    #[arg(long)]
    f: String,
    /// Interval function for Hölder/Minkowski; real expression for Jensen.
    #[arg(long)]
    g: Option<String>,
    /// Real weight expression.
    #[arg(long, default_value = "1")]
    h: String,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Grid size for the convexity check.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Skip the convexity precondition of the Jensen variants.
    #[arg(long)]
    assume_shape: bool,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::DomainCoverage(_) | Error::InvalidScale(_) => 2,
            Error::NonConvergence { .. } => 4,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<tscalc_core::ParseError> for Failure {
    fn from(e: tscalc_core::ParseError) -> Self {
        Failure { code: 2, message: format!("parse error: {e}") }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Seventeen significant digits; non-finite values become `null`.
fn num(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { format!("{x:.16e}") } else { "null".to_owned() };
    RawValue::from_string(text).expect("valid JSON number")
}

#[derive(Serialize)]
struct JsonInterval {
    lo: Box<RawValue>,
    hi: Box<RawValue>,
}

impl From<Interval> for JsonInterval {
    fn from(v: Interval) -> Self {
        JsonInterval { lo: num(v.lo()), hi: num(v.hi()) }
    }
}

#[derive(Serialize)]
struct JsonIntegral {
    value: JsonInterval,
    method: &'static str,
    error_estimate: Box<RawValue>,
    cells: usize,
}

#[derive(Serialize)]
struct JsonCheck {
    name: &'static str,
    lhs: JsonInterval,
    rhs: JsonInterval,
    relation: &'static str,
    margin_lo: Box<RawValue>,
    margin_hi: Box<RawValue>,
    holds: bool,
}

#[derive(Serialize)]
struct JsonConvexity {
    name: &'static str,
    verdict: &'static str,
    decomposition_verdict: &'static str,
    witnesses: Vec<[Box<RawValue>; 3]>,
}

#[derive(Serialize)]
struct JsonPoint {
    t: Box<RawValue>,
    sigma: Box<RawValue>,
    rho: Box<RawValue>,
    mu: Box<RawValue>,
    eta: Box<RawValue>,
    right: &'static str,
    left: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<JsonInterval>,
}

fn side(s: Side) -> &'static str {
    match s {
        Side::Scattered => "scattered",
        Side::Dense => "dense",
        Side::Boundary => "boundary",
    }
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn window(ts: &TimeScale, w: &Window) -> Result<(f64, f64), Failure> {
    let a = w.from.as_deref().map(dsl::parse_const).transpose()?.unwrap_or(ts.min());
    let b = w.to.as_deref().map(dsl::parse_const).transpose()?.unwrap_or(ts.max());
    Ok((a, b))
}

fn point(args: PointArgs) -> Result<(String, u8), Failure> {
    let ts = dsl::scale(&args.common.scale)?;
    let t = ts.require(dsl::parse_const(&args.at)?)?;
    let class = ts.classify(t)?;
    let value = args.func.as_deref().map(|f| dsl::function(f).map_err(Failure::from)).transpose()?;
    let value = value.map(|f| f.eval(t)).transpose()?;
    let (sigma, rho, mu, eta) = (ts.sigma(t)?, ts.rho(t)?, ts.mu(t)?, ts.eta(t)?);
    let out = if args.common.json {
        to_json(&JsonPoint {
            t: num(t),
            sigma: num(sigma),
            rho: num(rho),
            mu: num(mu),
            eta: num(eta),
            right: side(class.right),
            left: side(class.left),
            value: value.map(JsonInterval::from),
        })
    } else {
        let mut s = format!(
            "t = {t}\nsigma = {sigma}\nrho = {rho}\nmu = {mu}\neta = {eta}\nright = {}\nleft = {}",
            side(class.right),
            side(class.left)
        );
        if let Some(v) = value {
            let _ = write!(s, "\nvalue = {v}");
        }
        s
    };
    Ok((out, 0))
}

fn integrate(args: IntegrateArgs) -> Result<(String, u8), Failure> {
    let ts = dsl::scale(&args.common.scale)?;
    let f = dsl::function(&args.func)?;
    let (a, b) = window(&ts, &args.window)?;
    let r = match args.kind {
        Kind::Id => id_integral(&f, &ts, a, b, args.common.tol)?,
        Kind::Ir => ir_integral(&f, &ts, a, b, args.common.tol)?,
    };
    let out = if args.common.json {
        to_json(&JsonIntegral {
            value: r.value.into(),
            method: r.method.name(),
            error_estimate: num(r.error_estimate),
            cells: r.cells_used,
        })
    } else {
        format!(
            "value = {}\nmethod = {}\nerror_estimate = {:e}\ncells = {}",
            r.value,
            r.method.name(),
            r.error_estimate,
            r.cells_used
        )
    };
    Ok((out, 0))
}

fn report_output(r: &InequalityReport, json: bool) -> (String, u8) {
    let code = if r.holds { 0 } else { 1 };
    let out = if json {
        to_json(&JsonCheck {
            name: r.name.name(),
            lhs: r.lhs.into(),
            rhs: r.rhs.into(),
            relation: r.relation.name(),
            margin_lo: num(r.margin_lo),
            margin_hi: num(r.margin_hi),
            holds: r.holds,
        })
    } else {
        format!(
            "{}: {}\nlhs = {}\nrhs = {}\nrelation = {}\nmargin_lo = {:e}\nmargin_hi = {:e}",
            r.name,
            if r.holds { "holds" } else { "violated" },
            r.lhs,
            r.rhs,
            r.relation,
            r.margin_lo,
            r.margin_hi
        )
    };
    (out, code)
}

fn check(args: CheckArgs) -> Result<(String, u8), Failure> {
    let ts = dsl::scale(&args.common.scale)?;
    let f = dsl::function(&args.f)?;
    let (a, b) = window(&ts, &args.window)?;
    let json = args.common.json;

    if args.name == "convexity" {
        let r = check_convexity(&f, &ts, a, b, args.grid)?;
        let out = if json {
            to_json(&JsonConvexity {
                name: "convexity",
                verdict: r.verdict.name(),
                decomposition_verdict: r.decomposition_verdict.name(),
                witnesses: r.witnesses.iter().map(|w| [num(w.x), num(w.y), num(w.alpha)]).collect(),
            })
        } else {
            let mut s = format!("convexity: {}\ndecomposition: {}", r.verdict, r.decomposition_verdict);
            for w in &r.witnesses {
                let _ = write!(s, "\nwitness x = {}, y = {}, alpha = {}", w.x, w.y, w.alpha);
            }
            s
        };
        return Ok((out, 0));
    }

    let kind = InequalityKind::from_name(&args.name).ok_or_else(|| usage(format!("unknown check `{}`", args.name)))?;
    let opts = CheckOptions { tolerance: args.common.tol, grid: args.grid, assume_shape: args.assume_shape };
    let h = dsl::parse_expr(&args.h)?;
    let g_text = args.g.as_deref().ok_or_else(|| usage(format!("{kind} needs --g")))?;
    let p = || args.p.ok_or_else(|| usage(format!("{kind} needs --p")));
    let report = match kind {
        InequalityKind::Jensen | InequalityKind::JensenConcave | InequalityKind::JensenAffine => {
            let g = dsl::parse_expr(g_text)?;
            let run = match kind {
                InequalityKind::Jensen => jensen,
                InequalityKind::JensenConcave => jensen_concave,
                _ => jensen_affine,
            };
            run(&f, &g, &h, &ts, a, b, opts)?
        }
        _ => {
            let g: IntervalFn = dsl::function(g_text)?;
            match kind {
                InequalityKind::Holder => holder(&f, &g, &h, p()?, args.q, &ts, a, b, opts)?,
                InequalityKind::HolderNegative => holder_negative(&f, &g, &h, p()?, args.q, &ts, a, b, opts)?,
                InequalityKind::CauchySchwarz => cauchy_schwarz(&f, &g, &h, &ts, a, b, opts)?,
                InequalityKind::Minkowski => minkowski(&f, &g, &h, p()?, &ts, a, b, opts)?,
                _ => minkowski_negative(&f, &g, &h, p()?, &ts, a, b, opts)?,
            }
        }
    };
    Ok(report_output(&report, json))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Point(a) => point(a),
        Command::Integrate(a) => integrate(a),
        Command::Check(a) => check(a),
    };
    match result {
        Ok((out, code)) => {
            println!("{out}");
            ExitCode::from(code)
        }
        Err(fail) => {
            eprintln!("error: {}", fail.message);
            ExitCode::from(fail.code)
        }
    }
}
