//! Command-line front end. `run` parses arguments, dispatches to the library
//! and returns the process exit code: 0 on success, 1 on input errors, 3 when
//! an identity check or the sign calibration fails.

use crate::algebra::format_rational;
use crate::arrows::{arrow_compose, arrow_invert, g3_compose, g3_invert, mobius_split, schwarzian_defect, G3Jet};
use crate::catalog::{self, Kind};
use crate::checks::{self, Tally};
use crate::field::Stencil;
use crate::forms::identities::{
    chern_simons_report, identity_report, BackendChoice, ReportConfig, ReportError, Residuals,
};
use crate::frames::ChartSpec;
use crate::io::{self, IoError};
use crate::jetcore::{compose_truncated, invert_truncated, project_order, TruncatedMap};
use crate::liepair::{effective_check, filtration_of, order_of, relative_adjoint, LieAlgebra, Order, Subalgebra};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CHECK: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "flatcheck", version, about = "Jet groupoids, Spencer brackets, parallelism curvature and Lie pair orders")]
pub struct Cli {
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Geometry of a frame chart.
    Geom {
        #[command(subcommand)]
        command: GeomCommand,
    },
    /// Chern–Simons identity and closedness of the odd torsion traces.
    ChernSimons(ChartArgs),
    /// Truncated jets (Taylor polynomials at the origin).
    Jet {
        #[command(subcommand)]
        command: JetCommand,
    },
    /// Arrows of the jet groupoid and the order-three jet group of the line.
    Groupoid {
        #[command(subcommand)]
        command: GroupoidCommand,
    },
    /// Spencer operator and bracket property suite.
    Spencer {
        #[command(subcommand)]
        command: SpencerCommand,
    },
    /// Filtration and order of a Lie pair.
    Liepair {
        #[command(subcommand)]
        command: LiepairCommand,
    },
    /// Built-in charts and Lie pairs.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand, Debug)]
enum GeomCommand {
    /// Residual report for all identities plus the homogeneity verdict.
    Report(ChartArgs),
}

#[derive(Subcommand, Debug)]
enum JetCommand {
    /// `outer ∘ inner`.
    Compose { outer: PathBuf, inner: PathBuf },
    Invert { jet: PathBuf },
    Project {
        jet: PathBuf,
        #[arg(long)]
        order: u32,
    },
}

#[derive(Subcommand, Debug)]
enum GroupoidCommand {
    /// Product, inverses and Schwarzian defects in G3(1); `a` and `b` are `a1,a2,a3`.
    G3 {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: Option<String>,
    },
    /// `second ∘ first` for arrow documents.
    Compose { second: PathBuf, first: PathBuf },
    Invert { arrow: PathBuf },
}

#[derive(Subcommand, Debug)]
enum SpencerCommand {
    /// Randomized checks of D, the brackets and prolongation.
    Check {
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

#[derive(Subcommand, Debug)]
enum LiepairCommand {
    Order(PairArgs),
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StencilArg {
    Five,
    Seven,
}

#[derive(Args, Debug)]
struct ChartArgs {
    /// Name of a built-in chart (see `catalog list`).
    #[arg(long, conflicts_with = "chart", required_unless_present = "chart")]
    builtin: Option<String>,
    /// Chart JSON file.
    #[arg(long)]
    chart: Option<PathBuf>,
    /// Homogeneity threshold for max|R|.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Identity threshold on the numeric backend.
    #[arg(long, default_value_t = 1e-4)]
    tol2: f64,
    /// Sample points per axis.
    #[arg(long, default_value_t = 5)]
    grid: usize,
    /// First-derivative finite-difference step.
    #[arg(long, default_value_t = 1e-4)]
    fd_step: f64,
    /// Step for nested (second and higher) derivatives.
    #[arg(long, default_value_t = 1e-3)]
    fd_step2: f64,
    #[arg(long, value_enum, default_value_t = StencilArg::Seven)]
    stencil: StencilArg,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Name of a built-in Lie pair.
    #[arg(long, conflicts_with = "pair", required_unless_present = "pair")]
    builtin: Option<String>,
    /// Lie pair JSON file.
    #[arg(long)]
    pair: Option<PathBuf>,
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn input(message: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_INPUT, message: message.to_string() }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn in_file(path: &PathBuf, e: IoError) -> Failure {
    input(format!("{}: {e}", path.display()))
}

fn read_json(path: &PathBuf) -> Result<serde_json::Value, Failure> {
    io::parse_json(&read(path)?).map_err(|e| in_file(path, e))
}

/// Output of a successful command: the document and the exit code it maps to.
struct Output {
    json: String,
    code: i32,
}

impl Output {
    fn ok<T: Serialize>(doc: &T) -> Self {
        Output { json: io::to_json(doc), code: EXIT_OK }
    }
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.json).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(out.json.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => out.code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    EXIT_INPUT
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Geom { command: GeomCommand::Report(args) } => geom_report(args),
        Command::ChernSimons(args) => chern_simons(args),
        Command::Jet { command } => jet(command),
        Command::Groupoid { command } => groupoid(command),
        Command::Spencer { command: SpencerCommand::Check { cases } } => spencer_check(cli.seed, *cases),
        Command::Liepair { command: LiepairCommand::Order(args) } => liepair_order(args),
        Command::Catalog { command: CatalogCommand::List } => Ok(Output::ok(&catalog_list())),
    }
}

// ---------------------------------------------------------------------------
// geometry

fn backend_from_env() -> Result<BackendChoice, Failure> {
    match std::env::var("FLATCHECK_BACKEND") {
        Err(_) => Ok(BackendChoice::Auto),
        Ok(v) => match v.as_str() {
            "" | "auto" => Ok(BackendChoice::Auto),
            "exact" => Ok(BackendChoice::Exact),
            "numeric" => Ok(BackendChoice::Numeric),
            other => Err(input(format!("FLATCHECK_BACKEND must be exact, numeric or auto, got `{other}`"))),
        },
    }
}

fn positive(name: &str, x: f64) -> Result<(), Failure> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(input(format!("--{name} must be positive")))
    }
}

fn config(args: &ChartArgs) -> Result<ReportConfig, Failure> {
    positive("tol", args.tol)?;
    positive("tol2", args.tol2)?;
    positive("fd-step", args.fd_step)?;
    positive("fd-step2", args.fd_step2)?;
    if args.grid < 2 {
        return Err(input("--grid must be at least 2"));
    }
    Ok(ReportConfig {
        tol: args.tol,
        tol2: args.tol2,
        grid: args.grid,
        step: args.fd_step,
        nested_step: args.fd_step2,
        stencil: match args.stencil {
            StencilArg::Five => Stencil::Five,
            StencilArg::Seven => Stencil::Seven,
        },
        backend: backend_from_env()?,
    })
}

fn chart_spec(args: &ChartArgs) -> Result<ChartSpec, Failure> {
    match (&args.builtin, &args.chart) {
        (Some(name), _) => catalog::chart(name).map_err(input),
        (None, Some(path)) => io::chart_from_value(&read_json(path)?).map_err(|e| in_file(path, e)),
        (None, None) => Err(input("one of --builtin or --chart is required")),
    }
}

#[derive(Serialize)]
struct CalibrationDoc {
    error: &'static str,
    chart: String,
    reference_sign: i32,
    plus: io::ResidualsDoc,
    minus: io::ResidualsDoc,
}

fn report_failure(e: ReportError) -> Result<Output, Failure> {
    match e {
        ReportError::Calibration { chart, reference, plus, minus } => {
            let doc = CalibrationDoc {
                error: "calibration",
                chart,
                reference_sign: reference,
                plus: residuals(&plus),
                minus: residuals(&minus),
            };
            Ok(Output { json: io::to_json(&doc), code: EXIT_CHECK })
        }
        other => Err(input(other)),
    }
}

fn residuals(r: &Residuals) -> io::ResidualsDoc {
    io::residuals_doc(r)
}

fn geom_report(args: &ChartArgs) -> Result<Output, Failure> {
    let cfg = config(args)?;
    let spec = chart_spec(args)?;
    match identity_report(&spec, &cfg) {
        Ok(r) => Ok(Output { json: io::to_json(&io::report_doc(&r)), code: if r.identities_hold() { EXIT_OK } else { EXIT_CHECK } }),
        Err(e) => report_failure(e),
    }
}

fn chern_simons(args: &ChartArgs) -> Result<Output, Failure> {
    let cfg = config(args)?;
    let spec = chart_spec(args)?;
    match chern_simons_report(&spec, &cfg) {
        Ok(c) => {
            let closed = c.secondary.iter().all(|s| s.3 != Some(false));
            let code = if c.report.identities_hold() && closed { EXIT_OK } else { EXIT_CHECK };
            Ok(Output { json: io::to_json(&io::chern_simons_doc(&c)), code })
        }
        Err(e) => report_failure(e),
    }
}

// ---------------------------------------------------------------------------
// jets and arrows

fn read_jet(path: &PathBuf) -> Result<TruncatedMap, Failure> {
    io::jet_from_value(&read_json(path)?, "").map_err(|e| in_file(path, e))
}

fn jet(command: &JetCommand) -> Result<Output, Failure> {
    let result = match command {
        JetCommand::Compose { outer, inner } => compose_truncated(&read_jet(outer)?, &read_jet(inner)?),
        JetCommand::Invert { jet } => invert_truncated(&read_jet(jet)?),
        JetCommand::Project { jet, order } => project_order(&read_jet(jet)?, *order),
    };
    Ok(Output::ok(&io::jet_doc(&result.map_err(input)?)))
}

fn parse_g3(text: &str, flag: &str) -> Result<G3Jet, Failure> {
    let parts: Vec<_> = text.split(',').map(crate::algebra::parse_rational).collect();
    match parts.as_slice() {
        [Some(a1), Some(a2), Some(a3)] => {
            G3Jet::new(a1.clone(), a2.clone(), a3.clone()).map_err(|e| input(format!("--{flag}: {e}")))
        }
        _ => Err(input(format!("--{flag} expects three rationals `a1,a2,a3`, got `{text}`"))),
    }
}

#[derive(Serialize)]
struct G3Doc {
    a1: String,
    a2: String,
    a3: String,
}

fn g3_doc(g: &G3Jet) -> G3Doc {
    G3Doc { a1: format_rational(&g.a1), a2: format_rational(&g.a2), a3: format_rational(&g.a3) }
}

#[derive(Serialize)]
struct G3ElementDoc {
    jet: G3Doc,
    inverse: G3Doc,
    mobius_split: G3Doc,
    schwarzian_defect: String,
}

fn g3_element(g: &G3Jet) -> G3ElementDoc {
    G3ElementDoc {
        jet: g3_doc(g),
        inverse: g3_doc(&g3_invert(g)),
        mobius_split: g3_doc(&mobius_split(&g.a1, &g.a2).expect("a1 != 0")),
        schwarzian_defect: format_rational(&schwarzian_defect(g)),
    }
}

#[derive(Serialize)]
struct G3Report {
    a: G3ElementDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<G3ElementDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    product: Option<G3ElementDoc>,
}

fn read_arrow(path: &PathBuf) -> Result<crate::arrows::Arrow, Failure> {
    io::arrow_from_value(&read_json(path)?, "").map_err(|e| in_file(path, e))
}

fn groupoid(command: &GroupoidCommand) -> Result<Output, Failure> {
    match command {
        GroupoidCommand::G3 { a, b } => {
            let a = parse_g3(a, "a")?;
            let b = b.as_deref().map(|t| parse_g3(t, "b")).transpose()?;
            let product = b.as_ref().map(|b| g3_element(&g3_compose(&a, b)));
            Ok(Output::ok(&G3Report { a: g3_element(&a), b: b.as_ref().map(g3_element), product }))
        }
        GroupoidCommand::Compose { second, first } => {
            let c = arrow_compose(&read_arrow(second)?, &read_arrow(first)?).map_err(input)?;
            Ok(Output::ok(&io::arrow_doc(&c)))
        }
        GroupoidCommand::Invert { arrow } => Ok(Output::ok(&io::arrow_doc(&arrow_invert(&read_arrow(arrow)?).map_err(input)?))),
    }
}

// ---------------------------------------------------------------------------
// suites

#[derive(Serialize)]
struct SuiteDoc {
    seed: u64,
    checks: Vec<Tally>,
    passed: bool,
}

fn spencer_check(seed: u64, cases: usize) -> Result<Output, Failure> {
    let checks = checks::spencer_suite(seed, cases);
    let passed = checks::all_passed(&checks);
    Ok(Output { json: io::to_json(&SuiteDoc { seed, checks, passed }), code: if passed { EXIT_OK } else { EXIT_CHECK } })
}

fn rationals(v: &[crate::algebra::Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Serialize)]
struct StageDoc {
    stage: usize,
    dim: usize,
    basis: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct LiePairDoc {
    pair: String,
    dim_g: usize,
    dim_h: usize,
    filtration: Vec<StageDoc>,
    order: serde_json::Value,
    effective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    ideal_in_h: Option<Vec<Vec<String>>>,
    complement: Vec<usize>,
    relative_adjoint: Vec<Vec<Vec<String>>>,
}

fn pair_doc(name: &str, g: &LieAlgebra, h: &Subalgebra) -> LiePairDoc {
    let filtration = filtration_of(g, h)
        .iter()
        .enumerate()
        .map(|(stage, s)| StageDoc { stage, dim: s.dim(), basis: s.basis().iter().map(|b| rationals(b)).collect() })
        .collect();
    let order = match order_of(g, h) {
        Order::Finite(k) => serde_json::Value::from(k),
        Order::Ineffective(_) => serde_json::Value::from("ineffective"),
    };
    let witness = effective_check(g, h).err();
    let (rho, complement) = relative_adjoint(g, h);
    LiePairDoc {
        pair: name.to_string(),
        dim_g: g.dim(),
        dim_h: h.dim(),
        filtration,
        order,
        effective: witness.is_none(),
        ideal_in_h: witness.map(|w| w.basis().iter().map(|b| rationals(b)).collect()),
        complement,
        relative_adjoint: rho.matrices().iter().map(|m| m.iter().map(|r| rationals(r)).collect()).collect(),
    }
}

fn liepair_order(args: &PairArgs) -> Result<Output, Failure> {
    let (name, (g, h)) = match (&args.builtin, &args.pair) {
        (Some(name), _) => (name.clone(), catalog::lie_pair(name).map_err(input)?),
        (None, Some(path)) => (path.display().to_string(), io::lie_pair_from_value(&read_json(path)?).map_err(|e| in_file(path, e))?),
        (None, None) => return Err(input("one of --builtin or --pair is required")),
    };
    Ok(Output::ok(&pair_doc(&name, &g, &h)))
}

// ---------------------------------------------------------------------------
// catalog

#[derive(Serialize)]
struct FactDoc {
    fact: String,
    value: String,
    evidence: &'static str,
    #[serde(skip_serializing_if = "str::is_empty")]
    note: &'static str,
}

#[derive(Serialize)]
struct EntryDoc {
    name: &'static str,
    kind: &'static str,
    parameters: std::collections::BTreeMap<&'static str, String>,
    numeric_only: bool,
    facts: Vec<FactDoc>,
}

fn catalog_list() -> Vec<EntryDoc> {
    catalog::entries()
        .into_iter()
        .map(|e| EntryDoc {
            name: e.name,
            kind: match e.kind {
                Kind::Chart => "chart",
                Kind::LiePair => "liepair",
            },
            parameters: e.parameters.into_iter().collect(),
            numeric_only: e.numeric_only,
            facts: e
                .facts
                .iter()
                .map(|(f, ev)| {
                    let (fact, value) = f.describe();
                    FactDoc { fact, value, evidence: ev.kind(), note: ev.note() }
                })
                .collect(),
        })
        .collect()
}
