//! The `sep` command-line front end.
//!
//! Every command emits a JSON report. Without `--out` the report goes to
//! standard output; with `--out` it is written to that file (atomically) and
//! a one-line summary is printed instead.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bounds::{apply_rules, describe_group, exact_value_lookup, BoundCertificate, GroupDescriptor};
use crate::cases::{list_cases, run_case, CaseParams, CATALOG};
use crate::config::{parse_module_str, Module};
use crate::error::{Error, Result};
use crate::invariants::{invariant_slice, invariant_slice_parametric, invariant_slices_up_to};
use crate::reps::{enumerate_group, Representation};
use crate::scalars::Field;
use crate::separation::{beta_sep_search, check_separating_on_points, BetaReport, SearchOptions, SeparatingSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_WITNESS: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sep", version, about = "Separating invariants: slices, witnesses, degree bounds")]
pub struct Cli {
    /// write the JSON report here and print a summary instead
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// worker threads
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// largest number of points enumerated over one field
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub cap_points: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Do the invariants of degree <= d separate all orbits over F_q?
    Check {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        degree: u32,
        /// field order q (defaults to the module's field)
        #[arg(long)]
        field: Option<String>,
    },
    /// Search for the separating degree: certified lower bound and evidence.
    Beta {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, default_value_t = 12)]
        dmax: u32,
        /// evidence field orders; repeatable
        #[arg(long)]
        field: Vec<String>,
    },
    /// Fixed-point and parametric witness constructions.
    Witness {
        #[arg(long, value_enum)]
        case: WitnessCase,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Invariant slices.
    Invariants {
        #[command(subcommand)]
        command: InvariantsCommand,
    },
    /// Degree-bound calculus.
    Bounds {
        #[command(subcommand)]
        command: BoundsCommand,
    },
    /// Reproduce the catalogued results.
    Paper {
        #[command(subcommand)]
        command: PaperCommand,
    },
    /// List the verification cases.
    List,
}

#[derive(Debug, Subcommand)]
pub enum InvariantsCommand {
    /// Basis of the degree-d invariant slice.
    Basis {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        degree: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Best upper and lower bounds with replayable certificates.
    Compute {
        #[arg(long, conflicts_with = "module", required_unless_present = "module")]
        descriptor: Option<PathBuf>,
        /// finite module whose group is described automatically (order <= 24)
        #[arg(long)]
        module: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PaperCommand {
    /// Run one case, or `all`.
    Verify {
        case: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// List the verification cases.
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum WitnessCase {
    PGroup,
    Cyclic,
    Dihedral,
    Additive,
}

#[derive(Clone, Copy, Debug, Default, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub n: Option<u64>,
}

impl From<ParamArgs> for CaseParams {
    fn from(a: ParamArgs) -> Self {
        CaseParams { r: a.r, p: a.p, k: a.k, n: a.n }
    }
}

/// Exit code for a failed command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded(_) | Error::DegreeLimit(_) => EXIT_CAP,
        Error::WitnessFailed(_) | Error::Internal(_) => EXIT_WITNESS,
        _ => EXIT_CONFIG,
    }
}

struct Outcome {
    report: Value,
    summary: String,
    code: i32,
}

/// Parses `args` (including the program name) and runs the command against
/// the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", text);
                EXIT_OK
            } else {
                let _ = write!(err, "{}", text);
                EXIT_CONFIG
            };
        }
    };
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::Config(format!("thread pool: {}", e))),
        },
        None => execute(&cli),
    };
    match result.and_then(|o| deliver(&cli, o, out)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            exit_code(&e)
        }
    }
}

fn deliver(cli: &Cli, o: Outcome, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Config(format!("cannot write output: {}", e));
    match &cli.out {
        Some(path) if !is_case_directory(cli) => {
            write_atomic(path, &o.report)?;
            writeln!(out, "{}; report written to {}", o.summary, path.display()).map_err(io)?;
        }
        Some(_) => writeln!(out, "{}", o.summary).map_err(io)?,
        None => writeln!(out, "{}", pretty(&o.report)).map_err(io)?,
    }
    Ok(o.code)
}

fn is_case_directory(cli: &Cli) -> bool {
    matches!(&cli.command, Command::Paper { command: PaperCommand::Verify { case, .. } } if case == "all")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

/// Writes through a sibling temporary file and a rename.
fn write_atomic(path: &Path, v: &Value) -> Result<()> {
    let io = |e: std::io::Error| Error::Config(format!("cannot write {}: {}", path.display(), e));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, pretty(v) + "\n").map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn read_module(path: &Path) -> Result<Module> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {}", path.display(), e)))?;
    parse_module_str(&text)
}

fn finite_module(path: &Path) -> Result<Representation> {
    match read_module(path)? {
        Module::Finite(r) => Ok(r),
        Module::Parametric(_) => Err(Error::Config("this command needs a finite group module".into())),
    }
}

/// `--field` value: a field order `q`, or `Q`/`0` for the rationals.
pub fn parse_field(text: &str) -> Result<Field> {
    match text.trim() {
        "Q" | "q" | "0" => Ok(Field::rationals()),
        t => {
            let q: u64 = t.parse().map_err(|_| Error::Config(format!("field must be an order q or Q, got '{}'", t)))?;
            Field::of_order(q).map_err(|e| Error::Config(e.to_string()))
        }
    }
}

fn evidence_field(base: &Field, text: &str) -> Result<Field> {
    let f = parse_field(text)?;
    if f.order().is_none() || f.characteristic() != base.characteristic() {
        return Err(Error::Config(format!("{} is not a finite extension of {}", f.name(), base.name())));
    }
    Ok(f)
}

fn timing(start: Instant) -> Value {
    json!({"elapsed_ms": start.elapsed().as_millis()})
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Check { module, degree, field } => check(cli, module, *degree, field.as_deref()),
        Command::Beta { module, dmax, field } => beta(cli, module, *dmax, field),
        Command::Witness { case, params } => witness(*case, params),
        Command::Invariants { command: InvariantsCommand::Basis { module, degree } } => basis(module, *degree),
        Command::Bounds { command: BoundsCommand::Compute { descriptor, module } } => {
            bounds(descriptor.as_deref(), module.as_deref())
        }
        Command::Paper { command: PaperCommand::Verify { case, params } } => verify(cli, case, params),
        Command::Paper { command: PaperCommand::List } | Command::List => Ok(catalog()),
    }
}

fn check(cli: &Cli, module: &Path, degree: u32, field: Option<&str>) -> Result<Outcome> {
    let start = Instant::now();
    let rep = finite_module(module)?;
    let f = match field {
        Some(t) => evidence_field(rep.field(), t)?,
        None if rep.field().order().is_some() => rep.field().clone(),
        None => return Err(Error::Config("a module over Q needs --field q".into())),
    };
    let group = enumerate_group(&rep, SearchOptions::default().group_cap)?;
    let slices = invariant_slices_up_to(&rep, degree)?;
    let set = SeparatingSet::from_slices(rep.field(), rep.dim(), &slices)?;
    let report = check_separating_on_points(&set, &group, &f, cli.cap_points)?;
    let witness = report.witness.clone().map(|mut w| {
        w.degree = degree;
        w
    });
    let (verdict, summary) = match &witness {
        Some(w) => (
            "witness",
            format!("check: invariants of degree <= {} do not separate over {}; separating degree >= {}", degree, f.name(), w.certified_lower()),
        ),
        None => ("separates", format!("check: invariants of degree <= {} separate all {} orbits over {}", degree, report.orbits, f.name())),
    };
    let out = json!({
        "command": "check",
        "field": f.name(),
        "degree": degree,
        "group_order": group.order(),
        "invariants": set.len(),
        "points": report.points,
        "orbits": report.orbits,
        "verdict": verdict,
        "certified_lower": witness.as_ref().map(|w| w.certified_lower()),
        "evidence_upper": if witness.is_none() { Some(degree) } else { None },
        "theorem_upper": group.order(),
        "witness": witness.as_ref().map(|w| w.to_json()),
        "timing": timing(start),
    });
    let code = if witness.is_some() { EXIT_WITNESS } else { EXIT_OK };
    Ok(Outcome { report: out, summary, code })
}

pub fn beta_json(r: &BetaReport) -> Value {
    json!({
        "command": "beta",
        "group_order": r.group_order,
        "fields": r.fields.iter().map(Field::name).collect::<Vec<_>>(),
        "verdict": r.verdict(),
        "certified_lower": r.certified_lower,
        "evidence_upper": r.evidence_upper,
        "theorem_upper": r.theorem_upper,
        "witness": r.witness.as_ref().map(|w| w.to_json()),
        "degrees": r.degrees,
        "timing": {"elapsed_ms": r.elapsed.as_millis()},
    })
}

fn beta(cli: &Cli, module: &Path, dmax: u32, fields: &[String]) -> Result<Outcome> {
    let rep = finite_module(module)?;
    let fields = if fields.is_empty() {
        None
    } else {
        Some(fields.iter().map(|t| evidence_field(rep.field(), t)).collect::<Result<Vec<_>>>()?)
    };
    let opts = SearchOptions { dmax, fields, cap_points: cli.cap_points, ..Default::default() };
    let r = beta_sep_search(&rep, &opts)?;
    let summary = format!(
        "beta: |G| = {}, certified lower {}, evidence upper {}, verdict {}",
        r.group_order,
        r.certified_lower,
        r.evidence_upper.map(|d| d.to_string()).unwrap_or_else(|| "none".into()),
        serde_json::to_value(r.verdict()).expect("enum").as_str().unwrap_or_default()
    );
    Ok(Outcome { report: beta_json(&r), summary, code: EXIT_OK })
}

fn case_outcome(id: &str, params: &CaseParams) -> Result<Outcome> {
    let r = run_case(id, params)?;
    let failed = r.checks.iter().filter(|c| !c.passed).count();
    let summary = if failed == 0 {
        format!("{}: pass ({} checks)", r.id, r.checks.len())
    } else {
        format!("{}: FAIL ({} of {} checks failed)", r.id, failed, r.checks.len())
    };
    let code = if failed == 0 { EXIT_OK } else { EXIT_WITNESS };
    Ok(Outcome { report: r.to_json(), summary, code })
}

fn witness(case: WitnessCase, params: &ParamArgs) -> Result<Outcome> {
    let id = match case {
        WitnessCase::PGroup => "p-group",
        WitnessCase::Cyclic => "cyclic",
        WitnessCase::Dihedral => "dihedral",
        WitnessCase::Additive if params.p == Some(0) => "additive-char-0",
        WitnessCase::Additive => "additive-char-p",
    };
    let mut p = CaseParams::from(*params);
    if id == "additive-char-p" && p.p.is_none() {
        p.p = Some(2);
    }
    case_outcome(id, &p)
}

fn basis(module: &Path, degree: u32) -> Result<Outcome> {
    let start = Instant::now();
    let m = read_module(module)?;
    let slice = match &m {
        Module::Finite(rep) => invariant_slice(rep, degree)?,
        Module::Parametric(act) => invariant_slice_parametric(act, degree)?,
    };
    let polys: Vec<String> = slice.basis().iter().map(|p| p.to_text()).collect();
    let summary = format!("invariants: degree {} slice has dimension {}", degree, slice.dimension());
    let report = json!({
        "degree": degree,
        "field": m.field().name(),
        "nvars": m.dim(),
        "dimension": slice.dimension(),
        "basis": polys,
        "timing": timing(start),
    });
    Ok(Outcome { report, summary, code: EXIT_OK })
}

fn certificate_json(c: &BoundCertificate) -> Value {
    json!({"bound": c.bound, "certificate": c.chain})
}

fn bounds(descriptor: Option<&Path>, module: Option<&Path>) -> Result<Outcome> {
    let start = Instant::now();
    let desc = match (descriptor, module) {
        (Some(path), _) => {
            let text =
                fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {}", path.display(), e)))?;
            serde_json::from_str::<GroupDescriptor>(&text)
                .map_err(|e| Error::Config(format!("malformed descriptor: {}", e)))?
        }
        (None, Some(path)) => {
            let rep = finite_module(path)?;
            let group = enumerate_group(&rep, 1000)?;
            describe_group(&group, rep.field().characteristic())?
        }
        (None, None) => return Err(Error::Config("bounds compute needs --descriptor or --module".into())),
    };
    let r = apply_rules(&desc)?;
    let exact = exact_value_lookup(&desc);
    let summary = format!("bounds: {} in characteristic {}: {} <= beta_sep <= {}", desc.label(), desc.characteristic, r.lower.bound, r.upper.bound);
    let report = json!({
        "group": desc.label(),
        "order": desc.order,
        "characteristic": desc.characteristic,
        "upper": certificate_json(&r.upper),
        "lower": certificate_json(&r.lower),
        "exact": exact.as_ref().map(|(v, step)| json!({"value": v, "certificate": [step]})),
        "timing": timing(start),
    });
    Ok(Outcome { report, summary, code: EXIT_OK })
}

fn verify(cli: &Cli, case: &str, params: &ParamArgs) -> Result<Outcome> {
    if case != "all" {
        return case_outcome(case, &CaseParams::from(*params));
    }
    let start = Instant::now();
    let outcomes: Vec<(String, Result<Outcome>)> =
        CATALOG.par_iter().map(|c| (c.id.to_string(), case_outcome(c.id, &CaseParams::default()))).collect();
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cannot create {}: {}", dir.display(), e)))?;
    }
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    let mut code = EXIT_OK;
    for (id, o) in outcomes {
        let o = o?;
        if let Some(dir) = &cli.out {
            write_atomic(&dir.join(format!("{}.json", id)), &o.report)?;
        }
        code = code.max(o.code);
        lines.push(o.summary);
        reports.push(o.report);
    }
    let passed = reports.iter().filter(|r| r["passed"] == json!(true)).count();
    lines.push(format!("{} of {} cases pass", passed, reports.len()));
    let report = json!({"cases": reports, "passed": passed, "total": CATALOG.len(), "timing": timing(start)});
    Ok(Outcome { report, summary: lines.join("\n"), code })
}

fn catalog() -> Outcome {
    let cases = list_cases();
    let summary = cases.iter().map(|c| format!("{:<16} {}", c.id, c.title)).collect::<Vec<_>>().join("\n");
    Outcome { report: json!(cases), summary, code: EXIT_OK }
}
