//! The `coupling` command: checks, builds and transforms geometric data read
//! from JSON manifests.
//!
//! Exit codes: 0 every check passed, 1 a mathematical check failed, 2 the
//! manifest or arguments are invalid, 3 the input is degenerate.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use coupling_dirac::constructions::{cartan_data, chb_data, yang_mills_data, ConstructionError};
use coupling_dirac::coupling::{
    build_dirac, check_casimir_complex, check_integrability, decompose_coupling,
    restrict_to_fiber, verify_closure, verify_isotropy, CheckReport, CouplingError,
};
use coupling_dirac::manifest::{parse_fiber_point, Manifest, ManifestError};

#[derive(Parser, Debug)]
#[command(name = "coupling", version, about = "Coupling Dirac structures on Poisson fiber bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Path to the JSON manifest.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the four integrability conditions (and the Casimir complex when
    /// the manifest lists Casimirs).
    Check(Common),
    /// Print the generators of the coupling Dirac structure.
    Build(Common),
    /// Build the Dirac structure and verify isotropy and Courant closure.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Also check the fiber bivector frozen at this base point, e.g. "x1=0, x2=1/2".
        #[arg(long)]
        fiber_point: Option<String>,
    },
    /// Build geometric data from a construction and print it as a manifest.
    Construct {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        construct_kind: ConstructKind,
    },
    /// Split the manifest's `bivector` into geometric data.
    Decompose(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConstructKind {
    YangMills,
    Cartan,
    Chb,
}

/// Input that is well-formed but too degenerate for the operation.
#[derive(Debug)]
struct Degenerate(String);

impl fmt::Display for Degenerate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Degenerate {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ErrorKind {
    Manifest,
    Degenerate,
}

impl ErrorKind {
    fn code(self) -> i32 {
        match self {
            ErrorKind::Manifest => 2,
            ErrorKind::Degenerate => 3,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Manifest => "manifest",
            ErrorKind::Degenerate => "degenerate",
        }
    }
}

fn coupling_kind(e: &CouplingError) -> ErrorKind {
    match e {
        CouplingError::Degenerate { .. }
        | CouplingError::NotTransverse { .. }
        | CouplingError::NonCasimir { .. } => ErrorKind::Degenerate,
        _ => ErrorKind::Manifest,
    }
}

fn classify(err: &anyhow::Error) -> ErrorKind {
    for cause in err.chain() {
        if cause.is::<Degenerate>() {
            return ErrorKind::Degenerate;
        }
        if let Some(e) = cause.downcast_ref::<CouplingError>() {
            return coupling_kind(e);
        }
        match cause.downcast_ref::<ManifestError>() {
            Some(ManifestError::Data(e)) => return coupling_kind(e),
            Some(ManifestError::Construction(ConstructionError::Coupling(e))) => {
                return coupling_kind(e)
            }
            _ => {}
        }
    }
    ErrorKind::Manifest
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct GeneratorLine {
    label: String,
    vector: String,
    form: String,
}

#[derive(Serialize)]
struct BuildReport {
    generators: Vec<GeneratorLine>,
}

enum Output {
    Report(CheckReport),
    Build(BuildReport),
    Manifest(Manifest),
}

fn load(path: &PathBuf) -> Result<Manifest> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Manifest::from_json(&text)?)
}

fn check(m: &Manifest) -> Result<Output> {
    let data = m.geometric_data()?;
    let mut report = check_integrability(&data);
    if m.casimirs.is_some() {
        report = report.merged(check_casimir_complex(&data, &m.casimir_functions()?)?);
    }
    Ok(Output::Report(report))
}

fn build(m: &Manifest) -> Result<Output> {
    let data = m.geometric_data()?;
    let names = data.names();
    let l = build_dirac(&data);
    let generators = l
        .generators()
        .iter()
        .map(|g| GeneratorLine {
            label: g.label.clone(),
            vector: g.section.vf.render(&names),
            form: g.section.form.render(&names),
        })
        .collect();
    Ok(Output::Build(BuildReport { generators }))
}

fn verify(m: &Manifest, fiber_point: Option<&str>) -> Result<Output> {
    let data = m.geometric_data()?;
    let l = build_dirac(&data);
    let mut report = verify_isotropy(&l).merged(verify_closure(&l));
    if let Some(text) = fiber_point {
        let point = parse_fiber_point(text)?;
        let fp = data.patch();
        for name in point.keys() {
            let is_base = fp
                .patch()
                .index_of(name)
                .is_some_and(|i| fp.base_position(i).is_some());
            if !is_base {
                return Err(ManifestError::FiberPoint(text.to_string()).into());
            }
        }
        report = report.merged(restrict_to_fiber(&data, &point)?.jacobi_report());
    }
    Ok(Output::Report(report))
}

fn construct(m: &Manifest, kind: ConstructKind) -> Result<Output> {
    let data = match kind {
        ConstructKind::YangMills => yang_mills_data(&m.ymh_setup()?)?,
        ConstructKind::Cartan => cartan_data(&m.cartan_setup()?)?,
        ConstructKind::Chb => {
            let setup = m.cartan_setup()?;
            let angles = m.averaged_angles(&setup.patch)?;
            chb_data(&setup, &angles)?
        }
    };
    Ok(Output::Manifest(Manifest::from_data(&data)))
}

fn decompose(m: &Manifest) -> Result<Output> {
    let (fp, bivector) = m.full_bivector()?;
    let d = decompose_coupling(&bivector, &fp)?;
    let names = fp.names();
    match d.data.to_ring() {
        Some(data) => Ok(Output::Manifest(Manifest::from_data(&data))),
        None => {
            let dens: Vec<String> = d.pivot_denominators.iter().map(|e| e.render(&names)).collect();
            Err(Degenerate(format!(
                "decomposition has non-polynomial coefficients; denominators: {}",
                dens.join(", ")
            ))
            .into())
        }
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    let common = match &cli.command {
        Command::Check(c) | Command::Build(c) | Command::Decompose(c) => c,
        Command::Verify { common, .. } | Command::Construct { common, .. } => common,
    };
    let m = load(&common.manifest)?;
    match &cli.command {
        Command::Check(_) => check(&m),
        Command::Build(_) => build(&m),
        Command::Verify { fiber_point, .. } => verify(&m, fiber_point.as_deref()),
        Command::Construct { construct_kind, .. } => construct(&m, *construct_kind),
        Command::Decompose(_) => decompose(&m),
    }
}

fn report_format(cli: &Cli) -> ReportFormat {
    match &cli.command {
        Command::Check(c) | Command::Build(c) | Command::Decompose(c) => c.report,
        Command::Verify { common, .. } | Command::Construct { common, .. } => common.report,
    }
}

/// Runs one invocation, writing the report to `out` and diagnostics to
/// `err`, and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let format = report_format(&cli);
    let written = match execute(&cli) {
        Ok(Output::Report(r)) => {
            let text = match format {
                ReportFormat::Json => r.to_json(),
                ReportFormat::Text => r.to_string(),
            };
            writeln!(out, "{text}").map(|_| if r.passed() { 0 } else { 1 })
        }
        Ok(Output::Build(b)) => {
            let text = match format {
                ReportFormat::Json => serde_json::to_string_pretty(&b).expect("serializes"),
                ReportFormat::Text => b
                    .generators
                    .iter()
                    .map(|g| format!("{}: ({}, {})", g.label, g.vector, g.form))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            writeln!(out, "{text}").map(|_| 0)
        }
        Ok(Output::Manifest(m)) => write!(out, "{}", m.to_json()).map(|_| 0),
        Err(e) => {
            let kind = classify(&e);
            let message = format!("{e:#}");
            let res = match format {
                ReportFormat::Json => {
                    let body = ErrorReport {
                        error: ErrorBody {
                            kind: kind.as_str(),
                            message,
                        },
                    };
                    writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("serializes"))
                }
                ReportFormat::Text => writeln!(err, "error: {message}"),
            };
            res.map(|_| kind.code())
        }
    };
    written.unwrap_or(2)
}
