//! `hflpr`: consistency checks, group decisions, calibration runs and the
//! bundled venture-fund case study.
//!
//! Exit codes: 0 success, 1 invalid input or arguments, 2 an iteration cap
//! was hit, 3 the case study missed a published value.

mod format;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hflpr_core::{
    algorithm1, algorithm2, calibrate, parse_group, run_case_study, solve_indices, write_density_csv,
    write_samples_csv, write_summary_csv, CalibrationConfig, ConsistencyParams, Error, GroupSpec, HflprDoc, StopMode,
    DEFAULT_TAU,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_CASE_STUDY: i32 = 3;

/// Largest problem accepted while portal limits are on.
pub const PORTAL_MAX_ALTERNATIVES: usize = 5;
pub const PORTAL_MAX_DECISION_MAKERS: usize = 5;

#[derive(Debug, Parser)]
#[command(
    name = "hflpr",
    version,
    about = "Consistency and consensus for hesitant fuzzy linguistic preference relations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one relation and repair it until its consistency is acceptable.
    Check(CheckArgs),
    /// Run the consensus process for a group (or several indices).
    Gdm(GdmArgs),
    /// Estimate the index distribution of random relations.
    Calibrate(CalibrateArgs),
    /// Reproduce the venture-fund evaluation and compare with published values.
    CaseStudy(CaseStudyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stop {
    Threshold,
    Convergence,
}

impl From<Stop> for StopMode {
    fn from(s: Stop) -> Self {
        match s {
            Stop::Threshold => StopMode::Threshold,
            Stop::Convergence => StopMode::Convergence,
        }
    }
}

/// Overrides of the repair parameters.
#[derive(Debug, Clone, Args)]
pub struct RepairArgs {
    /// Scale factor α, at least (n-1)/2.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Weight kept on the current matrix in each adjustment, in [0, 1].
    #[arg(long)]
    pub beta: Option<f64>,
    /// Explicit critical value instead of the table lookup.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Stop rule of the repair loop.
    #[arg(long, value_enum)]
    pub stop: Option<Stop>,
}

impl RepairArgs {
    fn apply(&self, p: &mut ConsistencyParams) {
        if self.alpha.is_some() {
            p.alpha = self.alpha;
        }
        if let Some(b) = self.beta {
            p.beta = b;
        }
        if self.threshold.is_some() {
            p.threshold = self.threshold;
        }
        if let Some(s) = self.stop {
            p.stop_mode = s.into();
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Relation document, or `-` for standard input.
    pub input: PathBuf,
    #[command(flatten)]
    pub repair: RepairArgs,
    /// Padding parameter for cells of unequal length, in [0, 1].
    #[arg(long)]
    pub zeta: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GdmArgs {
    /// Group document, or `-` for standard input.
    pub input: PathBuf,
    #[command(flatten)]
    pub repair: RepairArgs,
    /// Consensus threshold γ, in (0, 1].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Weight kept on an expert's own judgment during feedback, in [0, 1].
    #[arg(long)]
    pub zeta: Option<f64>,
    /// Allow more than five alternatives or decision makers.
    #[arg(long)]
    pub no_portal_limits: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Number of alternatives, 3 to 8 for table lookups.
    #[arg(long)]
    pub n: usize,
    /// Offset added to (n-1)/2; ignored when --alpha is given.
    #[arg(long, default_value_t = 0.0)]
    pub offset: f64,
    /// Absolute scale factor α.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Seed of the random source; required for reproducibility.
    #[arg(long)]
    pub seed: u64,
    /// Directory receiving samples.csv, summary.csv and density.csv.
    #[arg(long, default_value = ".")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CaseStudyArgs {
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_iteration_cap() { EXIT_CAP } else { EXIT_INPUT };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::input(e.to_string())
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: &Command) -> Result<i32, Failure> {
    match cmd {
        Command::Check(a) => run_check(a),
        Command::Gdm(a) => run_gdm(a),
        Command::Calibrate(a) => run_calibrate(a),
        Command::CaseStudy(a) => run_case_study_cmd(a),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("outputs serialize");
    s.push('\n');
    s
}

/// Repairs one relation.
pub fn run_check(a: &CheckArgs) -> Result<i32, Failure> {
    let text = read_input(&a.input)?;
    let doc: HflprDoc = serde_json::from_str(&text).map_err(|e| Failure::input(format!("malformed JSON: {e}")))?;
    let b = doc.to_hflpr(DEFAULT_TAU).map_err(Error::from)?;
    let mut params = ConsistencyParams::default();
    a.repair.apply(&mut params);
    if let Some(z) = a.zeta {
        params.zeta = z;
    }
    let (report, code) = match algorithm1(&b, &params) {
        Ok(r) => (r, EXIT_OK),
        Err(Error::IterationCapExceeded { report }) => {
            eprintln!(
                "error: consistency repair hit the cap of {} iterations",
                report.iterations
            );
            (*report, EXIT_CAP)
        }
        Err(e) => return Err(e.into()),
    };
    let text = match a.out.format {
        Format::Json => to_json(&report),
        Format::Csv => format::matrix_csv(&report.final_matrix)?,
        Format::Pretty => format::check_pretty(&report),
    };
    emit(&a.out.output, &text)?;
    Ok(code)
}

fn check_limits(spec: &GroupSpec, portal: bool) -> Result<(), Failure> {
    for p in &spec.problems {
        let k = p.matrices.len();
        if k < 2 {
            return Err(Failure::input(format!(
                "a group needs at least 2 decision makers (k >= 2), got {k}"
            )));
        }
        if !portal {
            continue;
        }
        let n = p.matrices[0].n();
        if n > PORTAL_MAX_ALTERNATIVES {
            return Err(Failure::input(format!(
                "n = {n} exceeds the portal limit of {PORTAL_MAX_ALTERNATIVES}; pass --no-portal-limits to allow it"
            )));
        }
        if k > PORTAL_MAX_DECISION_MAKERS {
            return Err(Failure::input(format!(
                "{k} decision makers exceed the portal limit of {PORTAL_MAX_DECISION_MAKERS}; pass --no-portal-limits to allow it"
            )));
        }
    }
    Ok(())
}

/// Runs the consensus process on a group document.
pub fn run_gdm(a: &GdmArgs) -> Result<i32, Failure> {
    let text = read_input(&a.input)?;
    let mut spec = parse_group(&text)?.to_spec()?;
    check_limits(&spec, !a.no_portal_limits)?;
    for p in &mut spec.problems {
        a.repair.apply(&mut p.consistency);
        if let Some(g) = a.gamma {
            p.gamma = g;
        }
        if let Some(z) = a.zeta {
            p.zeta_mod = z;
        }
    }
    let text = match &spec.index_weights {
        Some(weights) => {
            let outcome = solve_indices(&spec.problems, weights)?;
            match a.out.format {
                Format::Json => to_json(&outcome),
                Format::Csv => format::ranking_csv(outcome.fused.weights(), &outcome.ranking)?,
                Format::Pretty => format::multi_pretty(&outcome, &spec.index_names),
            }
        }
        None => {
            let trace = algorithm2(&spec.problems[0])?;
            match a.out.format {
                Format::Json => to_json(&trace),
                Format::Csv => format::ranking_csv(trace.final_priority.weights(), &trace.ranking)?,
                Format::Pretty => format::gdm_pretty(&trace),
            }
        }
    };
    emit(&a.out.output, &text)?;
    Ok(EXIT_OK)
}

/// Runs one calibration scenario and writes its three CSV files.
pub fn run_calibrate(a: &CalibrateArgs) -> Result<i32, Failure> {
    let mut config = CalibrationConfig::with_offset(a.n, a.offset, a.samples, a.seed);
    if let Some(alpha) = a.alpha {
        config.alpha = alpha;
    }
    if let Some(b) = a.beta {
        config.params.beta = b;
    }
    let result = calibrate(&config)?;
    fs::create_dir_all(&a.output).map_err(|e| Failure::input(format!("{}: {e}", a.output.display())))?;
    let open = |name: &str| {
        let p = a.output.join(name);
        fs::File::create(&p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))
    };
    let results = std::slice::from_ref(&result);
    write_samples_csv(results, open("samples.csv")?)?;
    write_summary_csv(results, open("summary.csv")?)?;
    write_density_csv(&result, open("density.csv")?)?;
    if result.capped > 0 {
        log::warn!(
            "{} of {} samples hit the iteration cap",
            result.capped,
            result.samples.len()
        );
    }
    println!("n,alpha,mean,variance,suggested");
    println!(
        "{},{},{:.6},{:.6},{:.6}",
        result.n, result.alpha, result.mean, result.variance, result.suggested
    );
    Ok(EXIT_OK)
}

/// Reproduces the bundled case study; exit 3 when any value misses.
pub fn run_case_study_cmd(a: &CaseStudyArgs) -> Result<i32, Failure> {
    let report = run_case_study()?;
    let text = match a.format {
        Format::Json => to_json(&report),
        Format::Csv => format::checks_csv(&report.checks)?,
        Format::Pretty => format::case_study_pretty(&report),
    };
    emit(&a.output, &text)?;
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_CASE_STUDY })
}
