use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use neutrino_sta::error::VerifyError;
use neutrino_sta::fields::Branch;
use neutrino_sta::report::{self, FieldSampleConfig, SpectrumDocument, SpinorCheckConfig, OUTPUT_DIR_ENV};
use neutrino_sta::spectrum::{self, units, MassSpectrum, SpectrumParams};
use neutrino_sta::verify::{self, RunConfig, Verdict};

#[derive(Debug, Parser)]
#[command(name = "nusta", version, about = "Spacetime-algebra checks of the monopole-pair neutrino model")]
struct Cli {
    /// Output directory; overrides the config file and $NUSTA_OUTPUT_DIR.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the identity suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Compute the flavour mass spectrum.
    Spectrum(SpectrumArgs),
    /// Sample electromagnetic configurations.
    #[command(subcommand)]
    Field(FieldCommand),
    /// Check plane-wave spinors against their Dirac-like equations.
    #[command(subcommand)]
    Spinor(SpinorCommand),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tol_abs: Option<f64>,
    #[arg(long)]
    tol_rel: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Lattice points per axis.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Finite-difference step.
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// Constant N in K = 3mN/2α.
    #[arg(long = "N", default_value_t = 3.0)]
    big_n: f64,
    /// Fit the mass scale so the masses add up to this bound (eV).
    #[arg(long, conflicts_with = "m_param")]
    sum_bound: Option<f64>,
    /// Mass scale m in eV.
    #[arg(long)]
    m_param: Option<f64>,
    /// Flavour indices.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
    n_set: Vec<u32>,
    #[arg(long, default_value_t = units::ALPHA)]
    alpha: f64,
    /// Emit CSV instead of JSON on stdout; with an output directory, write both.
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Subcommand)]
enum FieldCommand {
    /// Sample a field on a lattice as CSV with a JSON sidecar.
    Sample {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum SpinorCommand {
    /// Residuals of a plane-wave spinor and its (Λ, K) invariants.
    Check(SpinorArgs),
}

#[derive(Debug, Args)]
struct SpinorArgs {
    /// JSON spinor configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_branch)]
    branch: Option<Branch>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    match s {
        "bradyonic" => Ok(Branch::Bradyonic),
        "tachyonic" => Ok(Branch::Tachyonic),
        _ => Err(format!("unknown branch `{s}`, expected bradyonic or tachyonic")),
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Run(VerifyError),
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Config(m) => CliError::Usage(m),
            other => CliError::Run(other),
        }
    }
}

impl From<neutrino_sta::error::SpectrumError> for CliError {
    fn from(e: neutrino_sta::error::SpectrumError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn output_dir(flag: Option<&Path>, config: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| config.map(Path::to_path_buf))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let io = |path: &Path, source| CliError::Run(VerifyError::Io { path: path.to_path_buf(), source });
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| io(&path, e))?;
    Ok(path)
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| CliError::Run(e.into()))
}

fn run_verify(out: Option<&Path>, a: VerifyArgs) -> Result<ExitCode, CliError> {
    let mut cfg = match &a.config {
        Some(p) => read_json::<RunConfig>(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = a.tol_abs {
        cfg.tolerance_abs = v;
    }
    if let Some(v) = a.tol_rel {
        cfg.tolerance_rel = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.grid_points {
        cfg.grid.points_per_axis = Some(v);
    }
    if let Some(v) = a.step {
        cfg.grid.step = Some(v);
    }
    let dir = output_dir(out, cfg.output_dir.as_deref());
    cfg.output_dir = dir.clone();
    let report = verify::run_suite(&cfg)?;
    for c in &report.checks {
        let tag = match c.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::ExpectedInconsistent => "inconsistent (expected)",
        };
        eprintln!("{tag:>24}  {:<34} {:.3e} (bound {:.3e})", c.name, c.value, c.threshold);
    }
    let s = report.summary;
    eprintln!("{} passed, {} failed, {} expected inconsistencies", s.passed, s.failed, s.expected_inconsistent);
    match dir {
        Some(d) => {
            let path = report.write_to(&d)?;
            eprintln!("report written to {}", path.display());
        }
        None => print!("{}", report.to_json()? + "\n"),
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn run_spectrum(out: Option<&Path>, a: SpectrumArgs) -> Result<ExitCode, CliError> {
    let m_param = match (a.sum_bound, a.m_param) {
        (Some(sum), None) => spectrum::fit_m(a.big_n, &a.n_set, sum, a.alpha)?,
        (None, Some(m)) => m,
        (None, None) => return Err(CliError::Usage("one of --sum-bound or --m-param is required".into())),
        (Some(_), Some(_)) => unreachable!("clap rejects both"),
    };
    let params = SpectrumParams { m_param, big_n: a.big_n, alpha: a.alpha, n_set: a.n_set };
    let spec = MassSpectrum::compute(&params)?;
    let csv = spec.to_csv();
    let json = to_json(&SpectrumDocument::from(spec))?;
    match output_dir(out, None) {
        Some(d) => {
            write_file(&d, "spectrum.json", &json)?;
            if a.csv {
                write_file(&d, "spectrum.csv", &csv)?;
            }
        }
        None if a.csv => print!("{csv}"),
        None => print!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_field(out: Option<&Path>, cmd: FieldCommand) -> Result<ExitCode, CliError> {
    let FieldCommand::Sample { config } = cmd;
    let cfg: FieldSampleConfig = read_json(&config)?;
    let (csv, meta) = report::sample_field(&cfg)?;
    match output_dir(out, None) {
        Some(d) => {
            write_file(&d, "field_samples.csv", &csv)?;
            write_file(&d, "field_samples.json", &to_json(&meta)?)?;
        }
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_spinor(out: Option<&Path>, cmd: SpinorCommand) -> Result<ExitCode, CliError> {
    let SpinorCommand::Check(a) = cmd;
    let mut cfg = match &a.config {
        Some(p) => read_json::<SpinorCheckConfig>(p)?,
        None => SpinorCheckConfig { branch: Branch::Bradyonic, m: 1.0, k: 1.0, omega: None, points_per_axis: None, step: None },
    };
    if let Some(b) = a.branch {
        cfg.branch = b;
    }
    if let Some(m) = a.m {
        cfg.m = m;
    }
    if let Some(k) = a.k {
        cfg.k = k;
    }
    if a.omega.is_some() {
        cfg.omega = a.omega;
    }
    let report = report::spinor_check(&cfg)?;
    let json = to_json(&report)?;
    match output_dir(out, None) {
        Some(d) => {
            write_file(&d, "spinor_check.json", &json)?;
        }
        None => print!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.as_deref();
    let result = match cli.command {
        Command::Verify(a) => run_verify(out, a),
        Command::Spectrum(a) => run_spectrum(out, a),
        Command::Field(c) => run_field(out, c),
        Command::Spinor(c) => run_spinor(out, c),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
