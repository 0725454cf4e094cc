use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use gme_dynamics::amplitude::AmplitudeModel;
use gme_dynamics::emit::{self, Format};
use gme_dynamics::error::Error;
use gme_dynamics::events::detect_events;
use gme_dynamics::evolution::evolve_four;
use gme_dynamics::gme::{solve_gme, FieldMode, GmeOptions, GmeProblem, SdpDump, WitnessReport};
use gme_dynamics::state::{self, DensityMatrix, DensityMatrixJson};
use gme_dynamics::sweep::{run_sweep, InitialState, Measure, SweepConfig};

#[derive(Parser)]
#[command(name = "gme-dynamics", version, about = "Entanglement dynamics of qubits in leaky cavities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Directory for output files (created if missing).
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Table format.
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the time grid; writes trace.csv and events.json.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated subset of cc,rr,gme; overrides the config.
        #[arg(long, value_delimiter = ',')]
        measures: Option<Vec<Measure>>,
    },
    /// Detect events; from an existing trace if given, otherwise by sweeping.
    Events {
        #[command(flatten)]
        common: Common,
        /// Trace written by `sweep` in CSV form.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Genuine negativity of one state; writes gme.json.
    GmeSingle {
        #[command(flatten)]
        common: Common,
        /// Also write the lowered SDP to sdp.json.
        #[arg(long)]
        dump_sdp: bool,
    },
    /// Tabulate C0 and C on the grid of a config; writes amplitude.csv.
    Amplitude {
        #[command(flatten)]
        common: Common,
    },
}

/// Failure classes, each with its own exit status.
enum Failure {
    Config(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::Io(_) | Error::Csv(_) => Failure::Io(m),
            Error::Solve(_) | Error::Numerical(_) => Failure::Numerical(m),
            _ => Failure::Config(m),
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read_config(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_failure(path, e))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| io_failure(path, e))
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))
}

fn sweep(common: &Common, measures: Option<Vec<Measure>>) -> Result<(), Failure> {
    let mut cfg = SweepConfig::from_json(&read_config(&common.config)?)?;
    if let Some(m) = measures {
        cfg.measures = m.into_iter().collect::<BTreeSet<_>>();
        cfg.validate()?;
    }
    let table = run_sweep(&cfg)?;
    let report = detect_events(&table, &cfg.tolerances)?;
    let paths = emit::emit(&table, &report, common.format, &common.out_dir)?;
    for p in &paths {
        println!("wrote {}", p.display());
    }
    if !table.diagnostics.is_empty() {
        let lines: Vec<String> =
            table.diagnostics.iter().map(|d| format!("t={}: {}", d.gamma0_t, d.message)).collect();
        return Err(Failure::Numerical(format!(
            "{} witness solves failed (left empty in the trace)\n{}",
            lines.len(),
            lines.join("\n")
        )));
    }
    Ok(())
}

fn events(common: &Common, trace: Option<&Path>) -> Result<(), Failure> {
    let cfg = SweepConfig::from_json(&read_config(&common.config)?)?;
    let table = match trace {
        Some(path) => {
            let file = std::fs::File::open(path).map_err(|e| io_failure(path, e))?;
            emit::read_trace_csv(file)?
        }
        None => run_sweep(&cfg)?,
    };
    let report = detect_events(&table, &cfg.tolerances)?;
    ensure_dir(&common.out_dir)?;
    let path = common.out_dir.join("events.json");
    write_json(&path, &report)?;
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum StateSpec {
    /// Explicit matrix in `{dims, re, im}` form.
    Density { dims: Vec<usize>, re: Vec<Vec<f64>>, im: Vec<Vec<f64>> },
    /// Four-qubit cavity-reservoir state at `gamma0_t`.
    Evolved { initial_state: InitialState, x: f64, gamma0_t: f64 },
    Ghz { n: usize },
    Kay { alpha: f64 },
    BiseparableBellMixture,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GmeSingleConfig {
    state: StateSpec,
    #[serde(default)]
    tolerance: Option<f64>,
    #[serde(default)]
    max_iterations: Option<usize>,
    #[serde(default)]
    complex: bool,
    #[serde(default = "yes")]
    symmetry_reduction: bool,
}

fn yes() -> bool {
    true
}

impl StateSpec {
    fn build(self) -> gme_dynamics::Result<DensityMatrix> {
        match self {
            StateSpec::Density { dims, re, im } => DensityMatrix::try_from(DensityMatrixJson { dims, re, im }),
            StateSpec::Evolved { initial_state, x, gamma0_t } => {
                evolve_four(&initial_state.to_xstate()?, &AmplitudeModel::with_ratio(x)?, gamma0_t)
            }
            StateSpec::Ghz { n } => {
                if n < 2 {
                    return Err(Error::InvalidParameter(format!("GHZ needs n >= 2, got {n}")));
                }
                Ok(state::ghz(n))
            }
            StateSpec::Kay { alpha } => state::kay_state(alpha),
            StateSpec::BiseparableBellMixture => Ok(state::biseparable_bell_mixture()),
        }
    }
}

#[derive(Serialize)]
struct GmeOutput {
    genuine_negativity: f64,
    objective: f64,
    lower_bound: f64,
    iterations: usize,
    num_variables: usize,
    num_blocks: usize,
    largest_block: usize,
    witness_check_passed: bool,
    residuals: WitnessReport,
}

fn gme_single(common: &Common, dump: bool) -> Result<(), Failure> {
    let cfg: GmeSingleConfig =
        serde_json::from_str(&read_config(&common.config)?).map_err(|e| Failure::Config(e.to_string()))?;
    let defaults = GmeOptions::default();
    let options = GmeOptions {
        tolerance: cfg.tolerance.unwrap_or(defaults.tolerance),
        max_iterations: cfg.max_iterations.unwrap_or(defaults.max_iterations),
        field: if cfg.complex { FieldMode::Complex } else { FieldMode::Auto },
        symmetry_reduction: cfg.symmetry_reduction,
    };
    let rho = cfg.state.build().map_err(|e| Failure::Config(e.to_string()))?;
    let problem = GmeProblem::with_options(rho, options).map_err(|e| Failure::Config(e.to_string()))?;
    ensure_dir(&common.out_dir)?;
    if dump {
        let path = common.out_dir.join("sdp.json");
        write_json(&path, &SdpDump::new(&problem)?)?;
        println!("wrote {}", path.display());
    }
    let sol = solve_gme(&problem)?;
    let out = GmeOutput {
        genuine_negativity: sol.genuine_negativity,
        objective: sol.objective,
        lower_bound: sol.lower_bound,
        iterations: sol.iterations,
        num_variables: sol.num_variables,
        num_blocks: sol.block_sizes.len(),
        largest_block: sol.block_sizes.iter().copied().max().unwrap_or(0),
        witness_check_passed: sol.residuals.passed(),
        residuals: sol.residuals.clone(),
    };
    let path = common.out_dir.join("gme.json");
    write_json(&path, &out)?;
    println!("wrote {}", path.display());
    println!("genuine negativity {:.10}", sol.genuine_negativity);
    sol.residuals.into_result()?;
    Ok(())
}

#[derive(Deserialize)]
struct AmplitudeConfig {
    x: f64,
    gamma0_t_max: f64,
    steps: usize,
}

#[derive(Serialize)]
struct AmplitudeRow {
    gamma0_t: f64,
    c0: f64,
    c: f64,
}

fn amplitude(common: &Common) -> Result<(), Failure> {
    let cfg: AmplitudeConfig =
        serde_json::from_str(&read_config(&common.config)?).map_err(|e| Failure::Config(e.to_string()))?;
    if cfg.steps < 2 || cfg.gamma0_t_max.is_nan() || cfg.gamma0_t_max <= 0.0 {
        return Err(Failure::Config("need steps >= 2 and gamma0_t_max > 0".into()));
    }
    let model = AmplitudeModel::with_ratio(cfg.x).map_err(|e| Failure::Config(e.to_string()))?;
    let rows = (0..=cfg.steps)
        .map(|k| {
            let t = if k == cfg.steps { cfg.gamma0_t_max } else { cfg.gamma0_t_max * k as f64 / cfg.steps as f64 };
            let (c0, c) = model.amplitudes(t)?;
            Ok(AmplitudeRow { gamma0_t: t, c0, c })
        })
        .collect::<gme_dynamics::Result<Vec<_>>>()?;
    ensure_dir(&common.out_dir)?;
    let path = common.out_dir.join(format!("amplitude.{}", common.format.extension()));
    let write = || -> gme_dynamics::Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        match common.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(file);
                w.write_record(["gamma0_t", "c0", "c"])?;
                for r in &rows {
                    w.write_record([r.gamma0_t.to_string(), r.c0.to_string(), r.c.to_string()])?;
                }
                w.flush()?;
            }
            Format::Json => {
                let mut file = file;
                serde_json::to_writer_pretty(&mut file, &rows)?;
                file.write_all(b"\n")?;
            }
        }
        Ok(())
    };
    write()?;
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            // Bad arguments are configuration errors; --help and --version are not errors.
            return if usage { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Sweep { common, measures } => sweep(common, measures.clone()),
        Command::Events { common, trace } => events(common, trace.as_deref()),
        Command::GmeSingle { common, dump_sdp } => gme_single(common, *dump_sdp),
        Command::Amplitude { common } => amplitude(common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
