use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use linecover::algorithms::{
    augment_with_gap_sensors, find_gaps, k_oga, logm, oga, oga_continuous, Gap, SelectionResult,
};
use linecover::baselines::{
    brute_force_min_kcover, build_barrier_graph, build_k_barrier_graph, greedy_max_coverage, k_disjoint_paths,
};
use linecover::deployment::{generate_sensors, realization_rng, DeploymentKind, DeploymentSpec};
use linecover::harness::{self, ExperimentConfig};
use linecover::model::{discretize, project, read_sensors, write_sensors, Domain, SensorField, SensorId, SensorKind, TargetSet};
use linecover::{Error, Result};

#[derive(Parser)]
#[command(name = "linecover", version, about = "Sensor selection for line and weak K-barrier coverage")]
struct Cli {
    /// Seed for `gen`; overrides `base_seed` for `experiment`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write output here instead of stdout. `experiment` writes the CSV and
    /// JSON reports next to each other, named after this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Maximum realizations evaluated in parallel.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct FieldArgs {
    /// Sensor-field file, one JSON sensor per line.
    field: PathBuf,
    /// Coverage domain; defaults to the span of the projected intervals.
    #[arg(long, num_args = 2, value_names = ["START", "END"], allow_negative_numbers = true)]
    domain: Option<Vec<f64>>,
}

#[derive(clap::Args)]
struct TargetArgs {
    /// JSON array of target x-coordinates; defaults to the discretized domain.
    #[arg(long)]
    targets: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum 1-cover with OGA.
    Cover {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        targets: TargetArgs,
        /// Cover the whole domain directly instead of discrete targets.
        #[arg(long, conflicts_with = "targets")]
        continuous: bool,
    },
    /// Minimum K-cover with K-OGA.
    Kcover {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        targets: TargetArgs,
        #[arg(short, long)]
        k: usize,
    },
    /// Mend the gaps left by failed sensors of a previous selection.
    Mend {
        #[command(flatten)]
        field: FieldArgs,
        /// Selection result JSON the failures refer to.
        #[arg(long)]
        previous: PathBuf,
        /// Comma-separated ids of failed sensors.
        #[arg(long, value_delimiter = ',')]
        failed: Vec<u32>,
    },
    /// Comparison methods.
    Baseline {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        targets: TargetArgs,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
    },
    /// Exhaustive minimum K-cover size (small fields only).
    Oracle {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        targets: TargetArgs,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        /// Add the gap sensors OGA would use before searching.
        #[arg(long)]
        augment: bool,
    },
    /// Run an experiment campaign from a JSON config.
    Experiment { config: PathBuf },
    /// Generate a random sensor field.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        width: f64,
        #[arg(long, value_enum, default_value_t = KindArg::LineBased)]
        kind: KindArg,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
        #[arg(long, default_value_t = 90.0)]
        fov: f64,
        #[arg(long)]
        omni: bool,
        #[arg(long, default_value_t = 10.0)]
        line_sigma: f64,
        #[arg(long, default_value_t = 10.0)]
        strip_height: f64,
        /// Realization index (RNG stream) under the seed.
        #[arg(long, default_value_t = 0)]
        realization: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Max-coverage greedy over the targets.
    Greedy,
    /// K disjoint shortest paths on the complete barrier graph.
    Kpaths,
    /// K disjoint shortest paths over the gap-augmented field.
    Kbarrier,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    LineBased,
    Poisson,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) => 2,
        _ => 1,
    }
}

fn load_field(args: &FieldArgs) -> Result<SensorField> {
    let file = File::open(&args.field).map_err(|e| Error::param(format!("{}: {e}", args.field.display())))?;
    let sensors = read_sensors(BufReader::new(file)).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse { line, message: format!("{message} (in {})", args.field.display()) },
        other => other,
    })?;
    let domain = match &args.domain {
        Some(d) => Domain::new(d[0], d[1])?,
        None => span(&sensors)?,
    };
    SensorField::from_sensors(sensors, domain)
}

fn span(sensors: &[linecover::model::Sensor]) -> Result<Domain> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in sensors {
        let iv = project(s)?;
        lo = lo.min(iv.u);
        hi = hi.max(iv.v);
    }
    if sensors.is_empty() {
        return Err(Error::param("empty sensor field needs an explicit --domain"));
    }
    Domain::new(lo, hi)
}

fn load_targets(args: &TargetArgs, field: &SensorField) -> Result<TargetSet> {
    match &args.targets {
        Some(path) => {
            let text = read_file(path)?;
            let xs: Vec<f64> = serde_json::from_str(&text)
                .map_err(|e| Error::param(format!("{}:{}: {e}", path.display(), e.line())))?;
            TargetSet::new(xs)
        }
        None => discretize(field),
    }
}

fn read_file(path: &Path) -> Result<String> {
    let mut s = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|e| Error::param(format!("{}: {e}", path.display())))?;
    Ok(s)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Selection as CSV rows `id,u,v,virtual` in selection order.
fn selection_csv(result: &SelectionResult, field: &SensorField) -> Result<String> {
    let mut out = String::from("id,u,v,virtual\n");
    for iv in result.intervals(field)? {
        out.push_str(&format!(
            "{},{},{},{}\n",
            iv.sensor_id,
            harness::format_g6(iv.u),
            harness::format_g6(iv.v),
            u8::from(iv.is_virtual)
        ));
    }
    Ok(out)
}

fn emit_selection(cli: &Cli, result: &SelectionResult, field: &SensorField) -> Result<()> {
    result.validate()?;
    let text = match cli.format {
        Format::Json => json(result)?,
        Format::Csv => selection_csv(result, field)?,
    };
    emit(cli, &text)
}

fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Cover { field, targets, continuous } => {
            let f = load_field(field)?;
            let result = if *continuous {
                oga_continuous(&f, &f.domain())?
            } else {
                oga(&f, &load_targets(targets, &f)?)?
            };
            emit_selection(cli, &result, &f)
        }
        Command::Kcover { field, targets, k } => {
            let f = load_field(field)?;
            let result = k_oga(&f, &load_targets(targets, &f)?, *k)?;
            emit_selection(cli, &result, &f)
        }
        Command::Mend { field, previous, failed } => {
            let f = load_field(field)?;
            let text = read_file(previous)?;
            let prev: SelectionResult = serde_json::from_str(&text)
                .map_err(|e| Error::param(format!("{}:{}: {e}", previous.display(), e.line())))?;
            let failed: BTreeSet<SensorId> = failed.iter().map(|&i| SensorId(i)).collect();
            let gaps = find_gaps(&prev, &failed, &f, &f.domain())?;
            let mended = logm(&prev, &failed, &gaps, &f)?;
            mended.validate()?;
            #[derive(Serialize)]
            struct Mended<'a> {
                gaps: &'a [Gap],
                result: &'a SelectionResult,
            }
            match cli.format {
                Format::Json => emit(cli, &json(&Mended { gaps: &gaps, result: &mended })?),
                Format::Csv => emit(cli, &selection_csv(&mended, &f)?),
            }
        }
        Command::Baseline { field, targets, method, k } => {
            let f = load_field(field)?;
            let result = match method {
                Method::Greedy => greedy_max_coverage(&f, &load_targets(targets, &f)?)?,
                Method::Kpaths => k_disjoint_paths(&build_barrier_graph(&f, &f.domain()), *k)?,
                Method::Kbarrier => k_disjoint_paths(&build_k_barrier_graph(&f, &load_targets(targets, &f)?, *k)?, *k)?,
            };
            emit_selection(cli, &result, &f)
        }
        Command::Oracle { field, targets, k, augment } => {
            let f = load_field(field)?;
            let t = load_targets(targets, &f)?;
            let searched = if *augment { augment_with_gap_sensors(&f, &t, *k)? } else { f };
            let minimum = brute_force_min_kcover(&searched, &t, *k)?;
            #[derive(Serialize)]
            struct Oracle {
                k: usize,
                sensors: usize,
                minimum: Option<usize>,
            }
            let out = Oracle { k: *k, sensors: searched.len(), minimum };
            match cli.format {
                Format::Json => emit(cli, &json(&out)?),
                Format::Csv => emit(
                    cli,
                    &format!(
                        "k,sensors,minimum\n{},{},{}\n",
                        out.k,
                        out.sensors,
                        minimum.map_or("infeasible".to_string(), |m| m.to_string())
                    ),
                ),
            }
        }
        Command::Experiment { config } => {
            let text = read_file(config)?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&text)
                .map_err(|e| Error::param(format!("{}:{}: {e}", config.display(), e.line())))?;
            if let Some(seed) = cli.seed {
                cfg.base_seed = seed;
            }
            let started = Instant::now();
            let report = harness::run_with_jobs(&cfg, cli.jobs)?;
            log::info!("experiment finished in {:.3} s", started.elapsed().as_secs_f64());
            let csv = report.to_csv();
            let full = report.to_json()?;
            match &cli.out {
                Some(path) => {
                    std::fs::write(path.with_extension("csv"), &csv)?;
                    std::fs::write(path.with_extension("json"), &full)?;
                }
                None => {
                    let text = if cli.format == Format::Csv { csv } else { full };
                    io::stdout().lock().write_all(text.as_bytes())?;
                }
            }
            if report.metadata.invariant_violations > 0 {
                return Err(Error::Invariant(format!(
                    "{} realizations failed a cross-method sanity check",
                    report.metadata.invariant_violations
                )));
            }
            Ok(())
        }
        Command::Gen { n, width, kind, radius, fov, omni, line_sigma, strip_height, realization } => {
            let spec = DeploymentSpec {
                n: *n,
                width: *width,
                strip_height: *strip_height,
                kind: match kind {
                    KindArg::LineBased => DeploymentKind::LineBased,
                    KindArg::Poisson => DeploymentKind::Poisson,
                },
                line_sigma: *line_sigma,
                radius: *radius,
                fov: *fov,
                sensor_kind: if *omni { SensorKind::Omni } else { SensorKind::Directional },
                seed: cli.seed.unwrap_or(0),
            };
            let sensors = generate_sensors(&spec, &mut realization_rng(spec.seed, *realization))?;
            let mut buf = Vec::new();
            write_sensors(&sensors, &mut buf)?;
            emit(cli, std::str::from_utf8(&buf).expect("JSON is UTF-8"))
        }
    }
}
