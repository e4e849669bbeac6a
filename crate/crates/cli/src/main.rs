//! `rtm`: mine rare temporal patterns from interval sequences.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::Parser;

use rtm_cli::config::{InputSpec, PruningSpec, ReportFormat, RunConfig, TickOrText};
use rtm_cli::error::CliError;
use rtm_cli::{bench, run};

#[derive(Parser, Debug)]
#[command(
    name = "rtm",
    version,
    about = "Mine rare temporal patterns from interval sequences",
    long_about = "Converts time series into a windowed database of labeled \
                  intervals, then mines patterns over the relations follows, \
                  contains, and overlaps whose sequence support lies inside a \
                  band and whose all-confidence clears a floor."
)]
struct Cli {
    /// JSON run configuration; flags below override its fields.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// CSV input file(s): a timestamp column, then one column per series.
    #[arg(long = "input", value_name = "CSV", conflicts_with = "database")]
    input: Vec<PathBuf>,

    /// Mine a previously saved sequence database.
    #[arg(long, value_name = "FILE")]
    database: Option<PathBuf>,

    /// Lower support bound (fraction of sequences).
    #[arg(long)]
    smin: Option<f64>,

    /// Upper support bound (fraction of sequences; the rarity cap).
    #[arg(long)]
    smax: Option<f64>,

    /// All-confidence floor in [0, 1].
    #[arg(long)]
    conf: Option<f64>,

    /// Boundary tolerance for the interval relations, in ticks.
    #[arg(long)]
    epsilon: Option<i64>,

    /// Minimal overlap for the overlaps relation, in ticks (must exceed
    /// twice the tolerance).
    #[arg(long)]
    doverlap: Option<i64>,

    /// Window width: ticks if numeric, else a duration ("35m"), clock time,
    /// or timestamp.
    #[arg(long)]
    window: Option<String>,

    /// Start of the first window (same forms as --window; default 0).
    #[arg(long)]
    origin: Option<String>,

    /// Seconds per tick.
    #[arg(long, value_name = "SECONDS")]
    resolution: Option<u64>,

    /// Cap on events per pattern; 0 removes the cap (mining may then
    /// only stop when extensions die out).
    #[arg(long, value_name = "N")]
    max_events: Option<usize>,

    /// Pruning mode: none, apriori, trans, or all.
    #[arg(long, value_parser = PruningSpec::from_str)]
    pruning: Option<PruningSpec>,

    /// Also require every (k-1)-event sub-pattern to be stored before
    /// extending (output-neutral; prunes candidate work).
    #[arg(long)]
    strict_siblings: bool,

    /// Re-mine with the exhaustive checker and fail on any divergence.
    #[arg(long)]
    oracle_check: bool,

    /// Work bound for the exhaustive checker (symbols^cap * sequences).
    #[arg(long, value_name = "N")]
    oracle_budget: Option<u64>,

    /// Report format: jsonl or tsv.
    #[arg(long, value_parser = ReportFormat::from_str)]
    format: Option<ReportFormat>,

    /// Write the report here instead of stdout (a run summary then goes to
    /// stdout).
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Save the assembled sequence database as JSON.
    #[arg(long, value_name = "FILE")]
    database_out: Option<PathBuf>,

    /// Dump the per-level lookup structures as JSON.
    #[arg(long, value_name = "FILE")]
    dump_structures: Option<PathBuf>,

    /// Include one instance-binding witness per supporting sequence.
    #[arg(long)]
    emit_witnesses: bool,

    /// Keep all witness bindings per sequence (capped), not just the first.
    #[arg(long)]
    keep_all_witnesses: bool,

    /// Seed for synthetic input.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads (default 1).
    #[arg(long)]
    threads: Option<usize>,

    /// Mine once per pruning mode, verify all modes agree, and print a
    /// work/runtime table instead of a report.
    #[arg(long)]
    bench: bool,
}

fn tick_or_text(s: &str) -> TickOrText {
    match s.parse::<i64>() {
        Ok(ticks) => TickOrText::Ticks(ticks),
        Err(_) => TickOrText::Text(s.to_owned()),
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config: RunConfig = match &cli.config {
        Some(path) => {
            let mut config: RunConfig =
                serde_json::from_str(&std::fs::read_to_string(path)?)?;
            if let Some(base) = path.parent() {
                config.rebase_inputs(base);
            }
            config
        }
        None => {
            let input = if !cli.input.is_empty() {
                InputSpec::Csv {
                    paths: cli.input.clone(),
                }
            } else if let Some(path) = &cli.database {
                InputSpec::Database { path: path.clone() }
            } else {
                return Err(CliError::Config(
                    "no input: pass --config, --input, or --database".into(),
                ));
            };
            // Serde fills every default.
            serde_json::from_value(serde_json::json!({
                "input": serde_json::to_value(&input)?
            }))?
        }
    };

    if !cli.input.is_empty() {
        config.input = InputSpec::Csv {
            paths: cli.input.clone(),
        };
    }
    if let Some(path) = &cli.database {
        config.input = InputSpec::Database { path: path.clone() };
    }
    if let Some(v) = cli.smin {
        config.mining.sigma_min = v;
    }
    if let Some(v) = cli.smax {
        config.mining.sigma_max = v;
    }
    if let Some(v) = cli.conf {
        config.mining.delta = v;
    }
    if let Some(v) = cli.epsilon {
        config.mining.epsilon = v;
    }
    if let Some(v) = cli.doverlap {
        config.mining.d_overlap = v;
    }
    if let Some(v) = cli.max_events {
        config.mining.max_events = if v == 0 { None } else { Some(v) };
    }
    if let Some(v) = cli.pruning {
        config.mining.pruning = v;
    }
    if cli.strict_siblings {
        config.mining.strict_siblings = true;
    }
    if let Some(v) = &cli.window {
        config.window = Some(tick_or_text(v));
    }
    if let Some(v) = &cli.origin {
        config.origin = Some(tick_or_text(v));
    }
    if let Some(v) = cli.resolution {
        config.resolution_seconds = v;
    }
    if cli.oracle_check {
        config.oracle_check = true;
    }
    if let Some(v) = cli.oracle_budget {
        config.oracle_budget = v;
    }
    if let Some(v) = cli.format {
        config.format = v;
    }
    if let Some(v) = &cli.output {
        config.output = Some(v.clone());
    }
    if let Some(v) = &cli.database_out {
        config.database_out = Some(v.clone());
    }
    if let Some(v) = &cli.dump_structures {
        config.dump_structures = Some(v.clone());
    }
    if cli.emit_witnesses {
        config.emit_witnesses = true;
    }
    if cli.keep_all_witnesses {
        config.keep_all_witnesses = true;
    }
    if let Some(v) = cli.seed {
        config.seed = Some(v);
    }
    if let Some(v) = cli.threads {
        config.threads = Some(v);
    }
    config.validate()?;
    Ok(config)
}

fn run_bench(config: &RunConfig) -> Result<(), CliError> {
    let mining = config.mining_config()?;
    let threads = config.threads.unwrap_or(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Internal(format!("cannot build thread pool: {e}")))?;
    let (db, _) = run::assemble(config)?;
    let rows = pool.install(|| bench::sweep(&db, &mining))?;
    print!("{}", bench::render_table(&rows));
    if let Some(path) = &config.output {
        std::fs::write(path, serde_json::to_string_pretty(&rows)?)?;
        println!("rows written to {}", path.display());
    }
    Ok(())
}

fn run_once(config: &RunConfig) -> Result<(), CliError> {
    let output = run::execute(config)?;
    match &config.output {
        Some(path) => {
            std::fs::write(path, &output.report)?;
            print!("{}", output.summary);
            println!("report written to {}", path.display());
        }
        None => {
            // Report on stdout; keep it machine-readable and put the human
            // summary on stderr.
            print!("{}", output.report);
            eprint!("{}", output.summary);
        }
    }
    Ok(())
}

fn real_main(cli: &Cli) -> Result<(), CliError> {
    let config = build_config(cli)?;
    if cli.bench {
        run_bench(&config)
    } else {
        run_once(&config)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
