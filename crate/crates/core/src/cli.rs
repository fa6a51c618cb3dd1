//! The `dbn` command line front end.
//!
//! Everything here is plumbing over the library: `run` resolves a
//! [`SimulationConfig`] and calls [`run_campaign`] and [`write_outputs`],
//! `rule-table` calls [`write_rule_table`], `verify` prints
//! [`golden_cases`].
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage error, 3 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::engine::PermutationStrategy;
use crate::golden::golden_cases;
use crate::harness::{
    default_burn_in, parse_rule_vectors, run_campaign, trace_trial, write_outputs,
    SimulationConfig,
};
use crate::vbn::{state_count, write_rule_table, RuleTableError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable that overrides the output directory of a config
/// file (a `--out-dir` flag still wins).
pub const OUT_DIR_ENV: &str = "DBN_OUT_DIR";

const DEFAULT_OUT_DIR: &str = "dbn-out";

#[derive(Debug, Parser)]
#[command(name = "dbn", version, about = "Dynamical Boolean network simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a campaign of trials and write the five output files.
    Run(Box<RunArgs>),
    /// Print the single-node rule table as CSV.
    RuleTable {
        #[arg(long, default_value_t = 2)]
        nodes: usize,
    },
    /// Replay the worked example with forced choices.
    Verify,
}

/// Flags of `run`. Every field is optional so that a config file can fill
/// the gaps.
#[derive(Debug, Default, Clone, Args)]
pub struct RunArgs {
    /// Permutation strategy: 1, 2, 3, 3c or 4.
    #[arg(long = "type", value_name = "TYPE")]
    pub strategy: Option<String>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub steps: Option<u64>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub seq_len: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub burn_in: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// File listing the rule vectors `T_1` may be drawn from.
    #[arg(long, value_name = "FILE")]
    pub restrict_initial: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// `key = value` file; flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Also write `trace.txt` with every step of trial 0.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// A fully resolved `run` invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunPlan {
    pub config: SimulationConfig,
    pub out_dir: PathBuf,
    pub trace: bool,
}

/// Reads a `key = value` config file into [`RunArgs`]. Keys match the long
/// flags, with `-` or `_`.
pub fn parse_config(text: &str) -> Result<RunArgs, CliError> {
    let mut args = RunArgs::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| CliError::Usage(format!("config line {}: {msg}", i + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("expected `key = value`, got {line:?}")))?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        fn num<T: std::str::FromStr>(v: &str) -> Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            v.parse().map_err(|e: T::Err| format!("{v:?}: {e}"))
        }
        let r: Result<(), String> = match key.as_str() {
            "type" => {
                args.strategy = Some(value.to_string());
                Ok(())
            }
            "trials" => num(value).map(|v| args.trials = Some(v)),
            "steps" => num(value).map(|v| args.steps = Some(v)),
            "nodes" => num(value).map(|v| args.nodes = Some(v)),
            "seq_len" => num(value).map(|v| args.seq_len = Some(v)),
            "seed" => num(value).map(|v| args.seed = Some(v)),
            "burn_in" => num(value).map(|v| args.burn_in = Some(v)),
            "threads" => num(value).map(|v| args.threads = Some(v)),
            "out_dir" => {
                args.out_dir = Some(value.into());
                Ok(())
            }
            "restrict_initial" => {
                args.restrict_initial = Some(value.into());
                Ok(())
            }
            "trace" => num(value).map(|v| args.trace = v),
            _ => Err(format!("unknown key {key:?}")),
        };
        r.map_err(bad)?;
    }
    Ok(args)
}

/// Merges flags, the optional config file and `env_out_dir` into a plan.
/// Relative paths inside a config file are taken relative to that file.
pub fn resolve(flags: RunArgs, env_out_dir: Option<PathBuf>) -> Result<RunPlan, CliError> {
    let (file, base) = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            (parse_config(&text)?, base)
        }
        None => (RunArgs::default(), PathBuf::new()),
    };
    let strategy_name = flags
        .strategy
        .or(file.strategy)
        .ok_or_else(|| CliError::Usage("--type is required (1, 2, 3, 3c or 4)".into()))?;
    let strategy = PermutationStrategy::parse(&strategy_name)
        .ok_or_else(|| CliError::Usage(format!("unknown type {strategy_name:?}")))?;

    let mut cfg = SimulationConfig::new(
        strategy,
        flags.trials.or(file.trials).unwrap_or(1000),
        flags.steps.or(file.steps).unwrap_or(10_000),
        flags.seed.or(file.seed).unwrap_or(0),
    );
    cfg.nodes = flags.nodes.or(file.nodes).unwrap_or(2);
    cfg.seq_len = match flags.seq_len.or(file.seq_len) {
        Some(l) => l,
        None if (1..=crate::vbn::MAX_NODES).contains(&cfg.nodes) => state_count(cfg.nodes) + 1,
        None => 0,
    };
    cfg.burn_in = flags.burn_in.or(file.burn_in).unwrap_or(default_burn_in(strategy));
    cfg.threads = flags.threads.or(file.threads);

    let restrict = flags
        .restrict_initial
        .or(file.restrict_initial.map(|p| base.join(p)));
    if let Some(path) = restrict {
        let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
        let set = parse_rule_vectors(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        cfg.initial_rule_restriction = Some(set);
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let out_dir = flags
        .out_dir
        .or(env_out_dir)
        .or(file.out_dir.map(|p| base.join(p)))
        .unwrap_or_else(|| DEFAULT_OUT_DIR.into());
    Ok(RunPlan {
        config: cfg,
        out_dir,
        trace: flags.trace || file.trace,
    })
}

/// Runs a resolved plan and returns the one-line summary.
pub fn execute(plan: &RunPlan) -> Result<String, CliError> {
    let summary = run_campaign(&plan.config).map_err(|e| CliError::Usage(e.to_string()))?;
    write_outputs(&summary, &plan.out_dir).map_err(|e| io_err(&plan.out_dir, e))?;
    if plan.trace {
        let lines = trace_trial(&plan.config, 0).map_err(|e| CliError::Usage(e.to_string()))?;
        let path = plan.out_dir.join("trace.txt");
        fs::write(&path, lines.join("\n") + "\n").map_err(|e| io_err(&path, e))?;
    }
    let (min, max, mean) = summary.coverage_stats();
    let cfg = &plan.config;
    Ok(format!(
        "{}: {} trials x {} steps, coverage min {min:.2}% max {max:.2}% mean {mean:.2}% -> {}",
        cfg.strategy,
        cfg.trials,
        cfg.steps,
        plan.out_dir.display()
    ))
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with(
    args: impl IntoIterator<Item = impl Into<OsString> + Clone>,
    out: &mut impl Write,
    err: &mut impl Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(flags) => resolve(*flags, std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .and_then(|plan| execute(&plan))
            .and_then(|line| writeln!(out, "{line}").map_err(|e| CliError::Io(e.to_string()))),
        Command::RuleTable { nodes } => match write_rule_table(nodes, &mut *out) {
            Ok(()) => Ok(()),
            Err(RuleTableError::Domain(e)) => Err(CliError::Usage(e.to_string())),
            Err(RuleTableError::Csv(e)) => Err(CliError::Io(e.to_string())),
        },
        Command::Verify => {
            let cases = golden_cases();
            for c in &cases {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{tag} {}: {}", c.name, c.detail);
            }
            let failed: Vec<&str> = cases.iter().filter(|c| !c.passed).map(|c| c.name).collect();
            if failed.is_empty() {
                return EXIT_OK;
            }
            let _ = writeln!(err, "verification failed: {}", failed.join(", "));
            return EXIT_VERIFY;
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "dbn: {e}");
            e.exit_code()
        }
    }
}
