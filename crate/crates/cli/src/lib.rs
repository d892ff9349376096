//! The `tracekernel` command line: input documents, task execution and
//! report rendering.

pub mod doc;
pub mod emit;
pub mod resolve;
pub mod run;
pub mod witness;

use std::io::Read;
use std::path::PathBuf;

use clap::Parser;

use crate::doc::{Block, BlockKind};
use crate::run::{RunOptions, OPS};

#[derive(Debug, Parser)]
#[command(name = "tracekernel", version, about = "Exact trace submodules, centers and semigroup ideal computations")]
pub struct Cli {
    /// validate, hom, end, center, trace, theta, reflexive, add, generate,
    /// semidualizing, iso, oracle, check, suite, sgp.<op>, or `run` for
    /// every task in the input
    pub command: String,
    /// Input document (`-` for stdin); optional for `suite` and `sgp.sweep`
    pub input: Option<PathBuf>,
    /// Machine-readable output
    #[arg(long)]
    pub json: bool,
    /// Corpus seed (default: the document, then TRACEKERNEL_SEED, then 0)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Degree cutoff for graded computations
    #[arg(long, allow_hyphen_values = true)]
    pub cutoff: Option<i64>,
    /// Highest Ext degree examined by semidualizing checks
    #[arg(long = "ext-bound")]
    pub ext_bound: Option<usize>,
    /// Largest number of map pairs the brute-force oracle enumerates
    #[arg(long = "max-oracle")]
    pub max_oracle: Option<u64>,
    /// Stop at the first failing task or check
    #[arg(long = "fail-fast")]
    pub fail_fast: bool,
    /// Include elapsed milliseconds per task (breaks byte-identical output)
    #[arg(long)]
    pub timing: bool,
    /// Only run the named tasks
    #[arg(long = "task")]
    pub tasks: Vec<String>,
}

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs the command line and returns `(exit code, stdout, stderr)`.
pub fn execute(cli: &Cli, env_seed: Option<&str>) -> (i32, String, String) {
    let usage = |msg: String| (EXIT_USAGE, String::new(), format!("error: {msg}\n"));
    let env_seed = match env_seed.map(|s| s.trim().parse::<u64>()) {
        None => None,
        Some(Ok(s)) => Some(s),
        Some(Err(_)) => return usage("TRACEKERNEL_SEED is not an unsigned integer".into()),
    };
    let command = cli.command.as_str();
    let known = command == "run" || OPS.contains(&command) || command.starts_with("sgp.");
    if !known {
        return usage(format!("unknown subcommand {command:?}"));
    }
    let text = match &cli.input {
        None => String::new(),
        Some(p) if p.as_os_str() == "-" => {
            let mut s = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut s) {
                return usage(format!("stdin: {e}"));
            }
            s
        }
        Some(p) => match std::fs::read_to_string(p) {
            Ok(s) => s,
            Err(e) => return usage(format!("{}: {e}", p.display())),
        },
    };
    if cli.input.is_none() && !matches!(command, "suite" | "sgp.sweep") {
        return usage(format!("{command} needs an input document"));
    }
    let source = cli.input.as_ref().map_or("<none>".to_string(), |p| p.display().to_string());
    let resolved = match doc::parse(&text).and_then(|d| resolve::resolve(&d)) {
        Ok(r) => r,
        Err(e) => return usage(format!("{source}: {e}")),
    };
    let opts = RunOptions {
        seed: cli.seed,
        env_seed,
        cutoff: cli.cutoff,
        ext_bound: cli.ext_bound,
        max_oracle: cli.max_oracle,
        fail_fast: cli.fail_fast,
        timing: cli.timing,
    };
    let report = if command == "validate" {
        run::validate_report(&resolved)
    } else {
        let mut resolved = resolved;
        let wanted = |t: &Block| command == "run" || t.value("op") == Some(command);
        if !resolved.tasks.iter().any(wanted) {
            if matches!(command, "suite" | "sgp.sweep") {
                let name = command.replace('.', "_");
                resolved.tasks.push(Block {
                    kind: BlockKind::Task,
                    name,
                    line: 0,
                    entries: vec![doc::Entry { key: "op".into(), value: command.into(), line: 0 }],
                });
            } else {
                return usage(format!("{source}: no task with op {command:?}"));
            }
        }
        let names = &cli.tasks;
        run::run(&resolved, |t| wanted(t) && (names.is_empty() || names.contains(&t.name)), &opts)
    };
    let out = if cli.json { emit::json(&report) } else { emit::human(&report) };
    (if report.ok() { EXIT_OK } else { EXIT_FAILED }, out, String::new())
}
