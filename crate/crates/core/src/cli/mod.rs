//! Command line driver.
//!
//! Exit codes: 0 success, 1 missing file or runtime failure, 2 metric not
//! tree-like, 3 schema or usage error.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;

pub use config::{
    EdgeConfig, ExperimentConfig, FamilyConfig, GraphConfig, OutputConfig, PresentationConfig, SchemaError,
    SolverConfig,
};

use crate::checks;
use crate::degeneration::{
    run_degeneration_with, tree_from_metric, DegenerationError, DegenerationRun, RescaledMetric, StepRecord,
};
use crate::group::{Presentation, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NOT_TREE_LIKE: i32 = 2;
pub const EXIT_SCHEMA: i32 = 3;

pub const THREADS_VAR: &str = "TREELIMIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "treelimit", version, about = "Harmonic map degenerations and their limit trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a degeneration experiment and write the results CSV and tree JSON.
    Run {
        config: PathBuf,
        /// Directory for the outputs (default: current directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a property suite: tree-ops, hyperbolic, lengths or all.
    Check {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Breaks one property on purpose, to exercise the failure path.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Rebuild a tree from a distance matrix and print it as JSON.
    Tree {
        metric: PathBuf,
        /// Allowed four-point constant, relative to the diameter.
        #[arg(long)]
        tol: f64,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SCHEMA } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_SCHEMA;
    }
    match cli.command {
        Command::Run { config, out, seed } => run_command(&config, out.as_deref(), seed),
        Command::Check { suite, seed, inject_fault } => check_command(&suite, seed, inject_fault),
        Command::Tree { metric, tol } => tree_command(&metric, tol),
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {value:?}"))?;
    // A second initialization in the same process is harmless.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn read_input(path: &Path) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_FAILURE
    })
}

fn write_output(path: &Path, contents: &str) -> Result<(), i32> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        if let Err(e) = fs::create_dir_all(dir) {
            eprintln!("error: cannot create {}: {e}", dir.display());
            return Err(EXIT_FAILURE);
        }
    }
    fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_FAILURE
    })
}

fn sample_label(pres: &Presentation, label: &(usize, Word)) -> String {
    let w = if label.1.is_empty() { "1".to_string() } else { pres.format_word(&label.1) };
    format!("(v{}, {w})", label.0)
}

pub fn run_command(config: &Path, out: Option<&Path>, seed: Option<u64>) -> i32 {
    let text = match read_input(config) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let mut cfg = match ExperimentConfig::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("schema error: {e}");
            return EXIT_SCHEMA;
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let setup = match cfg.to_setup() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("schema error: {e}");
            return EXIT_SCHEMA;
        }
    };
    let pres = setup.family.presentation();
    let words = match pres.word_list(setup.word_len) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };

    let mut print_step = |s: &StepRecord| println!("{}", step_summary(&pres, &words, s));
    let result = run_degeneration_with(&setup, &mut print_step);
    let run = match result {
        Ok(run) => run,
        Err(DegenerationError::NotTreeLike { quadruple, delta, diameter }) => {
            let samples = pres.ball(setup.sample_len);
            let labels: Vec<String> = quadruple
                .iter()
                .map(|&i| {
                    let (v, k) = (i / samples.len(), i % samples.len());
                    sample_label(&pres, &(v, samples[k].clone()))
                })
                .collect();
            eprintln!(
                "not tree-like: delta {delta:.6e} exceeds {} of diameter {diameter:.6e}",
                setup.delta_threshold
            );
            eprintln!("offending quadruple {quadruple:?}: {}", labels.join(" "));
            return EXIT_NOT_TREE_LIKE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };

    let base = out.map(Path::to_path_buf).unwrap_or_default();
    let csv_path = base.join(&cfg.output.csv);
    if let Err(code) = write_output(&csv_path, &results_csv(&pres, &run)) {
        return code;
    }
    println!("{}; wrote {}", run.case.as_str(), csv_path.display());
    match &run.final_action {
        Some(action) => {
            let tree_path = base.join(&cfg.output.tree);
            if let Err(code) = write_output(&tree_path, &action.to_document(&pres).to_json()) {
                return code;
            }
            if let Some(ab) = run.abelian {
                println!("limit length function is {}", if ab { "abelian" } else { "non-abelian" });
            }
            println!("wrote {}", tree_path.display());
        }
        None => println!("no limit tree at the last step; tree JSON not written"),
    }
    EXIT_OK
}

fn step_summary(pres: &Presentation, words: &[Word], s: &StepRecord) -> String {
    let mut line = format!(
        "t={:.4} energy={:.6e} delta/diam={:.4e} iters={} status={:?}",
        s.t,
        s.energy,
        s.delta_ratio(),
        s.iterations,
        s.status
    );
    line.push_str(if s.tree_extracted { " tree" } else { " no-tree" });
    for (w, l) in words.iter().zip(&s.lengths) {
        let _ = write!(line, " {}={:.5}", pres.format_word(w), l);
    }
    line
}

/// Header `t,energy,delta,diameter,len_<word>...`; floats carry 17
/// significant digits.
pub fn results_csv(pres: &Presentation, run: &DegenerationRun) -> String {
    let mut out = String::from("t,energy,delta,diameter");
    for w in &run.words {
        let _ = write!(out, ",len_{}", pres.format_word(w));
    }
    out.push('\n');
    for s in &run.steps {
        let _ = write!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", s.t, s.energy, s.delta, s.diameter);
        for l in &s.lengths {
            let _ = write!(out, ",{l:.16e}");
        }
        out.push('\n');
    }
    out
}

pub fn check_command(suite: &str, seed: u64, fault: bool) -> i32 {
    let Some(results) = checks::run_suite(suite, seed, fault) else {
        eprintln!("unknown suite {suite:?}; expected one of {}", checks::SUITES.join(", "));
        return EXIT_SCHEMA;
    };
    let mut failed = 0;
    for r in &results {
        println!("{}", r.line());
        if !r.passed() {
            failed += 1;
        }
    }
    println!("{} of {} properties passed", results.len() - failed, results.len());
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MetricInput {
    Wrapped { distances: Vec<Vec<f64>> },
    Bare(Vec<Vec<f64>>),
}

/// Accepts `{"distances": [[...]]}` or a bare matrix.
pub fn tree_command(path: &Path, tol: f64) -> i32 {
    let text = match read_input(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    if !(tol >= 0.0 && tol.is_finite()) {
        eprintln!("schema error: field `tol`: must be a nonnegative number");
        return EXIT_SCHEMA;
    }
    let distances = match serde_json::from_str::<MetricInput>(&text) {
        Ok(MetricInput::Wrapped { distances } | MetricInput::Bare(distances)) => distances,
        Err(e) => {
            eprintln!("schema error: field `distances`: {e}");
            return EXIT_SCHEMA;
        }
    };
    let metric = match RescaledMetric::from_matrix(distances) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("schema error: field `distances`: {e}");
            return EXIT_SCHEMA;
        }
    };
    match tree_from_metric(&metric, tol) {
        Ok(tree) => {
            eprintln!("max reconstruction error {:.3e}", tree.max_error(&metric.distances));
            println!("{}", tree.to_document().to_json());
            EXIT_OK
        }
        Err(DegenerationError::NotTreeLike { quadruple, delta, diameter }) => {
            eprintln!("not tree-like: delta {delta:.6e} against diameter {diameter:.6e}");
            eprintln!("offending quadruple {quadruple:?}");
            EXIT_NOT_TREE_LIKE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}
