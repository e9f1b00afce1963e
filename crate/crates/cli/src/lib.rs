//! The `tc` command line: generate trees, solve problems under the
//! simulator, check answers against the reference solvers, and sweep round
//! counts over tree families.

pub mod bench;
pub mod error;
pub mod solve;
pub mod verify;

use std::path::{Path, PathBuf};

use ampc_sim::SimConfig;
use clap::{Args, Parser, Subcommand, ValueEnum};
use tree_core::LabeledTree;

pub use bench::{bench_row, family_tree, Algorithm, BenchRow, FAMILIES};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "tc",
    version,
    about = "Tree contraction under a simulated AMPC model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance and print the answer.
    Solve(RunArgs),
    /// Solve and compare against the reference solver; JSON lines on stdout.
    Verify(RunArgs),
    /// Sweep a tree family and print rounds and peak machine words as CSV.
    Bench(BenchArgs),
    /// Write generated trees in the text format.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Mwm,
    Mis,
    Matching,
    Mwis,
    Expr,
    Iso,
    Height,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fail on the first budget violation instead of recording it.
    #[arg(long)]
    pub strict: bool,
    /// Worker threads for machine programs.
    #[arg(long, env = "TC_THREADS")]
    pub threads: Option<usize>,
}

impl Common {
    pub fn config(&self, n: usize) -> Result<SimConfig, CliError> {
        let mut cfg = SimConfig::new(n.max(1), self.epsilon)
            .strict(self.strict)
            .seed(self.seed);
        cfg.threads = self.threads;
        cfg.validate().map_err(CliError::input)?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub problem: Problem,
    /// Tree file; give it twice for `iso`. For `expr`, a file or the
    /// expression itself.
    #[arg(long, required = true)]
    pub input: Vec<String>,
    #[command(flatten)]
    pub common: Common,
    /// Write the metrics report as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the contraction log sidecar.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Significance exponent for `iso`: error below `n^-alpha`.
    #[arg(long, default_value_t = 1)]
    pub alpha: u32,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "path")]
    pub family: String,
    #[arg(long, value_delimiter = ',', default_value = "64,256,1024,4096,16384")]
    pub sizes: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Algorithm::General)]
    pub algorithm: Algorithm,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// path, star, broom, caterpillar, random, power-law, kary or all-shapes.
    pub family: String,
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random edge weights `LO:HI` under key `ew`.
    #[arg(long)]
    pub ew: Option<String>,
    /// Random vertex weights `LO:HI` under key `vw`.
    #[arg(long)]
    pub vw: Option<String>,
    /// Output file, or a directory for `all-shapes`. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a command prints and the status it exits with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    pub fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Solve(a) => solve::solve(&a),
        Command::Verify(a) => verify::verify(&a),
        Command::Bench(a) => bench::bench(&a),
        Command::Gen(a) => generate(&a),
    }
}

pub fn load_tree(path: &str) -> Result<LabeledTree, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{path}: {e}")))?;
    LabeledTree::parse(&text).map_err(|e| CliError::input(format!("{path}: {e}")))
}

fn range(spec: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::input(format!("weight range {spec:?} is not LO:HI"));
    let (lo, hi) = spec.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (i64, i64) = (
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    );
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn weigh(t: LabeledTree, a: &GenArgs, salt: u64) -> Result<LabeledTree, CliError> {
    let mut t = t;
    let n = t.tree.len();
    if let Some(spec) = &a.ew {
        let (lo, hi) = range(spec)?;
        let w = oracles::gen::random_weights(n, lo, hi, a.seed ^ salt ^ 0xe);
        for v in 0..n {
            if t.tree.parent(v).is_some() {
                t.set(v, "ew", w[v]);
            }
        }
    }
    if let Some(spec) = &a.vw {
        let (lo, hi) = range(spec)?;
        t = t.with_column(
            "vw",
            &oracles::gen::random_weights(n, lo, hi, a.seed ^ salt ^ 0xf),
        );
    }
    Ok(t)
}

/// Largest size for which every shape is written out.
pub const ALL_SHAPES_MAX: usize = 12;

fn generate(a: &GenArgs) -> Result<Output, CliError> {
    if a.n == 0 {
        return Err(CliError::input("tree size must be positive"));
    }
    if a.family == "all-shapes" {
        if a.n > ALL_SHAPES_MAX {
            return Err(CliError::input(format!(
                "all-shapes is limited to n <= {ALL_SHAPES_MAX}"
            )));
        }
        let dir = a
            .out
            .as_deref()
            .ok_or_else(|| CliError::input("all-shapes needs --out <directory>"))?;
        std::fs::create_dir_all(dir)?;
        let shapes = oracles::gen::all_shapes(a.n);
        for (i, t) in shapes.iter().enumerate() {
            let t = weigh(LabeledTree::bare(t.clone()), a, i as u64)?;
            std::fs::write(dir.join(format!("shape-{:04}.tree", i)), t.to_text())?;
        }
        return Ok(Output::ok(format!(
            "{} trees written to {}\n",
            shapes.len(),
            dir.display()
        )));
    }
    let t = weigh(
        LabeledTree::bare(family_tree(&a.family, a.n, a.seed)?),
        a,
        0,
    )?;
    write_or_return(a.out.as_deref(), t.to_text())
}

fn write_or_return(path: Option<&Path>, text: String) -> Result<Output, CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(Output::ok(String::new()))
        }
        None => Ok(Output::ok(text)),
    }
}
