use std::fmt::Write as _;

use ampc_sim::SimConfig;
use clap::ValueEnum;
use contraction_engine::algebras::Count;
use contraction_engine::{bounded_tree_contract, tree_contract, Instance};
use oracles::gen;
use problem_mis::bypass_expand;
use tree_core::Tree;

use crate::{BenchArgs, CliError, Output};

pub const FAMILIES: [&str; 7] = [
    "path",
    "star",
    "broom",
    "caterpillar",
    "random",
    "power-law",
    "kary",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Bounded-degree contraction, after bypass scaffolds cap the degree.
    Bounded,
    /// The generalized contraction on the tree as given.
    General,
}

pub fn family_tree(name: &str, n: usize, seed: u64) -> Result<Tree, CliError> {
    if n == 0 {
        return Err(CliError::input("tree size must be positive"));
    }
    Ok(match name {
        "path" => gen::path(n),
        "star" => gen::star(n),
        "broom" => gen::broom(n),
        "caterpillar" => gen::caterpillar(n, 3),
        "random" => gen::random_tree(n, seed),
        "power-law" => gen::random_power_law(n, seed),
        "kary" => gen::complete_kary(n, 3),
        other => return Err(CliError::input(format!("unknown family {other:?}"))),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub epsilon: f64,
    pub rounds: u64,
    pub peak_words: u64,
    pub violations: usize,
}

/// Counts the vertices of one family member and reports the cost.
pub fn bench_row(
    family: &str,
    n: usize,
    epsilon: f64,
    alg: Algorithm,
    cfg_base: &SimConfig,
) -> Result<BenchRow, CliError> {
    let tree = family_tree(family, n, cfg_base.seed)?;
    let cfg = SimConfig {
        n,
        epsilon,
        ..cfg_base.clone()
    };
    cfg.validate().map_err(CliError::input)?;
    let out = match alg {
        Algorithm::General => tree_contract(&Count, &Instance::build(tree, |_| 1, |_| 0), &cfg)?,
        Algorithm::Bounded => {
            let x = bypass_expand(&tree, cfg.fan());
            let inner = SimConfig {
                n: x.tree.len(),
                ..cfg.clone()
            };
            bounded_tree_contract(&Count, &Instance::build(x.tree, |_| 1, |_| 0), &inner)?
        }
    };
    Ok(BenchRow {
        family: family.to_string(),
        n,
        epsilon,
        rounds: out.metrics.rounds,
        peak_words: out.metrics.peak_machine_words,
        violations: out.metrics.violations.len(),
    })
}

pub fn bench(a: &BenchArgs) -> Result<Output, CliError> {
    let base = a.common.config(1)?;
    let mut text = String::from("family,n,epsilon,rounds,peak_words\n");
    for &n in &a.sizes {
        let r = bench_row(&a.family, n, a.common.epsilon, a.algorithm, &base)?;
        writeln!(
            text,
            "{},{},{},{},{}",
            r.family, r.n, r.epsilon, r.rounds, r.peak_words
        )
        .unwrap();
    }
    Ok(Output::ok(text))
}
