use std::fmt::Write as _;
use std::path::Path;

use ampc_sim::Metrics;
use contraction_engine::algebras::{Height, MaxPlus};
use contraction_engine::{reconstruct, tree_contract, ContractionLog, Instance, RunStats};
use expr_iso::{evaluate_expression, show, tree_isomorphism, Evaluation, IsoReport, Verdict};
use problem_mis::{
    maximal_matching_solve, mis_solve, mwis_solve, MatchingSolution, MisSolution, MwisSolution,
};
use problem_mwm::{mwm_solve, MwmSolution};
use serde_json::{json, Value};
use tree_core::LabeledTree;

use crate::{load_tree, CliError, Output, Problem, RunArgs};

/// A solved instance, kept whole so `verify` can inspect it.
pub enum Computed {
    Mwm {
        t: LabeledTree,
        ew: Vec<i64>,
        sol: MwmSolution,
    },
    Mis {
        t: LabeledTree,
        sol: MisSolution,
    },
    Matching {
        t: LabeledTree,
        sol: MatchingSolution,
    },
    Mwis {
        t: LabeledTree,
        vw: Vec<i64>,
        sol: MwisSolution,
    },
    Expr {
        source: String,
        eval: Evaluation,
    },
    Iso {
        a: LabeledTree,
        b: LabeledTree,
        report: IsoReport,
    },
    Height {
        t: LabeledTree,
        heights: Vec<i64>,
        metrics: Metrics,
        stats: RunStats,
        log: ContractionLog<i64, MaxPlus>,
    },
}

fn one_tree(a: &RunArgs) -> Result<LabeledTree, CliError> {
    match a.input.as_slice() {
        [p] => load_tree(p),
        _ => Err(CliError::input("expected exactly one --input")),
    }
}

/// Reads an expression from a file when one exists at `arg`, else takes
/// `arg` literally.
pub fn expression_source(arg: &str) -> Result<String, CliError> {
    if Path::new(arg).is_file() {
        Ok(std::fs::read_to_string(arg)?.trim().to_string())
    } else {
        Ok(arg.to_string())
    }
}

pub fn compute(a: &RunArgs) -> Result<Computed, CliError> {
    let c = &a.common;
    Ok(match a.problem {
        Problem::Mwm => {
            let t = one_tree(a)?;
            let ew = t.column("ew", 1);
            let sol = mwm_solve(&t.tree, &ew, &c.config(t.tree.len())?)?;
            Computed::Mwm { t, ew, sol }
        }
        Problem::Mis => {
            let t = one_tree(a)?;
            let sol = mis_solve(&t.tree, &c.config(t.tree.len())?)?;
            Computed::Mis { t, sol }
        }
        Problem::Matching => {
            let t = one_tree(a)?;
            let sol = maximal_matching_solve(&t.tree, &c.config(t.tree.len())?)?;
            Computed::Matching { t, sol }
        }
        Problem::Mwis => {
            let t = one_tree(a)?;
            let vw = t.column("vw", 1);
            let sol = mwis_solve(&t.tree, &vw, &c.config(t.tree.len())?)?;
            Computed::Mwis { t, vw, sol }
        }
        Problem::Expr => {
            let [arg] = a.input.as_slice() else {
                return Err(CliError::input("expected exactly one --input"));
            };
            let source = expression_source(arg)?;
            let eval = evaluate_expression(&source, &c.config(source.len())?)?;
            Computed::Expr { source, eval }
        }
        Problem::Iso => {
            let [p, q] = a.input.as_slice() else {
                return Err(CliError::input("iso needs two --input trees"));
            };
            let (ta, tb) = (load_tree(p)?, load_tree(q)?);
            let cfg = c.config(ta.tree.len().max(tb.tree.len()))?;
            let report = tree_isomorphism(&ta.tree, &tb.tree, a.alpha, None, c.seed, &cfg)?;
            Computed::Iso {
                a: ta,
                b: tb,
                report,
            }
        }
        Problem::Height => {
            let t = one_tree(a)?;
            let inst = Instance::build(t.tree.clone(), |_| 0i64, |_| MaxPlus::STEP);
            let out = tree_contract(&Height, &inst, &c.config(t.tree.len())?)?;
            let heights = reconstruct(&Height, &out.log)?;
            Computed::Height {
                t,
                heights,
                metrics: out.metrics,
                stats: out.stats,
                log: out.log,
            }
        }
    })
}

impl Computed {
    pub fn name(&self) -> &'static str {
        match self {
            Computed::Mwm { .. } => "mwm",
            Computed::Mis { .. } => "mis",
            Computed::Matching { .. } => "matching",
            Computed::Mwis { .. } => "mwis",
            Computed::Expr { .. } => "expr",
            Computed::Iso { .. } => "iso",
            Computed::Height { .. } => "height",
        }
    }

    pub fn rounds(&self) -> u64 {
        match self {
            Computed::Mwm { sol, .. } => sol.total_rounds(),
            Computed::Mis { sol, .. } => sol.total_rounds(),
            Computed::Matching { sol, .. } => sol.metrics.rounds + sol.extra_rounds,
            Computed::Mwis { sol, .. } => sol.metrics.rounds + sol.extra_rounds,
            Computed::Expr { eval, .. } => eval.total_rounds(),
            Computed::Iso { report, .. } => report.rounds,
            Computed::Height { metrics, .. } => metrics.rounds + metrics.phases.len() as u64,
        }
    }

    pub fn metrics(&self) -> Option<&Metrics> {
        match self {
            Computed::Mwm { sol, .. } => Some(&sol.metrics),
            Computed::Mis { sol, .. } => Some(&sol.metrics),
            Computed::Matching { sol, .. } => Some(&sol.metrics),
            Computed::Mwis { sol, .. } => Some(&sol.metrics),
            Computed::Expr { eval, .. } => Some(&eval.metrics),
            Computed::Iso { .. } => None,
            Computed::Height { metrics, .. } => Some(metrics),
        }
    }

    fn stats(&self) -> Option<&RunStats> {
        match self {
            Computed::Mwm { sol, .. } => Some(&sol.stats),
            Computed::Mis { sol, .. } => Some(&sol.stats),
            Computed::Mwis { sol, .. } => Some(&sol.stats),
            Computed::Expr { eval, .. } => Some(&eval.stats),
            Computed::Height { stats, .. } => Some(stats),
            _ => None,
        }
    }

    /// Answer as printed on stdout.
    pub fn text(&self) -> String {
        let mut s = String::new();
        match self {
            Computed::Mwm { t, ew, sol } => {
                writeln!(s, "value {}", sol.value).unwrap();
                for &c in &sol.matching {
                    writeln!(s, "{} {} {}", c, t.tree.parent(c).unwrap(), ew[c]).unwrap();
                }
            }
            Computed::Mis { sol, .. } => {
                let m = sol.members();
                writeln!(s, "size {}", m.len()).unwrap();
                writeln!(s, "{}", join(&m)).unwrap();
            }
            Computed::Matching { t, sol } => {
                let ew = t.column("ew", 1);
                writeln!(s, "size {}", sol.edges.len()).unwrap();
                for &c in &sol.edges {
                    writeln!(s, "{} {} {}", c, t.tree.parent(c).unwrap(), ew[c]).unwrap();
                }
            }
            Computed::Mwis { sol, .. } => {
                writeln!(s, "value {}", sol.value).unwrap();
                let m: Vec<usize> = (0..sol.set.len()).filter(|&v| sol.set[v]).collect();
                writeln!(s, "{}", join(&m)).unwrap();
            }
            Computed::Expr { eval, .. } => writeln!(s, "{}", show(&eval.value)).unwrap(),
            Computed::Iso { report, .. } => {
                writeln!(s, "{}", serde_json::to_string(report).unwrap()).unwrap()
            }
            Computed::Height { t, heights, .. } => {
                writeln!(s, "height {}", heights[t.tree.root()]).unwrap()
            }
        }
        s
    }

    fn answer_json(&self) -> Value {
        match self {
            Computed::Mwm { sol, .. } => json!({ "value": sol.value, "matching": sol.matching }),
            Computed::Mis { sol, .. } => json!({ "set": sol.members() }),
            Computed::Matching { sol, .. } => json!({ "matching": sol.edges }),
            Computed::Mwis { sol, .. } => json!({
                "value": sol.value,
                "set": (0..sol.set.len()).filter(|&v| sol.set[v]).collect::<Vec<_>>(),
            }),
            Computed::Expr { eval, .. } => json!({ "value": show(&eval.value) }),
            Computed::Iso { report, .. } => json!({
                "verdict": report.verdict,
                "modulus": report.modulus.to_string(),
                "height": report.height,
            }),
            Computed::Height { t, heights, .. } => json!({ "height": heights[t.tree.root()] }),
        }
    }

    pub fn report(&self, a: &RunArgs) -> Value {
        json!({
            "problem": self.name(),
            "epsilon": a.common.epsilon,
            "seed": a.common.seed,
            "strict": a.common.strict,
            "answer": self.answer_json(),
            "rounds": self.rounds(),
            "metrics": self.metrics(),
            "stats": self.stats(),
        })
    }

    pub fn save_log(&self, path: &Path) -> Result<(), CliError> {
        match self {
            Computed::Mwm { sol, .. } => sol.log.save(path)?,
            Computed::Mis { sol, .. } => sol.log.save(path)?,
            Computed::Mwis { sol, .. } => sol.log.save(path)?,
            Computed::Expr { eval, .. } => eval.log.save(path)?,
            Computed::Height { log, .. } => log.save(path)?,
            Computed::Matching { .. } | Computed::Iso { .. } => {
                return Err(CliError::input(format!(
                    "{} writes no contraction log",
                    self.name()
                )))
            }
        }
        Ok(())
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn finish(a: &RunArgs, c: &Computed) -> Result<(), CliError> {
    if let Some(p) = &a.report {
        std::fs::write(p, serde_json::to_string_pretty(&c.report(a)).unwrap())?;
    }
    if let Some(p) = &a.log {
        c.save_log(p)?;
    }
    Ok(())
}

pub fn solve(a: &RunArgs) -> Result<Output, CliError> {
    let c = compute(a)?;
    finish(a, &c)?;
    let code = match &c {
        Computed::Iso { report, .. } if report.verdict == Verdict::NotIsomorphic => 1,
        _ => 0,
    };
    Ok(Output {
        text: c.text(),
        code,
    })
}
