use oracles::{digest, OracleReport};
use serde_json::json;

use crate::solve::{compute, finish, Computed};
use crate::{CliError, Output, RunArgs};

fn report(
    problem: &str,
    dg: &str,
    check: &str,
    oracle: impl ToString,
    engine: impl ToString,
) -> (String, OracleReport) {
    (
        check.to_string(),
        OracleReport::new(
            problem,
            dg.to_string(),
            oracle.to_string(),
            engine.to_string(),
        ),
    )
}

/// Every comparison between the engine's answer and a reference solver.
pub fn checks(c: &Computed) -> Vec<(String, OracleReport)> {
    let p = c.name();
    match c {
        Computed::Mwm { t, ew, sol } => {
            let d = digest(&t.to_text());
            let tree = &t.tree;
            vec![
                report(p, &d, "value", oracles::mwm_value(tree, ew), sol.value),
                report(
                    p,
                    &d,
                    "valid",
                    true,
                    oracles::is_matching(tree, &sol.matching),
                ),
                report(
                    p,
                    &d,
                    "weight",
                    sol.value,
                    oracles::matching_weight(&sol.matching, ew),
                ),
            ]
        }
        Computed::Mis { t, sol } => {
            let d = digest(&t.to_text());
            let greedy = oracles::greedy_mis(&t.tree);
            vec![
                report(
                    p,
                    &d,
                    "maximal",
                    true,
                    oracles::is_maximal_independent(&t.tree, &sol.set),
                ),
                report(
                    p,
                    &d,
                    "greedy",
                    format!("{greedy:?}"),
                    format!("{:?}", sol.set),
                ),
            ]
        }
        Computed::Matching { t, sol } => {
            let d = digest(&t.to_text());
            vec![
                report(
                    p,
                    &d,
                    "maximal",
                    true,
                    oracles::is_maximal_matching(&t.tree, &sol.edges),
                ),
                report(
                    p,
                    &d,
                    "greedy",
                    format!("{:?}", oracles::greedy_maximal_matching(&t.tree)),
                    format!("{:?}", sol.edges),
                ),
            ]
        }
        Computed::Mwis { t, vw, sol } => {
            let d = digest(&t.to_text());
            let (a, b) = oracles::mwis_table(&t.tree, vw)[t.tree.root()];
            vec![
                report(p, &d, "value", a.max(b), sol.value),
                report(
                    p,
                    &d,
                    "independent",
                    true,
                    oracles::is_independent(&t.tree, &sol.set),
                ),
                report(
                    p,
                    &d,
                    "weight",
                    sol.value,
                    oracles::indset::set_weight(&sol.set, vw),
                ),
            ]
        }
        Computed::Expr { source, eval } => {
            let want = match oracles::eval_reference(source) {
                Ok(q) => expr_iso::show(&q),
                Err(e) => e.to_string(),
            };
            vec![report(
                p,
                &digest(source),
                "value",
                want,
                expr_iso::show(&eval.value),
            )]
        }
        Computed::Iso { a, b, report: r } => {
            let d = digest(&(a.to_text() + &b.to_text()));
            let truth = if oracles::canonical_iso(&a.tree, &b.tree) {
                "isomorphic"
            } else {
                "not-isomorphic"
            };
            let got = serde_json::to_value(r.verdict).unwrap();
            vec![report(p, &d, "verdict", truth, got.as_str().unwrap())]
        }
        Computed::Height { t, heights, .. } => {
            let want: Vec<i64> = t.tree.heights().into_iter().map(|h| h as i64).collect();
            let d = digest(&t.to_text());
            vec![report(
                p,
                &d,
                "heights",
                format!("{want:?}"),
                format!("{heights:?}"),
            )]
        }
    }
}

pub fn verify(a: &RunArgs) -> Result<Output, CliError> {
    let c = match compute(a) {
        Ok(c) => c,
        // a fault the reference evaluator also raises is agreement
        Err(CliError::Input(msg)) if a.problem == crate::Problem::Expr => {
            let source = crate::solve::expression_source(&a.input[0])?;
            return match oracles::eval_reference(&source) {
                Err(e) if msg == e.to_string() => Ok(Output::ok(
                    json!({"problem": "expr", "digest": digest(&source), "check": "fault",
                           "oracle": e.to_string(), "engine": msg, "equal": true})
                    .to_string()
                        + "\n",
                )),
                _ => Err(CliError::Input(msg)),
            };
        }
        Err(e) => return Err(e),
    };
    finish(a, &c)?;
    let mut text = String::new();
    let mut all = true;
    for (check, r) in checks(&c) {
        all &= r.equal;
        let line = json!({
            "problem": r.problem, "digest": r.digest, "check": check,
            "oracle": r.oracle, "engine": r.engine, "equal": r.equal,
        });
        text.push_str(&line.to_string());
        text.push('\n');
    }
    Ok(Output {
        text,
        code: if all { 0 } else { 1 },
    })
}
