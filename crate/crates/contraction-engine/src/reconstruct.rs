use std::collections::HashMap;

use tree_core::VertexId;

use crate::algebra::UnaryAlgebra;
use crate::error::EngineError;
use crate::log::ContractionLog;
use crate::residual::lift_unary;

/// Replays the log backwards and returns `P(v)` for every original vertex.
pub fn reconstruct<A: UnaryAlgebra>(
    alg: &A,
    log: &ContractionLog<A::Node, A::Edge>,
) -> Result<Vec<A::Value>, EngineError> {
    let lift = lift_unary(alg, log.n);
    let root_payload = log
        .root_payload
        .as_ref()
        .ok_or_else(|| EngineError::LogIntegrity("log has no final payload".into()))?;
    let mut values: HashMap<VertexId, A::Value> = HashMap::new();
    values.insert(log.root, lift.resolve(root_payload, |_| None));

    for rec in log.records.iter().rev() {
        for m in rec.removed.iter().rev() {
            let mut kids = HashMap::with_capacity(m.children.len());
            for c in &m.children {
                let v = values.get(&c.id).ok_or_else(|| {
                    EngineError::LogIntegrity(format!(
                        "child {} of {} has no value when {} is undone",
                        c.id, m.id, m.id
                    ))
                })?;
                kids.insert(c.slot, (&c.edge, v));
            }
            let value = lift.resolve(&m.payload, |s| kids.get(&s).copied());
            if values.insert(m.id, value).is_some() {
                return Err(EngineError::LogIntegrity(format!(
                    "vertex {} assigned twice",
                    m.id
                )));
            }
        }
    }

    (0..log.n)
        .map(|v| {
            values
                .remove(&v)
                .ok_or_else(|| EngineError::LogIntegrity(format!("vertex {v} never assigned")))
        })
        .collect()
}
