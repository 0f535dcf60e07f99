use serde_json::{json, Value};

use super::solve::StrategyTrace;
use super::AgentError;
use crate::model::{
    GeneratorRef, Generators, ModKind, Modification, Step, Strategy, World,
};

fn step_json(world: &World, index: usize, step: &Step) -> Value {
    match step {
        Step::Act(a) => json!({"t": "step", "i": index, "kind": "act", "action": a.label}),
        Step::Modify(m) => {
            let kind = match m.kind {
                ModKind::Extension => "extend",
                ModKind::Contraction => "contract",
            };
            let gens: Vec<String> = m.payload.refs().map(|r| world.generator_name(r)).collect();
            json!({"t": "step", "i": index, "kind": kind, "generators": gens})
        }
    }
}

/// One JSON object per line: a start record, one record per step and an
/// end record.
pub fn trace_to_jsonl(world: &World, trace: &StrategyTrace) -> String {
    let mut lines = vec![json!({
        "t": "start",
        "problem": trace.problem,
        "world": world.name(),
        "policy": trace.policy.kind.as_str(),
        "seed": trace.policy.seed,
        "exploration_budget": trace.policy.exploration_budget,
        "relaxation_depth": trace.policy.relaxation_depth,
    })];
    for (i, s) in trace.steps.steps.iter().enumerate() {
        lines.push(step_json(world, i, s));
    }
    lines.push(json!({
        "t": "end",
        "outcome": trace.outcome.as_str(),
        "steps": trace.steps.len(),
        "requests": trace.requests,
        "delta": trace.extensions().refs().map(|r| world.generator_name(r)).collect::<Vec<_>>(),
    }));
    let mut out = String::new();
    for l in lines {
        out.push_str(&l.to_string());
        out.push('\n');
    }
    out
}

fn generator_ref(world: &World, name: &str) -> Option<GeneratorRef> {
    let d = world.domain();
    let (kind, rest) = name.split_once(' ')?;
    match kind {
        "predicate" => {
            let (p, _) = rest.rsplit_once('/')?;
            d.predicate_id(p).map(GeneratorRef::Predicate)
        }
        "object" => d.object_id(rest).map(GeneratorRef::Object),
        "action" => d.schema_id(rest).map(GeneratorRef::Schema),
        _ => None,
    }
}

/// Reads the steps of a trace written by [`trace_to_jsonl`]. Lines other
/// than step records are skipped.
pub fn parse_trace(world: &World, text: &str) -> Result<Strategy, AgentError> {
    let actions = world.ground_actions();
    let mut steps = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let err = |message: String| AgentError::Trace {
            line: line_no,
            message,
        };
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        if v.get("t").and_then(Value::as_str) != Some("step") {
            continue;
        }
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| err("step without `kind`".into()))?;
        match kind {
            "act" => {
                let label = v
                    .get("action")
                    .and_then(Value::as_str)
                    .ok_or_else(|| err("act step without `action`".into()))?;
                let a = actions
                    .iter()
                    .find(|a| a.label == label)
                    .ok_or_else(|| err(format!("unknown action `{label}`")))?;
                steps.push(Step::Act(a.clone()));
            }
            "extend" | "contract" => {
                let names = v
                    .get("generators")
                    .and_then(Value::as_array)
                    .ok_or_else(|| err("modification without `generators`".into()))?;
                let mut gens = Generators::default();
                for name in names {
                    let s = name
                        .as_str()
                        .ok_or_else(|| err("generator names must be strings".into()))?;
                    let r = generator_ref(world, s)
                        .ok_or_else(|| err(format!("unknown generator `{s}`")))?;
                    gens.insert(r);
                }
                let m = if kind == "extend" {
                    Modification::extension(gens)
                } else {
                    Modification::contraction(gens)
                };
                steps.push(Step::Modify(m));
            }
            other => return Err(err(format!("unknown step kind `{other}`"))),
        }
    }
    Ok(Strategy::new(steps))
}
