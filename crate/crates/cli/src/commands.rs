use std::path::{Path, PathBuf};

use anyhow::Context as _;
use mgpkit::agent::{parse_trace, solve_mgp, trace_to_jsonl, AgentError, Policy, PolicyKind};
use mgpkit::bench::{gen_random_mgp, PlannerOracle, RandomSizes};
use mgpkit::judge::{
    expected_progress, Evaluator, HypothesisRegistry, InsightProgress, JudgeError,
    ProgressOptions, Zlib,
};
use mgpkit::lang::{parse_problem, parse_world, Diagnostic};
use mgpkit::mgp::{m_number, optimal_strategies, Budget, MgpError, MgpReport, MgpStatus};
use mgpkit::planner::search_plan;
use serde_json::{json, Value};

use crate::load::{doc_kind, load_problem, read_doc, world_path, DocKind};
use crate::output::write_atomic;
use crate::Failure;

/// A finished command: its report, a human summary and the exit code.
pub struct Done {
    pub report: Value,
    pub summary: String,
    pub code: u8,
    pub warnings: Vec<String>,
}

impl Done {
    fn ok(report: Value, summary: String) -> Self {
        Done {
            report,
            summary,
            code: 0,
            warnings: Vec::new(),
        }
    }
}

fn mgp_failure(e: MgpError) -> Failure {
    match e {
        MgpError::Budget => Failure::Budget(e.to_string()),
        other => Failure::Invalid(vec![other.to_string()]),
    }
}

fn agent_failure(e: AgentError) -> Failure {
    match e {
        AgentError::Mgp(MgpError::Budget) => Failure::Budget(e.to_string()),
        other => Failure::Invalid(vec![other.to_string()]),
    }
}

fn judge_failure(e: JudgeError) -> Failure {
    match e {
        JudgeError::Mgp(MgpError::Budget) => Failure::Budget(e.to_string()),
        other => Failure::Invalid(vec![other.to_string()]),
    }
}

fn diag_json(diags: &[Diagnostic]) -> Vec<Value> {
    diags
        .iter()
        .map(|d| serde_json::to_value(d).unwrap_or(Value::Null))
        .collect()
}

pub fn validate(files: &[PathBuf], world: Option<&Path>) -> Result<Done, Failure> {
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    let mut failed = false;
    for path in files {
        let origin = path.display().to_string();
        let (kind, result) = match read_doc(path)? {
            Err(d) => (DocKind::World, Err(vec![d])),
            Ok(doc) => match doc_kind(&doc) {
                DocKind::World => (DocKind::World, parse_world(&doc).map(|p| p.warnings)),
                DocKind::Problem => {
                    let wpath = world_path(path, &doc, world)?;
                    let wdoc = read_doc(&wpath)?.map_err(|d| {
                        Failure::Invalid(vec![d.render(&wpath.display().to_string())])
                    })?;
                    let w = parse_world(&wdoc).map_err(|d| {
                        Failure::Invalid(d.iter().map(|x| x.render(&wdoc.origin)).collect())
                    })?;
                    let w = std::sync::Arc::new(w.value);
                    (DocKind::Problem, parse_problem(&doc, &w).map(|p| p.warnings))
                }
            },
        };
        let (ok, diags) = match result {
            Ok(warnings) => (true, warnings),
            Err(errors) => (false, errors),
        };
        failed |= !ok;
        lines.extend(diags.iter().map(|d| d.render(&origin)));
        if ok {
            lines.push(format!("{origin}: ok ({})", kind.as_str()));
        }
        entries.push(json!({
            "path": origin,
            "kind": kind.as_str(),
            "ok": ok,
            "diagnostics": diag_json(&diags),
        }));
    }
    Ok(Done {
        report: json!({ "files": entries }),
        summary: lines.join("\n"),
        code: if failed { 1 } else { 0 },
        warnings: Vec::new(),
    })
}

pub fn plan(problem: &Path, world: Option<&Path>, budget: &Budget) -> Result<Done, Failure> {
    let l = load_problem(problem, world)?;
    let p = &l.problem;
    let r = search_plan(&p.subdomain, &p.init, &p.goal, &p.never, budget.cap)
        .map_err(|e| Failure::Invalid(vec![e.to_string()]))?;
    let labels = r.plan.as_ref().map(|pl| pl.labels());
    let undecided = labels.is_none() && r.stats.truncated;
    let summary = match &labels {
        Some(ls) if ls.is_empty() => "goal already holds".to_string(),
        Some(ls) => ls.join("\n"),
        None if undecided => "no plan found before the state cap".to_string(),
        None => "no plan in the agent subdomain".to_string(),
    };
    Ok(Done {
        report: json!({
            "problem": p.name,
            "plan": labels,
            "length": labels.as_ref().map(Vec::len),
            "stats": r.stats,
        }),
        summary,
        code: if undecided { 2 } else { 0 },
        warnings: l.warnings,
    })
}

pub fn check_mgp(
    problem: &Path,
    world: Option<&Path>,
    budget: &Budget,
    strict: bool,
) -> Result<Done, Failure> {
    let l = load_problem(problem, world)?;
    let r = MgpReport::build(&l.problem, budget, &Zlib, strict).map_err(mgp_failure)?;
    let mut summary = r.status.to_string();
    if let Some(w) = &r.witness {
        summary.push_str(&format!("\nwitness: {}", w.join(" ")));
    }
    for d in &r.minimal_deltas {
        summary.push_str(&format!("\nminimal extension: {}", d.join(", ")));
    }
    let code = if r.status == MgpStatus::UnknownBudget { 2 } else { 0 };
    let report = serde_json::to_value(&r).map_err(|e| Failure::Io(e.into()))?;
    Ok(Done {
        report: json!({ "problem": l.problem.name, "verdict": report }),
        summary,
        code,
        warnings: l.warnings,
    })
}

pub struct SolveArgs<'a> {
    pub policy: PolicyKind,
    pub seed: u64,
    pub exploration_budget: usize,
    pub relaxation_depth: usize,
    pub trace: Option<&'a Path>,
}

pub fn solve(
    problem: &Path,
    world: Option<&Path>,
    budget: &Budget,
    args: &SolveArgs<'_>,
) -> Result<Done, Failure> {
    let l = load_problem(problem, world)?;
    let policy = Policy {
        kind: args.policy,
        seed: args.seed,
        exploration_budget: args.exploration_budget,
        relaxation_depth: args.relaxation_depth,
    };
    let t = solve_mgp(&l.problem, &policy, budget).map_err(agent_failure)?;
    let jsonl = trace_to_jsonl(&l.world, &t);
    if let Some(path) = args.trace {
        write_atomic(path, jsonl.as_bytes()).map_err(Failure::Io)?;
    }
    let delta: Vec<String> = t.extensions().refs().map(|r| l.world.generator_name(r)).collect();
    let plan = t.solved_plan.as_ref().map(|p| p.labels());
    let mut summary = format!("{} after {} request(s)", t.outcome.as_str(), t.requests);
    if !delta.is_empty() {
        summary.push_str(&format!("\nrevealed: {}", delta.join(", ")));
    }
    if let Some(p) = &plan {
        summary.push_str(&format!("\nplan: {}", p.join(" ")));
    }
    Ok(Done {
        report: json!({
            "problem": l.problem.name,
            "policy": policy,
            "outcome": t.outcome.as_str(),
            "steps": t.steps.len(),
            "requests": t.requests,
            "delta": delta,
            "plan": plan,
            "trace": jsonl.lines().map(|line| serde_json::from_str::<Value>(line).unwrap_or(Value::Null)).collect::<Vec<_>>(),
        }),
        summary,
        code: 0,
        warnings: l.warnings,
    })
}

pub fn judge(
    problem: &Path,
    world: Option<&Path>,
    budget: &Budget,
    trace: &Path,
    paper_pure: bool,
) -> Result<Done, Failure> {
    let l = load_problem(problem, world)?;
    let text = std::fs::read_to_string(trace)
        .with_context(|| format!("cannot read {}", trace.display()))
        .map_err(Failure::Io)?;
    let w = parse_trace(&l.world, &text).map_err(agent_failure)?;
    let eval = Evaluator::new(&l.problem, *budget).map_err(judge_failure)?;
    let registry = HypothesisRegistry::<f64>::builtin(&Zlib);
    let opts = ProgressOptions { paper_pure };
    let r = expected_progress(&w, &eval.start(), &registry, &InsightProgress, &eval, opts)
        .map_err(judge_failure)?;
    let mut summary = format!("M = {:.6e} ({})", r.m, r.metric_name);
    for h in &r.hypotheses {
        summary.push_str(&format!(
            "\n  {}: prior {:.6e}, likelihood {:.6e}, R {:.4}",
            h.name, h.prior, h.likelihood, h.r
        ));
    }
    let report = serde_json::to_value(&r).map_err(|e| Failure::Io(e.into()))?;
    Ok(Done {
        report: json!({
            "problem": l.problem.name,
            "steps": w.len(),
            "description_bits": registry.description_bits(),
            "progress": report,
        }),
        summary,
        code: 0,
        warnings: l.warnings,
    })
}

pub fn mnumber(problem: &Path, world: Option<&Path>, budget: &Budget) -> Result<Done, Failure> {
    let l = load_problem(problem, world)?;
    let opt = optimal_strategies(&l.problem, budget).map_err(mgp_failure)?;
    let bits = m_number(&opt.insightful, &Zlib);
    let deltas: Vec<Vec<String>> = opt
        .minimal
        .sets
        .iter()
        .map(|s| s.refs().map(|r| l.world.generator_name(r)).collect())
        .collect();
    Ok(Done {
        report: json!({
            "problem": l.problem.name,
            "m_number_bits": bits,
            "insightful_strategies": opt.insightful.len(),
            "minimal_deltas": deltas,
            "partial": opt.minimal.partial,
        }),
        summary: format!("{bits} bits over {} strategies", opt.insightful.len()),
        code: 0,
        warnings: l.warnings,
    })
}

pub fn gen(seed: u64, sizes: RandomSizes, out_dir: &Path, budget: &Budget) -> Result<Done, Failure> {
    let oracle = PlannerOracle { budget: *budget };
    let c = gen_random_mgp(seed, sizes, &oracle).map_err(|e| Failure::Invalid(vec![e.to_string()]))?;
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))
        .map_err(Failure::Io)?;
    let wpath = out_dir.join(format!("{}.world", c.name));
    let ppath = out_dir.join(format!("{}.problem", c.name));
    write_atomic(&wpath, c.world_doc.text.as_bytes()).map_err(Failure::Io)?;
    write_atomic(&ppath, c.problem_doc.text.as_bytes()).map_err(Failure::Io)?;
    Ok(Done::ok(
        json!({
            "name": c.name,
            "sizes": sizes,
            "expected_status": c.expected,
            "golden": c.golden,
            "files": [wpath.display().to_string(), ppath.display().to_string()],
        }),
        format!("{}: {} ({})", c.name, c.expected, ppath.display()),
    ))
}
