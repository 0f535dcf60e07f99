use num_traits::Float;
use serde::Serialize;

use super::hypothesis::{Hypothesis, HypothesisRegistry};
use super::JudgeError;
use crate::mgp::{classify_problem, minimal_extensions, Budget, MgpError, MgpStatus};
use crate::model::{Context, Generators, ModKind, Problem, Strategy};
use crate::planner::search_plan;

/// A problem together with its classification and minimal extension sets,
/// computed once and shared by every score.
#[derive(Clone, Debug)]
pub struct Evaluator {
    pub problem: Problem,
    pub status: MgpStatus,
    pub minimal: Vec<Generators>,
    pub budget: Budget,
}

impl Evaluator {
    pub fn new(problem: &Problem, budget: Budget) -> Result<Self, JudgeError> {
        let status = classify_problem(problem, &budget)?.status;
        let minimal = if status == MgpStatus::Mgp {
            minimal_extensions(problem, &budget)?.sets
        } else {
            Vec::new()
        };
        Ok(Evaluator {
            problem: problem.clone(),
            status,
            minimal,
            budget,
        })
    }

    pub fn start(&self) -> Context {
        self.problem.initial_context()
    }

    fn goal_reachable(&self, c: &Context) -> Result<bool, JudgeError> {
        let p = &self.problem;
        if !p.never.admits(&c.state) {
            return Ok(false);
        }
        let r = search_plan(&c.view, &c.state, &p.goal, &p.never, self.budget.cap)
            .map_err(MgpError::from)?;
        match (r.plan, r.stats.truncated) {
            (Some(_), _) => Ok(true),
            (None, true) => Err(MgpError::Budget.into()),
            (None, false) => Ok(false),
        }
    }
}

/// Scores how far a strategy has moved an agent towards solving the problem.
pub trait ProgressMetric<F: Float> {
    fn name(&self) -> String;

    fn score(
        &self,
        w: &Strategy,
        start: &Context,
        eval: &Evaluator,
    ) -> Result<F, JudgeError>;

    /// Per-hypothesis score. Defaults to the hypothesis-independent one.
    fn score_for(
        &self,
        _hypothesis: &Hypothesis,
        w: &Strategy,
        start: &Context,
        eval: &Evaluator,
    ) -> Result<F, JudgeError> {
        self.score(w, start, eval)
    }
}

/// Fraction of the closest minimal extension set that `w` has revealed.
#[derive(Clone, Copy, Debug, Default)]
pub struct InsightProgress;

impl<F: Float> ProgressMetric<F> for InsightProgress {
    fn name(&self) -> String {
        "insight-progress".into()
    }

    fn score(&self, w: &Strategy, start: &Context, eval: &Evaluator) -> Result<F, JudgeError> {
        resourcefulness_default(w, start, eval)
    }
}

/// The default progress measure.
///
/// For an MGP this is the largest `|revealed ∩ M| / |M|` over minimal
/// extension sets `M`, capped at `(|M|-1)/|M|` when `M` is fully revealed
/// but the goal is no longer reachable from the resulting context. For a
/// problem solvable from the start it is 1 while the goal stays reachable
/// and 0 otherwise.
pub fn resourcefulness_default<F: Float>(
    w: &Strategy,
    start: &Context,
    eval: &Evaluator,
) -> Result<F, JudgeError> {
    match eval.status {
        MgpStatus::Mgp | MgpStatus::SolvableInSubdomain => {}
        s => return Err(JudgeError::MetricUndefined(s)),
    }
    let end = start.execute(w)?;
    let reachable = eval.goal_reachable(&end)?;
    if eval.status == MgpStatus::SolvableInSubdomain {
        return Ok(if reachable { F::one() } else { F::zero() });
    }
    let mut revealed = Generators::default();
    for m in w.modifications() {
        if m.kind == ModKind::Extension {
            revealed = revealed.union(&m.payload);
        }
    }
    let mut best = F::zero();
    for m in &eval.minimal {
        let size = m.len();
        let hit = m.refs().filter(|r| revealed.contains(*r)).count();
        let num = if hit == size && !reachable { size - 1 } else { hit };
        let v = F::from(num).unwrap_or_else(F::zero) / F::from(size).unwrap_or_else(F::one);
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProgressOptions {
    /// Drop the likelihood factor and weight progress by the prior alone.
    pub paper_pure: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisScore<F> {
    pub name: String,
    pub prior: F,
    pub likelihood: F,
    #[serde(rename = "R")]
    pub r: F,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProgressReport<F> {
    #[serde(rename = "M")]
    pub m: F,
    pub metric: String,
    #[serde(rename = "metricName")]
    pub metric_name: String,
    pub hypotheses: Vec<HypothesisScore<F>>,
    pub compressor: String,
}

/// Expected progress of `w` under the registry:
/// `sum prior(h) * likelihood(w | h) * R_h(w)`, or without the likelihood
/// factor when `opts.paper_pure` is set.
pub fn expected_progress<F: Float>(
    w: &Strategy,
    start: &Context,
    registry: &HypothesisRegistry<F>,
    metric: &dyn ProgressMetric<F>,
    eval: &Evaluator,
    opts: ProgressOptions,
) -> Result<ProgressReport<F>, JudgeError> {
    start.execute(w)?;
    let mut total = F::zero();
    let mut scores = Vec::with_capacity(registry.hypotheses().len());
    for (h, prior) in registry.iter() {
        let likelihood = if opts.paper_pure {
            F::one()
        } else {
            h.likelihood(w, start, eval)?
        };
        let r = metric.score_for(h, w, start, eval)?;
        total = total + prior * likelihood * r;
        scores.push(HypothesisScore {
            name: h.name.clone(),
            prior,
            likelihood,
            r,
        });
    }
    let metric_name = if opts.paper_pure {
        format!("sum prior * {}", metric.name())
    } else {
        format!("sum prior * likelihood * {}", metric.name())
    };
    Ok(ProgressReport {
        m: total,
        metric: metric.name(),
        metric_name,
        hypotheses: scores,
        compressor: registry.compressor_id().to_string(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Prediction<F> {
    pub index: usize,
    pub score: F,
}

fn mixture<F: Float>(
    w: &Strategy,
    start: &Context,
    registry: &HypothesisRegistry<F>,
    eval: &Evaluator,
    opts: ProgressOptions,
) -> Result<F, JudgeError> {
    let mut total = F::zero();
    for (h, prior) in registry.iter() {
        let l = if opts.paper_pure {
            F::one()
        } else {
            h.likelihood(w, start, eval)?
        };
        total = total + prior * l;
    }
    Ok(total)
}

/// Ranks candidate continuations of `w` by the conditional mixture mass
/// `M(w + c) / M(w)`, highest first, ties broken by candidate index.
pub fn predict_continuation<F: Float>(
    w: &Strategy,
    k: usize,
    candidates: &[Strategy],
    start: &Context,
    registry: &HypothesisRegistry<F>,
    eval: &Evaluator,
    opts: ProgressOptions,
) -> Result<Vec<Prediction<F>>, JudgeError> {
    for (index, c) in candidates.iter().enumerate() {
        if c.len() > k {
            return Err(JudgeError::TooLong {
                index,
                len: c.len(),
                k,
            });
        }
    }
    let base = mixture(w, start, registry, eval, opts)?;
    if base == F::zero() {
        return Err(JudgeError::ZeroMass);
    }
    let mut out = Vec::with_capacity(candidates.len());
    for (index, c) in candidates.iter().enumerate() {
        let joint = mixture(&w.concat(c), start, registry, eval, opts)?;
        out.push(Prediction {
            index,
            score: joint / base,
        });
    }
    out.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.index.cmp(&b.index))
    });
    Ok(out)
}
