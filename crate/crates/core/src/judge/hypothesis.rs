use num_traits::Float;

use super::progress::Evaluator;
use super::{Compressor, JudgeError};
use crate::lang::HEADER;
use crate::model::{
    Context, ExecError, GeneratorRef, Generators, GroundAction, ModKind, Step, Strategy,
};
use crate::planner::search_plan;

/// Exploration rate of the built-in planning hypotheses.
pub const EPSILON: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HypothesisKind {
    /// Every strategy of length n has probability 2^-n.
    Random,
    /// Follows the lexicographically least shortest plan when one exists,
    /// otherwise reveals a missing generator.
    PlanFirst,
    /// As plan-first, but prefers reveals from the problem's minimal
    /// extension sets.
    OracleGuided,
}

/// An agent model with a canonical description used for its prior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub kind: HypothesisKind,
    pub description: Vec<u8>,
}

/// Canonical description: the header, a kind tag and the parameters the
/// agent model needs, one byte each.
fn describe(code: &[u8]) -> Vec<u8> {
    let mut out = HEADER.to_vec();
    out.extend_from_slice(code);
    out
}

/// Denominator of `EPSILON` in the encoded descriptions.
const EPSILON_DENOM: u8 = 10;

impl Hypothesis {
    pub fn random() -> Self {
        Hypothesis {
            name: "random".into(),
            kind: HypothesisKind::Random,
            description: describe(b"R"),
        }
    }

    pub fn plan_first() -> Self {
        Hypothesis {
            name: "plan-first".into(),
            kind: HypothesisKind::PlanFirst,
            description: describe(&[b'P', EPSILON_DENOM]),
        }
    }

    /// Needs the minimal extension sets on top of the plan-first parameters.
    pub fn oracle_guided() -> Self {
        Hypothesis {
            name: "oracle-guided".into(),
            kind: HypothesisKind::OracleGuided,
            description: describe(&[b'O', EPSILON_DENOM, b'M']),
        }
    }

    /// Probability that this agent produces `w` from `start`. Zero for
    /// strategies that cannot be executed.
    pub fn likelihood<F: Float>(
        &self,
        w: &Strategy,
        start: &Context,
        eval: &Evaluator,
    ) -> Result<F, JudgeError> {
        if start.execute(w).is_err() {
            return Ok(F::zero());
        }
        if self.kind == HypothesisKind::Random {
            return Ok(random_agent_likelihood(w));
        }
        let mut ctx = start.clone();
        let mut lik = F::one();
        for (index, step) in w.steps.iter().enumerate() {
            let exec = |source| ExecError { index, source };
            match step {
                Step::Act(a) => {
                    lik = lik * self.choice_prob::<F>(&ctx, Choice::Act(a), eval);
                    ctx = ctx.step(step).map_err(exec)?;
                }
                Step::Modify(m) => {
                    if m.kind == ModKind::Contraction {
                        return Ok(F::zero());
                    }
                    for r in m.payload.refs() {
                        lik = lik * self.choice_prob::<F>(&ctx, Choice::Reveal(r), eval);
                        let gens = ctx.view.generators().union(&Generators::from_refs([r]));
                        ctx.view = ctx.view.with_generators(gens).map_err(exec)?;
                    }
                }
            }
            if lik == F::zero() {
                break;
            }
        }
        Ok(lik)
    }

    fn choice_prob<F: Float>(&self, ctx: &Context, choice: Choice<'_>, eval: &Evaluator) -> F {
        let p = &eval.problem;
        let acts: Vec<&GroundAction> = ctx
            .view
            .actions()
            .filter(|a| a.applicable(&ctx.state) && p.never.admits(&a.apply_unchecked(&ctx.state)))
            .collect();
        let reveals = ctx.view.missing();
        let n = acts.len() + reveals.len();
        let offered = match choice {
            Choice::Act(a) => acts.iter().any(|x| *x == a),
            Choice::Reveal(r) => reveals.contains(&r),
        };
        if n == 0 || !offered {
            return F::zero();
        }
        let nf = F::from(n).unwrap_or_else(F::one);
        let eps = F::from(EPSILON).unwrap_or_else(F::zero);
        let plan = search_plan(&ctx.view, &ctx.state, &p.goal, &p.never, eval.budget.cap)
            .ok()
            .filter(|r| !r.stats.truncated)
            .map(|r| r.plan);
        let preferred: Vec<Choice<'_>> = match plan {
            Some(Some(plan)) => match plan.actions.first() {
                Some(first) => acts
                    .iter()
                    .find(|a| **a == first)
                    .map(|a| vec![Choice::Act(a)])
                    .unwrap_or_default(),
                None => Vec::new(),
            },
            Some(None) => {
                let targeted: Vec<GeneratorRef> = match self.kind {
                    HypothesisKind::OracleGuided => reveals
                        .iter()
                        .copied()
                        .filter(|r| eval.minimal.iter().any(|m| m.contains(*r)))
                        .collect(),
                    _ => Vec::new(),
                };
                let pool = if targeted.is_empty() { &reveals } else { &targeted };
                pool.iter().map(|&r| Choice::Reveal(r)).collect()
            }
            None => Vec::new(),
        };
        if preferred.is_empty() {
            return F::one() / nf;
        }
        let k = F::from(preferred.len()).unwrap_or_else(F::one);
        let base = eps / nf;
        if preferred.contains(&choice) {
            (F::one() - eps) / k + base
        } else {
            base
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Choice<'a> {
    Act(&'a GroundAction),
    Reveal(GeneratorRef),
}

/// `2^-|w|`, the likelihood of a strategy under a coin-flipping agent.
pub fn random_agent_likelihood<F: Float>(w: &Strategy) -> F {
    let half = F::one() / (F::one() + F::one());
    let n = i32::try_from(w.len()).unwrap_or(i32::MAX);
    half.powi(n)
}

/// A finite hypothesis space with priors proportional to
/// `2^-(compressed description bits)`.
#[derive(Clone, Debug)]
pub struct HypothesisRegistry<F> {
    hypotheses: Vec<Hypothesis>,
    bits: Vec<u64>,
    priors: Vec<F>,
    compressor: String,
}

impl<F: Float> HypothesisRegistry<F> {
    pub fn new(hypotheses: Vec<Hypothesis>, compressor: &dyn Compressor) -> Result<Self, JudgeError> {
        if hypotheses.is_empty() {
            return Err(JudgeError::EmptyRegistry);
        }
        let bits: Vec<u64> = hypotheses
            .iter()
            .map(|h| compressor.compress_bits(&h.description))
            .collect();
        let min = bits.iter().copied().min().unwrap_or(0);
        let two = F::one() + F::one();
        // shifting by the minimum keeps the largest weight at exactly 1
        let weights: Vec<F> = bits
            .iter()
            .map(|&b| {
                let d = i32::try_from(b - min).unwrap_or(i32::MAX);
                two.powi(-d)
            })
            .collect();
        let total = weights.iter().fold(F::zero(), |a, &w| a + w);
        let priors = weights.iter().map(|&w| w / total).collect();
        Ok(HypothesisRegistry {
            hypotheses,
            bits,
            priors,
            compressor: compressor.id().to_string(),
        })
    }

    /// Random, plan-first and oracle-guided agents.
    pub fn builtin(compressor: &dyn Compressor) -> Self {
        let hs = vec![
            Hypothesis::random(),
            Hypothesis::plan_first(),
            Hypothesis::oracle_guided(),
        ];
        // non-empty by construction
        HypothesisRegistry::new(hs, compressor).unwrap_or_else(|_| unreachable!())
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hypotheses
    }

    pub fn priors(&self) -> &[F] {
        &self.priors
    }

    pub fn description_bits(&self) -> &[u64] {
        &self.bits
    }

    pub fn compressor_id(&self) -> &str {
        &self.compressor
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Hypothesis, F)> + '_ {
        self.hypotheses.iter().zip(self.priors.iter().copied())
    }
}
