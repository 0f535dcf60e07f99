use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BenchCase, BenchError, Golden, GoldenSource};
use crate::lang::{problem_to_text, world_to_text, SourceDoc};
use crate::mgp::{classify_problem, Budget, MgpStatus};
use crate::model::{
    AtomDecl, DomainDecl, GeneratorNames, GroundLiteralDecl, LiteralDecl, ObjectDecl,
    PredicateDecl, Problem, ProblemDecl, SchemaDecl, SortDecl, TermDecl, World, WorldDecl,
};
use crate::planner::search_plan;

const MAX_ATOMS: usize = 16;
const MAX_OBJECTS: usize = 8;
const MAX_PREDICATES: usize = 8;
const MAX_SCHEMAS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomSizes {
    pub objects: usize,
    pub predicates: usize,
    pub schemas: usize,
    /// Fraction of schemas hidden from the agent, rounded to a count.
    pub hidden_fraction: f64,
}

impl RandomSizes {
    pub fn new(objects: usize, predicates: usize, schemas: usize, hidden_fraction: f64) -> Self {
        RandomSizes {
            objects,
            predicates,
            schemas,
            hidden_fraction,
        }
    }
}

/// Verdict and shortest plan lengths for a problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub status: MgpStatus,
    pub subdomain_plan: Option<usize>,
    pub world_plan: Option<usize>,
}

/// Decides problems given at the declaration level.
pub trait VerdictOracle {
    fn id(&self) -> &str;
    fn judge(&self, world: &WorldDecl, problem: &ProblemDecl) -> Result<OracleVerdict, String>;
}

/// Oracle backed by this crate's own classifier and planner.
#[derive(Clone, Copy, Debug, Default)]
pub struct PlannerOracle {
    pub budget: Budget,
}

impl VerdictOracle for PlannerOracle {
    fn id(&self) -> &str {
        "planner"
    }

    fn judge(&self, world: &WorldDecl, problem: &ProblemDecl) -> Result<OracleVerdict, String> {
        let w = Arc::new(World::from_decl(world).map_err(|e| e.to_string())?);
        let (p, _) = Problem::from_decl(problem, w).map_err(|e| e.to_string())?;
        let v = classify_problem(&p, &self.budget).map_err(|e| e.to_string())?;
        let len = |view| -> Result<Option<usize>, String> {
            let r = search_plan(view, &p.init, &p.goal, &p.never, self.budget.cap)
                .map_err(|e| e.to_string())?;
            Ok(r.plan.map(|pl| pl.len()))
        };
        Ok(OracleVerdict {
            status: v.status,
            subdomain_plan: len(&p.subdomain)?,
            world_plan: len(&p.world_view())?,
        })
    }
}

fn check_sizes(s: &RandomSizes) -> Result<(), BenchError> {
    let bad = |what: &str, n: usize, max: usize| {
        Err(BenchError::Budget(format!("{n} {what} (at most {max})")))
    };
    if s.objects == 0 || s.objects > MAX_OBJECTS {
        return bad("objects", s.objects, MAX_OBJECTS);
    }
    if s.predicates == 0 || s.predicates > MAX_PREDICATES {
        return bad("predicates", s.predicates, MAX_PREDICATES);
    }
    if s.schemas == 0 || s.schemas > MAX_SCHEMAS {
        return bad("schemas", s.schemas, MAX_SCHEMAS);
    }
    if !(0.0..=1.0).contains(&s.hidden_fraction) {
        return Err(BenchError::Budget(format!(
            "hidden fraction {} outside [0, 1]",
            s.hidden_fraction
        )));
    }
    Ok(())
}

fn ground_atoms(objects: &[String], preds: &[(String, usize)]) -> Vec<AtomDecl> {
    let mut out = Vec::new();
    for (name, arity) in preds {
        let mut ix = vec![0usize; *arity];
        loop {
            out.push(AtomDecl {
                predicate: name.clone(),
                args: ix.iter().map(|&i| objects[i].clone()).collect(),
            });
            let mut k = *arity;
            while k > 0 && ix[k - 1] + 1 == objects.len() {
                ix[k - 1] = 0;
                k -= 1;
            }
            if k == 0 {
                break;
            }
            ix[k - 1] += 1;
        }
    }
    out
}

fn random_literal(
    rng: &mut ChaCha8Rng,
    preds: &[(String, usize)],
    params: usize,
    objects: &[String],
    p_positive: f64,
) -> LiteralDecl {
    let (name, arity) = &preds[rng.gen_range(0..preds.len())];
    let args = (0..*arity)
        .map(|_| {
            if params > 0 {
                TermDecl::Var(format!("x{}", rng.gen_range(0..params)))
            } else {
                TermDecl::Const(objects[rng.gen_range(0..objects.len())].clone())
            }
        })
        .collect();
    LiteralDecl {
        positive: rng.gen_bool(p_positive),
        predicate: name.clone(),
        args,
    }
}

/// A random single-sort world with at most 16 ground atoms and a problem
/// over it, with the expected verdict supplied by `oracle`.
pub fn gen_random_mgp(
    seed: u64,
    sizes: RandomSizes,
    oracle: &dyn VerdictOracle,
) -> Result<BenchCase, BenchError> {
    check_sizes(&sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let objects: Vec<String> = (0..sizes.objects).map(|i| format!("o{i}")).collect();
    let mut arities: Vec<usize> = (0..sizes.predicates).map(|_| rng.gen_range(0..=2)).collect();
    let count = |ar: &[usize]| -> usize { ar.iter().map(|&a| sizes.objects.pow(a as u32)).sum() };
    while count(&arities) > MAX_ATOMS {
        let (i, _) = arities
            .iter()
            .enumerate()
            .max_by_key(|(_, &a)| a)
            .unwrap_or((0, &0));
        arities[i] -= 1;
    }
    let preds: Vec<(String, usize)> = arities
        .iter()
        .enumerate()
        .map(|(i, &a)| (format!("p{i}"), a))
        .collect();

    let mut schemas = Vec::with_capacity(sizes.schemas);
    for i in 0..sizes.schemas {
        let params = rng.gen_range(0..=2usize);
        let n_pre = rng.gen_range(1..=2);
        let n_eff = rng.gen_range(1..=2);
        let pre: Vec<LiteralDecl> = (0..n_pre)
            .map(|_| random_literal(&mut rng, &preds, params, &objects, 0.75))
            .collect();
        let mut eff: Vec<LiteralDecl> = Vec::new();
        for _ in 0..n_eff {
            let l = random_literal(&mut rng, &preds, params, &objects, 0.6);
            if !eff
                .iter()
                .any(|e| e.predicate == l.predicate && e.args == l.args)
            {
                eff.push(l);
            }
        }
        schemas.push(SchemaDecl {
            name: format!("a{i}"),
            params: (0..params).map(|j| (format!("x{j}"), "thing".into())).collect(),
            pre,
            eff,
        });
    }
    let n_hidden = (sizes.hidden_fraction * sizes.schemas as f64).round() as usize;
    let mut order: Vec<usize> = (0..sizes.schemas).collect();
    order.shuffle(&mut rng);
    let mut hidden: Vec<String> = order[..n_hidden].iter().map(|&i| format!("a{i}")).collect();
    hidden.sort();

    let name = format!("rand_{seed}");
    let world_decl = WorldDecl {
        name: name.clone(),
        species: "generated".into(),
        domain: DomainDecl {
            sorts: vec![SortDecl::new("thing", None)],
            objects: objects.iter().map(|o| ObjectDecl::new(o, &["thing"])).collect(),
            predicates: preds
                .iter()
                .map(|(n, a)| PredicateDecl::new(n, &vec!["thing"; *a]))
                .collect(),
            schemas,
        },
        hidden: GeneratorNames {
            schemas: hidden,
            ..GeneratorNames::default()
        },
    };

    let atoms = ground_atoms(&objects, &preds);
    let init: BTreeSet<AtomDecl> = atoms.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
    let mut goal: BTreeMap<AtomDecl, bool> = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=2) {
        let a = atoms[rng.gen_range(0..atoms.len())].clone();
        let positive = !init.contains(&a);
        goal.insert(a, positive);
    }
    let mut never = Vec::new();
    if rng.gen_bool(0.25) {
        let a = atoms[rng.gen_range(0..atoms.len())].clone();
        if !init.contains(&a) && !goal.contains_key(&a) {
            never.push(GroundLiteralDecl::pos(a));
        }
    }
    let problem_decl = ProblemDecl {
        name: name.clone(),
        world: name.clone(),
        init: init.into_iter().map(GroundLiteralDecl::pos).collect(),
        goal: goal
            .into_iter()
            .map(|(atom, positive)| GroundLiteralDecl { atom, positive })
            .collect(),
        never,
        ..ProblemDecl::default()
    };

    let verdict = oracle
        .judge(&world_decl, &problem_decl)
        .map_err(BenchError::Oracle)?;
    let world = Arc::new(World::from_decl(&world_decl)?);
    let (problem, _) = Problem::from_decl(&problem_decl, world.clone())?;
    let mut golden = BTreeMap::new();
    let src = GoldenSource::Oracle;
    if let Some(n) = verdict.subdomain_plan {
        golden.insert("subdomain_plan_length".into(), Golden { value: n as u64, source: src });
    }
    if let Some(n) = verdict.world_plan {
        golden.insert("world_plan_length".into(), Golden { value: n as u64, source: src });
    }
    Ok(BenchCase {
        name: name.clone(),
        world_doc: SourceDoc::new(world_to_text(&world), format!("{name}.world")),
        problem_doc: SourceDoc::new(problem_to_text(&problem), format!("{name}.problem")),
        expected: verdict.status,
        golden,
    })
}
