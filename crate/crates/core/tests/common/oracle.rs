//! Brute-force reference search over name-level declarations. Shares no
//! code with the library's grounding, interning or planner.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use mgpkit::bench::{OracleVerdict, VerdictOracle};
use mgpkit::mgp::MgpStatus;
use mgpkit::model::{GroundLiteralDecl, ProblemDecl, TermDecl, WorldDecl};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Names {
    pub predicates: BTreeSet<String>,
    pub objects: BTreeSet<String>,
    pub schemas: BTreeSet<String>,
}

#[derive(Clone, Debug)]
struct Act {
    schema: String,
    objects: BTreeSet<String>,
    predicates: BTreeSet<String>,
    pre_pos: Vec<u32>,
    pre_neg: Vec<u32>,
    add: Vec<u32>,
    del: Vec<u32>,
}

type St = BTreeSet<u32>;

/// A grounded problem in the oracle's own representation.
pub struct Instance {
    atoms: HashMap<String, u32>,
    atom_vocab: Vec<(String, Vec<String>)>,
    acts: Vec<Act>,
    pub world: Names,
    pub subdomain: Names,
    init: St,
    goal: Vec<(u32, bool)>,
    never: Vec<(u32, bool)>,
}

fn label(p: &str, args: &[String]) -> String {
    format!("{p}({})", args.join(","))
}

impl Instance {
    fn intern(&mut self, p: &str, args: Vec<String>) -> u32 {
        let key = label(p, &args);
        if let Some(&i) = self.atoms.get(&key) {
            return i;
        }
        let i = self.atom_vocab.len() as u32;
        self.atoms.insert(key, i);
        self.atom_vocab.push((p.to_string(), args));
        i
    }

    pub fn new(w: &WorldDecl, p: &ProblemDecl) -> Instance {
        let d = &w.domain;
        let parent: HashMap<&str, Option<&str>> = d
            .sorts
            .iter()
            .map(|s| (s.name.as_str(), s.parent.as_deref()))
            .collect();
        let mut members: HashMap<String, Vec<String>> = HashMap::new();
        for o in &d.objects {
            let mut seen = HashSet::new();
            for s in &o.sorts {
                let mut cur = Some(s.as_str());
                while let Some(c) = cur {
                    if !seen.insert(c.to_string()) {
                        break;
                    }
                    members.entry(c.to_string()).or_default().push(o.name.clone());
                    cur = parent.get(c).copied().flatten();
                }
            }
        }
        let all = Names {
            predicates: d.predicates.iter().map(|x| x.name.clone()).collect(),
            objects: d.objects.iter().map(|x| x.name.clone()).collect(),
            schemas: d.schemas.iter().map(|x| x.name.clone()).collect(),
        };
        let mut sub = all.clone();
        for x in &w.hidden.predicates {
            sub.predicates.remove(x);
        }
        for x in &w.hidden.objects {
            sub.objects.remove(x);
        }
        for x in &w.hidden.schemas {
            sub.schemas.remove(x);
        }
        sub.predicates.extend(p.reveal.predicates.iter().cloned());
        sub.objects.extend(p.reveal.objects.iter().cloned());
        sub.schemas.extend(p.reveal.schemas.iter().cloned());
        for x in &p.conceal.predicates {
            sub.predicates.remove(x);
        }
        for x in &p.conceal.objects {
            sub.objects.remove(x);
        }
        for x in &p.conceal.schemas {
            sub.schemas.remove(x);
        }
        let mut inst = Instance {
            atoms: HashMap::new(),
            atom_vocab: Vec::new(),
            acts: Vec::new(),
            world: all,
            subdomain: sub,
            init: St::new(),
            goal: Vec::new(),
            never: Vec::new(),
        };
        for s in &d.schemas {
            let domains: Vec<Vec<String>> = s
                .params
                .iter()
                .map(|(_, sort)| members.get(sort).cloned().unwrap_or_default())
                .collect();
            let mut bindings: Vec<Vec<String>> = vec![Vec::new()];
            for dom in &domains {
                let mut next = Vec::new();
                for b in &bindings {
                    for o in dom {
                        let mut nb = b.clone();
                        nb.push(o.clone());
                        next.push(nb);
                    }
                }
                bindings = next;
            }
            for b in bindings {
                let var: HashMap<&str, &String> = s
                    .params
                    .iter()
                    .map(|(v, _)| v.as_str())
                    .zip(b.iter())
                    .collect();
                let mut objects: BTreeSet<String> = b.iter().cloned().collect();
                let mut predicates = BTreeSet::new();
                let mut ground = |inst: &mut Instance, lits: &[mgpkit::model::LiteralDecl]| {
                    let mut pos = Vec::new();
                    let mut neg = Vec::new();
                    for l in lits {
                        let args: Vec<String> = l
                            .args
                            .iter()
                            .map(|t| match t {
                                TermDecl::Var(v) => var[v.as_str()].clone(),
                                TermDecl::Const(c) => {
                                    objects.insert(c.clone());
                                    c.clone()
                                }
                            })
                            .collect();
                        predicates.insert(l.predicate.clone());
                        let id = inst.intern(&l.predicate, args);
                        if l.positive {
                            pos.push(id);
                        } else {
                            neg.push(id);
                        }
                    }
                    (pos, neg)
                };
                let (pre_pos, pre_neg) = ground(&mut inst, &s.pre);
                let (add, del) = ground(&mut inst, &s.eff);
                let del = del.into_iter().filter(|a| !add.contains(a)).collect();
                inst.acts.push(Act {
                    schema: s.name.clone(),
                    objects,
                    predicates,
                    pre_pos,
                    pre_neg,
                    add,
                    del,
                });
            }
        }
        let lit = |inst: &mut Instance, l: &GroundLiteralDecl| {
            (inst.intern(&l.atom.predicate, l.atom.args.clone()), l.positive)
        };
        for l in &p.init {
            if l.positive {
                let (a, _) = lit(&mut inst, l);
                inst.init.insert(a);
            }
        }
        for l in &p.goal {
            let g = lit(&mut inst, l);
            inst.goal.push(g);
        }
        for l in &p.never {
            let n = lit(&mut inst, l);
            inst.never.push(n);
        }
        inst
    }

    fn admits(&self, view: &Names, a: &Act) -> bool {
        view.schemas.contains(&a.schema)
            && a.objects.iter().all(|o| view.objects.contains(o))
            && a.predicates.iter().all(|p| view.predicates.contains(p))
    }

    fn in_vocab(&self, view: &Names, atom: u32) -> bool {
        let (p, args) = &self.atom_vocab[atom as usize];
        view.predicates.contains(p) && args.iter().all(|o| view.objects.contains(o))
    }

    fn ok(&self, s: &St) -> bool {
        self.never.iter().all(|&(a, pos)| s.contains(&a) != pos)
    }

    fn is_goal(&self, view: &Names, s: &St) -> bool {
        self.goal
            .iter()
            .all(|&(a, pos)| self.in_vocab(view, a) && s.contains(&a) == pos)
    }

    fn successors<'a>(&'a self, view: &'a Names, s: &'a St) -> impl Iterator<Item = St> + 'a {
        self.acts
            .iter()
            .filter(move |a| self.admits(view, a))
            .filter(move |a| {
                a.pre_pos.iter().all(|x| s.contains(x)) && !a.pre_neg.iter().any(|x| s.contains(x))
            })
            .map(move |a| {
                let mut n = s.clone();
                for x in &a.del {
                    n.remove(x);
                }
                for x in &a.add {
                    n.insert(*x);
                }
                n
            })
            .filter(move |n| self.ok(n))
    }

    fn step_with<'a>(&'a self, acts: &'a [usize], s: &'a St) -> impl Iterator<Item = St> + 'a {
        acts.iter()
            .map(move |&i| &self.acts[i])
            .filter(move |a| {
                a.pre_pos.iter().all(|x| s.contains(x)) && !a.pre_neg.iter().any(|x| s.contains(x))
            })
            .map(move |a| {
                let mut n = s.clone();
                for x in &a.del {
                    n.remove(x);
                }
                for x in &a.add {
                    n.insert(*x);
                }
                n
            })
            .filter(move |n| self.ok(n))
    }

    /// Number of never-respecting states reachable in `view`.
    pub fn count(&self, view: &Names) -> usize {
        if !self.ok(&self.init) {
            return 0;
        }
        let mut seen: HashSet<St> = HashSet::new();
        let mut q = VecDeque::new();
        seen.insert(self.init.clone());
        q.push_back(self.init.clone());
        while let Some(s) = q.pop_front() {
            for n in self.successors(view, &s) {
                if seen.insert(n.clone()) {
                    q.push_back(n);
                }
            }
        }
        seen.len()
    }

    /// Indices of admitted actions that can affect the goal: fixed point
    /// over actions touching goal, never or already relevant precondition
    /// atoms. Plans never need the others.
    fn relevant(&self, view: &Names) -> Vec<usize> {
        let mut atoms: HashSet<u32> = self.goal.iter().chain(&self.never).map(|&(a, _)| a).collect();
        let mut keep = vec![false; self.acts.len()];
        loop {
            let mut changed = false;
            for (i, a) in self.acts.iter().enumerate() {
                if keep[i] || !self.admits(view, a) {
                    continue;
                }
                if a.add.iter().chain(&a.del).any(|x| atoms.contains(x)) {
                    keep[i] = true;
                    changed = true;
                    atoms.extend(a.pre_pos.iter().chain(&a.pre_neg).copied());
                }
            }
            if !changed {
                break;
            }
        }
        (0..self.acts.len()).filter(|&i| keep[i]).collect()
    }

    /// Shortest plan length to the goal in `view`.
    pub fn distance(&self, view: &Names) -> Option<usize> {
        if !self.ok(&self.init) {
            return None;
        }
        let relevant = self.relevant(view);
        let mut dist: HashMap<St, usize> = HashMap::new();
        let mut q = VecDeque::new();
        dist.insert(self.init.clone(), 0);
        q.push_back(self.init.clone());
        while let Some(s) = q.pop_front() {
            let d = dist[&s];
            if self.is_goal(view, &s) {
                return Some(d);
            }
            for n in self.step_with(&relevant, &s) {
                if !dist.contains_key(&n) {
                    dist.insert(n.clone(), d + 1);
                    q.push_back(n);
                }
            }
        }
        None
    }

    /// Every subset of `world ∖ subdomain` generators, smallest first, whose
    /// addition makes the goal reachable and that has no such proper subset.
    pub fn minimal_extensions(&self) -> Vec<Names> {
        let mut pool: Vec<(u8, String)> = Vec::new();
        for p in self.world.predicates.difference(&self.subdomain.predicates) {
            pool.push((0, p.clone()));
        }
        for o in self.world.objects.difference(&self.subdomain.objects) {
            pool.push((1, o.clone()));
        }
        for s in self.world.schemas.difference(&self.subdomain.schemas) {
            pool.push((2, s.clone()));
        }
        let n = pool.len();
        let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
        masks.sort_by_key(|m| m.count_ones());
        let mut found: Vec<u32> = Vec::new();
        for m in masks {
            if found.iter().any(|f| f & m == *f) {
                continue;
            }
            let mut view = self.subdomain.clone();
            for (i, (k, name)) in pool.iter().enumerate() {
                if m & (1 << i) != 0 {
                    match k {
                        0 => view.predicates.insert(name.clone()),
                        1 => view.objects.insert(name.clone()),
                        _ => view.schemas.insert(name.clone()),
                    };
                }
            }
            if self.distance(&view).is_some() {
                found.push(m);
            }
        }
        found
            .into_iter()
            .map(|m| {
                let mut out = Names::default();
                for (i, (k, name)) in pool.iter().enumerate() {
                    if m & (1 << i) != 0 {
                        match k {
                            0 => out.predicates.insert(name.clone()),
                            1 => out.objects.insert(name.clone()),
                            _ => out.schemas.insert(name.clone()),
                        };
                    }
                }
                out
            })
            .collect()
    }

    pub fn with_extra(&self, extra: &Names) -> Names {
        let mut v = self.subdomain.clone();
        v.predicates.extend(extra.predicates.iter().cloned());
        v.objects.extend(extra.objects.iter().cloned());
        v.schemas.extend(extra.schemas.iter().cloned());
        v
    }
}

/// Classification by plain BFS over string-labelled atoms.
#[derive(Clone, Copy, Debug, Default)]
pub struct NaiveOracle;

impl VerdictOracle for NaiveOracle {
    fn id(&self) -> &str {
        "naive-bfs"
    }

    fn judge(&self, world: &WorldDecl, problem: &ProblemDecl) -> Result<OracleVerdict, String> {
        let inst = Instance::new(world, problem);
        let subdomain_plan = inst.distance(&inst.subdomain);
        let world_plan = inst.distance(&inst.world);
        let status = match (subdomain_plan, world_plan) {
            (Some(_), _) => MgpStatus::SolvableInSubdomain,
            (None, Some(_)) => MgpStatus::Mgp,
            (None, None) => MgpStatus::UnsolvableInWorld,
        };
        Ok(OracleVerdict {
            status,
            subdomain_plan,
            world_plan,
        })
    }
}

/// Names of `gens` in the oracle's form.
pub fn names(world: &mgpkit::model::World, gens: &mgpkit::model::Generators) -> Names {
    let n = world.generator_names(gens);
    Names {
        predicates: n.predicates.into_iter().collect(),
        objects: n.objects.into_iter().collect(),
        schemas: n.schemas.into_iter().collect(),
    }
}

pub fn instance(p: &mgpkit::model::Problem) -> Instance {
    Instance::new(&p.world.to_decl(), &p.to_decl())
}
