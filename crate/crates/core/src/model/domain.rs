use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::action::GroundAction;
use super::atoms::AtomTable;
use super::error::ModelError;
use super::ids::{AtomId, ObjId, PredId, SchemaId, SortId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sort {
    pub name: String,
    pub parent: Option<SortId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectConst {
    pub name: String,
    /// Declared sorts; membership also extends to their ancestors.
    pub sorts: Vec<SortId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateSchema {
    pub name: String,
    pub arg_sorts: Vec<SortId>,
}

impl PredicateSchema {
    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    /// Index into the schema's parameter list.
    Var(u16),
    Const(ObjId),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomTemplate {
    pub predicate: PredId,
    pub args: Vec<Term>,
}

/// A signed atom. Field order makes the derived ordering atom-major.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal<A> {
    pub atom: A,
    pub positive: bool,
}

impl<A> Literal<A> {
    pub fn pos(atom: A) -> Self {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: A) -> Self {
        Literal {
            atom,
            positive: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub sort: SortId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<Param>,
    pub pre: Vec<Literal<AtomTemplate>>,
    pub eff: Vec<Literal<AtomTemplate>>,
}

impl ActionSchema {
    /// Same parameter sorts and templates; parameter names are ignored.
    pub fn same_shape(&self, other: &ActionSchema) -> bool {
        self.name == other.name
            && self.params.len() == other.params.len()
            && self
                .params
                .iter()
                .zip(&other.params)
                .all(|(a, b)| a.sort == b.sort)
            && self.pre == other.pre
            && self.eff == other.eff
    }

    fn canonicalize(&mut self) {
        self.pre.sort();
        self.pre.dedup();
        self.eff.sort();
        self.eff.dedup();
    }
}

// Name-level declarations. Parsers and generators build these; `PlanningDomain`
// resolves them into the id-based form.

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DomainDecl {
    pub sorts: Vec<SortDecl>,
    pub objects: Vec<ObjectDecl>,
    pub predicates: Vec<PredicateDecl>,
    pub schemas: Vec<SchemaDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortDecl {
    pub name: String,
    pub parent: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectDecl {
    pub name: String,
    pub sorts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: String,
    pub arg_sorts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaDecl {
    pub name: String,
    /// `(variable, sort)` pairs; variable names carry no leading `?`.
    pub params: Vec<(String, String)>,
    pub pre: Vec<LiteralDecl>,
    pub eff: Vec<LiteralDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralDecl {
    pub positive: bool,
    pub predicate: String,
    pub args: Vec<TermDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermDecl {
    Var(String),
    Const(String),
}

impl SortDecl {
    pub fn new(name: &str, parent: Option<&str>) -> Self {
        SortDecl {
            name: name.into(),
            parent: parent.map(Into::into),
        }
    }
}

impl ObjectDecl {
    pub fn new(name: &str, sorts: &[&str]) -> Self {
        ObjectDecl {
            name: name.into(),
            sorts: sorts.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl PredicateDecl {
    pub fn new(name: &str, arg_sorts: &[&str]) -> Self {
        PredicateDecl {
            name: name.into(),
            arg_sorts: arg_sorts.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl LiteralDecl {
    /// Parses the compact form `"at ?o ?l"` / `"not at ?o L1"`.
    pub fn parse_compact(text: &str) -> Self {
        let mut words = text.split_whitespace().peekable();
        let positive = if words.peek() == Some(&"not") {
            words.next();
            false
        } else {
            true
        };
        let predicate = words.next().unwrap_or_default().to_string();
        let args = words
            .map(|w| match w.strip_prefix('?') {
                Some(v) => TermDecl::Var(v.to_string()),
                None => TermDecl::Const(w.to_string()),
            })
            .collect();
        LiteralDecl {
            positive,
            predicate,
            args,
        }
    }
}

/// An intensional planning domain: states, actions and transitions are
/// induced by grounding the predicate and action schemas over the objects.
#[derive(Clone, Debug)]
pub struct PlanningDomain {
    sorts: Vec<Sort>,
    objects: Vec<ObjectConst>,
    predicates: Vec<PredicateSchema>,
    schemas: Vec<ActionSchema>,
    members: Vec<Vec<ObjId>>,
    atoms: AtomTable,
    sort_ix: HashMap<String, SortId>,
    obj_ix: HashMap<String, ObjId>,
    pred_ix: HashMap<String, PredId>,
    schema_ix: HashMap<String, SchemaId>,
}

impl PartialEq for PlanningDomain {
    fn eq(&self, other: &Self) -> bool {
        self.sorts == other.sorts
            && self.objects == other.objects
            && self.predicates == other.predicates
            && self.schemas == other.schemas
    }
}

impl Eq for PlanningDomain {}

fn index_names<'a, I, T>(kind: &'static str, names: I) -> Result<HashMap<String, T>, ModelError>
where
    I: Iterator<Item = &'a str>,
    T: From<usize>,
{
    let mut map = HashMap::new();
    for (i, name) in names.enumerate() {
        if map.insert(name.to_string(), T::from(i)).is_some() {
            return Err(ModelError::DuplicateName {
                kind,
                name: name.to_string(),
            });
        }
    }
    Ok(map)
}

impl PlanningDomain {
    pub fn from_decl(decl: &DomainDecl) -> Result<Self, ModelError> {
        let mut sort_decls: Vec<&SortDecl> = decl.sorts.iter().collect();
        sort_decls.sort_by(|a, b| a.name.cmp(&b.name));
        let sort_ix: HashMap<String, SortId> =
            index_names("sort", sort_decls.iter().map(|s| s.name.as_str()))?;
        let resolve_sort = |name: &str| {
            sort_ix
                .get(name)
                .copied()
                .ok_or_else(|| ModelError::UnknownSort(name.to_string()))
        };
        let mut sorts = Vec::with_capacity(sort_decls.len());
        for s in &sort_decls {
            let parent = s.parent.as_deref().map(resolve_sort).transpose()?;
            sorts.push(Sort {
                name: s.name.clone(),
                parent,
            });
        }
        for (i, s) in sorts.iter().enumerate() {
            let mut cur = s.parent;
            let mut steps = 0;
            while let Some(p) = cur {
                steps += 1;
                if p.index() == i || steps > sorts.len() {
                    return Err(ModelError::SortCycle(s.name.clone()));
                }
                cur = sorts[p.index()].parent;
            }
        }

        let mut obj_decls: Vec<&ObjectDecl> = decl.objects.iter().collect();
        obj_decls.sort_by(|a, b| a.name.cmp(&b.name));
        let obj_ix: HashMap<String, ObjId> =
            index_names("object", obj_decls.iter().map(|o| o.name.as_str()))?;
        let mut objects = Vec::with_capacity(obj_decls.len());
        for o in &obj_decls {
            if o.sorts.is_empty() {
                return Err(ModelError::UnsortedObject(o.name.clone()));
            }
            let mut ss = o
                .sorts
                .iter()
                .map(|s| resolve_sort(s))
                .collect::<Result<Vec<_>, _>>()?;
            ss.sort();
            ss.dedup();
            objects.push(ObjectConst {
                name: o.name.clone(),
                sorts: ss,
            });
        }

        let members = compute_members(&sorts, &objects);

        let mut pred_decls: Vec<&PredicateDecl> = decl.predicates.iter().collect();
        pred_decls.sort_by(|a, b| a.name.cmp(&b.name));
        let pred_ix: HashMap<String, PredId> =
            index_names("predicate", pred_decls.iter().map(|p| p.name.as_str()))?;
        let mut predicates = Vec::with_capacity(pred_decls.len());
        for p in &pred_decls {
            let arg_sorts = p
                .arg_sorts
                .iter()
                .map(|s| resolve_sort(s))
                .collect::<Result<Vec<_>, _>>()?;
            predicates.push(PredicateSchema {
                name: p.name.clone(),
                arg_sorts,
            });
        }

        let mut schema_decls: Vec<&SchemaDecl> = decl.schemas.iter().collect();
        schema_decls.sort_by(|a, b| a.name.cmp(&b.name));
        let schema_ix: HashMap<String, SchemaId> =
            index_names("action schema", schema_decls.iter().map(|s| s.name.as_str()))?;

        let atoms = AtomTable::new(&predicates, &members);
        let mut domain = PlanningDomain {
            sorts,
            objects,
            predicates,
            schemas: Vec::new(),
            members,
            atoms,
            sort_ix,
            obj_ix,
            pred_ix,
            schema_ix,
        };
        let mut schemas = Vec::with_capacity(schema_decls.len());
        for s in &schema_decls {
            schemas.push(domain.resolve_schema(s)?);
        }
        domain.schemas = schemas;
        Ok(domain)
    }

    /// Resolves a name-level schema against this domain's vocabulary. The
    /// schema itself need not belong to the domain.
    pub fn resolve_schema(&self, decl: &SchemaDecl) -> Result<ActionSchema, ModelError> {
        let mut params: Vec<Param> = Vec::with_capacity(decl.params.len());
        for (var, sort) in &decl.params {
            if params.iter().any(|p| &p.name == var) {
                return Err(ModelError::DuplicateName {
                    kind: "parameter",
                    name: format!("?{var} in {}", decl.name),
                });
            }
            let sort = self
                .sort_id(sort)
                .ok_or_else(|| ModelError::UnknownSort(sort.clone()))?;
            params.push(Param {
                name: var.clone(),
                sort,
            });
        }
        let resolve_lit = |lit: &LiteralDecl| -> Result<Literal<AtomTemplate>, ModelError> {
            let pred = self
                .predicate_id(&lit.predicate)
                .ok_or_else(|| ModelError::UnknownPredicate(lit.predicate.clone()))?;
            let mut args = Vec::with_capacity(lit.args.len());
            for t in &lit.args {
                args.push(match t {
                    TermDecl::Var(v) => {
                        let ix = params.iter().position(|p| &p.name == v).ok_or_else(|| {
                            ModelError::UnknownVariable {
                                schema: decl.name.clone(),
                                var: v.clone(),
                            }
                        })?;
                        Term::Var(ix as u16)
                    }
                    TermDecl::Const(c) => Term::Const(
                        self.object_id(c)
                            .ok_or_else(|| ModelError::UnknownObject(c.clone()))?,
                    ),
                });
            }
            Ok(Literal {
                atom: AtomTemplate {
                    predicate: pred,
                    args,
                },
                positive: lit.positive,
            })
        };
        let pre = decl.pre.iter().map(resolve_lit).collect::<Result<_, _>>()?;
        let eff = decl.eff.iter().map(resolve_lit).collect::<Result<_, _>>()?;
        let mut schema = ActionSchema {
            name: decl.name.clone(),
            params,
            pre,
            eff,
        };
        schema.canonicalize();
        self.check_schema(&schema)?;
        Ok(schema)
    }

    /// Validates arities, sort compatibility and effect consistency.
    pub fn check_schema(&self, schema: &ActionSchema) -> Result<(), ModelError> {
        for p in &schema.params {
            if p.sort.index() >= self.sorts.len() {
                return Err(ModelError::UnknownSort(format!("#{}", p.sort.0)));
            }
        }
        for lit in schema.pre.iter().chain(&schema.eff) {
            let t = &lit.atom;
            let pred = self
                .predicates
                .get(t.predicate.index())
                .ok_or_else(|| ModelError::UnknownPredicate(format!("#{}", t.predicate.0)))?;
            if pred.arity() != t.args.len() {
                return Err(ModelError::ArityMismatch {
                    predicate: pred.name.clone(),
                    expected: pred.arity(),
                    found: t.args.len(),
                });
            }
            for (pos, (arg, &want)) in t.args.iter().zip(&pred.arg_sorts).enumerate() {
                let ok = match *arg {
                    Term::Var(v) => {
                        let param = schema.params.get(v as usize).ok_or_else(|| {
                            ModelError::UnknownVariable {
                                schema: schema.name.clone(),
                                var: format!("#{v}"),
                            }
                        })?;
                        self.sort_within(param.sort, want)
                    }
                    Term::Const(o) => {
                        if o.index() >= self.objects.len() {
                            return Err(ModelError::UnknownObject(format!("#{}", o.0)));
                        }
                        self.has_sort(o, want)
                    }
                };
                if !ok {
                    let found = match *arg {
                        Term::Var(v) => {
                            let p = &schema.params[v as usize];
                            format!("?{} of sort `{}`", p.name, self.sorts[p.sort.index()].name)
                        }
                        Term::Const(o) => format!("object `{}`", self.objects[o.index()].name),
                    };
                    return Err(ModelError::SortMismatch {
                        schema: schema.name.clone(),
                        predicate: pred.name.clone(),
                        position: pos + 1,
                        expected: self.sorts[want.index()].name.clone(),
                        found,
                    });
                }
            }
        }
        for (i, a) in schema.eff.iter().enumerate() {
            for b in &schema.eff[i + 1..] {
                if a.atom == b.atom && a.positive != b.positive {
                    return Err(ModelError::ContradictoryEffect {
                        schema: schema.name.clone(),
                        atom: self.template_label(schema, &a.atom),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    pub fn objects(&self) -> &[ObjectConst] {
        &self.objects
    }

    pub fn predicates(&self) -> &[PredicateSchema] {
        &self.predicates
    }

    pub fn schemas(&self) -> &[ActionSchema] {
        &self.schemas
    }

    pub fn sort(&self, id: SortId) -> &Sort {
        &self.sorts[id.index()]
    }

    pub fn object(&self, id: ObjId) -> &ObjectConst {
        &self.objects[id.index()]
    }

    pub fn predicate(&self, id: PredId) -> &PredicateSchema {
        &self.predicates[id.index()]
    }

    pub fn schema(&self, id: SchemaId) -> &ActionSchema {
        &self.schemas[id.index()]
    }

    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sort_ix.get(name).copied()
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.obj_ix.get(name).copied()
    }

    pub fn predicate_id(&self, name: &str) -> Option<PredId> {
        self.pred_ix.get(name).copied()
    }

    pub fn schema_id(&self, name: &str) -> Option<SchemaId> {
        self.schema_ix.get(name).copied()
    }

    /// Objects belonging to `sort` (directly or through a subsort), in id order.
    pub fn members(&self, sort: SortId) -> &[ObjId] {
        &self.members[sort.index()]
    }

    pub fn has_sort(&self, obj: ObjId, sort: SortId) -> bool {
        self.members[sort.index()].binary_search(&obj).is_ok()
    }

    /// Extensional sort inclusion: every member of `inner` is a member of `outer`.
    pub fn sort_within(&self, inner: SortId, outer: SortId) -> bool {
        let outer = &self.members[outer.index()];
        self.members[inner.index()]
            .iter()
            .all(|o| outer.binary_search(o).is_ok())
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_id(&self, predicate: &str, args: &[&str]) -> Option<AtomId> {
        let p = self.predicate_id(predicate)?;
        let ids = args
            .iter()
            .map(|a| self.object_id(a))
            .collect::<Option<Vec<_>>>()?;
        self.atoms.id(p, &ids)
    }

    /// Renders an atom as `pred(a,b)`.
    pub fn atom_label(&self, id: AtomId) -> String {
        let atom = self.atoms.atom(id);
        let pred = &self.predicates[atom.predicate.index()].name;
        let args: Vec<&str> = atom
            .args
            .iter()
            .map(|o| self.objects[o.index()].name.as_str())
            .collect();
        format!("{pred}({})", args.join(","))
    }

    pub fn template_label(&self, schema: &ActionSchema, t: &AtomTemplate) -> String {
        let args: Vec<String> = t
            .args
            .iter()
            .map(|a| match *a {
                Term::Var(v) => schema
                    .params
                    .get(v as usize)
                    .map(|p| format!("?{}", p.name))
                    .unwrap_or_else(|| format!("?#{v}")),
                Term::Const(o) => self.objects[o.index()].name.clone(),
            })
            .collect();
        format!("{}({})", self.predicates[t.predicate.index()].name, args.join(","))
    }

    /// All sort-respecting groundings of a schema belonging to this domain,
    /// ordered lexicographically by binding.
    pub fn ground_schema(&self, schema: &ActionSchema) -> Result<Vec<GroundAction>, ModelError> {
        let id = self
            .schema_id(&schema.name)
            .filter(|id| self.schemas[id.index()] == *schema)
            .ok_or_else(|| ModelError::UnknownSchema(schema.name.clone()))?;
        self.ground_by_id(id)
    }

    pub(crate) fn ground_by_id(&self, id: SchemaId) -> Result<Vec<GroundAction>, ModelError> {
        let schema = &self.schemas[id.index()];
        let domains: Vec<&[ObjId]> = schema
            .params
            .iter()
            .map(|p| {
                self.members
                    .get(p.sort.index())
                    .map(Vec::as_slice)
                    .ok_or_else(|| ModelError::UnknownSort(format!("#{}", p.sort.0)))
            })
            .collect::<Result<_, _>>()?;
        let mut out = Vec::new();
        if domains.iter().any(|d| d.is_empty()) {
            return Ok(out);
        }
        let mut cursor = vec![0usize; domains.len()];
        loop {
            let binding: Vec<ObjId> = cursor.iter().zip(&domains).map(|(&i, d)| d[i]).collect();
            out.push(self.instantiate(id, binding)?);
            // odometer increment, last position fastest
            let mut k = domains.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                cursor[k] += 1;
                if cursor[k] < domains[k].len() {
                    break;
                }
                cursor[k] = 0;
            }
        }
    }

    fn instantiate(&self, id: SchemaId, binding: Vec<ObjId>) -> Result<GroundAction, ModelError> {
        let schema = &self.schemas[id.index()];
        let ground = |t: &AtomTemplate| -> Result<AtomId, ModelError> {
            let args: Vec<ObjId> = t
                .args
                .iter()
                .map(|a| match *a {
                    Term::Var(v) => binding[v as usize],
                    Term::Const(o) => o,
                })
                .collect();
            self.atoms.id(t.predicate, &args).ok_or_else(|| {
                ModelError::UnknownObject(format!(
                    "ill-sorted atom {} in {}",
                    self.template_label(schema, t),
                    schema.name
                ))
            })
        };
        let mut pre_pos = Vec::new();
        let mut pre_neg = Vec::new();
        for lit in &schema.pre {
            let a = ground(&lit.atom)?;
            if lit.positive {
                pre_pos.push(a)
            } else {
                pre_neg.push(a)
            }
        }
        let mut add = Vec::new();
        let mut del = Vec::new();
        for lit in &schema.eff {
            let a = ground(&lit.atom)?;
            if lit.positive {
                add.push(a)
            } else {
                del.push(a)
            }
        }
        let mut objects: BTreeSet<ObjId> = binding.iter().copied().collect();
        let mut predicates = BTreeSet::new();
        for lit in schema.pre.iter().chain(&schema.eff) {
            predicates.insert(lit.atom.predicate);
            for a in &lit.atom.args {
                if let Term::Const(o) = a {
                    objects.insert(*o);
                }
            }
        }
        let label = {
            let names: Vec<&str> = binding
                .iter()
                .map(|o| self.objects[o.index()].name.as_str())
                .collect();
            format!("{}({})", schema.name, names.join(","))
        };
        Ok(GroundAction::new(
            id,
            binding,
            label,
            [pre_pos, pre_neg, add, del],
            objects.into_iter().collect(),
            predicates.into_iter().collect(),
        ))
    }

    /// Every ground action of every schema, ordered by schema name then binding.
    pub fn ground_all(&self) -> Vec<GroundAction> {
        let mut out = Vec::new();
        for i in 0..self.schemas.len() {
            // schemas were validated at construction, grounding cannot fail
            out.extend(self.ground_by_id(SchemaId::from(i)).unwrap_or_default());
        }
        out
    }

    pub fn to_decl(&self) -> DomainDecl {
        DomainDecl {
            sorts: self
                .sorts
                .iter()
                .map(|s| SortDecl {
                    name: s.name.clone(),
                    parent: s.parent.map(|p| self.sorts[p.index()].name.clone()),
                })
                .collect(),
            objects: self
                .objects
                .iter()
                .map(|o| ObjectDecl {
                    name: o.name.clone(),
                    sorts: o
                        .sorts
                        .iter()
                        .map(|s| self.sorts[s.index()].name.clone())
                        .collect(),
                })
                .collect(),
            predicates: self
                .predicates
                .iter()
                .map(|p| PredicateDecl {
                    name: p.name.clone(),
                    arg_sorts: p
                        .arg_sorts
                        .iter()
                        .map(|s| self.sorts[s.index()].name.clone())
                        .collect(),
                })
                .collect(),
            schemas: self.schemas.iter().map(|s| self.schema_decl(s)).collect(),
        }
    }

    pub fn schema_decl(&self, schema: &ActionSchema) -> SchemaDecl {
        let lit = |l: &Literal<AtomTemplate>| LiteralDecl {
            positive: l.positive,
            predicate: self.predicates[l.atom.predicate.index()].name.clone(),
            args: l
                .atom
                .args
                .iter()
                .map(|a| match *a {
                    Term::Var(v) => TermDecl::Var(schema.params[v as usize].name.clone()),
                    Term::Const(o) => TermDecl::Const(self.objects[o.index()].name.clone()),
                })
                .collect(),
        };
        SchemaDecl {
            name: schema.name.clone(),
            params: schema
                .params
                .iter()
                .map(|p| (p.name.clone(), self.sorts[p.sort.index()].name.clone()))
                .collect(),
            pre: schema.pre.iter().map(lit).collect(),
            eff: schema.eff.iter().map(lit).collect(),
        }
    }
}

fn compute_members(sorts: &[Sort], objects: &[ObjectConst]) -> Vec<Vec<ObjId>> {
    let mut members = vec![Vec::new(); sorts.len()];
    for (i, o) in objects.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for &s in &o.sorts {
            let mut cur = Some(s);
            while let Some(c) = cur {
                if !seen.insert(c) {
                    break;
                }
                cur = sorts[c.index()].parent;
            }
        }
        for s in seen {
            members[s.index()].push(ObjId::from(i));
        }
    }
    members
}

/// Grounds one schema of `domain`. Thin wrapper over [`PlanningDomain::ground_schema`].
pub fn ground_schema(
    schema: &ActionSchema,
    domain: &PlanningDomain,
) -> Result<Vec<GroundAction>, ModelError> {
    domain.ground_schema(schema)
}
