use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use super::diag::{DiagCode, Diagnostic, Parsed, SourceDoc, Span};
use super::sexpr::{read_all, SExpr};
use crate::model::{
    resolve_atom, AtomDecl, GeneratorRef, DomainDecl, GeneratorNames, GroundLiteralDecl, LiteralDecl,
    ModelError, ObjectDecl, PredicateDecl, Problem, ProblemDecl, SchemaDecl, SortDecl, TermDecl,
    World, WorldDecl,
};

type Diags = Vec<Diagnostic>;

fn err(code: DiagCode, span: Span, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::error(code, span, msg)
}

fn model_error_diag(e: &ModelError, span: Span) -> Diagnostic {
    let code = match e {
        ModelError::DuplicateName { .. } => DiagCode::DuplicateName,
        ModelError::UnknownSort(_) => DiagCode::UnknownSort,
        ModelError::UnknownPredicate(_) => DiagCode::UnknownPredicate,
        ModelError::UnknownObject(_) => DiagCode::UnknownObject,
        ModelError::UnknownSchema(_) => DiagCode::UnknownSchema,
        ModelError::UnknownVariable { .. } => DiagCode::UnknownVariable,
        ModelError::ArityMismatch { .. } => DiagCode::ArityMismatch,
        ModelError::SortMismatch { .. } => DiagCode::SortMismatch,
        ModelError::ContradictoryEffect { .. } => DiagCode::ContradictoryEffect,
        ModelError::SortCycle(_) => DiagCode::SortCycle,
        ModelError::InvalidProblem(_) => DiagCode::InconsistentInit,
        _ => DiagCode::Structure,
    };
    err(code, span, e.to_string())
}

/// A name token: not a list, not a keyword, not a variable.
fn name(e: &SExpr, what: &str) -> Result<(String, Span), Diagnostic> {
    match e {
        SExpr::Atom(a, s) if !a.starts_with(':') && !a.starts_with('?') => Ok((a.clone(), *s)),
        SExpr::Atom(a, s) => Err(err(
            DiagCode::Syntax,
            *s,
            format!("expected {what}, found `{a}`"),
        )),
        SExpr::List(_, s) => Err(err(DiagCode::Syntax, *s, format!("expected {what}, found a list"))),
    }
}

fn list<'a>(e: &'a SExpr, what: &str) -> Result<&'a [SExpr], Diagnostic> {
    e.as_list()
        .ok_or_else(|| err(DiagCode::Syntax, e.span(), format!("expected {what}")))
}

fn section<'a>(e: &'a SExpr) -> Result<(&'a str, &'a [SExpr]), Diagnostic> {
    match e.as_list() {
        Some([SExpr::Atom(k, _), rest @ ..]) if k.starts_with(':') => Ok((k.as_str(), rest)),
        _ => Err(err(
            DiagCode::Syntax,
            e.span(),
            "expected a section such as `(:objects ...)`",
        )),
    }
}

/// Finds the single top-level form headed by `keyword`.
fn top_form<'a>(
    forms: &'a [SExpr],
    keyword: &str,
    missing: DiagCode,
    what: &str,
) -> Result<&'a [SExpr], Diags> {
    let mut found: Option<&[SExpr]> = None;
    let mut diags = Vec::new();
    for f in forms {
        if f.head() == Some(keyword) {
            if found.is_some() {
                diags.push(err(
                    DiagCode::Structure,
                    f.span(),
                    format!("more than one {what} declaration"),
                ));
            } else {
                found = f.as_list();
            }
        } else {
            diags.push(err(
                DiagCode::Structure,
                f.span(),
                format!("unexpected top-level form; expected `({keyword} ...)`"),
            ));
        }
    }
    match found {
        Some(items) if diags.is_empty() => Ok(items),
        Some(_) => Err(diags),
        None => {
            let span = forms.first().map(SExpr::span).unwrap_or(Span {
                start: 0,
                end: 0,
                line: 1,
                col: 1,
            });
            let mut out = vec![err(missing, span, format!("no {what} declaration"))];
            out.extend(diags);
            Err(out)
        }
    }
}

#[derive(Debug)]
struct LitSrc {
    positive: bool,
    pred: (String, Span),
    args: Vec<(String, Span)>,
    span: Span,
}

fn literal(e: &SExpr) -> Result<LitSrc, Diagnostic> {
    let items = list(e, "a literal `(pred args...)`")?;
    let (positive, inner) = match items {
        [SExpr::Atom(k, _), inner] if k == "not" => (false, inner),
        [SExpr::Atom(k, s), ..] if k == "not" => {
            return Err(err(DiagCode::Syntax, *s, "`not` takes exactly one atom"))
        }
        _ => (true, e),
    };
    let parts = list(inner, "an atom `(pred args...)`")?;
    let Some(head) = parts.first() else {
        return Err(err(DiagCode::Syntax, inner.span(), "empty atom"));
    };
    let pred = name(head, "a predicate name")?;
    let mut args = Vec::new();
    for a in &parts[1..] {
        match a {
            SExpr::Atom(t, s) if !t.starts_with(':') => args.push((t.clone(), *s)),
            _ => return Err(err(DiagCode::Syntax, a.span(), "expected a term")),
        }
    }
    Ok(LitSrc {
        positive,
        pred,
        args,
        span: e.span(),
    })
}

#[derive(Debug)]
struct SchemaSrc {
    name: (String, Span),
    params: Vec<((String, Span), (String, Span))>,
    pre: Vec<LitSrc>,
    eff: Vec<LitSrc>,
}

fn action(items: &[SExpr], span: Span) -> Result<SchemaSrc, Diagnostic> {
    let Some(first) = items.first() else {
        return Err(err(DiagCode::Syntax, span, "action needs a name"));
    };
    let mut out = SchemaSrc {
        name: name(first, "an action name")?,
        params: Vec::new(),
        pre: Vec::new(),
        eff: Vec::new(),
    };
    let mut seen = HashSet::new();
    for sec in &items[1..] {
        let (k, rest) = section(sec)?;
        if !seen.insert(k) {
            return Err(err(
                DiagCode::Structure,
                sec.span(),
                format!("repeated `{k}` section"),
            ));
        }
        match k {
            ":params" => {
                for p in rest {
                    match p.as_list() {
                        Some([SExpr::Atom(v, vs), sort]) if v.starts_with('?') && v.len() > 1 => {
                            let sort = name(sort, "a sort name")?;
                            out.params.push(((v[1..].to_string(), *vs), sort));
                        }
                        _ => {
                            return Err(err(
                                DiagCode::Syntax,
                                p.span(),
                                "expected a parameter `(?var sort)`",
                            ))
                        }
                    }
                }
            }
            ":pre" => {
                for l in rest {
                    out.pre.push(literal(l)?);
                }
            }
            ":eff" => {
                for l in rest {
                    out.eff.push(literal(l)?);
                }
            }
            other => {
                return Err(err(
                    DiagCode::Structure,
                    sec.span(),
                    format!("unknown action section `{other}`"),
                ))
            }
        }
    }
    Ok(out)
}

type Typed = ((String, Span), Vec<(String, Span)>);

#[derive(Default, Debug)]
struct WorldSrc {
    name: String,
    species: Option<String>,
    sorts: Vec<((String, Span), Option<(String, Span)>)>,
    objects: Vec<Typed>,
    predicates: Vec<Typed>,
    schemas: Vec<SchemaSrc>,
    hidden_objects: Vec<String>,
    hidden_predicates: Vec<String>,
    hidden_schemas: Vec<String>,
}

fn typed_entries(rest: &[SExpr], what: &str, min_sorts: usize) -> Result<Vec<Typed>, Diagnostic> {
    let mut out = Vec::new();
    for e in rest {
        let items = list(e, &format!("an entry `({what} sort...)`"))?;
        let Some(first) = items.first() else {
            return Err(err(DiagCode::Syntax, e.span(), format!("empty {what} entry")));
        };
        let n = name(first, &format!("a {what} name"))?;
        let sorts = items[1..]
            .iter()
            .map(|s| name(s, "a sort name"))
            .collect::<Result<Vec<_>, _>>()?;
        if sorts.len() < min_sorts {
            return Err(err(
                DiagCode::Syntax,
                e.span(),
                format!("{what} `{}` needs at least one sort", n.0),
            ));
        }
        out.push((n, sorts));
    }
    Ok(out)
}

fn world_body(items: &[SExpr], span: Span) -> Result<WorldSrc, Diagnostic> {
    let Some(first) = items.get(1) else {
        return Err(err(DiagCode::Syntax, span, "world needs a name"));
    };
    let mut w = WorldSrc {
        name: name(first, "a world name")?.0,
        ..WorldSrc::default()
    };
    let mut seen = HashSet::new();
    for sec in &items[2..] {
        let (k, rest) = section(sec)?;
        if k != ":action" && !seen.insert(k) {
            return Err(err(
                DiagCode::Structure,
                sec.span(),
                format!("repeated `{k}` section"),
            ));
        }
        match k {
            ":species" => match rest {
                [s] => w.species = Some(name(s, "a species tag")?.0),
                _ => return Err(err(DiagCode::Syntax, sec.span(), "expected `(:species tag)`")),
            },
            ":sorts" => {
                for s in rest {
                    match s {
                        SExpr::Atom(..) => w.sorts.push((name(s, "a sort name")?, None)),
                        SExpr::List(parts, ls) => match parts.as_slice() {
                            [n, p] => w
                                .sorts
                                .push((name(n, "a sort name")?, Some(name(p, "a parent sort")?))),
                            _ => {
                                return Err(err(
                                    DiagCode::Syntax,
                                    *ls,
                                    "expected `sort` or `(sort parent)`",
                                ))
                            }
                        },
                    }
                }
            }
            ":objects" => w.objects.extend(typed_entries(rest, "object", 1)?),
            ":predicates" => w.predicates.extend(typed_entries(rest, "predicate", 0)?),
            ":action" => w.schemas.push(action(rest, sec.span())?),
            ":hidden" => {
                let mut hseen = HashSet::new();
                for h in rest {
                    let (hk, hrest) = section(h)?;
                    if hk != ":action" && !hseen.insert(hk) {
                        return Err(err(
                            DiagCode::Structure,
                            h.span(),
                            format!("repeated `{hk}` section"),
                        ));
                    }
                    match hk {
                        ":objects" => {
                            let entries = typed_entries(hrest, "object", 1)?;
                            w.hidden_objects.extend(entries.iter().map(|e| e.0 .0.clone()));
                            w.objects.extend(entries);
                        }
                        ":predicates" => {
                            let entries = typed_entries(hrest, "predicate", 0)?;
                            w.hidden_predicates
                                .extend(entries.iter().map(|e| e.0 .0.clone()));
                            w.predicates.extend(entries);
                        }
                        ":action" => {
                            let a = action(hrest, h.span())?;
                            w.hidden_schemas.push(a.name.0.clone());
                            w.schemas.push(a);
                        }
                        other => {
                            return Err(err(
                                DiagCode::Structure,
                                h.span(),
                                format!("unknown hidden section `{other}`"),
                            ))
                        }
                    }
                }
            }
            other => {
                return Err(err(
                    DiagCode::Structure,
                    sec.span(),
                    format!("unknown world section `{other}`"),
                ))
            }
        }
    }
    Ok(w)
}

/// Name-level checks with positions, mirroring what the model enforces.
struct Checker {
    diags: Diags,
    sort_parent: HashMap<String, Option<String>>,
    /// Object name to the closure of its sorts.
    object_sorts: HashMap<String, BTreeSet<String>>,
    predicates: HashMap<String, Vec<String>>,
}

impl Checker {
    fn dup_check<'a, I: Iterator<Item = &'a (String, Span)>>(&mut self, kind: &str, names: I) {
        let mut seen = HashSet::new();
        for (n, s) in names {
            if !seen.insert(n.clone()) {
                self.diags.push(err(
                    DiagCode::DuplicateName,
                    *s,
                    format!("duplicate {kind} `{n}`"),
                ));
            }
        }
    }

    fn sort_known(&mut self, sort: &(String, Span)) -> bool {
        if self.sort_parent.contains_key(&sort.0) {
            true
        } else {
            self.diags.push(err(
                DiagCode::UnknownSort,
                sort.1,
                format!("unknown sort `{}`", sort.0),
            ));
            false
        }
    }

    fn ancestors(&self, sort: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut cur = Some(sort.to_string());
        while let Some(c) = cur {
            if !out.insert(c.clone()) {
                break;
            }
            cur = self.sort_parent.get(&c).cloned().flatten();
        }
        out
    }

    fn members(&self, sort: &str) -> BTreeSet<&str> {
        self.object_sorts
            .iter()
            .filter(|(_, ss)| ss.contains(sort))
            .map(|(o, _)| o.as_str())
            .collect()
    }

    fn sort_within(&self, inner: &str, outer: &str) -> bool {
        let outer = self.members(outer);
        self.members(inner).iter().all(|o| outer.contains(o))
    }

    fn check_literal(&mut self, lit: &LitSrc, params: &HashMap<String, String>, schema: &str) {
        let Some(arg_sorts) = self.predicates.get(&lit.pred.0).cloned() else {
            self.diags.push(err(
                DiagCode::UnknownPredicate,
                lit.pred.1,
                format!("unknown predicate `{}` in `{schema}`", lit.pred.0),
            ));
            return;
        };
        if arg_sorts.len() != lit.args.len() {
            self.diags.push(err(
                DiagCode::ArityMismatch,
                lit.pred.1,
                format!(
                    "`{}` takes {} argument(s), got {}",
                    lit.pred.0,
                    arg_sorts.len(),
                    lit.args.len()
                ),
            ));
            return;
        }
        for (i, ((arg, span), want)) in lit.args.iter().zip(&arg_sorts).enumerate() {
            if let Some(v) = arg.strip_prefix('?') {
                match params.get(v) {
                    None => self.diags.push(err(
                        DiagCode::UnknownVariable,
                        *span,
                        format!("variable `{arg}` is not a parameter of `{schema}`"),
                    )),
                    Some(have) => {
                        if !self.sort_within(have, want) {
                            self.diags.push(err(
                                DiagCode::SortMismatch,
                                *span,
                                format!(
                                    "argument {} of `{}` expects sort `{want}`, `{arg}` has sort `{have}`",
                                    i + 1,
                                    lit.pred.0
                                ),
                            ));
                        }
                    }
                }
            } else {
                self.check_constant(arg, *span, want, &lit.pred.0, i);
            }
        }
    }

    fn check_constant(&mut self, arg: &str, span: Span, want: &str, pred: &str, i: usize) {
        match self.object_sorts.get(arg) {
            None => self.diags.push(err(
                DiagCode::UnknownObject,
                span,
                format!("unknown object `{arg}`"),
            )),
            Some(ss) if !ss.contains(want) => self.diags.push(err(
                DiagCode::SortMismatch,
                span,
                format!(
                    "argument {} of `{pred}` expects sort `{want}`, object `{arg}` is not of that sort",
                    i + 1
                ),
            )),
            Some(_) => {}
        }
    }
}

fn term(arg: &str) -> TermDecl {
    match arg.strip_prefix('?') {
        Some(v) => TermDecl::Var(v.to_string()),
        None => TermDecl::Const(arg.to_string()),
    }
}

fn lit_decl(l: &LitSrc) -> LiteralDecl {
    LiteralDecl {
        positive: l.positive,
        predicate: l.pred.0.clone(),
        args: l.args.iter().map(|a| term(&a.0)).collect(),
    }
}

fn check_world(src: &WorldSrc, span: Span) -> Result<WorldDecl, Diags> {
    let mut c = Checker {
        diags: Vec::new(),
        sort_parent: HashMap::new(),
        object_sorts: HashMap::new(),
        predicates: HashMap::new(),
    };
    c.dup_check("sort", src.sorts.iter().map(|s| &s.0));
    c.dup_check("object", src.objects.iter().map(|o| &o.0));
    c.dup_check("predicate", src.predicates.iter().map(|p| &p.0));
    c.dup_check("action", src.schemas.iter().map(|s| &s.name));
    for (n, p) in &src.sorts {
        c.sort_parent
            .entry(n.0.clone())
            .or_insert_with(|| p.as_ref().map(|p| p.0.clone()));
    }
    for (_, p) in &src.sorts {
        if let Some(p) = p {
            c.sort_known(p);
        }
    }
    for (n, _) in &src.sorts {
        // a cycle exists iff walking parents revisits the start
        let mut cur = c.sort_parent.get(&n.0).cloned().flatten();
        let mut steps = 0;
        while let Some(p) = cur {
            steps += 1;
            if p == n.0 || steps > src.sorts.len() {
                c.diags.push(err(
                    DiagCode::SortCycle,
                    n.1,
                    format!("sort hierarchy has a cycle through `{}`", n.0),
                ));
                break;
            }
            cur = c.sort_parent.get(&p).cloned().flatten();
        }
    }
    if !c.diags.is_empty() {
        return Err(c.diags);
    }
    for (o, sorts) in &src.objects {
        let mut closure = BTreeSet::new();
        for s in sorts {
            if c.sort_known(s) {
                closure.extend(c.ancestors(&s.0));
            }
        }
        c.object_sorts.entry(o.0.clone()).or_insert(closure);
    }
    for (p, sorts) in &src.predicates {
        for s in sorts {
            c.sort_known(s);
        }
        c.predicates
            .entry(p.0.clone())
            .or_insert_with(|| sorts.iter().map(|s| s.0.clone()).collect());
    }
    for s in &src.schemas {
        let mut params = HashMap::new();
        for ((v, vs), sort) in &s.params {
            c.sort_known(sort);
            if params.insert(v.clone(), sort.0.clone()).is_some() {
                c.diags.push(err(
                    DiagCode::DuplicateName,
                    *vs,
                    format!("duplicate parameter `?{v}` in `{}`", s.name.0),
                ));
            }
        }
        if !c.diags.is_empty() {
            continue;
        }
        for l in s.pre.iter().chain(&s.eff) {
            c.check_literal(l, &params, &s.name.0);
        }
        for (i, a) in s.eff.iter().enumerate() {
            for b in &s.eff[i + 1..] {
                if a.positive != b.positive
                    && a.pred.0 == b.pred.0
                    && a.args.iter().map(|x| &x.0).eq(b.args.iter().map(|x| &x.0))
                {
                    c.diags.push(err(
                        DiagCode::ContradictoryEffect,
                        b.span,
                        format!("`{}` both adds and deletes `{}`", s.name.0, a.pred.0),
                    ));
                }
            }
        }
    }
    if !c.diags.is_empty() {
        return Err(c.diags);
    }
    let _ = span;
    Ok(WorldDecl {
        name: src.name.clone(),
        species: src.species.clone().unwrap_or_default(),
        domain: DomainDecl {
            sorts: src
                .sorts
                .iter()
                .map(|(n, p)| SortDecl {
                    name: n.0.clone(),
                    parent: p.as_ref().map(|p| p.0.clone()),
                })
                .collect(),
            objects: src
                .objects
                .iter()
                .map(|(n, ss)| ObjectDecl {
                    name: n.0.clone(),
                    sorts: ss.iter().map(|s| s.0.clone()).collect(),
                })
                .collect(),
            predicates: src
                .predicates
                .iter()
                .map(|(n, ss)| PredicateDecl {
                    name: n.0.clone(),
                    arg_sorts: ss.iter().map(|s| s.0.clone()).collect(),
                })
                .collect(),
            schemas: src
                .schemas
                .iter()
                .map(|s| SchemaDecl {
                    name: s.name.0.clone(),
                    params: s
                        .params
                        .iter()
                        .map(|(v, sort)| (v.0.clone(), sort.0.clone()))
                        .collect(),
                    pre: s.pre.iter().map(lit_decl).collect(),
                    eff: s.eff.iter().map(lit_decl).collect(),
                })
                .collect(),
        },
        hidden: GeneratorNames {
            predicates: src.hidden_predicates.clone(),
            objects: src.hidden_objects.clone(),
            schemas: src.hidden_schemas.clone(),
        },
    })
}

/// Parses a `.world` document. Total: any input yields a world or diagnostics.
pub fn parse_world(doc: &SourceDoc) -> Result<Parsed<World>, Diags> {
    let forms = read_all(&doc.text).map_err(|d| vec![d])?;
    let items = top_form(&forms, ":world", DiagCode::NoWorld, "world")?;
    let span = forms
        .iter()
        .find(|f| f.head() == Some(":world"))
        .map(SExpr::span)
        .unwrap_or_default();
    let src = world_body(items, span).map_err(|d| vec![d])?;
    let decl = check_world(&src, span)?;
    let world = World::from_decl(&decl).map_err(|e| vec![model_error_diag(&e, span)])?;
    Ok(Parsed {
        value: world,
        warnings: Vec::new(),
    })
}

#[derive(Debug, Default)]
struct ProblemSrc {
    name: String,
    world: Option<(String, Span)>,
    reveal: Vec<(char, String, Span)>,
    conceal: Vec<(char, String, Span)>,
    init: Vec<LitSrc>,
    goal: Option<Vec<LitSrc>>,
    never: Vec<LitSrc>,
    never_span: Span,
}

fn generator_list(rest: &[SExpr], out: &mut Vec<(char, String, Span)>) -> Result<(), Diagnostic> {
    for g in rest {
        let (k, names) = section(g)?;
        let kind = match k {
            ":predicates" => 'P',
            ":objects" => 'O',
            ":actions" => 'S',
            other => {
                return Err(err(
                    DiagCode::Structure,
                    g.span(),
                    format!("unknown generator kind `{other}`; expected :predicates, :objects or :actions"),
                ))
            }
        };
        for n in names {
            let (n, s) = name(n, "a generator name")?;
            out.push((kind, n, s));
        }
    }
    Ok(())
}

fn problem_body(items: &[SExpr], span: Span) -> Result<ProblemSrc, Diagnostic> {
    let Some(first) = items.get(1) else {
        return Err(err(DiagCode::Syntax, span, "problem needs a name"));
    };
    let mut p = ProblemSrc {
        name: name(first, "a problem name")?.0,
        ..ProblemSrc::default()
    };
    let mut seen = HashSet::new();
    for sec in &items[2..] {
        let (k, rest) = section(sec)?;
        if !seen.insert(k) {
            return Err(err(
                DiagCode::Structure,
                sec.span(),
                format!("repeated `{k}` section"),
            ));
        }
        let lits = |rest: &[SExpr]| rest.iter().map(literal).collect::<Result<Vec<_>, _>>();
        match k {
            ":world" => match rest {
                [w] => p.world = Some(name(w, "a world name")?),
                _ => return Err(err(DiagCode::Syntax, sec.span(), "expected `(:world name)`")),
            },
            ":subdomain" => {
                let mut sseen = HashSet::new();
                for s in rest {
                    let (sk, srest) = section(s)?;
                    if !sseen.insert(sk) {
                        return Err(err(
                            DiagCode::Structure,
                            s.span(),
                            format!("repeated `{sk}` section"),
                        ));
                    }
                    match sk {
                        ":reveal" => generator_list(srest, &mut p.reveal)?,
                        ":conceal" => generator_list(srest, &mut p.conceal)?,
                        other => {
                            return Err(err(
                                DiagCode::Structure,
                                s.span(),
                                format!("unknown subdomain section `{other}`"),
                            ))
                        }
                    }
                }
            }
            ":init" => p.init = lits(rest)?,
            ":goal" => p.goal = Some(lits(rest)?),
            ":never" => {
                p.never = lits(rest)?;
                p.never_span = sec.span();
            }
            other => {
                return Err(err(
                    DiagCode::Structure,
                    sec.span(),
                    format!("unknown problem section `{other}`"),
                ))
            }
        }
    }
    Ok(p)
}

fn problem_form(doc: &SourceDoc) -> Result<(ProblemSrc, Span), Diags> {
    let forms = read_all(&doc.text).map_err(|d| vec![d])?;
    let items = top_form(&forms, ":problem", DiagCode::NoProblem, "problem")?;
    let span = forms
        .iter()
        .find(|f| f.head() == Some(":problem"))
        .map(SExpr::span)
        .unwrap_or_default();
    let src = problem_body(items, span).map_err(|d| vec![d])?;
    if src.world.is_none() {
        return Err(vec![err(
            DiagCode::Structure,
            span,
            "problem is missing `(:world name)`",
        )]);
    }
    if src.goal.is_none() {
        return Err(vec![err(
            DiagCode::Structure,
            span,
            "problem is missing `(:goal ...)`",
        )]);
    }
    Ok((src, span))
}

/// The world name a problem document refers to.
pub fn problem_world_name(doc: &SourceDoc) -> Result<String, Diags> {
    let (src, _) = problem_form(doc)?;
    Ok(src.world.map(|w| w.0).unwrap_or_default())
}

fn ground_lit(world: &World, l: &LitSrc, diags: &mut Diags) -> Option<GroundLiteralDecl> {
    let d = world.domain();
    let Some(pid) = d.predicate_id(&l.pred.0) else {
        diags.push(err(
            DiagCode::UnknownPredicate,
            l.pred.1,
            format!("unknown predicate `{}`", l.pred.0),
        ));
        return None;
    };
    let p = d.predicate(pid);
    if p.arity() != l.args.len() {
        diags.push(err(
            DiagCode::ArityMismatch,
            l.pred.1,
            format!(
                "`{}` takes {} argument(s), got {}",
                l.pred.0,
                p.arity(),
                l.args.len()
            ),
        ));
        return None;
    }
    let before = diags.len();
    for (i, ((a, s), &want)) in l.args.iter().zip(&p.arg_sorts).enumerate() {
        if a.starts_with('?') {
            diags.push(err(
                DiagCode::NonGround,
                *s,
                format!("`{a}` is a variable; problem literals must be ground"),
            ));
            continue;
        }
        match d.object_id(a) {
            None => diags.push(err(
                DiagCode::UnknownObject,
                *s,
                format!("unknown object `{a}`"),
            )),
            Some(o) if !d.has_sort(o, want) => diags.push(err(
                DiagCode::SortMismatch,
                *s,
                format!(
                    "argument {} of `{}` expects sort `{}`, object `{a}` is not of that sort",
                    i + 1,
                    l.pred.0,
                    d.sort(want).name
                ),
            )),
            Some(_) => {}
        }
    }
    (diags.len() == before).then(|| GroundLiteralDecl {
        positive: l.positive,
        atom: AtomDecl {
            predicate: l.pred.0.clone(),
            args: l.args.iter().map(|a| a.0.clone()).collect(),
        },
    })
}

fn names_of(gens: &[(char, String, Span)], kind: char) -> Vec<String> {
    gens.iter()
        .filter(|g| g.0 == kind)
        .map(|g| g.1.clone())
        .collect()
}

/// Parses a `.problem` document against an already loaded world.
pub fn parse_problem(doc: &SourceDoc, world: &Arc<World>) -> Result<Parsed<Problem>, Diags> {
    let (src, span) = problem_form(doc)?;
    let mut diags = Vec::new();
    let mut warnings = Vec::new();
    if let Some((w, ws)) = &src.world {
        if w != world.name() {
            diags.push(err(
                DiagCode::WorldMismatch,
                *ws,
                format!("problem refers to world `{w}` but `{}` was loaded", world.name()),
            ));
        }
    }
    let d = world.domain();
    let visible = world.visible_generators();
    let tagged = src
        .reveal
        .iter()
        .map(|g| (true, g))
        .chain(src.conceal.iter().map(|g| (false, g)));
    for (revealing, (kind, n, s)) in tagged {
        let r = match kind {
            'P' => d.predicate_id(n).map(GeneratorRef::Predicate),
            'O' => d.object_id(n).map(GeneratorRef::Object),
            _ => d.schema_id(n).map(GeneratorRef::Schema),
        };
        match r {
            None => {
                let (code, what) = match kind {
                    'P' => (DiagCode::UnknownPredicate, "predicate"),
                    'O' => (DiagCode::UnknownObject, "object"),
                    _ => (DiagCode::UnknownSchema, "action"),
                };
                diags.push(err(code, *s, format!("unknown {what} `{n}`")));
            }
            Some(r) if visible.contains(r) == revealing => {
                let msg = if revealing {
                    format!("`{n}` is already part of the subdomain")
                } else {
                    format!("`{n}` is already outside the subdomain")
                };
                warnings.push(Diagnostic::warning(DiagCode::RedundantReveal, *s, msg));
            }
            Some(_) => {}
        }
    }
    let mut resolve = |lits: &[LitSrc]| -> Vec<(GroundLiteralDecl, Span)> {
        lits.iter()
            .filter_map(|l| ground_lit(world, l, &mut diags).map(|g| (g, l.span)))
            .collect()
    };
    let init = resolve(&src.init);
    let goal = resolve(src.goal.as_deref().unwrap_or_default());
    let never = resolve(&src.never);
    if !diags.is_empty() {
        return Err(diags);
    }

    let id = |g: &GroundLiteralDecl| resolve_atom(world, &g.atom).ok();
    let init_true: HashSet<_> = init.iter().filter(|g| g.0.positive).filter_map(|g| id(&g.0)).collect();
    for (g, s) in init.iter().filter(|g| !g.0.positive) {
        if id(g).is_some_and(|a| init_true.contains(&a)) {
            diags.push(err(
                DiagCode::InconsistentInit,
                *s,
                format!("initial state both asserts and negates `{}`", g.atom.predicate),
            ));
        }
    }
    for (g, s) in &never {
        let holds = id(g).is_some_and(|a| init_true.contains(&a));
        if holds == g.positive {
            diags.push(err(
                DiagCode::NeverViolated,
                *s,
                "the initial state already violates this never-constraint",
            ));
        }
    }
    let goal_ids: Vec<_> = goal.iter().map(|g| (id(&g.0), g.0.positive, g.1)).collect();
    for (i, (a, pos, s)) in goal_ids.iter().enumerate() {
        if goal_ids[..i].iter().any(|(b, bp, _)| b == a && bp != pos) {
            diags.push(err(
                DiagCode::InconsistentInit,
                *s,
                "goal both asserts and negates the same atom",
            ));
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let decl = ProblemDecl {
        name: src.name.clone(),
        world: world.name().to_string(),
        reveal: GeneratorNames {
            predicates: names_of(&src.reveal, 'P'),
            objects: names_of(&src.reveal, 'O'),
            schemas: names_of(&src.reveal, 'S'),
        },
        conceal: GeneratorNames {
            predicates: names_of(&src.conceal, 'P'),
            objects: names_of(&src.conceal, 'O'),
            schemas: names_of(&src.conceal, 'S'),
        },
        init: init.into_iter().map(|g| g.0).collect(),
        goal: goal.iter().map(|g| g.0.clone()).collect(),
        never: never.into_iter().map(|g| g.0).collect(),
    };
    let (problem, _) =
        Problem::from_decl(&decl, world.clone()).map_err(|e| vec![model_error_diag(&e, span)])?;
    for (g, s) in &goal {
        if let Some(a) = id(g) {
            if !problem.subdomain.admits_atom(a) {
                warnings.push(Diagnostic::warning(
                    DiagCode::GoalOutsideSubdomain,
                    *s,
                    format!(
                        "goal atom {} is not expressible in the agent subdomain",
                        d.atom_label(a)
                    ),
                ));
            }
        }
    }
    Ok(Parsed {
        value: problem,
        warnings,
    })
}
