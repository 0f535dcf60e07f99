use std::fmt::Write as _;

use crate::model::{
    atom_decl, ActionSchema, GeneratorRef, GroundLiteralDecl, LiteralDecl, ModKind, PlanningDomain,
    Problem, Step, Strategy, TermDecl, World,
};

/// Two-byte header opening every canonical byte encoding.
pub const HEADER: &[u8; 2] = b"MG";

fn lit_text(l: &LiteralDecl) -> String {
    let mut s = format!("({}", l.predicate);
    for a in &l.args {
        match a {
            TermDecl::Var(v) => write!(s, " ?{v}").unwrap(),
            TermDecl::Const(c) => write!(s, " {c}").unwrap(),
        }
    }
    s.push(')');
    if l.positive {
        s
    } else {
        format!("(not {s})")
    }
}

fn ground_lit_text(l: &GroundLiteralDecl) -> String {
    let mut s = format!("({}", l.atom.predicate);
    for a in &l.atom.args {
        s.push(' ');
        s.push_str(a);
    }
    s.push(')');
    if l.positive {
        s
    } else {
        format!("(not {s})")
    }
}

pub fn schema_text(domain: &PlanningDomain, schema: &ActionSchema, indent: &str) -> String {
    let decl = domain.schema_decl(schema);
    let mut s = format!("{indent}(:action {}", decl.name);
    if !decl.params.is_empty() {
        let ps: Vec<String> = decl
            .params
            .iter()
            .map(|(v, sort)| format!("(?{v} {sort})"))
            .collect();
        write!(s, "\n{indent}  (:params {})", ps.join(" ")).unwrap();
    }
    for (key, lits) in [(":pre", &decl.pre), (":eff", &decl.eff)] {
        if !lits.is_empty() {
            let ls: Vec<String> = lits.iter().map(lit_text).collect();
            write!(s, "\n{indent}  ({key} {})", ls.join(" ")).unwrap();
        }
    }
    s.push(')');
    s
}

fn predicate_text(domain: &PlanningDomain, p: crate::model::PredId) -> String {
    let p = domain.predicate(p);
    let mut s = format!("({}", p.name);
    for a in &p.arg_sorts {
        write!(s, " {}", domain.sort(*a).name).unwrap();
    }
    s.push(')');
    s
}

fn object_text(domain: &PlanningDomain, o: crate::model::ObjId) -> String {
    let o = domain.object(o);
    let mut s = format!("({}", o.name);
    for a in &o.sorts {
        write!(s, " {}", domain.sort(*a).name).unwrap();
    }
    s.push(')');
    s
}

/// Canonical definition text of one generator.
pub fn generator_text(world: &World, r: GeneratorRef) -> String {
    let d = world.domain();
    match r {
        GeneratorRef::Predicate(p) => predicate_text(d, p),
        GeneratorRef::Object(o) => object_text(d, o),
        GeneratorRef::Schema(s) => schema_text(d, d.schema(s), ""),
    }
}

/// Canonical `.world` text. Parsing it reproduces an equal world.
pub fn world_to_text(world: &World) -> String {
    let d = world.domain();
    let hidden = world.hidden();
    let mut s = format!("(:world {}", world.name());
    if !world.species().is_empty() {
        write!(s, "\n  (:species {})", world.species()).unwrap();
    }
    if !d.sorts().is_empty() {
        let ss: Vec<String> = d
            .sorts()
            .iter()
            .map(|x| match x.parent {
                Some(p) => format!("({} {})", x.name, d.sort(p).name),
                None => x.name.clone(),
            })
            .collect();
        write!(s, "\n  (:sorts {})", ss.join(" ")).unwrap();
    }
    let visible_objs: Vec<String> = (0..d.objects().len())
        .map(crate::model::ObjId::from)
        .filter(|o| !hidden.objects.contains(o))
        .map(|o| object_text(d, o))
        .collect();
    if !visible_objs.is_empty() {
        write!(s, "\n  (:objects\n    {})", visible_objs.join("\n    ")).unwrap();
    }
    let visible_preds: Vec<String> = (0..d.predicates().len())
        .map(crate::model::PredId::from)
        .filter(|p| !hidden.predicates.contains(p))
        .map(|p| predicate_text(d, p))
        .collect();
    if !visible_preds.is_empty() {
        write!(s, "\n  (:predicates\n    {})", visible_preds.join("\n    ")).unwrap();
    }
    for (i, schema) in d.schemas().iter().enumerate() {
        if !hidden.schemas.contains(&crate::model::SchemaId::from(i)) {
            write!(s, "\n{}", schema_text(d, schema, "  ")).unwrap();
        }
    }
    if !hidden.is_empty() {
        s.push_str("\n  (:hidden");
        if !hidden.objects.is_empty() {
            let os: Vec<String> = hidden.objects.iter().map(|&o| object_text(d, o)).collect();
            write!(s, "\n    (:objects\n      {})", os.join("\n      ")).unwrap();
        }
        if !hidden.predicates.is_empty() {
            let ps: Vec<String> = hidden
                .predicates
                .iter()
                .map(|&p| predicate_text(d, p))
                .collect();
            write!(s, "\n    (:predicates\n      {})", ps.join("\n      ")).unwrap();
        }
        for &sid in &hidden.schemas {
            write!(s, "\n{}", schema_text(d, d.schema(sid), "    ")).unwrap();
        }
        s.push(')');
    }
    s.push_str(")\n");
    s
}

/// Canonical `.problem` text. The initial state lists true atoms only.
pub fn problem_to_text(problem: &Problem) -> String {
    let decl = problem.to_decl();
    let mut s = format!("(:problem {}\n  (:world {})", decl.name, decl.world);
    let gen_block = |g: &crate::model::GeneratorNames| -> Option<String> {
        let mut parts = Vec::new();
        for (key, names) in [
            (":predicates", &g.predicates),
            (":objects", &g.objects),
            (":actions", &g.schemas),
        ] {
            if !names.is_empty() {
                parts.push(format!("({key} {})", names.join(" ")));
            }
        }
        (!parts.is_empty()).then(|| parts.join(" "))
    };
    let reveal = gen_block(&decl.reveal);
    let conceal = gen_block(&decl.conceal);
    if reveal.is_some() || conceal.is_some() {
        s.push_str("\n  (:subdomain");
        if let Some(r) = reveal {
            write!(s, "\n    (:reveal {r})").unwrap();
        }
        if let Some(c) = conceal {
            write!(s, "\n    (:conceal {c})").unwrap();
        }
        s.push(')');
    }
    let block = |key: &str, lits: &[GroundLiteralDecl]| -> String {
        if lits.is_empty() {
            format!("\n  ({key})")
        } else {
            let ls: Vec<String> = lits.iter().map(ground_lit_text).collect();
            format!("\n  ({key}\n    {})", ls.join("\n    "))
        }
    };
    s.push_str(&block(":init", &decl.init));
    s.push_str(&block(":goal", &decl.goal));
    if !decl.never.is_empty() {
        s.push_str(&block(":never", &decl.never));
    }
    s.push_str(")\n");
    s
}

fn varint(out: &mut Vec<u8>, mut n: usize) {
    loop {
        let byte = (n & 0x7f) as u8;
        n >>= 7;
        if n == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn lp(out: &mut Vec<u8>, bytes: &[u8]) {
    varint(out, bytes.len());
    out.extend_from_slice(bytes);
}

/// Header-free encoding of one strategy. Names, not ids, are written, so
/// strategies from different worlds are comparable byte-wise.
pub fn strategy_body(world: &World, w: &Strategy) -> Vec<u8> {
    let d = world.domain();
    let mut out = Vec::new();
    varint(&mut out, w.steps.len());
    for step in &w.steps {
        match step {
            Step::Act(a) => {
                out.push(b'A');
                lp(&mut out, d.schema(a.schema).name.as_bytes());
                varint(&mut out, a.binding.len());
                for &o in &a.binding {
                    lp(&mut out, d.object(o).name.as_bytes());
                }
            }
            Step::Modify(m) => {
                out.push(match m.kind {
                    ModKind::Extension => b'M',
                    ModKind::Contraction => b'C',
                });
                varint(&mut out, m.payload.len());
                for r in m.payload.refs() {
                    out.push(match r {
                        GeneratorRef::Predicate(_) => b'P',
                        GeneratorRef::Object(_) => b'O',
                        GeneratorRef::Schema(_) => b'S',
                    });
                    lp(&mut out, generator_text(world, r).as_bytes());
                }
            }
        }
    }
    out
}

pub fn strategy_bytes(world: &World, w: &Strategy) -> Vec<u8> {
    let mut out = HEADER.to_vec();
    out.extend(strategy_body(world, w));
    out
}

/// Canonical encoding of a set of strategies: bodies sorted and
/// deduplicated, each length-prefixed. The empty set is the bare header.
pub fn strategy_set_bytes<'a, I>(world: &World, set: I) -> Vec<u8>
where
    I: IntoIterator<Item = &'a Strategy>,
{
    let mut bodies: Vec<Vec<u8>> = set.into_iter().map(|w| strategy_body(world, w)).collect();
    bodies.sort();
    bodies.dedup();
    let mut out = HEADER.to_vec();
    for b in &bodies {
        lp(&mut out, b);
    }
    out
}

/// Values with a deterministic, injective byte encoding.
pub trait CanonicalBytes {
    fn canonical_bytes(&self) -> Vec<u8>;
}

impl CanonicalBytes for World {
    fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = HEADER.to_vec();
        out.extend(world_to_text(self).into_bytes());
        out
    }
}

impl CanonicalBytes for Problem {
    fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = HEADER.to_vec();
        out.extend(problem_to_text(self).into_bytes());
        out
    }
}

/// Renders an atom as `(pred a b)`.
pub fn atom_text(world: &World, id: crate::model::AtomId) -> String {
    ground_lit_text(&GroundLiteralDecl::pos(atom_decl(world, id)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn varint_encoding() {
        let mut v = Vec::new();
        varint(&mut v, 0);
        varint(&mut v, 127);
        varint(&mut v, 128);
        varint(&mut v, 300);
        assert_eq!(v, vec![0, 127, 0x80, 1, 0xac, 2]);
    }
}
