use serde::{Deserialize, Serialize};

use super::domain::PredicateSchema;
use super::ids::{AtomId, ObjId, PredId};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroundAtom {
    pub predicate: PredId,
    pub args: Vec<ObjId>,
}

/// Interns every sort-respecting ground atom of a domain.
///
/// Ids are assigned in mixed radix: predicates in id order, and within a
/// predicate the argument tuples in lexicographic member order.
#[derive(Clone, Debug, Default)]
pub struct AtomTable {
    offsets: Vec<usize>,
    arg_members: Vec<Vec<Vec<ObjId>>>,
    atoms: Vec<GroundAtom>,
}

impl AtomTable {
    pub(crate) fn new(predicates: &[PredicateSchema], members: &[Vec<ObjId>]) -> Self {
        let mut offsets = Vec::with_capacity(predicates.len());
        let mut arg_members = Vec::with_capacity(predicates.len());
        let mut atoms = Vec::new();
        for (pi, p) in predicates.iter().enumerate() {
            offsets.push(atoms.len());
            let doms: Vec<Vec<ObjId>> = p
                .arg_sorts
                .iter()
                .map(|s| members[s.index()].clone())
                .collect();
            if doms.iter().all(|d| !d.is_empty()) {
                let mut cursor = vec![0usize; doms.len()];
                'outer: loop {
                    atoms.push(GroundAtom {
                        predicate: PredId::from(pi),
                        args: cursor.iter().zip(&doms).map(|(&i, d)| d[i]).collect(),
                    });
                    let mut k = doms.len();
                    loop {
                        if k == 0 {
                            break 'outer;
                        }
                        k -= 1;
                        cursor[k] += 1;
                        if cursor[k] < doms[k].len() {
                            break;
                        }
                        cursor[k] = 0;
                    }
                }
            }
            arg_members.push(doms);
        }
        AtomTable {
            offsets,
            arg_members,
            atoms,
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Looks up the id of `predicate(args)`; `None` if ill-sorted or unknown.
    pub fn id(&self, predicate: PredId, args: &[ObjId]) -> Option<AtomId> {
        let doms = self.arg_members.get(predicate.index())?;
        if doms.len() != args.len() {
            return None;
        }
        let mut ix = 0usize;
        for (d, a) in doms.iter().zip(args) {
            ix = ix * d.len() + d.binary_search(a).ok()?;
        }
        Some(AtomId::from(self.offsets[predicate.index()] + ix))
    }

    pub fn atom(&self, id: AtomId) -> &GroundAtom {
        &self.atoms[id.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, &GroundAtom)> {
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (AtomId::from(i), a))
    }
}
