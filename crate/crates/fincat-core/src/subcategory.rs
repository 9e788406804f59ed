use std::cmp::Ordering;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::{FinCat, MorId, ObjId};
use crate::functor::Functor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubcategoryError {
    #[error("`{0}` is not in the parent category")]
    Unknown(String),
    #[error("morphism `{0}` has an endpoint outside the subcategory")]
    EndpointMissing(String),
    #[error("identity of `{0}` is missing")]
    IdentityMissing(String),
    #[error("composite {g} o {f} is missing")]
    NotClosed { g: String, f: String },
}

#[derive(Debug, Error)]
#[error("category is empty")]
pub struct EmptyCategory;

/// A subcategory given by object and morphism subsets of a parent.
#[derive(Clone, Debug)]
pub struct Subcategory {
    parent: Arc<FinCat>,
    objects: FixedBitSet,
    morphisms: FixedBitSet,
}

impl PartialEq for Subcategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.morphisms == other.morphisms
    }
}

impl Eq for Subcategory {}

impl Hash for Subcategory {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.objects.hash(state);
        self.morphisms.hash(state);
    }
}

impl PartialOrd for Subcategory {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by sorted object ids, then by sorted morphism ids.
impl Ord for Subcategory {
    fn cmp(&self, other: &Self) -> Ordering {
        self.objects
            .ones()
            .cmp(other.objects.ones())
            .then_with(|| self.morphisms.ones().cmp(other.morphisms.ones()))
    }
}

impl Subcategory {
    pub fn new(
        parent: &Arc<FinCat>,
        objects: impl IntoIterator<Item = ObjId>,
        morphisms: impl IntoIterator<Item = MorId>,
    ) -> Result<Subcategory, SubcategoryError> {
        let mut s = Subcategory::empty(parent);
        for o in objects {
            if o.index() >= parent.num_objects() {
                return Err(SubcategoryError::Unknown(format!("object #{}", o.0)));
            }
            s.objects.insert(o.index());
        }
        for m in morphisms {
            if m.index() >= parent.num_morphisms() {
                return Err(SubcategoryError::Unknown(format!("morphism #{}", m.0)));
            }
            s.morphisms.insert(m.index());
        }
        s.check()?;
        Ok(s)
    }

    /// Accepts the sets without checking closure.
    pub fn from_sets_unchecked(parent: &Arc<FinCat>, objects: FixedBitSet, morphisms: FixedBitSet) -> Subcategory {
        Subcategory {
            parent: parent.clone(),
            objects,
            morphisms,
        }
    }

    pub fn empty(parent: &Arc<FinCat>) -> Subcategory {
        Subcategory {
            parent: parent.clone(),
            objects: FixedBitSet::with_capacity(parent.num_objects()),
            morphisms: FixedBitSet::with_capacity(parent.num_morphisms()),
        }
    }

    pub fn whole(parent: &Arc<FinCat>) -> Subcategory {
        let mut s = Subcategory::empty(parent);
        s.objects.insert_range(..);
        s.morphisms.insert_range(..);
        s
    }

    /// The full subcategory on the given objects.
    pub fn full(parent: &Arc<FinCat>, objects: impl IntoIterator<Item = ObjId>) -> Subcategory {
        let mut s = Subcategory::empty(parent);
        for o in objects {
            s.objects.insert(o.index());
        }
        for m in parent.morphisms() {
            if s.objects.contains(parent.dom(m).index()) && s.objects.contains(parent.cod(m).index()) {
                s.morphisms.insert(m.index());
            }
        }
        s
    }

    /// Smallest subcategory containing the seeds and the given extra objects.
    pub fn generated(
        parent: &Arc<FinCat>,
        seeds: impl IntoIterator<Item = MorId>,
        extra_objects: impl IntoIterator<Item = ObjId>,
    ) -> Subcategory {
        let mut s = Subcategory::empty(parent);
        let c = &**parent;
        let mut queue: VecDeque<MorId> = VecDeque::new();
        let add_obj = |s: &mut Subcategory, queue: &mut VecDeque<MorId>, o: ObjId| {
            if !s.objects.put(o.index()) {
                let id = c.identity(o);
                if !s.morphisms.put(id.index()) {
                    queue.push_back(id);
                }
            }
        };
        for o in extra_objects {
            add_obj(&mut s, &mut queue, o);
        }
        for m in seeds {
            if !s.morphisms.put(m.index()) {
                queue.push_back(m);
            }
        }
        while let Some(m) = queue.pop_front() {
            add_obj(&mut s, &mut queue, c.dom(m));
            add_obj(&mut s, &mut queue, c.cod(m));
            let members: Vec<MorId> = s.morphisms.ones().map(|i| MorId(i as u32)).collect();
            for other in members {
                for (g, f) in [(m, other), (other, m)] {
                    if let Some(h) = c.compose(g, f) {
                        if !s.morphisms.put(h.index()) {
                            queue.push_back(h);
                        }
                    }
                }
            }
        }
        s
    }

    pub fn check(&self) -> Result<(), SubcategoryError> {
        let c = &*self.parent;
        for m in self.morphism_ids() {
            if !self.contains_object(c.dom(m)) || !self.contains_object(c.cod(m)) {
                return Err(SubcategoryError::EndpointMissing(c.morphism_name(m).to_string()));
            }
        }
        for o in self.object_ids() {
            if !self.contains_morphism(c.identity(o)) {
                return Err(SubcategoryError::IdentityMissing(c.object_name(o).to_string()));
            }
        }
        for f in self.morphism_ids() {
            for &g in c.outgoing(c.cod(f)) {
                if self.contains_morphism(g) && !self.contains_morphism(c.compose(g, f).unwrap()) {
                    return Err(SubcategoryError::NotClosed {
                        g: c.morphism_name(g).to_string(),
                        f: c.morphism_name(f).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn parent(&self) -> &Arc<FinCat> {
        &self.parent
    }

    pub fn object_set(&self) -> &FixedBitSet {
        &self.objects
    }

    pub fn morphism_set(&self) -> &FixedBitSet {
        &self.morphisms
    }

    pub fn contains_object(&self, o: ObjId) -> bool {
        self.objects.contains(o.index())
    }

    pub fn contains_morphism(&self, m: MorId) -> bool {
        self.morphisms.contains(m.index())
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjId> + '_ {
        self.objects.ones().map(|i| ObjId(i as u32))
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorId> + '_ {
        self.morphisms.ones().map(|i| MorId(i as u32))
    }

    pub fn num_objects(&self) -> usize {
        self.objects.count_ones(..)
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_clear()
    }

    pub fn is_subset(&self, other: &Subcategory) -> bool {
        self.objects.is_subset(&other.objects) && self.morphisms.is_subset(&other.morphisms)
    }

    pub fn is_whole(&self) -> bool {
        self.num_objects() == self.parent.num_objects() && self.num_morphisms() == self.parent.num_morphisms()
    }

    /// The subcategory as a category of its own, with the inclusion functor.
    /// Names are kept from the parent.
    pub fn materialize(&self) -> (Arc<FinCat>, Functor) {
        let c = &*self.parent;
        let objs: Vec<ObjId> = self.object_ids().collect();
        let mors: Vec<MorId> = self.morphism_ids().collect();
        let mut obj_pos = vec![usize::MAX; c.num_objects()];
        for (i, o) in objs.iter().enumerate() {
            obj_pos[o.index()] = i;
        }
        let mut mor_pos = vec![usize::MAX; c.num_morphisms()];
        for (i, m) in mors.iter().enumerate() {
            mor_pos[m.index()] = i;
        }
        let cat = FinCat::from_indexed_unchecked(
            objs.iter().map(|&o| c.object_name(o).to_string()).collect(),
            mors.iter()
                .map(|&m| {
                    (
                        c.morphism_name(m).to_string(),
                        obj_pos[c.dom(m).index()],
                        obj_pos[c.cod(m).index()],
                    )
                })
                .collect(),
            objs.iter().map(|&o| mor_pos[c.identity(o).index()]).collect(),
            |g, f| mor_pos[c.compose(mors[g], mors[f]).unwrap().index()],
        );
        let cat = Arc::new(cat);
        // Names sort the same way as ids in the parent, so positions carry over.
        let inclusion = Functor::new_unchecked(cat.clone(), self.parent.clone(), objs, mors);
        (cat, inclusion)
    }

    pub fn to_raw(&self) -> RawPiece {
        let c = &*self.parent;
        RawPiece {
            objects: self.object_ids().map(|o| c.object_name(o).to_string()).collect(),
            morphisms: self
                .morphism_ids()
                .filter(|&m| !c.is_identity(m))
                .map(|m| c.morphism_name(m).to_string())
                .collect(),
        }
    }

    pub fn from_raw(parent: &Arc<FinCat>, raw: &RawPiece) -> Result<Subcategory, SubcategoryError> {
        let mut objs = Vec::new();
        for name in &raw.objects {
            objs.push(
                parent
                    .object_by_name(name)
                    .ok_or_else(|| SubcategoryError::Unknown(name.clone()))?,
            );
        }
        let mut mors: Vec<MorId> = objs.iter().map(|&o| parent.identity(o)).collect();
        for name in &raw.morphisms {
            mors.push(
                parent
                    .morphism_by_name(name)
                    .ok_or_else(|| SubcategoryError::Unknown(name.clone()))?,
            );
        }
        Subcategory::new(parent, objs, mors)
    }
}

/// Piece descriptor: object names and non-identity morphism names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPiece {
    pub objects: Vec<String>,
    pub morphisms: Vec<String>,
}

/// Connected components as sorted object lists, ordered by smallest object.
pub fn connected_components(cat: &FinCat) -> Vec<Vec<ObjId>> {
    let n = cat.num_objects();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in cat.objects() {
        if comp[start.index()] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start.index()] = id;
        let mut i = 0;
        while i < members.len() {
            let o = members[i];
            i += 1;
            let nbrs = cat
                .outgoing(o)
                .iter()
                .map(|&m| cat.cod(m))
                .chain(cat.incoming(o).iter().map(|&m| cat.dom(m)));
            for p in nbrs {
                if comp[p.index()] == usize::MAX {
                    comp[p.index()] = id;
                    members.push(p);
                }
            }
        }
        members.sort();
        out.push(members);
    }
    out
}

pub fn is_connected(cat: &FinCat) -> Result<bool, EmptyCategory> {
    if cat.is_empty() {
        return Err(EmptyCategory);
    }
    Ok(connected_components(cat).len() == 1)
}
