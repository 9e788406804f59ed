use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::{FinCat, MorId, ObjId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("map sizes do not match the source category")]
    SizeMismatch,
    #[error("image of `{0}` is out of range")]
    OutOfRange(String),
    #[error("`{0}` is not sent to a morphism between the images of its endpoints")]
    DomCodNotPreserved(String),
    #[error("identity of `{0}` is not preserved")]
    IdentityNotPreserved(String),
    #[error("composite {g} o {f} is not preserved")]
    CompositionNotPreserved { g: String, f: String },
    #[error("functors do not compose: target and source differ")]
    NotComposable,
    #[error("no entry for `{0}`")]
    MissingEntry(String),
    #[error("unknown id `{0}`")]
    UnknownId(String),
}

pub fn same_category(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone)]
pub struct Functor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    obj_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let objs: Vec<String> = self
            .source
            .objects()
            .map(|o| {
                format!(
                    "{}->{}",
                    self.source.object_name(o),
                    self.target.object_name(self.obj(o))
                )
            })
            .collect();
        let mors: Vec<String> = self
            .source
            .non_identity_morphisms()
            .map(|m| {
                format!(
                    "{}->{}",
                    self.source.morphism_name(m),
                    self.target.morphism_name(self.mor(m))
                )
            })
            .collect();
        write!(f, "Functor[{}; {}]", objs.join(", "), mors.join(", "))
    }
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
            && same_category(&self.source, &other.source)
            && same_category(&self.target, &other.target)
    }
}

impl Eq for Functor {}

impl Hash for Functor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.obj_map.hash(state);
        self.mor_map.hash(state);
    }
}

impl Functor {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<Functor, FunctorError> {
        let f = Functor {
            source,
            target,
            obj_map,
            mor_map,
        };
        f.check()?;
        Ok(f)
    }

    /// Skips the functor-law check. Callers must guarantee the laws.
    pub fn new_unchecked(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Functor {
        Functor {
            source,
            target,
            obj_map,
            mor_map,
        }
    }

    pub fn check(&self) -> Result<(), FunctorError> {
        let (s, t) = (&*self.source, &*self.target);
        if self.obj_map.len() != s.num_objects() || self.mor_map.len() != s.num_morphisms() {
            return Err(FunctorError::SizeMismatch);
        }
        for o in s.objects() {
            if self.obj(o).index() >= t.num_objects() {
                return Err(FunctorError::OutOfRange(s.object_name(o).to_string()));
            }
        }
        for m in s.morphisms() {
            let fm = self.mor(m);
            if fm.index() >= t.num_morphisms() {
                return Err(FunctorError::OutOfRange(s.morphism_name(m).to_string()));
            }
            if t.dom(fm) != self.obj(s.dom(m)) || t.cod(fm) != self.obj(s.cod(m)) {
                return Err(FunctorError::DomCodNotPreserved(s.morphism_name(m).to_string()));
            }
        }
        for o in s.objects() {
            if self.mor(s.identity(o)) != t.identity(self.obj(o)) {
                return Err(FunctorError::IdentityNotPreserved(s.object_name(o).to_string()));
            }
        }
        for (g, f) in s.composable_pairs() {
            let h = s.compose(g, f).unwrap();
            if t.compose(self.mor(g), self.mor(f)) != Some(self.mor(h)) {
                return Err(FunctorError::CompositionNotPreserved {
                    g: s.morphism_name(g).to_string(),
                    f: s.morphism_name(f).to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn identity(cat: &Arc<FinCat>) -> Functor {
        Functor {
            source: cat.clone(),
            target: cat.clone(),
            obj_map: cat.objects().collect(),
            mor_map: cat.morphisms().collect(),
        }
    }

    pub fn constant(source: &Arc<FinCat>, target: &Arc<FinCat>, obj: ObjId) -> Functor {
        Functor {
            source: source.clone(),
            target: target.clone(),
            obj_map: vec![obj; source.num_objects()],
            mor_map: vec![target.identity(obj); source.num_morphisms()],
        }
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn obj(&self, o: ObjId) -> ObjId {
        self.obj_map[o.index()]
    }

    pub fn mor(&self, m: MorId) -> MorId {
        self.mor_map[m.index()]
    }

    pub fn obj_map(&self) -> &[ObjId] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[MorId] {
        &self.mor_map
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Functor) -> Result<Functor, FunctorError> {
        if !same_category(&first.target, &self.source) {
            return Err(FunctorError::NotComposable);
        }
        Ok(Functor {
            source: first.source.clone(),
            target: self.target.clone(),
            obj_map: first.obj_map.iter().map(|&o| self.obj(o)).collect(),
            mor_map: first.mor_map.iter().map(|&m| self.mor(m)).collect(),
        })
    }

    pub fn is_constant(&self) -> bool {
        self.obj_map.windows(2).all(|w| w[0] == w[1])
            && self.mor_map.iter().all(|&m| self.target.is_identity(m))
    }

    /// Same maps, re-labelled onto other (equal) categories.
    pub fn with_categories(&self, source: Arc<FinCat>, target: Arc<FinCat>) -> Functor {
        Functor {
            source,
            target,
            obj_map: self.obj_map.clone(),
            mor_map: self.mor_map.clone(),
        }
    }

    pub fn to_raw(&self) -> RawFunctor {
        let objects = self
            .source
            .objects()
            .map(|o| {
                (
                    self.source.object_name(o).to_string(),
                    self.target.object_name(self.obj(o)).to_string(),
                )
            })
            .collect();
        let morphisms = self
            .source
            .non_identity_morphisms()
            .map(|m| {
                (
                    self.source.morphism_name(m).to_string(),
                    self.target.morphism_name(self.mor(m)).to_string(),
                )
            })
            .collect();
        RawFunctor { objects, morphisms }
    }

    pub fn from_raw(
        source: &Arc<FinCat>,
        target: &Arc<FinCat>,
        raw: &RawFunctor,
    ) -> Result<Functor, FunctorError> {
        for name in raw.objects.keys() {
            if source.object_by_name(name).is_none() {
                return Err(FunctorError::UnknownId(name.clone()));
            }
        }
        for name in raw.morphisms.keys() {
            if source.morphism_by_name(name).is_none() {
                return Err(FunctorError::UnknownId(name.clone()));
            }
        }
        let mut obj_map = Vec::with_capacity(source.num_objects());
        for o in source.objects() {
            let name = source.object_name(o);
            let img = raw
                .objects
                .get(name)
                .ok_or_else(|| FunctorError::MissingEntry(name.to_string()))?;
            obj_map.push(
                target
                    .object_by_name(img)
                    .ok_or_else(|| FunctorError::UnknownId(img.clone()))?,
            );
        }
        let mut mor_map = Vec::with_capacity(source.num_morphisms());
        for m in source.morphisms() {
            let name = source.morphism_name(m);
            let img = match raw.morphisms.get(name) {
                Some(img) => target
                    .morphism_by_name(img)
                    .ok_or_else(|| FunctorError::UnknownId(img.clone()))?,
                None if source.is_identity(m) => target.identity(obj_map[source.dom(m).index()]),
                None => return Err(FunctorError::MissingEntry(name.to_string())),
            };
            mor_map.push(img);
        }
        Functor::new(source.clone(), target.clone(), obj_map, mor_map)
    }
}

/// Name-based functor table. Identity morphisms may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFunctor {
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NatTransError {
    #[error("functors have different source or target")]
    Mismatch,
    #[error("wrong number of components")]
    SizeMismatch,
    #[error("component at `{0}` has the wrong endpoints")]
    BadComponent(String),
    #[error("naturality fails at `{0}`")]
    NotNatural(String),
}

/// A natural transformation `from ⇒ to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    from: Functor,
    to: Functor,
    components: Vec<MorId>,
}

impl NatTrans {
    pub fn new(from: Functor, to: Functor, components: Vec<MorId>) -> Result<NatTrans, NatTransError> {
        let n = NatTrans {
            from,
            to,
            components,
        };
        n.check()?;
        Ok(n)
    }

    pub fn new_unchecked(from: Functor, to: Functor, components: Vec<MorId>) -> NatTrans {
        NatTrans {
            from,
            to,
            components,
        }
    }

    pub fn check(&self) -> Result<(), NatTransError> {
        let (from, to) = (&self.from, &self.to);
        if !same_category(from.source(), to.source()) || !same_category(from.target(), to.target()) {
            return Err(NatTransError::Mismatch);
        }
        let (s, t) = (&**from.source(), &**from.target());
        if self.components.len() != s.num_objects() {
            return Err(NatTransError::SizeMismatch);
        }
        for o in s.objects() {
            let c = self.components[o.index()];
            if c.index() >= t.num_morphisms() || t.dom(c) != from.obj(o) || t.cod(c) != to.obj(o) {
                return Err(NatTransError::BadComponent(s.object_name(o).to_string()));
            }
        }
        for m in s.morphisms() {
            let (a, b) = (s.dom(m), s.cod(m));
            let lhs = t.compose(to.mor(m), self.components[a.index()]);
            let rhs = t.compose(self.components[b.index()], from.mor(m));
            if lhs != rhs {
                return Err(NatTransError::NotNatural(s.morphism_name(m).to_string()));
            }
        }
        Ok(())
    }

    pub fn identity(f: &Functor) -> NatTrans {
        let t = f.target();
        NatTrans {
            from: f.clone(),
            to: f.clone(),
            components: f.source().objects().map(|o| t.identity(f.obj(o))).collect(),
        }
    }

    pub fn from(&self) -> &Functor {
        &self.from
    }

    pub fn to(&self) -> &Functor {
        &self.to
    }

    pub fn component(&self, o: ObjId) -> MorId {
        self.components[o.index()]
    }

    pub fn components(&self) -> &[MorId] {
        &self.components
    }

    /// Vertical composite `next ∘ self`.
    pub fn then(&self, next: &NatTrans) -> Option<NatTrans> {
        if self.to != next.from {
            return None;
        }
        let t = self.from.target();
        let components = self
            .components
            .iter()
            .zip(&next.components)
            .map(|(&a, &b)| t.compose(b, a).unwrap())
            .collect();
        Some(NatTrans {
            from: self.from.clone(),
            to: next.to.clone(),
            components,
        })
    }

    /// Whiskering `K ∘ self ∘ L`: precompose with `pre`, postcompose with `post`.
    pub fn whisker(&self, pre: Option<&Functor>, post: Option<&Functor>) -> Result<NatTrans, FunctorError> {
        let mut from = self.from.clone();
        let mut to = self.to.clone();
        let mut components = self.components.clone();
        if let Some(l) = pre {
            from = from.after(l)?;
            to = to.after(l)?;
            components = l.obj_map().iter().map(|&o| components[o.index()]).collect();
        }
        if let Some(k) = post {
            from = k.after(&from)?;
            to = k.after(&to)?;
            components = components.iter().map(|&c| k.mor(c)).collect();
        }
        Ok(NatTrans {
            from,
            to,
            components,
        })
    }
}
