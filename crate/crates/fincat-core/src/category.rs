use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorId(pub u32);

impl ObjId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("dangling id `{id}` in {context}")]
    DanglingId { id: String, context: String },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("object `{0}` has no identity")]
    MissingIdentity(String),
    #[error("composite entry {g} o {f} = {h} is ill-typed")]
    IllTypedComposite { g: String, f: String, h: String },
    #[error("conflicting entries for {g} o {f}: `{first}` and `{second}`")]
    ConflictingComposite { g: String, f: String, first: String, second: String },
    #[error("missing composite {g} o {f}")]
    MissingComposite { g: String, f: String },
    #[error("identity law fails for identity `{identity}` and morphism `{morphism}`")]
    IdentityLawViolation { identity: String, morphism: String },
    #[error("associativity fails for {h} o {g} o {f}")]
    AssociativityViolation { h: String, g: String, f: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismInfo {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// A finite category stored as a composition table.
///
/// Objects and morphisms are numbered in lexicographic order of their names,
/// so two categories built from the same data have the same ids.
#[derive(Debug, Clone)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<MorphismInfo>,
    identities: Vec<MorId>,
    compose: HashMap<(MorId, MorId), MorId>,
    obj_index: HashMap<String, ObjId>,
    mor_index: HashMap<String, MorId>,
    hom: HashMap<(ObjId, ObjId), Vec<MorId>>,
    outgoing: Vec<Vec<MorId>>,
    incoming: Vec<Vec<MorId>>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.compose == other.compose
    }
}

impl Eq for FinCat {}

impl FinCat {
    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len() as u32).map(ObjId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len() as u32).map(MorId)
    }

    pub fn non_identity_morphisms(&self) -> impl Iterator<Item = MorId> + '_ {
        self.morphisms().filter(move |&m| !self.is_identity(m))
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o.index()]
    }

    pub fn morphism_name(&self, m: MorId) -> &str {
        &self.morphisms[m.index()].name
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.obj_index.get(name).copied()
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<MorId> {
        self.mor_index.get(name).copied()
    }

    pub fn dom(&self, m: MorId) -> ObjId {
        self.morphisms[m.index()].dom
    }

    pub fn cod(&self, m: MorId) -> ObjId {
        self.morphisms[m.index()].cod
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o.index()]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        let d = self.dom(m);
        d == self.cod(m) && self.identities[d.index()] == m
    }

    /// `g ∘ f`, or `None` when the pair is not composable.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.compose.get(&(g, f)).copied()
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        self.hom.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn outgoing(&self, a: ObjId) -> &[MorId] {
        &self.outgoing[a.index()]
    }

    pub fn incoming(&self, b: ObjId) -> &[MorId] {
        &self.incoming[b.index()]
    }

    /// Composable pairs `(g, f)` in table order.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (MorId, MorId)> + '_ {
        self.morphisms().flat_map(move |f| {
            self.outgoing(self.cod(f)).iter().map(move |&g| (g, f))
        })
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Builds a category from index-based data, trusting the caller for the
    /// category laws. Names are sorted and ids renumbered; `compose` is called
    /// with the caller's indices for every composable non-identity pair.
    pub fn from_indexed_unchecked(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        identities: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> usize,
    ) -> FinCat {
        let mut obj_order: Vec<usize> = (0..objects.len()).collect();
        obj_order.sort_by(|&a, &b| objects[a].cmp(&objects[b]));
        let mut obj_new = vec![0u32; objects.len()];
        for (new, &old) in obj_order.iter().enumerate() {
            obj_new[old] = new as u32;
        }
        let mut mor_order: Vec<usize> = (0..morphisms.len()).collect();
        mor_order.sort_by(|&a, &b| morphisms[a].0.cmp(&morphisms[b].0));
        let mut mor_new = vec![0u32; morphisms.len()];
        for (new, &old) in mor_order.iter().enumerate() {
            mor_new[old] = new as u32;
        }
        let mut is_id = vec![false; morphisms.len()];
        for &i in &identities {
            is_id[i] = true;
        }
        let mut out_old: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            out_old[m.1].push(i);
        }
        let mut table = HashMap::new();
        for (f, mf) in morphisms.iter().enumerate() {
            for &g in &out_old[mf.2] {
                let h = if is_id[g] {
                    f
                } else if is_id[f] {
                    g
                } else {
                    compose(g, f)
                };
                table.insert(
                    (MorId(mor_new[g]), MorId(mor_new[f])),
                    MorId(mor_new[h]),
                );
            }
        }
        let names: Vec<String> = obj_order.iter().map(|&i| objects[i].clone()).collect();
        let infos: Vec<MorphismInfo> = mor_order
            .iter()
            .map(|&i| MorphismInfo {
                name: morphisms[i].0.clone(),
                dom: ObjId(obj_new[morphisms[i].1]),
                cod: ObjId(obj_new[morphisms[i].2]),
            })
            .collect();
        let mut ids = vec![MorId(0); objects.len()];
        for (o, &m) in identities.iter().enumerate() {
            ids[obj_new[o] as usize] = MorId(mor_new[m]);
        }
        FinCat::assemble(names, infos, ids, table)
    }

    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<MorphismInfo>,
        identities: Vec<MorId>,
        compose: HashMap<(MorId, MorId), MorId>,
    ) -> FinCat {
        let obj_index = objects
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), ObjId(i as u32)))
            .collect();
        let mor_index = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.name.clone(), MorId(i as u32)))
            .collect();
        let mut hom: HashMap<(ObjId, ObjId), Vec<MorId>> = HashMap::new();
        let mut outgoing = vec![Vec::new(); objects.len()];
        let mut incoming = vec![Vec::new(); objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            let id = MorId(i as u32);
            hom.entry((m.dom, m.cod)).or_default().push(id);
            outgoing[m.dom.index()].push(id);
            incoming[m.cod.index()].push(id);
        }
        FinCat {
            objects,
            morphisms,
            identities,
            compose,
            obj_index,
            mor_index,
            hom,
            outgoing,
            incoming,
        }
    }
}

impl fmt::Display for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCat({} objects, {} morphisms)",
            self.num_objects(),
            self.num_morphisms()
        )
    }
}

/// Name-based description of a category, checked by [`CategoryBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    identities: Vec<(String, String)>,
    compose: Vec<(String, String, String)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: impl Into<String>) -> &mut Self {
        self.objects.push(name.into());
        self
    }

    /// Adds an object together with an identity morphism named `1_<name>`.
    pub fn object_with_identity(&mut self, name: impl Into<String>) -> &mut Self {
        let name = name.into();
        let id = format!("1_{name}");
        self.objects.push(name.clone());
        self.morphisms.push((id.clone(), name.clone(), name.clone()));
        self.identities.push((name, id));
        self
    }

    pub fn morphism(
        &mut self,
        name: impl Into<String>,
        dom: impl Into<String>,
        cod: impl Into<String>,
    ) -> &mut Self {
        self.morphisms.push((name.into(), dom.into(), cod.into()));
        self
    }

    pub fn identity(&mut self, object: impl Into<String>, morphism: impl Into<String>) -> &mut Self {
        self.identities.push((object.into(), morphism.into()));
        self
    }

    /// Records `g ∘ f = h`.
    pub fn compose(
        &mut self,
        g: impl Into<String>,
        f: impl Into<String>,
        h: impl Into<String>,
    ) -> &mut Self {
        self.compose.push((g.into(), f.into(), h.into()));
        self
    }

    /// Checks the description and returns the category, or the first law
    /// that fails. Checks run in the order: ids, typing, identities,
    /// totality, associativity.
    pub fn build(&self) -> Result<FinCat, CategoryError> {
        let mut obj_names: Vec<&String> = self.objects.iter().collect();
        obj_names.sort();
        for w in obj_names.windows(2) {
            if w[0] == w[1] {
                return Err(CategoryError::DuplicateId(w[0].clone()));
            }
        }
        let mut mor_names: Vec<&String> = self.morphisms.iter().map(|m| &m.0).collect();
        mor_names.sort();
        for w in mor_names.windows(2) {
            if w[0] == w[1] {
                return Err(CategoryError::DuplicateId(w[0].clone()));
            }
        }
        let obj_index: HashMap<&str, ObjId> = obj_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), ObjId(i as u32)))
            .collect();
        let mor_index: HashMap<&str, MorId> = mor_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), MorId(i as u32)))
            .collect();
        let dangling = |id: &str, context: &str| CategoryError::DanglingId {
            id: id.to_string(),
            context: context.to_string(),
        };

        let mut infos: Vec<Option<MorphismInfo>> = vec![None; mor_names.len()];
        for (name, dom, cod) in &self.morphisms {
            let d = *obj_index
                .get(dom.as_str())
                .ok_or_else(|| dangling(dom, &format!("domain of `{name}`")))?;
            let c = *obj_index
                .get(cod.as_str())
                .ok_or_else(|| dangling(cod, &format!("codomain of `{name}`")))?;
            infos[mor_index[name.as_str()].index()] = Some(MorphismInfo {
                name: name.clone(),
                dom: d,
                cod: c,
            });
        }
        let infos: Vec<MorphismInfo> = infos.into_iter().map(Option::unwrap).collect();

        let mut ids: Vec<Option<MorId>> = vec![None; obj_names.len()];
        for (obj, mor) in &self.identities {
            let o = *obj_index
                .get(obj.as_str())
                .ok_or_else(|| dangling(obj, "identities"))?;
            let m = *mor_index
                .get(mor.as_str())
                .ok_or_else(|| dangling(mor, "identities"))?;
            if ids[o.index()].is_some() {
                return Err(CategoryError::DuplicateId(format!("identity of {obj}")));
            }
            ids[o.index()] = Some(m);
        }

        let mut table: HashMap<(MorId, MorId), MorId> = HashMap::new();
        for (g, f, h) in &self.compose {
            let gi = *mor_index
                .get(g.as_str())
                .ok_or_else(|| dangling(g, "compose"))?;
            let fi = *mor_index
                .get(f.as_str())
                .ok_or_else(|| dangling(f, "compose"))?;
            let hi = *mor_index
                .get(h.as_str())
                .ok_or_else(|| dangling(h, "compose"))?;
            let (gm, fm, hm) = (&infos[gi.index()], &infos[fi.index()], &infos[hi.index()]);
            if fm.cod != gm.dom || hm.dom != fm.dom || hm.cod != gm.cod {
                return Err(CategoryError::IllTypedComposite {
                    g: g.clone(),
                    f: f.clone(),
                    h: h.clone(),
                });
            }
            if let Some(&prev) = table.get(&(gi, fi)) {
                if prev != hi {
                    return Err(CategoryError::ConflictingComposite {
                        g: g.clone(),
                        f: f.clone(),
                        first: infos[prev.index()].name.clone(),
                        second: h.clone(),
                    });
                }
            }
            table.insert((gi, fi), hi);
        }

        let mut identities = Vec::with_capacity(ids.len());
        for (o, id) in ids.iter().enumerate() {
            let id = id.ok_or_else(|| CategoryError::MissingIdentity(obj_names[o].clone()))?;
            let info = &infos[id.index()];
            if info.dom.index() != o || info.cod.index() != o {
                return Err(CategoryError::IdentityLawViolation {
                    identity: info.name.clone(),
                    morphism: info.name.clone(),
                });
            }
            identities.push(id);
        }

        // Complete identity composites, rejecting contradicting entries.
        for (i, info) in infos.iter().enumerate() {
            let f = MorId(i as u32);
            let left = identities[info.cod.index()];
            let right = identities[info.dom.index()];
            for key in [(left, f), (f, right)] {
                match table.get(&key) {
                    Some(&h) if h != f => {
                        return Err(CategoryError::IdentityLawViolation {
                            identity: infos[if key.0 == f { key.1 } else { key.0 }.index()]
                                .name
                                .clone(),
                            morphism: info.name.clone(),
                        })
                    }
                    Some(_) => {}
                    None => {
                        table.insert(key, f);
                    }
                }
            }
        }

        let cat = FinCat::assemble(
            obj_names.into_iter().cloned().collect(),
            infos,
            identities,
            table,
        );
        for (g, f) in cat.composable_pairs().collect::<Vec<_>>() {
            if cat.compose(g, f).is_none() {
                return Err(CategoryError::MissingComposite {
                    g: cat.morphism_name(g).to_string(),
                    f: cat.morphism_name(f).to_string(),
                });
            }
        }
        check_associativity(&cat)?;
        Ok(cat)
    }
}

fn check_associativity(cat: &FinCat) -> Result<(), CategoryError> {
    for f in cat.morphisms() {
        for &g in cat.outgoing(cat.cod(f)) {
            let gf = cat.compose(g, f).unwrap();
            for &h in cat.outgoing(cat.cod(g)) {
                let hg = cat.compose(h, g).unwrap();
                if cat.compose(h, gf) != cat.compose(hg, f) {
                    return Err(CategoryError::AssociativityViolation {
                        h: cat.morphism_name(h).to_string(),
                        g: cat.morphism_name(g).to_string(),
                        f: cat.morphism_name(f).to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Re-checks every category law on an already built category.
pub fn check_laws(cat: &FinCat) -> Result<(), CategoryError> {
    for m in cat.morphisms() {
        let l = cat.identity(cat.cod(m));
        let r = cat.identity(cat.dom(m));
        if cat.compose(l, m) != Some(m) || cat.compose(m, r) != Some(m) {
            return Err(CategoryError::IdentityLawViolation {
                identity: cat.morphism_name(l).to_string(),
                morphism: cat.morphism_name(m).to_string(),
            });
        }
    }
    for (g, f) in cat.composable_pairs() {
        match cat.compose(g, f) {
            None => {
                return Err(CategoryError::MissingComposite {
                    g: cat.morphism_name(g).to_string(),
                    f: cat.morphism_name(f).to_string(),
                })
            }
            Some(h) if cat.dom(h) != cat.dom(f) || cat.cod(h) != cat.cod(g) => {
                return Err(CategoryError::IllTypedComposite {
                    g: cat.morphism_name(g).to_string(),
                    f: cat.morphism_name(f).to_string(),
                    h: cat.morphism_name(h).to_string(),
                })
            }
            Some(_) => {}
        }
    }
    check_associativity(cat)
}
