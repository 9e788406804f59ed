use std::collections::BTreeMap;
use std::sync::Arc;

use fincat_core::standard::Zigzag;
use fincat_core::{same_category, FinCat, Functor, FunctorError, MorId, NatTrans, NatTransError, Product, RawFunctor};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomotopyError {
    #[error("a homotopy needs at least one stage")]
    NoStages,
    #[error("{stages} stages need {expected} links")]
    LinkCount { stages: usize, expected: usize },
    #[error("stage {0} has a different source or target")]
    StageCategories(usize),
    #[error("link {0} does not connect its stages in the required direction")]
    LinkDirection(usize),
    #[error("link {index}: {source}")]
    Link { index: usize, source: NatTransError },
    #[error("stage {index}: {source}")]
    Stage { index: usize, source: FunctorError },
    #[error("replayed functor fails: {0}")]
    Replay(FunctorError),
    #[error("unknown id `{0}`")]
    UnknownId(String),
    #[error("link {index} has no component for `{object}`")]
    MissingComponent { index: usize, object: String },
    #[error("homotopies do not meet: end of the first is not the start of the second")]
    NotComposable,
    #[error("path data is inconsistent: {0}")]
    Path(String),
    #[error("endpoint {0} does not match the declared functor")]
    Endpoint(&'static str),
}

/// Link `i` runs `H_i ⇒ H_{i+1}` for even `i` and `H_{i+1} ⇒ H_i` for odd `i`.
pub fn link_is_forward(i: usize) -> bool {
    i % 2 == 0
}

/// A zig-zag of natural transformations `H_0 ⇒ H_1 ⇐ H_2 ⇒ ...`, which is
/// the same data as a functor `C × 𝕀_m → D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongHomotopy {
    stages: Vec<Functor>,
    links: Vec<NatTrans>,
}

impl StrongHomotopy {
    pub fn new(stages: Vec<Functor>, links: Vec<NatTrans>) -> Result<StrongHomotopy, HomotopyError> {
        let h = StrongHomotopy { stages, links };
        h.check()?;
        Ok(h)
    }

    pub(crate) fn new_unchecked(stages: Vec<Functor>, links: Vec<NatTrans>) -> StrongHomotopy {
        StrongHomotopy { stages, links }
    }

    pub fn constant(f: &Functor) -> StrongHomotopy {
        StrongHomotopy {
            stages: vec![f.clone()],
            links: Vec::new(),
        }
    }

    /// Stage and link laws, checked directly on the tables.
    pub fn check(&self) -> Result<(), HomotopyError> {
        let first = self.stages.first().ok_or(HomotopyError::NoStages)?;
        if self.links.len() + 1 != self.stages.len() {
            return Err(HomotopyError::LinkCount {
                stages: self.stages.len(),
                expected: self.stages.len() - 1,
            });
        }
        for (i, s) in self.stages.iter().enumerate() {
            if !same_category(s.source(), first.source()) || !same_category(s.target(), first.target()) {
                return Err(HomotopyError::StageCategories(i));
            }
            s.check().map_err(|source| HomotopyError::Stage { index: i, source })?;
        }
        for (i, l) in self.links.iter().enumerate() {
            let (a, b) = (&self.stages[i], &self.stages[i + 1]);
            let ok = if link_is_forward(i) {
                l.from() == a && l.to() == b
            } else {
                l.from() == b && l.to() == a
            };
            if !ok {
                return Err(HomotopyError::LinkDirection(i));
            }
            l.check().map_err(|source| HomotopyError::Link { index: i, source })?;
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<FinCat> {
        self.stages[0].source()
    }

    pub fn target(&self) -> &Arc<FinCat> {
        self.stages[0].target()
    }

    /// Number of links `m`.
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn stages(&self) -> &[Functor] {
        &self.stages
    }

    pub fn stage(&self, i: usize) -> &Functor {
        &self.stages[i]
    }

    pub fn links(&self) -> &[NatTrans] {
        &self.links
    }

    pub fn link(&self, i: usize) -> &NatTrans {
        &self.links[i]
    }

    pub fn start(&self) -> &Functor {
        &self.stages[0]
    }

    pub fn end(&self) -> &Functor {
        self.stages.last().unwrap()
    }

    /// Appends identity links until the length is `len`.
    pub fn padded(&self, len: usize) -> StrongHomotopy {
        assert!(len >= self.len());
        let mut h = self.clone();
        while h.len() < len {
            let e = h.end().clone();
            h.links.push(NatTrans::identity(&e));
            h.stages.push(e);
        }
        h
    }

    /// A homotopy from the end back to the start.
    pub fn reversed(&self) -> StrongHomotopy {
        let h = if self.len() % 2 == 1 { self.padded(self.len() + 1) } else { self.clone() };
        let mut stages = h.stages;
        stages.reverse();
        let mut links = h.links;
        links.reverse();
        StrongHomotopy { stages, links }
    }

    pub fn concat(&self, next: &StrongHomotopy) -> Result<StrongHomotopy, HomotopyError> {
        if self.end() != next.start() {
            return Err(HomotopyError::NotComposable);
        }
        let mut h = if self.len() % 2 == 1 { self.padded(self.len() + 1) } else { self.clone() };
        h.stages.extend_from_slice(&next.stages[1..]);
        h.links.extend_from_slice(&next.links);
        Ok(h)
    }

    /// Rebuilds the functor `C × 𝕀_m → D`, checking the functor laws from
    /// scratch on the product.
    pub fn replay(&self) -> Result<Replay, HomotopyError> {
        let zig = Zigzag::new(self.len());
        let product = Product::new(self.source(), zig.cat());
        let z = zig.cat();
        let mut arrow_pos = vec![usize::MAX; z.num_morphisms()];
        for i in 0..zig.len() {
            arrow_pos[zig.arrow(i).index()] = i;
        }
        let pc = product.cat();
        let d = &**self.target();
        let c = &**self.source();
        let mut objs = Vec::with_capacity(pc.num_objects());
        for o in pc.objects() {
            let (x, t) = product.split_obj(o);
            objs.push(self.stages[zig.position(t)].obj(x));
        }
        let mut mors = Vec::with_capacity(pc.num_morphisms());
        for m in pc.morphisms() {
            let (f, a) = product.split_mor(m);
            let img = if z.is_identity(a) {
                self.stages[zig.position(z.dom(a))].mor(f)
            } else {
                let i = arrow_pos[a.index()];
                let later = if link_is_forward(i) { i + 1 } else { i };
                d.compose(self.stages[later].mor(f), self.links[i].component(c.dom(f)))
                    .expect("typed composite")
            };
            mors.push(img);
        }
        let functor = Functor::new(pc.clone(), self.target().clone(), objs, mors).map_err(HomotopyError::Replay)?;
        Ok(Replay { zigzag: zig, product, functor })
    }

    /// Reads a functor `C × 𝕀_m → D` back as stages and links.
    pub fn from_replay(replay: &Replay) -> Result<StrongHomotopy, HomotopyError> {
        let Replay { zigzag, product, functor } = replay;
        let c = product.left();
        let d = functor.target();
        let m = zigzag.len();
        let stage = |i: usize| {
            let t = zigzag.obj(i);
            let objs = c.objects().map(|x| functor.obj(product.obj(x, t))).collect();
            let mors = c
                .morphisms()
                .map(|f| functor.mor(product.mor(f, zigzag.cat().identity(t))))
                .collect();
            Functor::new(c.clone(), d.clone(), objs, mors)
        };
        let stages = (0..=m)
            .map(|i| stage(i).map_err(|source| HomotopyError::Stage { index: i, source }))
            .collect::<Result<Vec<_>, _>>()?;
        let mut links = Vec::with_capacity(m);
        for i in 0..m {
            let comps: Vec<MorId> = c
                .objects()
                .map(|x| functor.mor(product.mor(c.identity(x), zigzag.arrow(i))))
                .collect();
            let (from, to) = if link_is_forward(i) {
                (stages[i].clone(), stages[i + 1].clone())
            } else {
                (stages[i + 1].clone(), stages[i].clone())
            };
            links.push(NatTrans::new(from, to, comps).map_err(|source| HomotopyError::Link { index: i, source })?);
        }
        StrongHomotopy::new(stages, links)
    }

    pub fn to_raw(&self) -> RawStrongHomotopy {
        let c = self.source();
        let d = self.target();
        RawStrongHomotopy {
            stages: self.stages.iter().map(|s| s.to_raw()).collect(),
            links: self
                .links
                .iter()
                .enumerate()
                .map(|(i, l)| RawLink {
                    dir: if link_is_forward(i) { LinkDir::Fwd } else { LinkDir::Bwd },
                    components: c
                        .objects()
                        .map(|x| (c.object_name(x).to_string(), d.morphism_name(l.component(x)).to_string()))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_raw(source: &Arc<FinCat>, target: &Arc<FinCat>, raw: &RawStrongHomotopy) -> Result<StrongHomotopy, HomotopyError> {
        let stages = raw
            .stages
            .iter()
            .enumerate()
            .map(|(i, r)| Functor::from_raw(source, target, r).map_err(|source| HomotopyError::Stage { index: i, source }))
            .collect::<Result<Vec<_>, _>>()?;
        if stages.is_empty() {
            return Err(HomotopyError::NoStages);
        }
        if raw.links.len() + 1 != stages.len() {
            return Err(HomotopyError::LinkCount {
                stages: stages.len(),
                expected: stages.len() - 1,
            });
        }
        let mut links = Vec::with_capacity(raw.links.len());
        for (i, l) in raw.links.iter().enumerate() {
            let forward = l.dir == LinkDir::Fwd;
            if forward != link_is_forward(i) {
                return Err(HomotopyError::LinkDirection(i));
            }
            for name in l.components.keys() {
                if source.object_by_name(name).is_none() {
                    return Err(HomotopyError::UnknownId(name.clone()));
                }
            }
            let mut comps = Vec::with_capacity(source.num_objects());
            for x in source.objects() {
                let name = source.object_name(x);
                let img = l.components.get(name).ok_or_else(|| HomotopyError::MissingComponent {
                    index: i,
                    object: name.to_string(),
                })?;
                comps.push(target.morphism_by_name(img).ok_or_else(|| HomotopyError::UnknownId(img.clone()))?);
            }
            let (from, to) = if forward {
                (stages[i].clone(), stages[i + 1].clone())
            } else {
                (stages[i + 1].clone(), stages[i].clone())
            };
            links.push(NatTrans::new(from, to, comps).map_err(|source| HomotopyError::Link { index: i, source })?);
        }
        StrongHomotopy::new(stages, links)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_raw()).expect("serializable")
    }
}

/// A homotopy replayed as a functor out of `C × 𝕀_m`.
#[derive(Debug, Clone)]
pub struct Replay {
    pub zigzag: Zigzag,
    pub product: Product,
    pub functor: Functor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkDir {
    Fwd,
    Bwd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawLink {
    pub dir: LinkDir,
    pub components: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawStrongHomotopy {
    pub stages: Vec<RawFunctor>,
    pub links: Vec<RawLink>,
}
