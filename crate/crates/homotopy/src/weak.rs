use std::sync::Arc;

use fincat_core::{same_category, BudgetExceeded, FinCat, Functor, FunctorSearch, MorId, ObjId};
use paths::{all_paths, LevelCategory, LocalizedPathMorphism, Path, PathMorphism, Reparam, DEFAULT_MORPHISM_CAP};

use crate::graph::strong_homotopic;
use crate::strong::{HomotopyError, StrongHomotopy};

/// A functor `C → PD`: a path per object and a path morphism per morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakHomotopy {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    paths: Vec<Path>,
    morphisms: Vec<PathMorphism>,
}

impl WeakHomotopy {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        paths: Vec<Path>,
        morphisms: Vec<PathMorphism>,
    ) -> Result<WeakHomotopy, HomotopyError> {
        let h = WeakHomotopy {
            source,
            target,
            paths,
            morphisms,
        };
        h.check()?;
        Ok(h)
    }

    /// `c ↦ (H_0(c), ..., H_m(c))` with the link components as arrows,
    /// after padding to even length.
    pub fn from_strong(h: &StrongHomotopy) -> WeakHomotopy {
        let h = if h.len() % 2 == 1 { h.padded(h.len() + 1) } else { h.clone() };
        let c = h.source();
        let d = &**h.target();
        let paths: Vec<Path> = c
            .objects()
            .map(|x| {
                let objects = h.stages().iter().map(|s| s.obj(x)).collect();
                let arrows = h.links().iter().map(|l| l.component(x)).collect();
                Path::new(d, objects, arrows).expect("links have the zig-zag shape")
            })
            .collect();
        let morphisms = c
            .morphisms()
            .map(|f| {
                let comps = h.stages().iter().map(|s| s.mor(f)).collect();
                PathMorphism::new(
                    d,
                    paths[c.dom(f).index()].clone(),
                    paths[c.cod(f).index()].clone(),
                    Reparam::identity(h.len()),
                    comps,
                )
                .expect("links are natural")
            })
            .collect();
        WeakHomotopy {
            source: c.clone(),
            target: h.target().clone(),
            paths,
            morphisms,
        }
    }

    /// Every assigned path and path morphism is valid, identities go to
    /// identities and composites to composites.
    pub fn check(&self) -> Result<(), HomotopyError> {
        let (c, d) = (&*self.source, &*self.target);
        if self.paths.len() != c.num_objects() || self.morphisms.len() != c.num_morphisms() {
            return Err(HomotopyError::Path("table sizes differ from the source".into()));
        }
        for (i, p) in self.paths.iter().enumerate() {
            p.check(d)
                .map_err(|e| HomotopyError::Path(format!("object {}: {e}", c.object_name(ObjId(i as u32)))))?;
        }
        for f in c.morphisms() {
            let m = &self.morphisms[f.index()];
            let name = c.morphism_name(f);
            if m.from() != &self.paths[c.dom(f).index()] || m.to() != &self.paths[c.cod(f).index()] {
                return Err(HomotopyError::Path(format!("`{name}` has the wrong endpoints")));
            }
            m.check(d).map_err(|e| HomotopyError::Path(format!("`{name}`: {e}")))?;
            if c.is_identity(f) && m != &PathMorphism::identity(d, m.from()) {
                return Err(HomotopyError::Path(format!("identity `{name}` is not preserved")));
            }
        }
        for (g, f) in c.composable_pairs() {
            let h = c.compose(g, f).unwrap();
            let composite = self.morphisms[f.index()]
                .then(d, &self.morphisms[g.index()])
                .map_err(|e| HomotopyError::Path(e.to_string()))?;
            if composite != self.morphisms[h.index()] {
                return Err(HomotopyError::Path(format!(
                    "composite {} o {} is not preserved",
                    c.morphism_name(g),
                    c.morphism_name(f)
                )));
            }
        }
        Ok(())
    }

    /// Checks `π₀ ∘ H = f` and `π₁ ∘ H = g` on objects and morphisms.
    pub fn check_endpoints(&self, f: &Functor, g: &Functor) -> Result<(), HomotopyError> {
        for (which, k) in [("start", f), ("end", g)] {
            if !same_category(k.source(), &self.source) || !same_category(k.target(), &self.target) {
                return Err(HomotopyError::Endpoint(which));
            }
        }
        for x in self.source.objects() {
            let (s, e) = self.paths[x.index()].endpoints();
            if s != f.obj(x) {
                return Err(HomotopyError::Endpoint("start"));
            }
            if e != g.obj(x) {
                return Err(HomotopyError::Endpoint("end"));
            }
        }
        for m in self.source.morphisms() {
            let (s, e) = self.morphisms[m.index()].endpoint_components();
            if s != f.mor(m) {
                return Err(HomotopyError::Endpoint("start"));
            }
            if e != g.mor(m) {
                return Err(HomotopyError::Endpoint("end"));
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn path(&self, x: ObjId) -> &Path {
        &self.paths[x.index()]
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn morphism(&self, f: MorId) -> &PathMorphism {
        &self.morphisms[f.index()]
    }

    pub fn localized(&self, f: MorId) -> LocalizedPathMorphism {
        LocalizedPathMorphism::single(self.morphisms[f.index()].clone())
    }

    /// Reduced representatives of the assigned paths.
    pub fn normal_forms(&self) -> Vec<Path> {
        self.paths.iter().map(|p| p.normal_form(&self.target)).collect()
    }

    /// The start and end functors `π₀ ∘ H`, `π₁ ∘ H`.
    pub fn endpoint_functors(&self) -> (Functor, Functor) {
        let side = |last: bool| {
            let objs = self.paths.iter().map(|p| if last { p.end() } else { p.start() }).collect();
            let mors = self
                .morphisms
                .iter()
                .map(|m| {
                    let (a, b) = m.endpoint_components();
                    if last {
                        b
                    } else {
                        a
                    }
                })
                .collect();
            Functor::new_unchecked(self.source.clone(), self.target.clone(), objs, mors)
        };
        (side(false), side(true))
    }

    /// Reads a functor `C → PD_L` whose morphisms are level transformations.
    pub fn from_level_functor(level: &LevelCategory, h: &Functor) -> Result<WeakHomotopy, HomotopyError> {
        let c = h.source();
        let d = level.base();
        let paths: Vec<Path> = c.objects().map(|x| level.path(h.obj(x)).clone()).collect();
        let morphisms = c
            .morphisms()
            .map(|f| {
                PathMorphism::new(
                    d,
                    paths[c.dom(f).index()].clone(),
                    paths[c.cod(f).index()].clone(),
                    Reparam::identity(level.len()),
                    level.components(h.mor(f)).to_vec(),
                )
                .map_err(|e| HomotopyError::Path(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        WeakHomotopy::new(c.clone(), d.clone(), paths, morphisms)
    }
}

/// Decides weak homotopy on a finite source through the strong search and
/// converts the certificate.
pub fn weak_homotopic(f: &Functor, g: &Functor, cap: u64) -> Result<Option<WeakHomotopy>, BudgetExceeded> {
    Ok(strong_homotopic(f, g, cap)?.map(|h| WeakHomotopy::from_strong(&h)))
}

/// Diagnostic: searches directly for a functor `C → PD_len` with the given
/// endpoint functors, every path of exactly length `len`. `None` only says
/// no such functor exists at this length.
pub fn weak_homotopic_direct(f: &Functor, g: &Functor, len: usize, cap: u64) -> Result<Option<WeakHomotopy>, BudgetExceeded> {
    let c = f.source();
    let d = f.target();
    let mut wanted: Vec<(ObjId, ObjId)> = c.objects().map(|x| (f.obj(x), g.obj(x))).collect();
    wanted.sort();
    wanted.dedup();
    let starts: Vec<ObjId> = wanted.iter().map(|&(s, _)| s).collect();
    let paths: Vec<Path> = all_paths(d, len, Some(&starts))
        .into_iter()
        .filter(|p| wanted.binary_search(&p.endpoints()).is_ok())
        .collect();
    let level = LevelCategory::full(d, len, paths, DEFAULT_MORPHISM_CAP)?;
    let lc = level.cat();
    let candidates = c
        .objects()
        .map(|x| {
            lc.objects()
                .filter(|&o| level.path(o).endpoints() == (f.obj(x), g.obj(x)))
                .collect()
        })
        .collect();
    let found = FunctorSearch::new(c, lc)
        .object_candidates(candidates)
        .morphism_filter(|m, lm| {
            let comps = level.components(lm);
            comps[0] == f.mor(m) && comps[len] == g.mor(m)
        })
        .node_budget(cap)
        .first()?;
    Ok(found.map(|h| WeakHomotopy::from_level_functor(&level, &h).expect("search respects the level laws")))
}
