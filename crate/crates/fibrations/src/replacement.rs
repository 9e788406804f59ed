use std::sync::Arc;

use fincat_core::{FinCat, Functor, MorId, NatTrans, ObjId, Pullback};
use homotopy::{StrongHomotopy, WeakHomotopy};
use paths::{all_paths, LevelCategory, Path, DEFAULT_MORPHISM_CAP};

use crate::problem::{LiftError, LiftSolution, LiftingProblem};
use crate::procedure::LiftProcedure;
use crate::trail::{even_ceil, link_ends, trail, trail_morphism, trail_step};

/// `F = F₂ ∘ F₁` through `E_F`, the pairs `(c, I)` of an object and a
/// path of length `L` starting at `F(c)`.
///
/// `F₁(c)` is `c` with the constant path, `F₂` takes the end of the path
/// and `G` forgets it. `retraction` runs from `F₁ ∘ G` to the identity:
/// stage `j` cuts every path after position `j`.
#[derive(Debug, Clone)]
pub struct FibrantReplacement {
    functor: Functor,
    level: LevelCategory,
    pullback: Pullback,
    include: Functor,
    project: Functor,
    retract: Functor,
    retraction: StrongHomotopy,
}

fn total_over(f: &Functor, len: usize, paths: Vec<Path>, cap: usize) -> Result<(LevelCategory, Pullback, Functor), LiftError> {
    let level = LevelCategory::full(f.target(), len, paths, cap)?;
    let pullback = Pullback::new(f, &level.start_functor()).map_err(|e| LiftError::Problem(e.to_string()))?;
    let project = level.end_functor().after(pullback.pr_b()).unwrap();
    Ok((level, pullback, project))
}

struct Parts<'a> {
    level: &'a LevelCategory,
    pullback: &'a Pullback,
}

impl Parts<'_> {
    fn split(&self, e: ObjId) -> (ObjId, &Path) {
        (self.pullback.pr_a().obj(e), self.level.path(self.pullback.pr_b().obj(e)))
    }

    fn join(&self, c: ObjId, p: &Path) -> Option<ObjId> {
        self.pullback.obj(c, self.level.object_of(p)?)
    }

    fn join_mor(&self, u: MorId, from: ObjId, to: ObjId, comps: &[MorId]) -> Option<MorId> {
        let (p, q) = (self.pullback.pr_b().obj(from), self.pullback.pr_b().obj(to));
        self.pullback.mor(u, self.level.morphism_of(p, q, comps)?)
    }
}

fn broken(what: &str) -> LiftError {
    LiftError::Invalid(format!("replacement {what} is not in the total category"))
}

pub fn fibrant_replacement(f: &Functor, len: usize, cap: usize) -> Result<FibrantReplacement, LiftError> {
    if len % 2 == 1 {
        return Err(LiftError::Problem(format!("path length {len} is odd")));
    }
    let (c, d) = (f.source(), f.target());
    let mut starts: Vec<ObjId> = c.objects().map(|x| f.obj(x)).collect();
    starts.sort();
    starts.dedup();
    let (level, pullback, project) = total_over(f, len, all_paths(d, len, Some(&starts)), cap)?;
    let parts = Parts {
        level: &level,
        pullback: &pullback,
    };
    let e = pullback.cat();

    let include_objs: Vec<ObjId> = c
        .objects()
        .map(|x| parts.join(x, &Path::constant(d, f.obj(x), len)).ok_or_else(|| broken("constant path")))
        .collect::<Result<_, _>>()?;
    let include_mors = c
        .morphisms()
        .map(|m| {
            let (a, b) = (include_objs[c.dom(m).index()], include_objs[c.cod(m).index()]);
            parts
                .join_mor(m, a, b, &vec![f.mor(m); len + 1])
                .ok_or_else(|| broken("constant morphism"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let include = Functor::new(c.clone(), e.clone(), include_objs, include_mors).map_err(|e| LiftError::Invalid(e.to_string()))?;
    let retract = pullback.pr_a().clone();

    let cut = |j: usize| -> Result<Functor, LiftError> {
        let objs: Vec<ObjId> = e
            .objects()
            .map(|o| {
                let (x, p) = parts.split(o);
                parts.join(x, &p.truncate_then_constant(d, j, len)).ok_or_else(|| broken("cut path"))
            })
            .collect::<Result<_, _>>()?;
        let mors = e
            .morphisms()
            .map(|m| {
                let u = pullback.pr_a().mor(m);
                let alpha = level.components(pullback.pr_b().mor(m));
                let comps: Vec<MorId> = (0..=len).map(|p| alpha[p.min(j)]).collect();
                parts
                    .join_mor(u, objs[e.dom(m).index()], objs[e.cod(m).index()], &comps)
                    .ok_or_else(|| broken("cut morphism"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Functor::new(e.clone(), e.clone(), objs, mors).map_err(|e| LiftError::Invalid(e.to_string()))
    };
    let stages = (0..=len).map(cut).collect::<Result<Vec<_>, _>>()?;
    let mut links = Vec::with_capacity(len);
    for j in 0..len {
        let (from, to) = link_ends(j);
        let comps = e
            .objects()
            .map(|o| {
                let (x, p) = parts.split(o);
                let step: Vec<MorId> = (0..=len)
                    .map(|q| if q > j { p.arrow(j) } else { d.identity(p.object(q)) })
                    .collect();
                parts
                    .join_mor(c.identity(x), stages[from].obj(o), stages[to].obj(o), &step)
                    .ok_or_else(|| broken("retraction step"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        links.push(NatTrans::new_unchecked(stages[from].clone(), stages[to].clone(), comps));
    }
    let retraction = StrongHomotopy::new(stages, links)?;
    let r = FibrantReplacement {
        functor: f.clone(),
        level,
        pullback,
        include,
        project,
        retract,
        retraction,
    };
    r.verify()?;
    Ok(r)
}

impl FibrantReplacement {
    /// `F₂ ∘ F₁ = F` and `G ∘ F₁ = id` as tables, and the retraction is a
    /// homotopy from `F₁ ∘ G` to the identity in both readings.
    pub fn verify(&self) -> Result<(), LiftError> {
        let fail = |m: &str| Err(LiftError::Invalid(m.to_string()));
        if self.project.after(&self.include).ok().as_ref() != Some(&self.functor) {
            return fail("F2 o F1 differs from F");
        }
        if self.retract.after(&self.include).ok() != Some(Functor::identity(self.functor.source())) {
            return fail("G o F1 is not the identity");
        }
        self.retraction.check()?;
        let back = self.include.after(&self.retract).unwrap();
        let id = Functor::identity(self.total());
        if self.retraction.start() != &back || self.retraction.end() != &id {
            return fail("retraction has the wrong ends");
        }
        self.weak_retraction().check_endpoints(&back, &id)?;
        Ok(())
    }

    pub fn functor(&self) -> &Functor {
        &self.functor
    }

    pub fn len(&self) -> usize {
        self.level.len()
    }

    pub fn is_empty(&self) -> bool {
        self.level.is_empty()
    }

    pub fn level(&self) -> &LevelCategory {
        &self.level
    }

    pub fn pullback(&self) -> &Pullback {
        &self.pullback
    }

    pub fn total(&self) -> &Arc<FinCat> {
        self.pullback.cat()
    }

    /// `F₁: C → E_F`.
    pub fn include(&self) -> &Functor {
        &self.include
    }

    /// `F₂: E_F → D`.
    pub fn project(&self) -> &Functor {
        &self.project
    }

    /// `G: E_F → C`.
    pub fn retract(&self) -> &Functor {
        &self.retract
    }

    pub fn retraction(&self) -> &StrongHomotopy {
        &self.retraction
    }

    pub fn weak_retraction(&self) -> WeakHomotopy {
        WeakHomotopy::from_strong(&self.retraction)
    }
}

/// Lifts for `F₂`: stage `k` extends the stored path by the homotopy up to
/// stage `k`, landing in the replacement built at length `L + a`, with `a`
/// the homotopy length rounded up to even. The original replacement embeds
/// by padding paths at the end.
#[derive(Debug, Clone)]
pub struct FibrantLift {
    replacement: FibrantReplacement,
    cap: usize,
}

impl FibrantLift {
    pub fn new(replacement: FibrantReplacement) -> FibrantLift {
        FibrantLift {
            replacement,
            cap: DEFAULT_MORPHISM_CAP,
        }
    }

    pub fn replacement(&self) -> &FibrantReplacement {
        &self.replacement
    }
}

pub fn fibrant_lift(replacement: &FibrantReplacement, problem: &LiftingProblem) -> Result<LiftSolution, LiftError> {
    FibrantLift::new(replacement.clone()).lift(problem)
}

impl LiftProcedure for FibrantLift {
    fn projection(&self) -> &Functor {
        &self.replacement.project
    }

    fn lift(&self, problem: &LiftingProblem) -> Result<LiftSolution, LiftError> {
        let r = &self.replacement;
        let old = Parts {
            level: &r.level,
            pullback: &r.pullback,
        };
        let (h, floor, x) = (problem.homotopy(), problem.floor(), problem.source());
        let d = r.functor.target();
        let e = r.total();
        let n = h.len();
        let a = even_ceil(n);
        let big = r.len() + a;

        let extend = |o: ObjId, k: usize| -> Result<(ObjId, Path), LiftError> {
            let (c, p) = old.split(floor.obj(o));
            let (objs, arrows) = trail(h, o, k, a);
            let mut objects = p.objects().to_vec();
            objects.extend_from_slice(&objs[1..]);
            let mut all = p.arrows().to_vec();
            all.extend(arrows);
            let path = Path::new(d, objects, all).map_err(|e| LiftError::Invalid(format!("extended path: {e}")))?;
            Ok((c, path))
        };
        let mut paths: Vec<Path> = r.level.paths().iter().map(|p| p.pad_right(d, big)).collect();
        let mut staged = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let row = x.objects().map(|o| extend(o, k)).collect::<Result<Vec<_>, _>>()?;
            paths.extend(row.iter().map(|(_, p)| p.clone()));
            staged.push(row);
        }
        let (level, pullback, project) = total_over(&r.functor, big, paths, self.cap)?;
        let new = Parts {
            level: &level,
            pullback: &pullback,
        };
        let t = pullback.cat();

        let emb_objs: Vec<ObjId> = e
            .objects()
            .map(|o| {
                let (c, p) = old.split(o);
                new.join(c, &p.pad_right(d, big)).ok_or_else(|| broken("padded path"))
            })
            .collect::<Result<_, _>>()?;
        let emb_mors = e
            .morphisms()
            .map(|m| {
                let alpha = r.level.components(r.pullback.pr_b().mor(m));
                let mut comps = alpha.to_vec();
                comps.extend(std::iter::repeat(*alpha.last().unwrap()).take(a));
                new.join_mor(r.pullback.pr_a().mor(m), emb_objs[e.dom(m).index()], emb_objs[e.cod(m).index()], &comps)
                    .ok_or_else(|| broken("padded morphism"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let embedding = Functor::new_unchecked(e.clone(), t.clone(), emb_objs, emb_mors);

        let mut stages = Vec::with_capacity(n + 1);
        for (k, row) in staged.iter().enumerate() {
            let objs: Vec<ObjId> = row
                .iter()
                .map(|(c, p)| new.join(*c, p).ok_or_else(|| broken("extended path")))
                .collect::<Result<_, _>>()?;
            let mors = x
                .morphisms()
                .map(|f| {
                    let m = floor.mor(f);
                    let mut comps = r.level.components(r.pullback.pr_b().mor(m)).to_vec();
                    comps.extend_from_slice(&trail_morphism(h, f, k, a)[1..]);
                    new.join_mor(r.pullback.pr_a().mor(m), objs[x.dom(f).index()], objs[x.cod(f).index()], &comps)
                        .ok_or_else(|| broken("extended morphism"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            stages.push(Functor::new(x.clone(), t.clone(), objs, mors).map_err(|e| LiftError::Invalid(e.to_string()))?);
        }
        let mut links = Vec::with_capacity(n);
        for k in 0..n {
            let (from, to) = link_ends(k);
            let comps = x
                .objects()
                .map(|o| {
                    let (c, p) = old.split(floor.obj(o));
                    let mut step: Vec<MorId> = p.objects().iter().map(|&q| d.identity(q)).collect();
                    step.extend_from_slice(&trail_step(h, o, k, a)[1..]);
                    new.join_mor(r.functor.source().identity(c), stages[from].obj(o), stages[to].obj(o), &step)
                        .ok_or_else(|| broken("extension step"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            links.push(NatTrans::new_unchecked(stages[from].clone(), stages[to].clone(), comps));
        }
        let lift = StrongHomotopy::new(stages, links)?;
        Ok(LiftSolution {
            total: t.clone(),
            projection: project,
            embedding,
            lift,
            length_preserving: true,
        })
    }
}
