use std::sync::Arc;

use fincat_core::{FinCat, Functor, MorId, NatTrans, ObjId, Product};
use paths::{LevelCategory, Path, PathCategory, DEFAULT_MORPHISM_CAP};

use crate::problem::{LiftError, LiftSolution, LiftingProblem};
use crate::procedure::LiftProcedure;
use crate::trail::{even_ceil, link_ends, post_compose, trail, trail_morphism, trail_step};

/// Staircase lifts for `π: PB_L → B × B`.
///
/// For a homotopy of length `n`, let `a` be `n` rounded up to even. Stage
/// `k` of the lift at `x` is the floor path `F(x)` with the first factor's
/// trail prepended (reversed) and the second factor's trail appended, each
/// of length `a` and moving only up to stage `k`. All of these live in
/// paths of length `L + 2a`; the floor enters through padding by `a`
/// identities on both sides.
#[derive(Debug, Clone)]
pub struct PathFibrationLift {
    level: LevelCategory,
    product: Product,
    projection: Functor,
    cap: usize,
}

impl PathFibrationLift {
    pub fn new(level: LevelCategory) -> PathFibrationLift {
        let product = Product::new(level.base(), level.base());
        PathFibrationLift::with_product(level, product)
    }

    /// Uses the given `B × B`, which must be a product of the level's base
    /// with itself.
    pub fn with_product(level: LevelCategory, product: Product) -> PathFibrationLift {
        let projection = level.endpoint_functor(&product);
        PathFibrationLift {
            level,
            product,
            projection,
            cap: DEFAULT_MORPHISM_CAP,
        }
    }

    pub fn from_path_category(pc: PathCategory) -> PathFibrationLift {
        PathFibrationLift {
            level: pc.level,
            product: pc.product,
            projection: pc.endpoint,
            cap: DEFAULT_MORPHISM_CAP,
        }
    }

    pub fn morphism_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn level(&self) -> &LevelCategory {
        &self.level
    }

    pub fn product(&self) -> &Product {
        &self.product
    }
}

struct Sides<'a> {
    base: &'a FinCat,
    a: usize,
    first: homotopy::StrongHomotopy,
    second: homotopy::StrongHomotopy,
}

impl Sides<'_> {
    fn path(&self, floor: &Path, x: ObjId, k: usize) -> Result<Path, LiftError> {
        let (mut objects, mut arrows) = trail(&self.first, x, k, self.a);
        objects.reverse();
        arrows.reverse();
        objects.extend_from_slice(&floor.objects()[1..]);
        arrows.extend_from_slice(floor.arrows());
        let (o2, a2) = trail(&self.second, x, k, self.a);
        objects.extend_from_slice(&o2[1..]);
        arrows.extend(a2);
        Path::new(self.base, objects, arrows).map_err(|e| LiftError::Invalid(format!("staircase path: {e}")))
    }

    fn morphism(&self, floor: &[MorId], f: MorId, k: usize) -> Vec<MorId> {
        let mut comps = trail_morphism(&self.first, f, k, self.a);
        comps.reverse();
        comps.extend_from_slice(&floor[1..]);
        comps.extend_from_slice(&trail_morphism(&self.second, f, k, self.a)[1..]);
        comps
    }

    fn step(&self, floor: &Path, x: ObjId, k: usize) -> Vec<MorId> {
        let mut comps = trail_step(&self.first, x, k, self.a);
        comps.reverse();
        comps.extend(floor.objects()[1..].iter().map(|&o| self.base.identity(o)));
        comps.extend_from_slice(&trail_step(&self.second, x, k, self.a)[1..]);
        comps
    }
}

fn pad_components(comps: &[MorId], a: usize) -> Vec<MorId> {
    let mut out = vec![comps[0]; a];
    out.extend_from_slice(comps);
    out.extend(std::iter::repeat(*comps.last().unwrap()).take(a));
    out
}

fn missing(what: &str) -> LiftError {
    LiftError::Invalid(format!("staircase {what} is not in the path category"))
}

impl LiftProcedure for PathFibrationLift {
    fn projection(&self) -> &Functor {
        &self.projection
    }

    fn lift(&self, problem: &LiftingProblem) -> Result<LiftSolution, LiftError> {
        let h = problem.homotopy();
        let floor = problem.floor();
        let x = problem.source();
        let base = self.level.base();
        let n = h.len();
        let a = even_ceil(n);
        let sides = Sides {
            base,
            a,
            first: post_compose(h, &self.product.p1())?,
            second: post_compose(h, &self.product.p2())?,
        };
        let floor_path = |o: ObjId| self.level.path(floor.obj(o));

        let mut all: Vec<Path> = self.level.paths().iter().map(|p| p.pad_both(base, a)).collect();
        let mut staged: Vec<Vec<Path>> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let row = x
                .objects()
                .map(|o| sides.path(floor_path(o), o, k))
                .collect::<Result<Vec<_>, _>>()?;
            all.extend(row.iter().cloned());
            staged.push(row);
        }
        let total = LevelCategory::full(base, self.level.len() + 2 * a, all, self.cap)?;
        let tc = total.cat();

        let e = self.level.cat();
        let emb_objs: Vec<ObjId> = e
            .objects()
            .map(|o| total.object_of(&self.level.path(o).pad_both(base, a)).unwrap())
            .collect();
        let emb_mors = e
            .morphisms()
            .map(|m| {
                let comps = pad_components(self.level.components(m), a);
                total
                    .morphism_of(emb_objs[e.dom(m).index()], emb_objs[e.cod(m).index()], &comps)
                    .ok_or_else(|| missing("padding"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let embedding = Functor::new_unchecked(e.clone(), tc.clone(), emb_objs, emb_mors);

        let objects_at = |k: usize| -> Vec<ObjId> { staged[k].iter().map(|p| total.object_of(p).unwrap()).collect() };
        let mut stages = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let objs = objects_at(k);
            let mors = x
                .morphisms()
                .map(|f| {
                    let comps = sides.morphism(self.level.components(floor.mor(f)), f, k);
                    total
                        .morphism_of(objs[x.dom(f).index()], objs[x.cod(f).index()], &comps)
                        .ok_or_else(|| missing("stage morphism"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            stages.push(Functor::new(x.clone(), tc.clone(), objs, mors).map_err(|e| LiftError::Invalid(e.to_string()))?);
        }
        let mut links = Vec::with_capacity(n);
        for k in 0..n {
            let (from, to) = link_ends(k);
            let comps = x
                .objects()
                .map(|o| {
                    let step = sides.step(floor_path(o), o, k);
                    total
                        .morphism_of(stages[from].obj(o), stages[to].obj(o), &step)
                        .ok_or_else(|| missing("step"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            links.push(NatTrans::new_unchecked(stages[from].clone(), stages[to].clone(), comps));
        }
        let lift = homotopy::StrongHomotopy::new(stages, links)?;
        Ok(LiftSolution {
            total: Arc::clone(tc),
            projection: total.endpoint_functor(&self.product),
            embedding,
            lift,
            length_preserving: true,
        })
    }
}
