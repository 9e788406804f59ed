//! Exhaustive lift searches used to test the lifting property.

use std::collections::HashSet;
use std::sync::Arc;

use fincat_core::{BudgetExceeded, FinCat, Functor, FunctorSearch, MorId, NatTrans, ObjId};
use homotopy::{StrongHomotopy, WeakHomotopy};
use paths::{is_forward, LevelCategory, Path, DEFAULT_MORPHISM_CAP};

use crate::problem::LiftingProblem;
use crate::trail::{even_ceil, link_ends};

/// All functors `X → E` over `base` along `p`.
fn fiber(p: &Functor, base: &Functor) -> Result<Vec<Functor>, BudgetExceeded> {
    let (x, e) = (base.source(), p.source());
    let candidates = x
        .objects()
        .map(|o| e.objects().filter(|&t| p.obj(t) == base.obj(o)).collect())
        .collect();
    FunctorSearch::new(x, e)
        .object_candidates(candidates)
        .morphism_filter(|m, t| p.mor(t) == base.mor(m))
        .all()
}

/// Up to `limit` natural transformations `from ⇒ to` whose component at
/// each object passes `allowed`, in component order.
pub(crate) fn transformations(
    from: &Functor,
    to: &Functor,
    allowed: impl Fn(ObjId, MorId) -> bool,
    limit: usize,
) -> Vec<NatTrans> {
    let x = &**from.source();
    let e = &**from.target();
    let options: Vec<Vec<MorId>> = x
        .objects()
        .map(|o| {
            e.hom(from.obj(o), to.obj(o))
                .iter()
                .copied()
                .filter(|&c| allowed(o, c))
                .collect()
        })
        .collect();
    // Squares to check once both ends of a morphism are assigned.
    let mut due: Vec<Vec<MorId>> = vec![Vec::new(); x.num_objects()];
    for m in x.morphisms() {
        let last = x.dom(m).max(x.cod(m));
        due[last.index()].push(m);
    }
    struct Walk<'a> {
        x: &'a FinCat,
        e: &'a FinCat,
        from: &'a Functor,
        to: &'a Functor,
        options: Vec<Vec<MorId>>,
        due: Vec<Vec<MorId>>,
        limit: usize,
        out: Vec<Vec<MorId>>,
    }
    fn go(w: &mut Walk, comps: &mut Vec<MorId>) {
        let i = comps.len();
        if i == w.options.len() {
            w.out.push(comps.clone());
            return;
        }
        for j in 0..w.options[i].len() {
            if w.out.len() >= w.limit {
                return;
            }
            comps.push(w.options[i][j]);
            let ok = w.due[i].iter().all(|&m| {
                let (a, b) = (w.x.dom(m).index(), w.x.cod(m).index());
                w.e.compose(w.to.mor(m), comps[a]) == w.e.compose(comps[b], w.from.mor(m))
            });
            if ok {
                go(w, comps);
            }
            comps.pop();
        }
    }
    let mut w = Walk {
        x,
        e,
        from,
        to,
        options,
        due,
        limit,
        out: Vec::new(),
    };
    go(&mut w, &mut Vec::new());
    w.out
        .into_iter()
        .map(|c| NatTrans::new_unchecked(from.clone(), to.clone(), c))
        .collect()
}

/// A natural transformation `from ⇒ to` whose components lie over `over`.
fn nat_over(p: &Functor, from: &Functor, to: &Functor, over: &NatTrans) -> Option<NatTrans> {
    transformations(from, to, |o, c| p.mor(c) == over.component(o), 1).pop()
}

/// Stage-by-stage search for a strong lift in `E` itself, backtracking
/// over the fibers of each stage. `node_budget` bounds the number of
/// candidate stages tried.
pub fn strong_lift(p: &Functor, problem: &LiftingProblem, node_budget: u64) -> Result<Option<StrongHomotopy>, BudgetExceeded> {
    let h = problem.homotopy();
    let n = h.len();
    let fibers: Vec<Vec<Functor>> = (1..=n).map(|k| fiber(p, h.stage(k))).collect::<Result<_, _>>()?;
    let mut dead: Vec<HashSet<usize>> = vec![HashSet::new(); n + 1];
    let mut nodes = 0u64;

    struct Ctx<'a> {
        p: &'a Functor,
        h: &'a StrongHomotopy,
        fibers: &'a [Vec<Functor>],
        budget: u64,
    }
    fn go(
        ctx: &Ctx,
        k: usize,
        stage: &Functor,
        dead: &mut [HashSet<usize>],
        nodes: &mut u64,
        stages: &mut Vec<Functor>,
        links: &mut Vec<NatTrans>,
    ) -> Result<bool, BudgetExceeded> {
        if k == ctx.h.len() {
            return Ok(true);
        }
        for (i, next) in ctx.fibers[k].iter().enumerate() {
            if dead[k + 1].contains(&i) {
                continue;
            }
            *nodes += 1;
            if *nodes > ctx.budget {
                return Err(BudgetExceeded::new("lift search nodes", ctx.budget));
            }
            let link = if link_ends(k).0 == k {
                nat_over(ctx.p, stage, next, ctx.h.link(k))
            } else {
                nat_over(ctx.p, next, stage, ctx.h.link(k))
            };
            let Some(link) = link else { continue };
            stages.push(next.clone());
            links.push(link);
            if go(ctx, k + 1, next, dead, nodes, stages, links)? {
                return Ok(true);
            }
            stages.pop();
            links.pop();
            dead[k + 1].insert(i);
        }
        Ok(false)
    }

    let ctx = Ctx {
        p,
        h,
        fibers: &fibers,
        budget: node_budget,
    };
    let mut stages = vec![problem.floor().clone()];
    let mut links = Vec::with_capacity(n);
    if go(&ctx, 0, problem.floor(), &mut dead, &mut nodes, &mut stages, &mut links)? {
        Ok(Some(StrongHomotopy::new(stages, links).expect("search keeps naturality")))
    } else {
        Ok(None)
    }
}

/// Paths in `E` over `base` starting at `start`, arrow by arrow.
fn paths_over(p: &Functor, base: &Path, start: ObjId) -> Vec<Path> {
    let e = &**p.source();
    let mut out = Vec::new();
    let mut objects = vec![start];
    let mut arrows = Vec::new();
    fn go(
        e: &FinCat,
        p: &Functor,
        base: &Path,
        objects: &mut Vec<ObjId>,
        arrows: &mut Vec<MorId>,
        out: &mut Vec<Path>,
    ) {
        let i = arrows.len();
        if i == base.len() {
            out.push(Path::new(e, objects.clone(), arrows.clone()).expect("arrows follow the shape"));
            return;
        }
        let here = objects[i];
        let moves: Vec<MorId> = if is_forward(i) {
            e.outgoing(here).to_vec()
        } else {
            e.incoming(here).to_vec()
        };
        for m in moves {
            if p.mor(m) != base.arrow(i) {
                continue;
            }
            let next = if is_forward(i) { e.cod(m) } else { e.dom(m) };
            objects.push(next);
            arrows.push(m);
            go(e, p, base, objects, arrows, out);
            objects.pop();
            arrows.pop();
        }
    }
    if p.obj(start) == base.start() {
        go(e, p, base, &mut objects, &mut arrows, &mut out);
    }
    out
}

/// Search for a weak lift `X → PE` of the path form of the problem, every
/// lifted path of the same length as its base path: a functor into the
/// level category on the paths over the base paths, with morphisms over
/// the base path morphisms and starting at the floor.
pub fn weak_lift(p: &Functor, problem: &LiftingProblem) -> Result<Option<WeakHomotopy>, BudgetExceeded> {
    let base = problem.weak();
    let (x, e) = (problem.source(), p.source());
    let floor = problem.floor();
    let per_object: Vec<Vec<Path>> = x
        .objects()
        .map(|o| paths_over(p, base.path(o), floor.obj(o)))
        .collect();
    let len = even_ceil(problem.len());
    let all: Vec<Path> = per_object.iter().flatten().cloned().collect();
    let level = LevelCategory::full(e, len, all, DEFAULT_MORPHISM_CAP)?;
    let candidates: Vec<Vec<ObjId>> = per_object
        .iter()
        .map(|ps| ps.iter().map(|q| level.object_of(q).unwrap()).collect())
        .collect();
    let lc: &Arc<FinCat> = level.cat();
    let found = FunctorSearch::new(x, lc)
        .object_candidates(candidates)
        .morphism_filter(|f, m| {
            let comps = level.components(m);
            comps[0] == floor.mor(f)
                && comps
                    .iter()
                    .zip(base.morphism(f).components())
                    .all(|(&c, &b)| p.mor(c) == b)
        })
        .first()?;
    Ok(found.map(|g| WeakHomotopy::from_level_functor(&level, &g).expect("level functors are weak homotopies")))
}
