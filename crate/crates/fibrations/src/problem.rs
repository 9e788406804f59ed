use std::sync::Arc;

use fincat_core::{io, same_category, BudgetExceeded, FinCat, Functor};
use homotopy::{HomotopyError, StrongHomotopy, WeakHomotopy};
use serde_json::{json, Value as Json};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("ill-formed lifting problem: {0}")]
    Problem(String),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("lift rejected: {0}")]
    Invalid(String),
    #[error("no lift exists")]
    NoLift,
    #[error("procedures do not compose: {0}")]
    NotComposable(String),
}

impl From<HomotopyError> for LiftError {
    fn from(e: HomotopyError) -> Self {
        LiftError::Invalid(e.to_string())
    }
}

/// A homotopy `H` of functors `X → B` together with a floor `F: X → E`
/// with `P ∘ F = H_0`.
#[derive(Debug, Clone)]
pub struct LiftingProblem {
    homotopy: StrongHomotopy,
    floor: Functor,
}

impl LiftingProblem {
    pub fn new(projection: &Functor, homotopy: StrongHomotopy, floor: Functor) -> Result<LiftingProblem, LiftError> {
        if !same_category(floor.target(), projection.source()) {
            return Err(LiftError::Problem("floor does not land in the total category".into()));
        }
        if !same_category(homotopy.target(), projection.target()) {
            return Err(LiftError::Problem("homotopy does not land in the base".into()));
        }
        if !same_category(homotopy.source(), floor.source()) {
            return Err(LiftError::Problem("homotopy and floor have different sources".into()));
        }
        let start = projection
            .after(&floor)
            .map_err(|e| LiftError::Problem(e.to_string()))?;
        if &start != homotopy.start() {
            return Err(LiftError::Problem("square does not commute at the start face".into()));
        }
        Ok(LiftingProblem { homotopy, floor })
    }

    pub fn homotopy(&self) -> &StrongHomotopy {
        &self.homotopy
    }

    pub fn floor(&self) -> &Functor {
        &self.floor
    }

    pub fn source(&self) -> &Arc<FinCat> {
        self.floor.source()
    }

    pub fn len(&self) -> usize {
        self.homotopy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.homotopy.is_empty()
    }

    /// The same problem read as a functor `X → PB`.
    pub fn weak(&self) -> WeakHomotopy {
        WeakHomotopy::from_strong(&self.homotopy)
    }

    pub fn to_json(&self) -> Json {
        json!({
            "source": io::save(self.source()),
            "homotopy": self.homotopy.to_json(),
            "floor": self.floor.to_raw(),
        })
    }
}

/// A lift `H̃` into a total category that extends the original one through
/// `embedding` and projects to the base by `projection`.
#[derive(Debug, Clone)]
pub struct LiftSolution {
    pub total: Arc<FinCat>,
    pub projection: Functor,
    pub embedding: Functor,
    pub lift: StrongHomotopy,
    pub length_preserving: bool,
}

impl LiftSolution {
    /// A solution living in `E` itself.
    pub fn in_place(projection: &Functor, lift: StrongHomotopy) -> LiftSolution {
        LiftSolution {
            total: projection.source().clone(),
            projection: projection.clone(),
            embedding: Functor::identity(projection.source()),
            length_preserving: true,
            lift,
        }
    }

    pub fn weak(&self) -> WeakHomotopy {
        WeakHomotopy::from_strong(&self.lift)
    }

    pub fn to_json(&self) -> Json {
        json!({
            "total_objects": self.total.num_objects(),
            "total_morphisms": self.total.num_morphisms(),
            "lift": self.lift.to_json(),
            "length_preserving": self.length_preserving,
        })
    }
}

fn invalid(msg: impl Into<String>) -> LiftError {
    LiftError::Invalid(msg.into())
}

/// Checks a solution against the problem for `P`, from the tables alone:
/// the embedding lies over `P`, the lift is a homotopy starting at the
/// embedded floor, it projects stage by stage and link by link onto `H`,
/// and its path form projects onto the path form of `H`.
pub fn validate(projection: &Functor, problem: &LiftingProblem, solution: &LiftSolution) -> Result<(), LiftError> {
    let (p, h, sol) = (projection, problem.homotopy(), solution);
    if !same_category(sol.embedding.source(), p.source()) || !same_category(sol.embedding.target(), &sol.total) {
        return Err(invalid("embedding has the wrong ends"));
    }
    if !same_category(sol.projection.source(), &sol.total) || !same_category(sol.projection.target(), p.target()) {
        return Err(invalid("projection has the wrong ends"));
    }
    sol.embedding.check().map_err(|e| invalid(format!("embedding: {e}")))?;
    sol.projection.check().map_err(|e| invalid(format!("projection: {e}")))?;
    if &sol.projection.after(&sol.embedding).unwrap() != p {
        return Err(invalid("embedding does not lie over the projection"));
    }
    let lift = &sol.lift;
    lift.check()?;
    if !same_category(lift.source(), problem.source()) || !same_category(lift.target(), &sol.total) {
        return Err(invalid("lift has the wrong ends"));
    }
    if lift.len() != h.len() {
        return Err(invalid(format!("lift has length {}, base has {}", lift.len(), h.len())));
    }
    if lift.start() != &sol.embedding.after(problem.floor()).unwrap() {
        return Err(invalid("start face differs from the floor"));
    }
    for k in 0..=h.len() {
        if &sol.projection.after(lift.stage(k)).unwrap() != h.stage(k) {
            return Err(invalid(format!("stage {k} does not project onto the base")));
        }
    }
    let x = problem.source();
    for k in 0..h.len() {
        for o in x.objects() {
            if sol.projection.mor(lift.link(k).component(o)) != h.link(k).component(o) {
                return Err(invalid(format!("link {k} does not project onto the base")));
            }
        }
    }
    let (w, base) = (sol.weak(), problem.weak());
    w.check()?;
    for o in x.objects() {
        let path = w.path(o);
        if path.map(&sol.projection) != *base.path(o) {
            return Err(invalid("lifted path does not project onto the base path"));
        }
        if path.start() != sol.embedding.obj(problem.floor().obj(o)) {
            return Err(invalid("lifted path does not start at the floor"));
        }
        if sol.length_preserving && path.len() != base.path(o).len() {
            return Err(invalid("lift marked length-preserving changes a path length"));
        }
    }
    for m in x.morphisms() {
        let comps: Vec<_> = w.morphism(m).components().iter().map(|&c| sol.projection.mor(c)).collect();
        if comps != base.morphism(m).components() {
            return Err(invalid("lifted path morphism does not project onto the base"));
        }
    }
    Ok(())
}
