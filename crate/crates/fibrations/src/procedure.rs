use fincat_core::{same_category, FinCat, Functor, NatTrans, Pullback};
use homotopy::StrongHomotopy;
use std::sync::Arc;

use crate::problem::{LiftError, LiftSolution, LiftingProblem};
use crate::search::strong_lift;
use crate::trail::{link_ends, post_compose};

/// A way of solving lifting problems for one functor `P: E → B`.
pub trait LiftProcedure: Send + Sync {
    fn projection(&self) -> &Functor;

    fn lift(&self, problem: &LiftingProblem) -> Result<LiftSolution, LiftError>;

    fn problem(&self, homotopy: StrongHomotopy, floor: Functor) -> Result<LiftingProblem, LiftError> {
        LiftingProblem::new(self.projection(), homotopy, floor)
    }
}

impl<T: LiftProcedure + ?Sized> LiftProcedure for Box<T> {
    fn projection(&self) -> &Functor {
        (**self).projection()
    }

    fn lift(&self, problem: &LiftingProblem) -> Result<LiftSolution, LiftError> {
        (**self).lift(problem)
    }
}

fn is_identity(f: &Functor) -> bool {
    same_category(f.source(), f.target()) && *f == Functor::identity(f.source())
}

/// `id_B`: the homotopy lifts itself.
#[derive(Debug, Clone)]
pub struct IdentityLift {
    projection: Functor,
}

impl IdentityLift {
    pub fn new(b: &Arc<FinCat>) -> IdentityLift {
        IdentityLift {
            projection: Functor::identity(b),
        }
    }
}

impl LiftProcedure for IdentityLift {
    fn projection(&self) -> &Functor {
        &self.projection
    }

    fn lift(&self, problem: &LiftingProblem) -> Result<LiftSolution, LiftError> {
        Ok(LiftSolution::in_place(&self.projection, problem.homotopy().clone()))
    }
}

/// `E → •`: the constant homotopy at the floor.
#[derive(Debug, Clone)]
pub struct TerminalLift {
    projection: Functor,
}

impl TerminalLift {
    pub fn new(projection: Functor) -> Result<TerminalLift, LiftError> {
        let t = projection.target();
        if t.num_objects() != 1 || t.num_morphisms() != 1 {
            return Err(LiftError::Problem("target is not the terminal category".into()));
        }
        Ok(TerminalLift { projection })
    }

    pub fn to_terminal(e: &Arc<FinCat>) -> TerminalLift {
        let point = fincat_core::standard::terminal();
        let only = point.objects().next().unwrap();
        TerminalLift {
            projection: Functor::constant(e, &point, only),
        }
    }
}

impl LiftProcedure for TerminalLift {
    fn projection(&self) -> &Functor {
        &self.projection
    }

    fn lift(&self, problem: &LiftingProblem) -> Result<LiftSolution, LiftError> {
        let lift = StrongHomotopy::constant(problem.floor()).padded(problem.len());
        Ok(LiftSolution::in_place(&self.projection, lift))
    }
}

/// Exhaustive search in `E` itself.
#[derive(Debug, Clone)]
pub struct SearchLift {
    projection: Functor,
    node_budget: u64,
}

impl SearchLift {
    pub fn new(projection: Functor, node_budget: u64) -> SearchLift {
        SearchLift {
            projection,
            node_budget,
        }
    }
}

impl LiftProcedure for SearchLift {
    fn projection(&self) -> &Functor {
        &self.projection
    }

    fn lift(&self, problem: &LiftingProblem) -> Result<LiftSolution, LiftError> {
        match strong_lift(&self.projection, problem, self.node_budget)? {
            Some(h) => Ok(LiftSolution::in_place(&self.projection, h)),
            None => Err(LiftError::NoLift),
        }
    }
}

/// The pullback `P': E' → B'` of `P` along `G: B' → B`. A problem for `P'`
/// is pushed to `P` along `G`, and the lift is paired with the original
/// homotopy.
pub struct PullbackLift<P> {
    inner: P,
    along: Functor,
    pullback: Pullback,
}

pub fn pullback_fibration<P: LiftProcedure>(inner: P, along: &Functor) -> Result<PullbackLift<P>, LiftError> {
    let pullback = Pullback::new(along, inner.projection()).map_err(|e| LiftError::Problem(e.to_string()))?;
    Ok(PullbackLift {
        inner,
        along: along.clone(),
        pullback,
    })
}

impl<P: LiftProcedure> PullbackLift<P> {
    pub fn pullback(&self) -> &Pullback {
        &self.pullback
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }
}

impl<P: LiftProcedure> LiftProcedure for PullbackLift<P> {
    fn projection(&self) -> &Functor {
        self.pullback.pr_a()
    }

    fn lift(&self, problem: &LiftingProblem) -> Result<LiftSolution, LiftError> {
        let h = problem.homotopy();
        let pushed = post_compose(h, &self.along)?;
        let floor = self.pullback.pr_b().after(problem.floor()).unwrap();
        let sol = self.inner.lift(&self.inner.problem(pushed, floor)?)?;
        let fresh;
        let total = if same_category(&sol.total, self.inner.projection().source()) && is_identity(&sol.embedding) {
            &self.pullback
        } else {
            fresh = Pullback::new(&self.along, &sol.projection).map_err(|e| LiftError::Invalid(e.to_string()))?;
            &fresh
        };
        let missing = || LiftError::Invalid("paired lift leaves the pullback".into());
        let embedding = total
            .induced(self.pullback.pr_a(), &sol.embedding.after(self.pullback.pr_b()).unwrap())
            .ok_or_else(missing)?;
        let stages = (0..=h.len())
            .map(|k| total.induced(h.stage(k), sol.lift.stage(k)).ok_or_else(missing))
            .collect::<Result<Vec<_>, _>>()?;
        let links = (0..h.len())
            .map(|k| {
                let (from, to) = link_ends(k);
                let comps = problem
                    .source()
                    .objects()
                    .map(|o| {
                        total
                            .mor(h.link(k).component(o), sol.lift.link(k).component(o))
                            .ok_or_else(missing)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(NatTrans::new_unchecked(stages[from].clone(), stages[to].clone(), comps))
            })
            .collect::<Result<Vec<_>, LiftError>>()?;
        Ok(LiftSolution {
            total: total.cat().clone(),
            projection: total.pr_a().clone(),
            embedding,
            lift: StrongHomotopy::new(stages, links)?,
            length_preserving: sol.length_preserving,
        })
    }
}

/// `P₂ ∘ P₁` for `P₁: E₂ → E₁` and `P₂: E₁ → B`: lift through `P₂` first,
/// then lift that lift through `P₁`. The `P₂` lift must stay inside `E₁`.
pub struct CompositeLift<P1, P2> {
    first: P1,
    second: P2,
    projection: Functor,
}

pub fn compose_fibrations<P1: LiftProcedure, P2: LiftProcedure>(
    first: P1,
    second: P2,
) -> Result<CompositeLift<P1, P2>, LiftError> {
    let projection = second
        .projection()
        .after(first.projection())
        .map_err(|e| LiftError::NotComposable(e.to_string()))?;
    Ok(CompositeLift {
        first,
        second,
        projection,
    })
}

impl<P1: LiftProcedure, P2: LiftProcedure> LiftProcedure for CompositeLift<P1, P2> {
    fn projection(&self) -> &Functor {
        &self.projection
    }

    fn lift(&self, problem: &LiftingProblem) -> Result<LiftSolution, LiftError> {
        let middle = self.first.projection().after(problem.floor()).unwrap();
        let outer = self
            .second
            .lift(&self.second.problem(problem.homotopy().clone(), middle)?)?;
        if !same_category(&outer.total, self.second.projection().source()) || !is_identity(&outer.embedding) {
            return Err(LiftError::NotComposable("the outer lift leaves its total category".into()));
        }
        let inner = self
            .first
            .lift(&self.first.problem(outer.lift, problem.floor().clone())?)?;
        Ok(LiftSolution {
            projection: self.second.projection().after(&inner.projection).unwrap(),
            length_preserving: inner.length_preserving && outer.length_preserving,
            ..inner
        })
    }
}
