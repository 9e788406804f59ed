//! Finite test batteries for the lifting property.

use std::sync::Arc;

use fincat_core::standard::{discrete, interval, terminal};
use fincat_core::sample::random_functor;
use fincat_core::{enumerate_functors, BudgetExceeded, FinCat, Functor, NatTrans, DEFAULT_FUNCTOR_CAP};
use homotopy::{link_is_forward, StrongHomotopy, WeakHomotopy};
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::problem::{validate, LiftError, LiftSolution, LiftingProblem};
use crate::search::{strong_lift, transformations, weak_lift};
use crate::trail::link_ends;

/// Which lifting problems to try: every homotopy of length `1..=max_len`
/// from each source category into the base, with every floor over its
/// start. More than `max_problems` are subsampled with the seed.
#[derive(Debug, Clone)]
pub struct Battery {
    pub sources: Vec<Arc<FinCat>>,
    pub max_len: usize,
    pub max_problems: usize,
    pub seed: u64,
    pub functor_cap: u64,
    pub enumeration_cap: usize,
    pub node_budget: u64,
}

impl Default for Battery {
    fn default() -> Self {
        Battery {
            sources: vec![terminal(), interval(), discrete(2)],
            max_len: 2,
            max_problems: 200,
            seed: 0,
            functor_cap: DEFAULT_FUNCTOR_CAP,
            enumeration_cap: 200_000,
            node_budget: 1_000_000,
        }
    }
}

const NAT_LIMIT: usize = 10_000;

/// The battery's problems for `p`, in enumeration order (or a sorted
/// sample of it).
pub fn battery_problems(p: &Functor, battery: &Battery) -> Result<Vec<LiftingProblem>, BudgetExceeded> {
    let b = p.target();
    let mut problems = Vec::new();
    for x in &battery.sources {
        let funs = enumerate_functors(x, b, battery.functor_cap)?;
        let floors = enumerate_functors(x, p.source(), battery.functor_cap)?;
        let n = funs.len();
        let mut nats: Vec<Vec<Vec<NatTrans>>> = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                nats[i][j] = transformations(&funs[i], &funs[j], |_, _| true, NAT_LIMIT);
            }
        }
        for (i, start) in funs.iter().enumerate() {
            let over: Vec<&Functor> = floors.iter().filter(|f| &p.after(f).unwrap() == start).collect();
            if over.is_empty() {
                continue;
            }
            for len in 1..=battery.max_len {
                let mut walk = vec![i];
                let mut links: Vec<NatTrans> = Vec::new();
                extend(&funs, &nats, len, &mut walk, &mut links, &mut |stages, links| {
                    let h = StrongHomotopy::new(stages, links.to_vec()).expect("enumerated links are natural");
                    for f in &over {
                        if problems.len() >= battery.enumeration_cap {
                            return Err(BudgetExceeded::new("battery problems", battery.enumeration_cap as u64));
                        }
                        problems.push(LiftingProblem::new(p, h.clone(), (*f).clone()).expect("floor lies over the start"));
                    }
                    Ok(())
                })?;
            }
        }
    }
    if problems.len() > battery.max_problems {
        let mut rng = ChaCha8Rng::seed_from_u64(battery.seed);
        let mut keep = sample(&mut rng, problems.len(), battery.max_problems).into_vec();
        keep.sort_unstable();
        problems = keep.into_iter().map(|i| problems[i].clone()).collect();
    }
    Ok(problems)
}

type Visit<'a> = dyn FnMut(Vec<Functor>, &[NatTrans]) -> Result<(), BudgetExceeded> + 'a;

fn extend(
    funs: &[Functor],
    nats: &[Vec<Vec<NatTrans>>],
    len: usize,
    walk: &mut Vec<usize>,
    links: &mut Vec<NatTrans>,
    visit: &mut Visit,
) -> Result<(), BudgetExceeded> {
    let k = links.len();
    if k == len {
        return visit(walk.iter().map(|&i| funs[i].clone()).collect(), links);
    }
    let here = *walk.last().unwrap();
    for next in 0..funs.len() {
        let options = if link_is_forward(k) { &nats[here][next] } else { &nats[next][here] };
        for t in options {
            walk.push(next);
            links.push(t.clone());
            extend(funs, nats, len, walk, links, visit)?;
            walk.pop();
            links.pop();
        }
    }
    Ok(())
}

/// A random homotopy of length `len` starting at `start`: each stage is
/// drawn among the functors joined to the previous one by a link of the
/// right direction, and the link among those links. `None` if the walk
/// gets stuck.
pub fn random_homotopy<R: Rng>(rng: &mut R, start: &Functor, len: usize, cap: u64) -> Result<Option<StrongHomotopy>, BudgetExceeded> {
    let funs = enumerate_functors(start.source(), start.target(), cap)?;
    let mut stages = vec![start.clone()];
    let mut links = Vec::with_capacity(len);
    for k in 0..len {
        let here = stages.last().unwrap().clone();
        let mut options: Vec<NatTrans> = Vec::new();
        for g in &funs {
            let found = if link_ends(k).0 == k {
                transformations(&here, g, |_, _| true, NAT_LIMIT)
            } else {
                transformations(g, &here, |_, _| true, NAT_LIMIT)
            };
            options.extend(found);
        }
        let Some(t) = options.choose(rng) else { return Ok(None) };
        let next = if link_ends(k).0 == k { t.to() } else { t.from() };
        stages.push(next.clone());
        links.push(t.clone());
    }
    Ok(Some(StrongHomotopy::new(stages, links).expect("drawn links are natural")))
}

/// A random floor `X → E` and a random homotopy of length `len` from its
/// image. `None` if either draw comes up empty.
pub fn random_problem<R: Rng>(
    rng: &mut R,
    p: &Functor,
    source: &Arc<FinCat>,
    len: usize,
    cap: u64,
) -> Result<Option<LiftingProblem>, BudgetExceeded> {
    let Some(floor) = random_functor(rng, source, p.source(), cap) else { return Ok(None) };
    let start = p.after(&floor).unwrap();
    let Some(h) = random_homotopy(rng, &start, len, cap)? else { return Ok(None) };
    Ok(Some(LiftingProblem::new(p, h, floor).expect("floor lies over the start")))
}

/// All functors `X → E` lying over `base`.
pub fn floors_over(p: &Functor, base: &Functor, cap: u64) -> Result<Vec<Functor>, BudgetExceeded> {
    let all = enumerate_functors(base.source(), p.source(), cap)?;
    Ok(all.into_iter().filter(|f| &p.after(f).unwrap() == base).collect())
}

/// Verdicts of both searches on one problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub strong: bool,
    pub weak: bool,
    pub length_preserving: bool,
}

#[derive(Debug, Clone)]
pub struct FibrationReport {
    pub problems: Vec<LiftingProblem>,
    pub cells: Vec<Cell>,
}

impl FibrationReport {
    pub fn strong_lifted(&self) -> usize {
        self.cells.iter().filter(|c| c.strong).count()
    }

    pub fn weak_lifted(&self) -> usize {
        self.cells.iter().filter(|c| c.weak).count()
    }

    pub fn disagreements(&self) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].strong != self.cells[i].weak)
            .collect()
    }

    pub fn agree(&self) -> bool {
        self.disagreements().is_empty()
    }

    /// First problem with no strong lift.
    pub fn counterexample(&self) -> Option<&LiftingProblem> {
        self.cells.iter().position(|c| !c.strong).map(|i| &self.problems[i])
    }

    /// First problem with no weak length-preserving lift.
    pub fn weak_counterexample(&self) -> Option<&LiftingProblem> {
        self.cells.iter().position(|c| !c.weak).map(|i| &self.problems[i])
    }

    pub fn length_preserving(&self) -> bool {
        self.cells.iter().all(|c| !c.weak || c.length_preserving)
    }

    pub fn verdict(&self) -> &'static str {
        if self.counterexample().is_some() || self.weak_counterexample().is_some() {
            "counterexample"
        } else {
            "no counterexample within battery"
        }
    }

    pub fn to_json(&self) -> Json {
        json!({
            "problems": self.cells.len(),
            "strong_lifted": self.strong_lifted(),
            "weak_lifted": self.weak_lifted(),
            "agree": self.agree(),
            "disagreements": self.disagreements(),
            "length_preserving": self.length_preserving(),
            "verdict": self.verdict(),
            "cells": self.cells.iter().map(|c| json!({"strong": c.strong, "weak": c.weak})).collect::<Vec<_>>(),
            "counterexample": self.counterexample().map(|p| p.to_json()),
        })
    }
}

fn check_weak(p: &Functor, problem: &LiftingProblem, w: &WeakHomotopy) -> Result<bool, LiftError> {
    w.check()?;
    let base = problem.weak();
    let x = problem.source();
    let mut same_length = true;
    for o in x.objects() {
        if w.path(o).map(p) != *base.path(o) || w.path(o).start() != problem.floor().obj(o) {
            return Err(LiftError::Invalid("weak lift does not lie over the problem".into()));
        }
        same_length &= w.path(o).len() == base.path(o).len();
    }
    for m in x.morphisms() {
        let comps: Vec<_> = w.morphism(m).components().iter().map(|&c| p.mor(c)).collect();
        if comps != base.morphism(m).components() || w.morphism(m).components()[0] != problem.floor().mor(m) {
            return Err(LiftError::Invalid("weak lift morphism does not lie over the problem".into()));
        }
    }
    Ok(same_length)
}

/// Runs both exhaustive searches on every battery problem. Found lifts are
/// checked before they count.
pub fn check_fibration(p: &Functor, battery: &Battery) -> Result<FibrationReport, LiftError> {
    let problems = battery_problems(p, battery)?;
    let cells = problems
        .par_iter()
        .map(|problem| -> Result<Cell, LiftError> {
            let strong = match strong_lift(p, problem, battery.node_budget)? {
                Some(h) => {
                    validate(p, problem, &LiftSolution::in_place(p, h))?;
                    true
                }
                None => false,
            };
            let (weak, length_preserving) = match weak_lift(p, problem)? {
                Some(w) => (true, check_weak(p, problem, &w)?),
                None => (false, true),
            };
            Ok(Cell {
                strong,
                weak,
                length_preserving,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FibrationReport { problems, cells })
}
