use std::sync::Arc;

use covers::{minimal_cover_search, CoverSearchError, CoverSearchOptions, CoverSolution, LowerBound};
use fincat_core::{
    connected_components, same_category, BudgetExceeded, FinCat, Functor, FunctorSearch, NatTrans, Product, Subcategory,
    DEFAULT_FUNCTOR_CAP,
};
use homotopy::{strong_homotopic, FunctorGraph, StrongHomotopy};
use thiserror::Error;

use crate::result::{InvariantResult, Mode, SectionMode, Value};
use crate::witness::Witness;

#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Cap on `|Obj D|^|Obj C|` for every functor enumeration.
    pub functor_cap: u64,
    pub cover: CoverSearchOptions,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            functor_cap: DEFAULT_FUNCTOR_CAP,
            cover: CoverSearchOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("the empty category has no value for {0}")]
    EmptyCategory(&'static str),
    #[error("functors are not parallel")]
    NotParallel,
}

fn finish(
    invariant: &str,
    mode: &str,
    outcome: Result<CoverSolution<Witness>, CoverSearchError>,
) -> Result<InvariantResult, InvariantError> {
    let mut r = InvariantResult {
        invariant: invariant.to_string(),
        mode: mode.to_string(),
        value: Value::Infinite,
        pieces: Vec::new(),
        witnesses: Vec::new(),
        budget: None,
        components: Vec::new(),
    };
    match outcome {
        Ok(sol) => {
            r.value = Value::Exact(sol.n);
            r.pieces = sol.cover.to_raw();
            r.witnesses = sol.witnesses.iter().map(Witness::to_json).collect();
        }
        Err(CoverSearchError::BudgetExceeded {
            lower: LowerBound::Infinite,
            ..
        }) => {}
        Err(CoverSearchError::BudgetExceeded {
            reason,
            lower: LowerBound::Finite(lower),
            upper,
        }) => {
            r.value = Value::Unknown { lower, upper };
            r.budget = Some(reason);
        }
        Err(CoverSearchError::EmptyCategory) => return Err(InvariantError::EmptyCategory("a cover search")),
    }
    Ok(r)
}

type Check<'a> = dyn Fn(&Subcategory) -> Result<Option<Witness>, BudgetExceeded> + Sync + 'a;

fn search(base: &Arc<FinCat>, budget: &Budget, predicate: &Check) -> Result<CoverSolution<Witness>, CoverSearchError> {
    minimal_cover_search(base, &|p: &Subcategory| predicate(p), budget.cover)
}

/// `ι_U ≃ const` for some object, found by one search over `Fun(U, C)`.
fn contraction(c: &Arc<FinCat>, piece: &Subcategory, cap: u64) -> Result<Option<Witness>, BudgetExceeded> {
    let (cat, incl) = piece.materialize();
    let graph = FunctorGraph::new(&cat, c, cap)?;
    let start = graph.index_of(&incl).expect("inclusion is a functor");
    Ok(graph
        .homotopy_to(start, |u| graph.functor(u).is_constant())
        .map(|h| Witness::Contraction {
            constant: h.end().obj(fincat_core::ObjId(0)),
            homotopy: h,
        }))
}

fn ccat_connected(c: &Arc<FinCat>, mode: Mode, budget: &Budget) -> Result<InvariantResult, InvariantError> {
    let cap = budget.functor_cap;
    let predicate = |p: &Subcategory| contraction(c, p, cap);
    finish("ccat", mode.name(), search(c, budget, &predicate))
}

/// Least `n` with a geometric cover by `n + 1` pieces whose inclusions are
/// homotopic to constants. A disconnected category is handled one component
/// at a time; its value is the sum of the component values plus the number
/// of components minus one.
pub fn ccat(c: &Arc<FinCat>, mode: Mode, budget: &Budget) -> Result<InvariantResult, InvariantError> {
    if c.num_objects() == 0 {
        return Err(InvariantError::EmptyCategory("ccat"));
    }
    let comps = connected_components(c);
    if comps.len() == 1 {
        return ccat_connected(c, mode, budget);
    }
    let parts: Vec<InvariantResult> = comps
        .iter()
        .map(|objs| {
            let (cat, _) = Subcategory::full(c, objs.iter().copied()).materialize();
            ccat_connected(&cat, mode, budget)
        })
        .collect::<Result<_, _>>()?;
    let k = parts.len();
    let value = if parts.iter().any(|p| p.value == Value::Infinite) {
        Value::Infinite
    } else if let Some(ns) = parts.iter().map(|p| p.value.exact()).collect::<Option<Vec<_>>>() {
        Value::Exact(ns.iter().sum::<usize>() + k - 1)
    } else {
        let lower = parts
            .iter()
            .map(|p| match p.value {
                Value::Exact(n) | Value::Unknown { lower: n, .. } => n,
                Value::Infinite => unreachable!(),
            })
            .sum::<usize>()
            + k
            - 1;
        let upper = parts
            .iter()
            .map(|p| match p.value {
                Value::Exact(n) => Some(n),
                Value::Unknown { upper, .. } => upper,
                Value::Infinite => None,
            })
            .sum::<Option<usize>>()
            .map(|u| u + k - 1);
        Value::Unknown { lower, upper }
    };
    let mut r = InvariantResult {
        invariant: "ccat".into(),
        mode: mode.name().into(),
        value,
        pieces: Vec::new(),
        witnesses: Vec::new(),
        budget: parts.iter().find_map(|p| p.budget.clone()),
        components: Vec::new(),
    };
    if value.exact().is_some() {
        // Component pieces keep their names, so they are pieces of `c` too.
        for p in &parts {
            r.pieces.extend(p.pieces.iter().cloned());
            r.witnesses.extend(p.witnesses.iter().cloned());
        }
    }
    r.components = parts;
    Ok(r)
}

/// Least `n` with a cover by `n + 1` pieces on which `f` and `g` restrict to
/// homotopic functors.
pub fn cdist(f: &Functor, g: &Functor, mode: Mode, budget: &Budget) -> Result<InvariantResult, InvariantError> {
    if !same_category(f.source(), g.source()) || !same_category(f.target(), g.target()) {
        return Err(InvariantError::NotParallel);
    }
    let cap = budget.functor_cap;
    let predicate = |p: &Subcategory| -> Result<Option<Witness>, BudgetExceeded> {
        let (cat, incl) = p.materialize();
        let fu = f.after(&incl).unwrap().with_categories(cat.clone(), f.target().clone());
        let gu = g.after(&incl).unwrap().with_categories(cat.clone(), f.target().clone());
        Ok(strong_homotopic(&fu, &gu, cap)?.map(Witness::Homotopy))
    };
    finish("cdist", mode.name(), search(f.source(), budget, &predicate))
}

/// Stagewise pairing of two homotopies into `C`, as one into `C × C`. The
/// shorter one is padded with identity links.
pub fn pair_homotopies(prod: &Product, h1: &StrongHomotopy, h2: &StrongHomotopy) -> StrongHomotopy {
    let m = h1.len().max(h2.len());
    let (h1, h2) = (h1.padded(m), h2.padded(m));
    let stages: Vec<Functor> = (0..=m)
        .map(|i| {
            prod.pairing(h1.stage(i), h2.stage(i))
                .expect("stages share the source")
        })
        .collect();
    let links = (0..m)
        .map(|i| {
            let (from, to) = if homotopy::link_is_forward(i) { (i, i + 1) } else { (i + 1, i) };
            let comps = h1
                .source()
                .objects()
                .map(|x| prod.mor(h1.link(i).component(x), h2.link(i).component(x)))
                .collect();
            NatTrans::new_unchecked(stages[from].clone(), stages[to].clone(), comps)
        })
        .collect();
    StrongHomotopy::new(stages, links).expect("componentwise natural")
}

/// Complexity: covers of `C × C` by Farber pieces, those admitting
/// `F: U → C` with `Δ ∘ F ≃ ι`. A homotopy into `C × C` is a pair of
/// homotopies into `C`, so the search looks for `F` homotopic to both
/// `p₁ ∘ ι` and `p₂ ∘ ι`, trying functors in canonical order.
pub fn ctc(c: &Arc<FinCat>, mode: Mode, budget: &Budget) -> Result<InvariantResult, InvariantError> {
    if c.num_objects() == 0 {
        return Err(InvariantError::EmptyCategory("ctc"));
    }
    let prod = Product::new(c, c);
    let cap = budget.functor_cap;
    let (p1, p2) = (prod.p1(), prod.p2());
    let predicate = |piece: &Subcategory| -> Result<Option<Witness>, BudgetExceeded> {
        let (cat, incl) = piece.materialize();
        let graph = FunctorGraph::new(&cat, c, cap)?;
        let a = graph.index_of(&p1.after(&incl).unwrap().with_categories(cat.clone(), c.clone())).unwrap();
        let b = graph.index_of(&p2.after(&incl).unwrap().with_categories(cat.clone(), c.clone())).unwrap();
        let from_a = graph.component_of(a);
        if !from_a.contains(&b) {
            return Ok(None);
        }
        let motion = from_a[0];
        let (h1, h2) = (graph.homotopy(a, motion).unwrap(), graph.homotopy(b, motion).unwrap());
        let homotopy = pair_homotopies(&prod, &h1, &h2);
        debug_assert_eq!(homotopy.start(), &incl.with_categories(cat.clone(), prod.cat().clone()));
        Ok(Some(Witness::Farber {
            motion: graph.functor(motion).clone(),
            homotopy,
        }))
    };
    finish("ctc", mode.name(), search(prod.cat(), budget, &predicate))
}

/// Sectional category of `p: E → B` over covers of `B`. Strict mode asks
/// for `p ∘ s = ι`; the homotopic modes ask for `p ∘ s ≃ ι`.
pub fn secat(p: &Functor, mode: SectionMode, budget: &Budget) -> Result<InvariantResult, InvariantError> {
    sections("secat", p, mode, budget)
}

/// Švarc genus: sections up to (weak or strong) homotopy.
pub fn svarc_genus(p: &Functor, mode: Mode, budget: &Budget) -> Result<InvariantResult, InvariantError> {
    sections("sg", p, mode.into(), budget)
}

fn sections(name: &str, p: &Functor, mode: SectionMode, budget: &Budget) -> Result<InvariantResult, InvariantError> {
    let cap = budget.functor_cap;
    let predicate = |piece: &Subcategory| -> Result<Option<Witness>, BudgetExceeded> {
        let (cat, incl) = piece.materialize();
        let e = p.source();
        let incl = incl.with_categories(cat.clone(), p.target().clone());
        if mode == SectionMode::Strict {
            let candidates = cat
                .objects()
                .map(|x| e.objects().filter(|&y| p.obj(y) == incl.obj(x)).collect())
                .collect();
            let s = FunctorSearch::new(&cat, e)
                .object_candidates(candidates)
                .morphism_filter(|m, n| p.mor(n) == incl.mor(m))
                .node_budget(cap)
                .first()?;
            return Ok(s.map(|section| Witness::Section { section, homotopy: None }));
        }
        let ups = fincat_core::enumerate_functors(&cat, e, cap)?;
        let graph = FunctorGraph::new(&cat, p.target(), cap)?;
        let target = graph.index_of(&incl).expect("inclusion is a functor");
        let near: std::collections::HashSet<usize> = graph.component_of(target).into_iter().collect();
        for s in ups {
            let ps = p.after(&s).unwrap();
            let u = graph.index_of(&ps).expect("composite is a functor");
            if near.contains(&u) {
                let h: StrongHomotopy = graph.homotopy(u, target).expect("same component");
                return Ok(Some(Witness::Section {
                    section: s,
                    homotopy: Some(h),
                }));
            }
        }
        Ok(None)
    };
    finish(name, mode.name(), search(p.target(), budget, &predicate))
}
