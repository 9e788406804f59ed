use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use crate::category::{FinCat, MorId, ObjId};
use crate::functor::Functor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("budget exceeded: {what} (limit {limit})")]
pub struct BudgetExceeded {
    pub what: String,
    pub limit: u64,
}

impl BudgetExceeded {
    pub fn new(what: impl Into<String>, limit: u64) -> Self {
        BudgetExceeded {
            what: what.into(),
            limit,
        }
    }
}

pub const DEFAULT_FUNCTOR_CAP: u64 = 100_000;

type MorFilter<'a> = Box<dyn Fn(MorId, MorId) -> bool + Sync + 'a>;

#[derive(Clone, Copy)]
enum Step {
    Obj(ObjId),
    Mor(MorId),
}

/// Backtracking search for functors, optionally restricted per object and
/// per morphism. Objects are assigned in order; after each object the
/// morphisms that became assignable follow, generators before morphisms
/// with a non-trivial factorization, so composites are usually forced.
pub struct FunctorSearch<'a> {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    obj_candidates: Vec<Vec<ObjId>>,
    mor_filter: Option<MorFilter<'a>>,
    node_budget: Option<u64>,
}

struct State {
    obj: Vec<Option<ObjId>>,
    mor: Vec<Option<MorId>>,
    nodes: u64,
}

impl<'a> FunctorSearch<'a> {
    pub fn new(source: &Arc<FinCat>, target: &Arc<FinCat>) -> Self {
        FunctorSearch {
            source: source.clone(),
            target: target.clone(),
            obj_candidates: source.objects().map(|_| target.objects().collect()).collect(),
            mor_filter: None,
            node_budget: None,
        }
    }

    pub fn object_candidates(mut self, candidates: Vec<Vec<ObjId>>) -> Self {
        assert_eq!(candidates.len(), self.source.num_objects());
        self.obj_candidates = candidates;
        self
    }

    /// Only images `t` with `allowed(source_morphism, t)` are used.
    pub fn morphism_filter(mut self, allowed: impl Fn(MorId, MorId) -> bool + Sync + 'a) -> Self {
        self.mor_filter = Some(Box::new(allowed));
        self
    }

    pub fn node_budget(mut self, nodes: u64) -> Self {
        self.node_budget = Some(nodes);
        self
    }

    fn plan(&self) -> (Vec<Step>, Vec<Vec<(MorId, MorId, MorId)>>) {
        let s = &*self.source;
        let mut placed_obj = vec![false; s.num_objects()];
        let mut placed_mor = vec![false; s.num_morphisms()];
        // Non-trivial factorizations h = g∘f with g, f not identities.
        let mut factorizations = vec![0usize; s.num_morphisms()];
        let mut triples: Vec<Vec<(MorId, MorId, MorId)>> = vec![Vec::new(); s.num_morphisms()];
        for (g, f) in s.composable_pairs() {
            let h = s.compose(g, f).unwrap();
            if !s.is_identity(g) && !s.is_identity(f) {
                if h != g && h != f {
                    factorizations[h.index()] += 1;
                }
                for m in [g, f, h] {
                    triples[m.index()].push((g, f, h));
                }
            }
        }
        for t in &mut triples {
            t.sort();
            t.dedup();
        }
        let mut steps = Vec::new();
        for o in s.objects() {
            steps.push(Step::Obj(o));
            placed_obj[o.index()] = true;
            let id = s.identity(o);
            steps.push(Step::Mor(id));
            placed_mor[id.index()] = true;
            let mut ready: Vec<MorId> = s
                .non_identity_morphisms()
                .filter(|&m| {
                    !placed_mor[m.index()] && placed_obj[s.dom(m).index()] && placed_obj[s.cod(m).index()]
                })
                .collect();
            ready.sort_by_key(|&m| (factorizations[m.index()], m));
            for m in ready {
                placed_mor[m.index()] = true;
                steps.push(Step::Mor(m));
            }
        }
        (steps, triples)
    }

    /// Calls `visit` on each functor found, stopping early on `Break`.
    pub fn for_each(&self, mut visit: impl FnMut(Functor) -> ControlFlow<()>) -> Result<(), BudgetExceeded> {
        let (steps, triples) = self.plan();
        let mut st = State {
            obj: vec![None; self.source.num_objects()],
            mor: vec![None; self.source.num_morphisms()],
            nodes: 0,
        };
        self.dfs(0, &steps, &triples, &mut st, &mut visit).map(|_| ())
    }

    fn consistent(&self, m: MorId, triples: &[Vec<(MorId, MorId, MorId)>], st: &State) -> bool {
        let t = &*self.target;
        for &(g, f, h) in &triples[m.index()] {
            if let (Some(a), Some(b), Some(c)) = (st.mor[g.index()], st.mor[f.index()], st.mor[h.index()]) {
                if t.compose(a, b) != Some(c) {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(
        &self,
        i: usize,
        steps: &[Step],
        triples: &[Vec<(MorId, MorId, MorId)>],
        st: &mut State,
        visit: &mut impl FnMut(Functor) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, BudgetExceeded> {
        st.nodes += 1;
        if let Some(limit) = self.node_budget {
            if st.nodes > limit {
                return Err(BudgetExceeded::new("functor search nodes", limit));
            }
        }
        let (s, t) = (&*self.source, &*self.target);
        if i == steps.len() {
            let f = Functor::new_unchecked(
                self.source.clone(),
                self.target.clone(),
                st.obj.iter().map(|o| o.unwrap()).collect(),
                st.mor.iter().map(|m| m.unwrap()).collect(),
            );
            return Ok(visit(f));
        }
        match steps[i] {
            Step::Obj(o) => {
                for &c in &self.obj_candidates[o.index()] {
                    st.obj[o.index()] = Some(c);
                    if self.dfs(i + 1, steps, triples, st, visit)?.is_break() {
                        st.obj[o.index()] = None;
                        return Ok(ControlFlow::Break(()));
                    }
                }
                st.obj[o.index()] = None;
            }
            Step::Mor(m) => {
                let a = st.obj[s.dom(m).index()].unwrap();
                let b = st.obj[s.cod(m).index()].unwrap();
                let forced = if s.is_identity(m) {
                    Some(t.identity(a))
                } else {
                    triples[m.index()].iter().find_map(|&(g, f, h)| {
                        if h != m || g == m || f == m {
                            return None;
                        }
                        match (st.mor[g.index()], st.mor[f.index()]) {
                            (Some(x), Some(y)) => t.compose(x, y),
                            _ => None,
                        }
                    })
                };
                let options: Vec<MorId> = match forced {
                    Some(x) => vec![x],
                    None => t.hom(a, b).to_vec(),
                };
                for x in options {
                    if t.dom(x) != a || t.cod(x) != b {
                        continue;
                    }
                    if let Some(filter) = &self.mor_filter {
                        if !filter(m, x) {
                            continue;
                        }
                    }
                    st.mor[m.index()] = Some(x);
                    if self.consistent(m, triples, st)
                        && self.dfs(i + 1, steps, triples, st, visit)?.is_break()
                    {
                        st.mor[m.index()] = None;
                        return Ok(ControlFlow::Break(()));
                    }
                }
                st.mor[m.index()] = None;
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    pub fn first(&self) -> Result<Option<Functor>, BudgetExceeded> {
        let mut found = None;
        self.for_each(|f| {
            found = Some(f);
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    /// All functors, sorted by object map then morphism map.
    pub fn all(&self) -> Result<Vec<Functor>, BudgetExceeded> {
        let mut out = Vec::new();
        self.for_each(|f| {
            out.push(f);
            ControlFlow::Continue(())
        })?;
        out.sort_by(|a, b| (a.obj_map(), a.mor_map()).cmp(&(b.obj_map(), b.mor_map())));
        Ok(out)
    }
}

/// `|Obj(D)|^|Obj(C)|`, saturating.
pub fn object_assignment_count(source: &FinCat, target: &FinCat) -> u64 {
    let base = target.num_objects() as u64;
    let mut acc: u64 = 1;
    for _ in 0..source.num_objects() {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Every functor `source → target` in canonical order.
pub fn enumerate_functors(
    source: &Arc<FinCat>,
    target: &Arc<FinCat>,
    cap: u64,
) -> Result<Vec<Functor>, BudgetExceeded> {
    if object_assignment_count(source, target) > cap {
        return Err(BudgetExceeded::new(
            format!(
                "{}^{} object assignments",
                target.num_objects(),
                source.num_objects()
            ),
            cap,
        ));
    }
    FunctorSearch::new(source, target).all()
}
