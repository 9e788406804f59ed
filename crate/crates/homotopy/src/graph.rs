use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use fincat_core::{enumerate_functors, BudgetExceeded, FinCat, Functor, MorId, ObjId};
use rayon::prelude::*;

use crate::nat::{nat_trans_search, objectwise_possible};
use crate::strong::{link_is_forward, StrongHomotopy};

/// All functors `C → D` with "there is a natural transformation `u ⇒ v`"
/// as edges. Adjacency is computed per node on first use, in parallel over
/// the other endpoint.
pub struct FunctorGraph {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    functors: Vec<Functor>,
    index: HashMap<(Vec<ObjId>, Vec<MorId>), usize>,
    out: Vec<OnceLock<Vec<usize>>>,
    inn: Vec<OnceLock<Vec<usize>>>,
}

impl FunctorGraph {
    pub fn new(source: &Arc<FinCat>, target: &Arc<FinCat>, cap: u64) -> Result<FunctorGraph, BudgetExceeded> {
        let functors = enumerate_functors(source, target, cap)?;
        Ok(FunctorGraph::from_functors(source, target, functors))
    }

    /// `functors` must be every functor `source → target`, without repeats.
    pub fn from_functors(source: &Arc<FinCat>, target: &Arc<FinCat>, functors: Vec<Functor>) -> FunctorGraph {
        let index = functors
            .iter()
            .enumerate()
            .map(|(i, f)| ((f.obj_map().to_vec(), f.mor_map().to_vec()), i))
            .collect();
        let n = functors.len();
        FunctorGraph {
            source: source.clone(),
            target: target.clone(),
            functors,
            index,
            out: (0..n).map(|_| OnceLock::new()).collect(),
            inn: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.functors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functors.is_empty()
    }

    pub fn functors(&self) -> &[Functor] {
        &self.functors
    }

    pub fn functor(&self, i: usize) -> &Functor {
        &self.functors[i]
    }

    pub fn index_of(&self, f: &Functor) -> Option<usize> {
        self.index.get(&(f.obj_map().to_vec(), f.mor_map().to_vec())).copied()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = (&self.functors[u], &self.functors[v]);
        objectwise_possible(a, b) && nat_trans_search(a, b).is_some()
    }

    /// Nodes `v` with a transformation `u ⇒ v`, ascending.
    pub fn out(&self, u: usize) -> &[usize] {
        self.out[u].get_or_init(|| (0..self.len()).into_par_iter().filter(|&v| self.has_edge(u, v)).collect())
    }

    /// Nodes `v` with a transformation `v ⇒ u`, ascending.
    pub fn inn(&self, u: usize) -> &[usize] {
        self.inn[u].get_or_init(|| (0..self.len()).into_par_iter().filter(|&v| self.has_edge(v, u)).collect())
    }

    fn neighbours(&self, u: usize) -> Vec<usize> {
        let mut n: Vec<usize> = self.out(u).iter().chain(self.inn(u)).copied().collect();
        n.sort_unstable();
        n.dedup();
        n
    }

    /// Node set of the connected component of `u`, ascending.
    pub fn component_of(&self, u: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        let mut out = Vec::new();
        while let Some(x) = queue.pop_front() {
            out.push(x);
            for y in self.neighbours(x) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// All connected components, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.len()];
        let mut out = Vec::new();
        for u in 0..self.len() {
            if done[u] {
                continue;
            }
            let c = self.component_of(u);
            for &x in &c {
                done[x] = true;
            }
            out.push(c);
        }
        out
    }

    /// A shortest strong homotopy from node `from` to some node satisfying
    /// `goal`. States carry the parity of the next link, so the length is
    /// minimal among alternating zig-zags; ties go to smaller indices.
    pub fn homotopy_to(&self, from: usize, goal: impl Fn(usize) -> bool) -> Option<StrongHomotopy> {
        let n = self.len();
        let mut parent: Vec<[Option<usize>; 2]> = vec![[None, None]; n];
        let mut seen = vec![[false; 2]; n];
        seen[from][0] = true;
        let mut queue = VecDeque::from([(from, 0usize)]);
        let mut hit = None;
        while let Some((u, p)) = queue.pop_front() {
            if goal(u) {
                hit = Some((u, p));
                break;
            }
            let next = if link_is_forward(p) { self.out(u) } else { self.inn(u) };
            let q = 1 - p;
            for &v in next {
                if !seen[v][q] {
                    seen[v][q] = true;
                    parent[v][q] = Some(u);
                    queue.push_back((v, q));
                }
            }
        }
        let (mut u, mut p) = hit?;
        let mut nodes = vec![u];
        while let Some(prev) = parent[u][p] {
            nodes.push(prev);
            u = prev;
            p = 1 - p;
        }
        nodes.reverse();
        Some(self.certificate(&nodes))
    }

    pub fn homotopy(&self, from: usize, to: usize) -> Option<StrongHomotopy> {
        self.homotopy_to(from, |u| u == to)
    }

    fn certificate(&self, nodes: &[usize]) -> StrongHomotopy {
        let stages: Vec<Functor> = nodes.iter().map(|&u| self.functors[u].clone()).collect();
        let links = (0..nodes.len() - 1)
            .map(|i| {
                let (a, b) = (&stages[i], &stages[i + 1]);
                let t = if link_is_forward(i) { nat_trans_search(a, b) } else { nat_trans_search(b, a) };
                t.expect("edge found during search")
            })
            .collect();
        StrongHomotopy::new_unchecked(stages, links)
    }
}

/// A shortest strong homotopy `f ≃ g`, or `None` when they lie in different
/// components of the functor graph.
pub fn strong_homotopic(f: &Functor, g: &Functor, cap: u64) -> Result<Option<StrongHomotopy>, BudgetExceeded> {
    if f == g {
        return Ok(Some(StrongHomotopy::constant(f)));
    }
    let graph = FunctorGraph::new(f.source(), f.target(), cap)?;
    let (a, b) = (graph.index_of(f).expect("valid functor"), graph.index_of(g).expect("valid functor"));
    Ok(graph.homotopy(a, b))
}

/// A homotopy from `id_C` to a constant functor, if `C` is contractible.
pub fn is_contractible(c: &Arc<FinCat>, cap: u64) -> Result<Option<(ObjId, StrongHomotopy)>, BudgetExceeded> {
    let graph = FunctorGraph::new(c, c, cap)?;
    let id = match graph.index_of(&Functor::identity(c)) {
        Some(i) => i,
        None => return Ok(None),
    };
    let h = graph.homotopy_to(id, |u| graph.functor(u).is_constant());
    Ok(h.map(|h| (h.end().obj(ObjId(0)), h)))
}

/// Functors `forward: C → D`, `backward: D → C` with both round trips
/// homotopic to the identities.
#[derive(Debug, Clone)]
pub struct Equivalence {
    pub forward: Functor,
    pub backward: Functor,
    /// `backward ∘ forward ≃ id_C`.
    pub source_roundtrip: StrongHomotopy,
    /// `forward ∘ backward ≃ id_D`.
    pub target_roundtrip: StrongHomotopy,
}

/// Exhaustive over functor pairs; `None` is a proof of non-equivalence.
pub fn homotopy_equivalent(c: &Arc<FinCat>, d: &Arc<FinCat>, cap: u64) -> Result<Option<Equivalence>, BudgetExceeded> {
    let forward = enumerate_functors(c, d, cap)?;
    let backward = enumerate_functors(d, c, cap)?;
    let gc = FunctorGraph::new(c, c, cap)?;
    let gd = FunctorGraph::new(d, d, cap)?;
    let id_c = gc.index_of(&Functor::identity(c)).expect("identity is enumerated");
    let id_d = gd.index_of(&Functor::identity(d)).expect("identity is enumerated");
    let mut near_c = vec![false; gc.len()];
    for u in gc.component_of(id_c) {
        near_c[u] = true;
    }
    let mut near_d = vec![false; gd.len()];
    for u in gd.component_of(id_d) {
        near_d[u] = true;
    }
    for f in &forward {
        for g in &backward {
            let gf = g.after(f).expect("composable");
            let fg = f.after(g).expect("composable");
            let (a, b) = (gc.index_of(&gf).unwrap(), gd.index_of(&fg).unwrap());
            if near_c[a] && near_d[b] {
                return Ok(Some(Equivalence {
                    forward: f.clone(),
                    backward: g.clone(),
                    source_roundtrip: gc.homotopy(a, id_c).expect("same component"),
                    target_roundtrip: gd.homotopy(b, id_d).expect("same component"),
                }));
            }
        }
    }
    Ok(None)
}
