//! Small named categories used throughout the test corpus.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::category::{CategoryBuilder, FinCat, MorId, ObjId};

/// `•`: one object `*`, only its identity.
pub fn terminal() -> Arc<FinCat> {
    discrete(1)
}

/// Discrete category on objects `d0..d{n-1}`.
pub fn discrete(n: usize) -> Arc<FinCat> {
    let mut b = CategoryBuilder::new();
    if n == 1 {
        b.object_with_identity("*");
    } else {
        for i in 0..n {
            b.object_with_identity(format!("d{i}"));
        }
    }
    Arc::new(b.build().expect("discrete category"))
}

/// `𝟚`: `f: x → y`.
pub fn interval() -> Arc<FinCat> {
    let mut b = CategoryBuilder::new();
    b.object_with_identity("x")
        .object_with_identity("y")
        .morphism("f", "x", "y");
    Arc::new(b.build().expect("interval"))
}

/// `𝒮¹`: two parallel arrows `f, g: x → y`.
pub fn parallel_pair() -> Arc<FinCat> {
    let mut b = CategoryBuilder::new();
    b.object_with_identity("x")
        .object_with_identity("y")
        .morphism("f", "x", "y")
        .morphism("g", "x", "y");
    Arc::new(b.build().expect("parallel pair"))
}

/// The zig-zag shape of length `m`: objects `0..=m`, an arrow `i → i+1`
/// for even `i` and `i+1 → i` for odd `i`.
#[derive(Debug, Clone)]
pub struct Zigzag {
    cat: Arc<FinCat>,
    objs: Vec<ObjId>,
    arrows: Vec<MorId>,
}

impl Zigzag {
    pub fn new(m: usize) -> Zigzag {
        let width = m.to_string().len();
        let name = |i: usize| format!("{i:0width$}");
        let mut b = CategoryBuilder::new();
        for i in 0..=m {
            b.object(name(i));
            b.morphism(format!("1_{}", name(i)), name(i), name(i));
            b.identity(name(i), format!("1_{}", name(i)));
        }
        for i in 0..m {
            let (d, c) = if i % 2 == 0 { (i, i + 1) } else { (i + 1, i) };
            b.morphism(format!("a{}", name(i)), name(d), name(c));
        }
        let cat = Arc::new(b.build().expect("zig-zag"));
        let objs = (0..=m).map(|i| cat.object_by_name(&name(i)).unwrap()).collect();
        let arrows = (0..m)
            .map(|i| cat.morphism_by_name(&format!("a{}", name(i))).unwrap())
            .collect();
        Zigzag { cat, objs, arrows }
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn obj(&self, i: usize) -> ObjId {
        self.objs[i]
    }

    /// The arrow between `i` and `i + 1`.
    pub fn arrow(&self, i: usize) -> MorId {
        self.arrows[i]
    }

    pub fn position(&self, o: ObjId) -> usize {
        self.objs.iter().position(|&x| x == o).expect("zig-zag object")
    }
}

pub fn zigzag(m: usize) -> Arc<FinCat> {
    Zigzag::new(m).cat
}

/// Free category on an acyclic quiver. Edges are `(name, dom, cod)` over
/// objects `0..n` named `v{i}`; composites are named by joining edge names
/// with `.` in composition order (`g.f` is `g ∘ f`). `None` if the quiver
/// has a cycle or more than `cap` morphisms would be produced.
pub fn free_category(n: usize, edges: &[(String, usize, usize)], cap: usize) -> Option<Arc<FinCat>> {
    // paths[i] = list of (edge sequence in application order) starting at i.
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(_, d, _)) in edges.iter().enumerate() {
        out[d].push(e);
    }
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = edges.iter().enumerate().map(|(e, _)| vec![e]).collect();
    while let Some(p) = stack.pop() {
        if p.len() > n {
            return None;
        }
        let end = edges[*p.last().unwrap()].2;
        for &e in &out[end] {
            let mut q = p.clone();
            q.push(e);
            stack.push(q);
        }
        all.push(p);
        if all.len() + n > cap {
            return None;
        }
    }
    let name_of = |p: &[usize]| {
        p.iter()
            .rev()
            .map(|&e| edges[e].0.as_str())
            .collect::<Vec<_>>()
            .join(".")
    };
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        b.object(format!("v{i}"));
        b.morphism(format!("1_v{i}"), format!("v{i}"), format!("v{i}"));
        b.identity(format!("v{i}"), format!("1_v{i}"));
    }
    let index: HashMap<Vec<usize>, usize> = all.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    for p in &all {
        let d = edges[p[0]].1;
        let c = edges[*p.last().unwrap()].2;
        b.morphism(name_of(p), format!("v{d}"), format!("v{c}"));
    }
    for f in &all {
        let end = edges[*f.last().unwrap()].2;
        for g in &all {
            if edges[g[0]].1 == end {
                let mut h = f.clone();
                h.extend_from_slice(g);
                if index.contains_key(&h) {
                    b.compose(name_of(g), name_of(f), name_of(&h));
                }
            }
        }
    }
    b.build().ok().map(Arc::new)
}

/// Thin category on `v0..v{n-1}` generated by the relation pairs: one
/// morphism `a → b` whenever `b` is reachable from `a`.
pub fn preorder(n: usize, relation: &[(usize, usize)]) -> Arc<FinCat> {
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in relation {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let name = |a: usize, b: usize| {
        if a == b {
            format!("1_v{a}")
        } else {
            format!("v{a}<v{b}")
        }
    };
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        b.object(format!("v{i}"));
        b.identity(format!("v{i}"), name(i, i));
    }
    let pairs: BTreeSet<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| reach[i][j])
        .collect();
    for &(i, j) in &pairs {
        b.morphism(name(i, j), format!("v{i}"), format!("v{j}"));
    }
    for &(i, j) in &pairs {
        for &(j2, k) in &pairs {
            if j == j2 && i != j && j != k {
                b.compose(name(j, k), name(i, j), name(i, k));
            }
        }
    }
    Arc::new(b.build().expect("preorder"))
}
