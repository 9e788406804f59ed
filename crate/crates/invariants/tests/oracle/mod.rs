//! Brute-force reference computations, sharing no search code with the
//! library: functors by trying every map, transformations by trying every
//! component choice, covers by chain footprints.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use fincat_core::{FinCat, Functor, MorId, NatTrans, ObjId, Subcategory};

/// Advances a mixed-radix counter; false once it wraps.
fn bump(digits: &mut [usize], radix: &[usize]) -> bool {
    for i in 0..digits.len() {
        digits[i] += 1;
        if digits[i] < radix[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Every functor, by trying every object map and then every morphism map
/// compatible with it.
pub fn functors(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Vec<Functor> {
    let mut out = Vec::new();
    let n = c.num_objects();
    if n > 0 && d.num_objects() == 0 {
        return out;
    }
    let mut obj = vec![0usize; n];
    let radix = vec![d.num_objects(); n];
    loop {
        let om: Vec<ObjId> = obj.iter().map(|&i| ObjId(i as u32)).collect();
        let homs: Vec<&[MorId]> = c.morphisms().map(|m| d.hom(om[c.dom(m).index()], om[c.cod(m).index()])).collect();
        if homs.iter().all(|h| !h.is_empty()) {
            let r: Vec<usize> = homs.iter().map(|h| h.len()).collect();
            let mut mi = vec![0usize; homs.len()];
            loop {
                let mm = mi.iter().zip(&homs).map(|(&i, h)| h[i]).collect();
                if let Ok(f) = Functor::new(c.clone(), d.clone(), om.clone(), mm) {
                    out.push(f);
                }
                if !bump(&mut mi, &r) {
                    break;
                }
            }
        }
        if n == 0 || !bump(&mut obj, &radix) {
            break;
        }
    }
    out
}

pub fn nat_exists(f: &Functor, g: &Functor) -> bool {
    let c = f.source();
    let d = f.target();
    let homs: Vec<&[MorId]> = c.objects().map(|x| d.hom(f.obj(x), g.obj(x))).collect();
    if homs.iter().any(|h| h.is_empty()) {
        return false;
    }
    let r: Vec<usize> = homs.iter().map(|h| h.len()).collect();
    let mut idx = vec![0usize; homs.len()];
    loop {
        let comps = idx.iter().zip(&homs).map(|(&i, h)| h[i]).collect();
        if NatTrans::new(f.clone(), g.clone(), comps).is_ok() {
            return true;
        }
        if !bump(&mut idx, &r) {
            return false;
        }
    }
}

/// Homotopy classes of `Fun(C, D)`: connected components of the relation
/// "a transformation exists in either direction".
pub struct Classes {
    pub functors: Vec<Functor>,
    pub class: Vec<usize>,
}

impl Classes {
    pub fn new(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Classes {
        let functors = functors(c, d);
        let n = functors.len();
        let mut class = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if class[s] != usize::MAX {
                continue;
            }
            class[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    if class[v] == usize::MAX
                        && (nat_exists(&functors[u], &functors[v]) || nat_exists(&functors[v], &functors[u]))
                    {
                        class[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        Classes { functors, class }
    }

    pub fn class_of(&self, f: &Functor) -> usize {
        let i = self
            .functors
            .iter()
            .position(|g| g.obj_map() == f.obj_map() && g.mor_map() == f.mor_map())
            .expect("functor in list");
        self.class[i]
    }

    pub fn homotopic(&self, f: &Functor, g: &Functor) -> bool {
        self.class_of(f) == self.class_of(g)
    }
}

/// Every subcategory, from all morphism subsets.
pub fn pieces(c: &Arc<FinCat>) -> Vec<Subcategory> {
    assert!(c.num_morphisms() < 24);
    let mut out = Vec::new();
    for mask in 1u64..(1 << c.num_morphisms()) {
        let mors: Vec<MorId> = c.morphisms().filter(|m| mask >> m.index() & 1 == 1).collect();
        let objs: Vec<ObjId> = c.objects().filter(|&o| mors.contains(&c.identity(o))).collect();
        if let Ok(s) = Subcategory::new(c, objs, mors) {
            out.push(s);
        }
    }
    out
}

/// Cover test over (last morphism, morphisms used) states of all chains.
pub fn covers(c: &FinCat, family: &[&Subcategory]) -> bool {
    let fits = |used: &Vec<bool>| {
        family
            .iter()
            .any(|p| used.iter().enumerate().all(|(i, &u)| !u || p.contains_morphism(MorId(i as u32))))
    };
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for m in c.morphisms() {
        let mut used = vec![false; c.num_morphisms()];
        used[m.index()] = true;
        if seen.insert((m, used.clone())) {
            queue.push_back((m, used));
        }
    }
    while let Some((m, used)) = queue.pop_front() {
        if !fits(&used) {
            return false;
        }
        for n in c.morphisms().filter(|&n| c.dom(n) == c.cod(m)) {
            let mut u = used.clone();
            u[n.index()] = true;
            if seen.insert((n, u.clone())) {
                queue.push_back((n, u));
            }
        }
    }
    true
}

/// Least `n` such that some `n + 1` pieces passing `pass` cover `c`,
/// trying families in size order; `None` if no family of at most
/// `max_pieces` works.
pub fn min_cover(c: &Arc<FinCat>, max_pieces: usize, pass: impl Fn(&Subcategory) -> bool) -> Option<usize> {
    let all = pieces(c);
    let mut memo: HashMap<usize, bool> = HashMap::new();
    let mut ok = |i: usize| *memo.entry(i).or_insert_with(|| pass(&all[i]));
    for k in 1..=max_pieces.min(all.len()) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let fam: Vec<&Subcategory> = idx.iter().map(|&i| &all[i]).collect();
            if covers(c, &fam) && idx.iter().all(|&i| ok(i)) {
                return Some(k - 1);
            }
            // Next k-combination in lexicographic order.
            let mut i = k;
            let mut moved = false;
            while i > 0 {
                i -= 1;
                if idx[i] < all.len() - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
    }
    None
}

/// ccat straight from the definition, without splitting into components.
pub fn ccat(c: &Arc<FinCat>, max_pieces: usize) -> Option<usize> {
    min_cover(c, max_pieces, |p| {
        let (cat, incl) = p.materialize();
        let classes = Classes::new(&cat, c);
        c.objects().any(|o| classes.homotopic(&incl, &Functor::constant(&cat, c, o)))
    })
}

/// Homotopic distance from the definition.
pub fn cdist(f: &Functor, g: &Functor, max_pieces: usize) -> Option<usize> {
    min_cover(f.source(), max_pieces, |p| {
        let (cat, incl) = p.materialize();
        let classes = Classes::new(&cat, f.target());
        let fu = f.after(&incl).unwrap().with_categories(cat.clone(), f.target().clone());
        let gu = g.after(&incl).unwrap().with_categories(cat.clone(), f.target().clone());
        classes.homotopic(&fu, &gu)
    })
}

/// Strict sectional category from the definition.
pub fn secat(p: &Functor, max_pieces: usize) -> Option<usize> {
    min_cover(p.target(), max_pieces, |piece| {
        let (cat, incl) = piece.materialize();
        functors(&cat, p.source())
            .iter()
            .any(|s| p.after(s).unwrap().mor_map() == incl.mor_map() && p.after(s).unwrap().obj_map() == incl.obj_map())
    })
}
