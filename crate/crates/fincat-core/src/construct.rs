use std::collections::HashMap;
use std::sync::Arc;

use crate::category::{FinCat, MorId, ObjId};
use crate::functor::{same_category, Functor, FunctorError};

pub fn pair_name(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// `left × right` with its projections and pairing lookups.
#[derive(Debug, Clone)]
pub struct Product {
    cat: Arc<FinCat>,
    left: Arc<FinCat>,
    right: Arc<FinCat>,
    obj_pair: Vec<ObjId>,
    mor_pair: Vec<MorId>,
    obj_split: Vec<(ObjId, ObjId)>,
    mor_split: Vec<(MorId, MorId)>,
}

impl Product {
    pub fn new(left: &Arc<FinCat>, right: &Arc<FinCat>) -> Product {
        let (c, d) = (&**left, &**right);
        let (no, nm) = (d.num_objects(), d.num_morphisms());
        let objects: Vec<String> = c
            .objects()
            .flat_map(|a| d.objects().map(move |b| (a, b)))
            .map(|(a, b)| pair_name(c.object_name(a), d.object_name(b)))
            .collect();
        let morphisms: Vec<(String, usize, usize)> = c
            .morphisms()
            .flat_map(|f| d.morphisms().map(move |g| (f, g)))
            .map(|(f, g)| {
                (
                    pair_name(c.morphism_name(f), d.morphism_name(g)),
                    c.dom(f).index() * no + d.dom(g).index(),
                    c.cod(f).index() * no + d.cod(g).index(),
                )
            })
            .collect();
        let identities = c
            .objects()
            .flat_map(|a| d.objects().map(move |b| (a, b)))
            .map(|(a, b)| c.identity(a).index() * nm + d.identity(b).index())
            .collect();
        let cat = FinCat::from_indexed_unchecked(objects, morphisms, identities, |x, y| {
            let (g1, g2) = (MorId((x / nm) as u32), MorId((x % nm) as u32));
            let (f1, f2) = (MorId((y / nm) as u32), MorId((y % nm) as u32));
            c.compose(g1, f1).unwrap().index() * nm + d.compose(g2, f2).unwrap().index()
        });
        let mut obj_pair = Vec::with_capacity(c.num_objects() * no);
        let mut obj_split = vec![(ObjId(0), ObjId(0)); c.num_objects() * no];
        for a in c.objects() {
            for b in d.objects() {
                let id = cat
                    .object_by_name(&pair_name(c.object_name(a), d.object_name(b)))
                    .expect("pair object");
                obj_pair.push(id);
                obj_split[id.index()] = (a, b);
            }
        }
        let mut mor_pair = Vec::with_capacity(c.num_morphisms() * nm);
        let mut mor_split = vec![(MorId(0), MorId(0)); c.num_morphisms() * nm];
        for f in c.morphisms() {
            for g in d.morphisms() {
                let id = cat
                    .morphism_by_name(&pair_name(c.morphism_name(f), d.morphism_name(g)))
                    .expect("pair morphism");
                mor_pair.push(id);
                mor_split[id.index()] = (f, g);
            }
        }
        Product {
            cat: Arc::new(cat),
            left: left.clone(),
            right: right.clone(),
            obj_pair,
            mor_pair,
            obj_split,
            mor_split,
        }
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn left(&self) -> &Arc<FinCat> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FinCat> {
        &self.right
    }

    pub fn obj(&self, a: ObjId, b: ObjId) -> ObjId {
        self.obj_pair[a.index() * self.right.num_objects() + b.index()]
    }

    pub fn mor(&self, f: MorId, g: MorId) -> MorId {
        self.mor_pair[f.index() * self.right.num_morphisms() + g.index()]
    }

    pub fn split_obj(&self, o: ObjId) -> (ObjId, ObjId) {
        self.obj_split[o.index()]
    }

    pub fn split_mor(&self, m: MorId) -> (MorId, MorId) {
        self.mor_split[m.index()]
    }

    pub fn p1(&self) -> Functor {
        Functor::new_unchecked(
            self.cat.clone(),
            self.left.clone(),
            self.obj_split.iter().map(|p| p.0).collect(),
            self.mor_split.iter().map(|p| p.0).collect(),
        )
    }

    pub fn p2(&self) -> Functor {
        Functor::new_unchecked(
            self.cat.clone(),
            self.right.clone(),
            self.obj_split.iter().map(|p| p.1).collect(),
            self.mor_split.iter().map(|p| p.1).collect(),
        )
    }

    /// `(f, g): X → left × right`.
    pub fn pairing(&self, f: &Functor, g: &Functor) -> Result<Functor, FunctorError> {
        if !same_category(f.source(), g.source())
            || !same_category(f.target(), &self.left)
            || !same_category(g.target(), &self.right)
        {
            return Err(FunctorError::NotComposable);
        }
        let x = f.source();
        Ok(Functor::new_unchecked(
            x.clone(),
            self.cat.clone(),
            x.objects().map(|o| self.obj(f.obj(o), g.obj(o))).collect(),
            x.morphisms().map(|m| self.mor(f.mor(m), g.mor(m))).collect(),
        ))
    }

    /// `f × g: A × B → left × right` where `self` is the target product.
    pub fn product_map(&self, source: &Product, f: &Functor, g: &Functor) -> Functor {
        let s = source.cat();
        Functor::new_unchecked(
            s.clone(),
            self.cat.clone(),
            s.objects()
                .map(|o| {
                    let (a, b) = source.split_obj(o);
                    self.obj(f.obj(a), g.obj(b))
                })
                .collect(),
            s.morphisms()
                .map(|m| {
                    let (a, b) = source.split_mor(m);
                    self.mor(f.mor(a), g.mor(b))
                })
                .collect(),
        )
    }
}

pub fn product(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Product {
    Product::new(c, d)
}

/// The diagonal `C → C × C` for a product built on `(C, C)`.
pub fn diagonal(prod: &Product) -> Functor {
    let c = prod.left();
    Functor::new_unchecked(
        c.clone(),
        prod.cat().clone(),
        c.objects().map(|o| prod.obj(o, o)).collect(),
        c.morphisms().map(|m| prod.mor(m, m)).collect(),
    )
}

/// Full subcategory of `A × B` on pairs that agree in `C`.
#[derive(Debug, Clone)]
pub struct Pullback {
    cat: Arc<FinCat>,
    pr_a: Functor,
    pr_b: Functor,
    obj_index: HashMap<(ObjId, ObjId), ObjId>,
    mor_index: HashMap<(MorId, MorId), MorId>,
}

impl Pullback {
    pub fn new(f: &Functor, g: &Functor) -> Result<Pullback, FunctorError> {
        if !same_category(f.target(), g.target()) {
            return Err(FunctorError::NotComposable);
        }
        let (a, b) = (&**f.source(), &**g.source());
        let mut objs: Vec<(ObjId, ObjId)> = Vec::new();
        for x in a.objects() {
            for y in b.objects() {
                if f.obj(x) == g.obj(y) {
                    objs.push((x, y));
                }
            }
        }
        let obj_pos: HashMap<(ObjId, ObjId), usize> =
            objs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut mors: Vec<(MorId, MorId)> = Vec::new();
        for u in a.morphisms() {
            for v in b.morphisms() {
                if f.mor(u) == g.mor(v) {
                    mors.push((u, v));
                }
            }
        }
        let mor_pos: HashMap<(MorId, MorId), usize> =
            mors.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let cat = FinCat::from_indexed_unchecked(
            objs.iter()
                .map(|&(x, y)| pair_name(a.object_name(x), b.object_name(y)))
                .collect(),
            mors.iter()
                .map(|&(u, v)| {
                    (
                        pair_name(a.morphism_name(u), b.morphism_name(v)),
                        obj_pos[&(a.dom(u), b.dom(v))],
                        obj_pos[&(a.cod(u), b.cod(v))],
                    )
                })
                .collect(),
            objs.iter()
                .map(|&(x, y)| mor_pos[&(a.identity(x), b.identity(y))])
                .collect(),
            |p, q| {
                let (g1, g2) = mors[p];
                let (f1, f2) = mors[q];
                mor_pos[&(a.compose(g1, f1).unwrap(), b.compose(g2, f2).unwrap())]
            },
        );
        let cat = Arc::new(cat);
        let mut obj_index = HashMap::new();
        let mut pa = vec![ObjId(0); objs.len()];
        let mut pb = vec![ObjId(0); objs.len()];
        for &(x, y) in &objs {
            let id = cat
                .object_by_name(&pair_name(a.object_name(x), b.object_name(y)))
                .unwrap();
            obj_index.insert((x, y), id);
            pa[id.index()] = x;
            pb[id.index()] = y;
        }
        let mut mor_index = HashMap::new();
        let mut ma = vec![MorId(0); mors.len()];
        let mut mb = vec![MorId(0); mors.len()];
        for &(u, v) in &mors {
            let id = cat
                .morphism_by_name(&pair_name(a.morphism_name(u), b.morphism_name(v)))
                .unwrap();
            mor_index.insert((u, v), id);
            ma[id.index()] = u;
            mb[id.index()] = v;
        }
        Ok(Pullback {
            pr_a: Functor::new_unchecked(cat.clone(), f.source().clone(), pa, ma),
            pr_b: Functor::new_unchecked(cat.clone(), g.source().clone(), pb, mb),
            cat,
            obj_index,
            mor_index,
        })
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn pr_a(&self) -> &Functor {
        &self.pr_a
    }

    pub fn pr_b(&self) -> &Functor {
        &self.pr_b
    }

    pub fn obj(&self, a: ObjId, b: ObjId) -> Option<ObjId> {
        self.obj_index.get(&(a, b)).copied()
    }

    pub fn mor(&self, u: MorId, v: MorId) -> Option<MorId> {
        self.mor_index.get(&(u, v)).copied()
    }

    /// The unique map from a cone `(u, v)` with `f∘u = g∘v`.
    pub fn induced(&self, u: &Functor, v: &Functor) -> Option<Functor> {
        let x = u.source();
        let objs: Option<Vec<ObjId>> = x.objects().map(|o| self.obj(u.obj(o), v.obj(o))).collect();
        let mors: Option<Vec<MorId>> = x.morphisms().map(|m| self.mor(u.mor(m), v.mor(m))).collect();
        Some(Functor::new_unchecked(
            x.clone(),
            self.cat.clone(),
            objs?,
            mors?,
        ))
    }
}

pub fn pullback(f: &Functor, g: &Functor) -> Result<Pullback, FunctorError> {
    Pullback::new(f, g)
}
