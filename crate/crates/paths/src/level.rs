use std::collections::HashMap;
use std::sync::Arc;

use fincat_core::{BudgetExceeded, FinCat, Functor, MorId, ObjId, Product};

use crate::path::{all_paths, is_forward, Path};

pub const DEFAULT_MORPHISM_CAP: usize = 2_000_000;

/// Paths of one fixed even length `L` in a base category, as a category:
/// morphisms `I → J` are natural transformations between the two functors
/// `𝕀_L → base`, composed componentwise.
///
/// Every path of length at most `L` is represented through its right
/// padding, and paths with the same reduced form are exactly the objects
/// joined by invertible pure reparametrizations, so this is a finite model
/// of the localized path category truncated at `L`.
#[derive(Debug, Clone)]
pub struct LevelCategory {
    base: Arc<FinCat>,
    len: usize,
    cat: Arc<FinCat>,
    paths: Vec<Path>,
    index: HashMap<Path, ObjId>,
    components: Vec<Vec<MorId>>,
    mor_index: HashMap<(ObjId, ObjId, Vec<MorId>), MorId>,
}

/// All natural transformations between two paths of equal length.
pub fn level_transformations(base: &FinCat, from: &Path, to: &Path) -> Vec<Vec<MorId>> {
    assert_eq!(from.len(), to.len());
    let mut out = Vec::new();
    let mut comps = Vec::with_capacity(from.len() + 1);
    fn go(base: &FinCat, from: &Path, to: &Path, comps: &mut Vec<MorId>, out: &mut Vec<Vec<MorId>>) {
        let i = comps.len();
        for &c in base.hom(from.object(i), to.object(i)) {
            if i > 0 {
                let k = i - 1;
                let ok = if is_forward(k) {
                    base.compose(to.arrow(k), comps[k]) == base.compose(c, from.arrow(k))
                } else {
                    base.compose(to.arrow(k), c) == base.compose(comps[k], from.arrow(k))
                };
                if !ok {
                    continue;
                }
            }
            comps.push(c);
            if i == from.len() {
                out.push(comps.clone());
            } else {
                go(base, from, to, comps, out);
            }
            comps.pop();
        }
    }
    go(base, from, to, &mut comps, &mut out);
    out
}

impl LevelCategory {
    /// Full subcategory on the given paths, all of length `len`.
    pub fn full(base: &Arc<FinCat>, len: usize, mut paths: Vec<Path>, cap: usize) -> Result<LevelCategory, BudgetExceeded> {
        assert!(len % 2 == 0);
        paths.sort();
        paths.dedup();
        assert!(paths.iter().all(|p| p.len() == len));
        let labels: Vec<String> = paths.iter().map(|p| p.label(base)).collect();
        let mut morphisms: Vec<(String, usize, usize)> = Vec::new();
        let mut comps_old: Vec<Vec<MorId>> = Vec::new();
        let mut lookup: HashMap<(usize, usize, Vec<MorId>), usize> = HashMap::new();
        let mut identities = vec![0usize; paths.len()];
        for (a, pa) in paths.iter().enumerate() {
            for (b, pb) in paths.iter().enumerate() {
                if base.hom(pa.start(), pb.start()).is_empty() {
                    continue;
                }
                for comps in level_transformations(base, pa, pb) {
                    if morphisms.len() >= cap {
                        return Err(BudgetExceeded::new("path category morphisms", cap as u64));
                    }
                    let names: Vec<&str> = comps.iter().map(|&c| base.morphism_name(c)).collect();
                    let name = format!("{}=>{}:{}", labels[a], labels[b], names.join(","));
                    if a == b && comps.iter().all(|&c| base.is_identity(c)) {
                        identities[a] = morphisms.len();
                    }
                    lookup.insert((a, b, comps.clone()), morphisms.len());
                    morphisms.push((name, a, b));
                    comps_old.push(comps);
                }
            }
        }
        let cat = FinCat::from_indexed_unchecked(labels.clone(), morphisms.clone(), identities, |g, f| {
            let comps: Vec<MorId> = comps_old[g]
                .iter()
                .zip(&comps_old[f])
                .map(|(&x, &y)| base.compose(x, y).unwrap())
                .collect();
            lookup[&(morphisms[f].1, morphisms[g].2, comps)]
        });
        let cat = Arc::new(cat);
        // Label order differs from path order, so map through names.
        let mut ordered = vec![Path::new_unchecked(vec![], vec![]); paths.len()];
        let mut index = HashMap::new();
        for (p, l) in paths.iter().zip(&labels) {
            let id = cat.object_by_name(l).unwrap();
            ordered[id.index()] = p.clone();
            index.insert(p.clone(), id);
        }
        let mut components = vec![Vec::new(); morphisms.len()];
        let mut mor_index = HashMap::new();
        for (i, (name, a, b)) in morphisms.iter().enumerate() {
            let id = cat.morphism_by_name(name).unwrap();
            let (oa, ob) = (index[&paths[*a]], index[&paths[*b]]);
            mor_index.insert((oa, ob, comps_old[i].clone()), id);
            components[id.index()] = std::mem::take(&mut comps_old[i]);
        }
        Ok(LevelCategory {
            base: base.clone(),
            len,
            cat,
            paths: ordered,
            index,
            components,
            mor_index,
        })
    }

    /// All paths of length `len`.
    pub fn all(base: &Arc<FinCat>, len: usize, cap: usize) -> Result<LevelCategory, BudgetExceeded> {
        LevelCategory::full(base, len, all_paths(base, len, None), cap)
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn path(&self, o: ObjId) -> &Path {
        &self.paths[o.index()]
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn object_of(&self, p: &Path) -> Option<ObjId> {
        self.index.get(p).copied()
    }

    pub fn components(&self, m: MorId) -> &[MorId] {
        &self.components[m.index()]
    }

    pub fn morphism_of(&self, from: ObjId, to: ObjId, components: &[MorId]) -> Option<MorId> {
        self.mor_index.get(&(from, to, components.to_vec())).copied()
    }

    /// Evaluation at position `i`: a functor to the base.
    pub fn evaluation(&self, i: usize) -> Functor {
        Functor::new_unchecked(
            self.cat.clone(),
            self.base.clone(),
            self.paths.iter().map(|p| p.object(i)).collect(),
            self.components.iter().map(|c| c[i]).collect(),
        )
    }

    pub fn start_functor(&self) -> Functor {
        self.evaluation(0)
    }

    pub fn end_functor(&self) -> Functor {
        self.evaluation(self.len)
    }

    /// `π = (π₀, π₁)` into the given product `base × base`.
    pub fn endpoint_functor(&self, prod: &Product) -> Functor {
        prod.pairing(&self.start_functor(), &self.end_functor())
            .expect("product over the base")
    }

    /// Pointwise image under `g`, as a functor into `target` (which must
    /// contain every image path).
    pub fn map_functor(&self, g: &Functor, target: &LevelCategory) -> Option<Functor> {
        let mut objs = Vec::with_capacity(self.paths.len());
        for p in &self.paths {
            objs.push(target.object_of(&p.map(g))?);
        }
        let mut mors = Vec::with_capacity(self.components.len());
        for m in self.cat.morphisms() {
            let comps: Vec<MorId> = self.components(m).iter().map(|&c| g.mor(c)).collect();
            let (a, b) = (objs[self.cat.dom(m).index()], objs[self.cat.cod(m).index()]);
            mors.push(target.morphism_of(a, b, &comps)?);
        }
        Some(Functor::new_unchecked(self.cat.clone(), target.cat.clone(), objs, mors))
    }

    pub fn normal_form(&self, o: ObjId) -> Path {
        self.paths[o.index()].normal_form(&self.base)
    }
}

/// The truncated path category with its endpoint functor.
#[derive(Debug, Clone)]
pub struct PathCategory {
    pub level: LevelCategory,
    pub product: Product,
    pub endpoint: Functor,
}

/// All paths of length `len` in `base` with `π: PC_L → base × base`.
pub fn truncated_path_category(base: &Arc<FinCat>, len: usize, cap: usize) -> Result<PathCategory, BudgetExceeded> {
    let level = LevelCategory::all(base, len, cap)?;
    let product = Product::new(base, base);
    let endpoint = level.endpoint_functor(&product);
    Ok(PathCategory {
        level,
        product,
        endpoint,
    })
}
