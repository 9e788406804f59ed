use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use fincat_core::{same_category, FinCat, MorId, RawPiece, Subcategory, SubcategoryError};
use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverCheck {
    Ok,
    /// A composable chain `f_1, ..., f_k` (each `f_{i+1}` starts where `f_i`
    /// ends) that no piece contains entirely.
    BadChain(Vec<MorId>),
}

impl CoverCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, CoverCheck::Ok)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("piece {index}: {source}")]
    Piece { index: usize, source: SubcategoryError },
    #[error("piece {0} lives in a different category")]
    ForeignPiece(usize),
    #[error("chain {0:?} is not covered by any piece")]
    BadChain(Vec<String>),
}

/// Decides the geometric-cover condition by exploring states
/// `(last morphism, pieces containing the whole walk so far)`. Every state
/// with an empty piece set is reached through a concrete chain, which is
/// returned; breadth-first order makes it a shortest one.
pub fn is_geometric_cover(base: &FinCat, pieces: &[Subcategory]) -> CoverCheck {
    let k = pieces.len();
    let owners: Vec<FixedBitSet> = base
        .morphisms()
        .map(|m| {
            let mut s = FixedBitSet::with_capacity(k);
            for (i, p) in pieces.iter().enumerate() {
                if p.contains_morphism(m) {
                    s.insert(i);
                }
            }
            s
        })
        .collect();
    let mut parent: HashMap<(MorId, FixedBitSet), Option<(MorId, FixedBitSet)>> = HashMap::new();
    let mut queue = VecDeque::new();
    for m in base.morphisms() {
        let key = (m, owners[m.index()].clone());
        if parent.contains_key(&key) {
            continue;
        }
        parent.insert(key.clone(), None);
        queue.push_back(key);
    }
    while let Some(state) = queue.pop_front() {
        if state.1.is_clear() {
            let mut chain = vec![state.0];
            let mut cur = &parent[&state];
            while let Some(prev) = cur {
                chain.push(prev.0);
                cur = &parent[prev];
            }
            chain.reverse();
            return CoverCheck::BadChain(chain);
        }
        let (m, alive) = &state;
        for &next in base.outgoing(base.cod(*m)) {
            let mut a = alive.clone();
            a.intersect_with(&owners[next.index()]);
            let key = (next, a);
            if !parent.contains_key(&key) {
                parent.insert(key.clone(), Some(state.clone()));
                queue.push_back(key);
            }
        }
    }
    CoverCheck::Ok
}

/// A family of subcategories meeting every composable chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricCover {
    base: Arc<FinCat>,
    pieces: Vec<Subcategory>,
}

impl GeometricCover {
    pub fn new(base: &Arc<FinCat>, pieces: Vec<Subcategory>) -> Result<GeometricCover, CoverError> {
        for (i, p) in pieces.iter().enumerate() {
            if !same_category(p.parent(), base) {
                return Err(CoverError::ForeignPiece(i));
            }
            p.check().map_err(|source| CoverError::Piece { index: i, source })?;
        }
        match is_geometric_cover(base, &pieces) {
            CoverCheck::Ok => Ok(GeometricCover {
                base: base.clone(),
                pieces,
            }),
            CoverCheck::BadChain(chain) => Err(CoverError::BadChain(
                chain.iter().map(|&m| base.morphism_name(m).to_string()).collect(),
            )),
        }
    }

    pub fn from_raw(base: &Arc<FinCat>, raw: &[RawPiece]) -> Result<GeometricCover, CoverError> {
        let pieces = raw
            .iter()
            .enumerate()
            .map(|(i, r)| Subcategory::from_raw(base, r).map_err(|source| CoverError::Piece { index: i, source }))
            .collect::<Result<Vec<_>, _>>()?;
        GeometricCover::new(base, pieces)
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn pieces(&self) -> &[Subcategory] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn to_raw(&self) -> Vec<RawPiece> {
        self.pieces.iter().map(Subcategory::to_raw).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fincat_core::standard::interval;
    use fincat_core::ObjId;

    #[test]
    fn points_do_not_cover_the_arrow() {
        let two = interval();
        let pieces = vec![Subcategory::full(&two, [ObjId(0)]), Subcategory::full(&two, [ObjId(1)])];
        let f = two.morphism_by_name("f").unwrap();
        assert_eq!(is_geometric_cover(&two, &pieces), CoverCheck::BadChain(vec![f]));
        assert!(is_geometric_cover(&two, &[Subcategory::whole(&two)]).is_ok());
    }
}
