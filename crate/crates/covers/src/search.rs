use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use fincat_core::{BudgetExceeded, FinCat, MorId, Subcategory};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::automaton::{is_geometric_cover, CoverCheck, GeometricCover};
use crate::pieces::{enumerate_pieces, DEFAULT_PIECE_CAP};

/// A per-piece test returning a witness when the piece qualifies.
pub trait PiecePredicate: Sync {
    type Witness: Send;

    fn witness(&self, piece: &Subcategory) -> Result<Option<Self::Witness>, BudgetExceeded>;
}

impl<W: Send, F> PiecePredicate for F
where
    F: Fn(&Subcategory) -> Result<Option<W>, BudgetExceeded> + Sync,
{
    type Witness = W;

    fn witness(&self, piece: &Subcategory) -> Result<Option<W>, BudgetExceeded> {
        self(piece)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CoverSearchOptions {
    pub piece_cap: u64,
    pub node_budget: u64,
}

impl Default for CoverSearchOptions {
    fn default() -> Self {
        CoverSearchOptions {
            piece_cap: DEFAULT_PIECE_CAP,
            node_budget: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBound {
    Finite(usize),
    /// No family of qualifying pieces covers the category at all.
    Infinite,
}

impl fmt::Display for LowerBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LowerBound::Finite(n) => write!(f, "{n}"),
            LowerBound::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverSearchError {
    #[error("budget exceeded ({reason}); n >= {lower}{}", upper.map(|u| format!(", n <= {u}")).unwrap_or_default())]
    BudgetExceeded {
        reason: String,
        lower: LowerBound,
        upper: Option<usize>,
    },
    #[error("the empty category has no covers to count")]
    EmptyCategory,
}

impl CoverSearchError {
    fn from_budget(b: BudgetExceeded, lower: LowerBound, upper: Option<usize>) -> Self {
        CoverSearchError::BudgetExceeded {
            reason: b.to_string(),
            lower,
            upper,
        }
    }
}

/// `n + 1` qualifying pieces forming a geometric cover, with one witness
/// per piece.
#[derive(Debug, Clone)]
pub struct CoverSolution<W> {
    pub n: usize,
    pub cover: GeometricCover,
    pub witnesses: Vec<W>,
}

impl<W> CoverSolution<W> {
    pub fn to_json(&self, witness: impl Fn(&W) -> Value) -> Value {
        json!({
            "n": self.n,
            "pieces": self.cover.to_raw(),
            "witnesses": self.witnesses.iter().map(witness).collect::<Vec<_>>(),
        })
    }
}

/// Inclusion-maximal pieces passing the predicate, largest first, each with
/// its witness. Pieces inside an already accepted piece are not evaluated.
pub fn maximal_passing_pieces<P: PiecePredicate>(
    base: &Arc<FinCat>,
    predicate: &P,
    piece_cap: u64,
) -> Result<Vec<(Subcategory, P::Witness)>, BudgetExceeded> {
    let mut pieces = enumerate_pieces(base, piece_cap)?;
    pieces.sort_by(|a, b| {
        (b.num_morphisms(), b.num_objects())
            .cmp(&(a.num_morphisms(), a.num_objects()))
            .then_with(|| a.cmp(b))
    });
    let mut accepted: Vec<(Subcategory, P::Witness)> = Vec::new();
    let mut i = 0;
    while i < pieces.len() {
        let size = (pieces[i].num_morphisms(), pieces[i].num_objects());
        let mut j = i;
        while j < pieces.len() && (pieces[j].num_morphisms(), pieces[j].num_objects()) == size {
            j += 1;
        }
        let todo: Vec<&Subcategory> = pieces[i..j]
            .iter()
            .filter(|p| !accepted.iter().any(|(a, _)| p.is_subset(a)))
            .collect();
        let results: Vec<Option<P::Witness>> = todo
            .par_iter()
            .map(|p| predicate.witness(p))
            .collect::<Result<_, _>>()?;
        for (p, w) in todo.into_iter().zip(results) {
            if let Some(w) = w {
                accepted.push((p.clone(), w));
            }
        }
        i = j;
    }
    Ok(accepted)
}

/// Least `n` such that `n + 1` pieces passing `predicate` form a geometric
/// cover. Only maximal passing pieces are combined: enlarging the pieces of
/// a cover keeps it a cover. Covers are found by iterative deepening,
/// branching on the candidates that contain an uncovered chain; among the
/// minimal covers the lexicographically least (in canonical piece order)
/// is returned.
pub fn minimal_cover_search<P: PiecePredicate>(
    base: &Arc<FinCat>,
    predicate: &P,
    options: CoverSearchOptions,
) -> Result<CoverSolution<P::Witness>, CoverSearchError> {
    if base.num_objects() == 0 {
        return Err(CoverSearchError::EmptyCategory);
    }
    // The only one-piece cover is the whole category; try it before
    // enumerating pieces.
    let whole = Subcategory::full(base, base.objects());
    if let Some(w) = predicate
        .witness(&whole)
        .map_err(|b| CoverSearchError::from_budget(b, LowerBound::Finite(0), None))?
    {
        let cover = GeometricCover::new(base, vec![whole]).expect("the whole category covers itself");
        return Ok(CoverSolution {
            n: 0,
            cover,
            witnesses: vec![w],
        });
    }
    let mut cands = maximal_passing_pieces(base, predicate, options.piece_cap)
        .map_err(|b| CoverSearchError::from_budget(b, LowerBound::Finite(0), None))?;
    cands.sort_by(|a, b| a.0.cmp(&b.0));
    let pieces: Vec<Subcategory> = cands.iter().map(|(p, _)| p.clone()).collect();
    if !is_geometric_cover(base, &pieces).is_ok() {
        return Err(CoverSearchError::BudgetExceeded {
            reason: "no qualifying pieces cover the category".into(),
            lower: LowerBound::Infinite,
            upper: None,
        });
    }
    let upper = pieces.len() - 1;
    let mut nodes = 0u64;
    for k in 1..=pieces.len() {
        let mut search = Deepening {
            base,
            pieces: &pieces,
            size: k,
            nodes: &mut nodes,
            budget: options.node_budget,
            seen: HashSet::new(),
            best: None,
        };
        search
            .go(&mut Vec::new())
            .map_err(|b| CoverSearchError::from_budget(b, LowerBound::Finite(k - 1), Some(upper)))?;
        if let Some(best) = search.best {
            let mut witnesses: Vec<Option<P::Witness>> = cands.into_iter().map(|(_, w)| Some(w)).collect();
            let chosen: Vec<Subcategory> = best.iter().map(|&i| pieces[i].clone()).collect();
            let cover = GeometricCover::new(base, chosen).expect("found covers are geometric");
            return Ok(CoverSolution {
                n: k - 1,
                cover,
                witnesses: best.iter().map(|&i| witnesses[i].take().unwrap()).collect(),
            });
        }
    }
    unreachable!("the union of all candidates is a cover")
}

struct Deepening<'a> {
    base: &'a FinCat,
    pieces: &'a [Subcategory],
    size: usize,
    nodes: &'a mut u64,
    budget: u64,
    seen: HashSet<Vec<usize>>,
    best: Option<Vec<usize>>,
}

impl Deepening<'_> {
    fn covers_chain(&self, i: usize, chain: &[MorId]) -> bool {
        chain.iter().all(|&m| self.pieces[i].contains_morphism(m))
    }

    fn go(&mut self, chosen: &mut Vec<usize>) -> Result<(), BudgetExceeded> {
        *self.nodes += 1;
        if *self.nodes > self.budget {
            return Err(BudgetExceeded::new("cover search nodes", self.budget));
        }
        let family: Vec<Subcategory> = chosen.iter().map(|&i| self.pieces[i].clone()).collect();
        let chain = match is_geometric_cover(self.base, &family) {
            CoverCheck::Ok => {
                if self.best.as_ref().map_or(true, |b| *chosen < *b) {
                    self.best = Some(chosen.clone());
                }
                return Ok(());
            }
            CoverCheck::BadChain(chain) => chain,
        };
        if chosen.len() == self.size {
            return Ok(());
        }
        for i in 0..self.pieces.len() {
            if chosen.contains(&i) || !self.covers_chain(i, &chain) {
                continue;
            }
            let mut next = chosen.clone();
            next.push(i);
            next.sort_unstable();
            if !self.seen.insert(next.clone()) {
                continue;
            }
            self.go(&mut next)?;
        }
        Ok(())
    }
}
