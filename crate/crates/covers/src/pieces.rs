use std::sync::Arc;

use fincat_core::{BudgetExceeded, FinCat, MorId, Subcategory};
use fixedbitset::FixedBitSet;

pub const DEFAULT_PIECE_CAP: u64 = 1_000_000;

/// Every nonempty subcategory, in canonical order. `cap` bounds the number
/// of search nodes (object subsets plus morphism decisions).
pub fn enumerate_pieces(base: &Arc<FinCat>, cap: u64) -> Result<Vec<Subcategory>, BudgetExceeded> {
    let c = &**base;
    let n = c.num_objects();
    if n >= 63 || (1u64 << n) > cap {
        return Err(BudgetExceeded::new("subcategory enumeration nodes", cap));
    }
    let mut nodes = 0u64;
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let mut objects = FixedBitSet::with_capacity(n);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                objects.insert(i);
            }
        }
        let inside: Vec<MorId> = c
            .non_identity_morphisms()
            .filter(|&m| objects.contains(c.dom(m).index()) && objects.contains(c.cod(m).index()))
            .collect();
        let mut chosen = FixedBitSet::with_capacity(c.num_morphisms());
        for o in objects.ones() {
            chosen.insert(c.identity(fincat_core::ObjId(o as u32)).index());
        }
        let mut decided = FixedBitSet::with_capacity(c.num_morphisms());
        decided.union_with(&chosen);
        let mut st = Walk {
            cat: c,
            inside: &inside,
            chosen,
            decided,
            nodes: &mut nodes,
            cap,
            found: Vec::new(),
        };
        st.go(0)?;
        for m in st.found {
            out.push(Subcategory::from_sets_unchecked(base, objects.clone(), m));
        }
    }
    out.sort();
    Ok(out)
}

struct Walk<'a> {
    cat: &'a FinCat,
    inside: &'a [MorId],
    chosen: FixedBitSet,
    decided: FixedBitSet,
    nodes: &'a mut u64,
    cap: u64,
    found: Vec<FixedBitSet>,
}

impl Walk<'_> {
    /// Would including `m` clash with an already excluded composite?
    fn clashes(&self, m: MorId) -> bool {
        let c = self.cat;
        self.chosen.ones().map(|i| MorId(i as u32)).chain([m]).any(|other| {
            [(m, other), (other, m)].into_iter().any(|(g, f)| match c.compose(g, f) {
                Some(h) => h != m && h != other && self.decided.contains(h.index()) && !self.chosen.contains(h.index()),
                None => false,
            })
        })
    }

    fn closed(&self) -> bool {
        let c = self.cat;
        self.chosen.ones().all(|g| {
            self.chosen.ones().all(|f| match c.compose(MorId(g as u32), MorId(f as u32)) {
                Some(h) => self.chosen.contains(h.index()),
                None => true,
            })
        })
    }

    fn go(&mut self, i: usize) -> Result<(), BudgetExceeded> {
        *self.nodes += 1;
        if *self.nodes > self.cap {
            return Err(BudgetExceeded::new("subcategory enumeration nodes", self.cap));
        }
        if i == self.inside.len() {
            if self.closed() {
                self.found.push(self.chosen.clone());
            }
            return Ok(());
        }
        let m = self.inside[i];
        self.decided.insert(m.index());
        self.go(i + 1)?;
        if !self.clashes(m) {
            self.chosen.insert(m.index());
            self.go(i + 1)?;
            self.chosen.set(m.index(), false);
        }
        self.decided.set(m.index(), false);
        Ok(())
    }
}
