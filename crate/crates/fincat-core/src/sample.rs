//! Random small categories for property tests and batteries.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::category::FinCat;
use crate::enumerate::enumerate_functors;
use crate::functor::Functor;
use crate::standard::{free_category, preorder};

/// A random category with at most `max_morphisms` morphisms: either the
/// free category on a random acyclic quiver (parallel edges allowed) or a
/// random preorder.
pub fn random_category<R: Rng>(rng: &mut R, max_morphisms: usize) -> Arc<FinCat> {
    assert!(max_morphisms >= 1);
    loop {
        let n = rng.gen_range(1..=max_morphisms.min(4));
        let cat = if rng.gen_bool(0.5) {
            let count = rng.gen_range(0..=max_morphisms.saturating_sub(n).min(5));
            let edges: Vec<(String, usize, usize)> = (0..count)
                .map(|i| {
                    let a = rng.gen_range(0..n);
                    let b = rng.gen_range(0..n);
                    let (a, b) = if a <= b { (a, b) } else { (b, a) };
                    (format!("e{i}"), a, b)
                })
                .filter(|&(_, a, b)| a != b)
                .collect();
            match free_category(n, &edges, max_morphisms) {
                Some(c) => c,
                None => continue,
            }
        } else {
            let count = rng.gen_range(0..=n + 1);
            let rel: Vec<(usize, usize)> = (0..count)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect();
            preorder(n, &rel)
        };
        if cat.num_morphisms() <= max_morphisms {
            return cat;
        }
    }
}

/// A uniformly chosen functor, or `None` when there is none or the
/// enumeration exceeds `cap`.
pub fn random_functor<R: Rng>(rng: &mut R, source: &Arc<FinCat>, target: &Arc<FinCat>, cap: u64) -> Option<Functor> {
    let all = enumerate_functors(source, target, cap).ok()?;
    all.choose(rng).cloned()
}
