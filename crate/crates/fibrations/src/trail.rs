//! The stepwise extension shared by the staircase constructions: a homotopy
//! read off at one object as a path that stops moving after stage `k`.

use fincat_core::{Functor, MorId, NatTrans, ObjId};
use homotopy::{link_is_forward, StrongHomotopy};

use crate::problem::LiftError;

/// Smallest even number at least `n`.
pub(crate) fn even_ceil(n: usize) -> usize {
    n + n % 2
}

/// Positions `0..=a` at `x` for stage `k`: position `s` holds
/// `H_{min(s,k)}(x)`, arrow `s` is link `s` while `s < k` and an identity
/// after.
pub(crate) fn trail(h: &StrongHomotopy, x: ObjId, k: usize, a: usize) -> (Vec<ObjId>, Vec<MorId>) {
    let d = h.target();
    let objects = (0..=a).map(|s| h.stage(s.min(k)).obj(x)).collect();
    let arrows = (0..a)
        .map(|s| {
            if s < k {
                h.link(s).component(x)
            } else {
                d.identity(h.stage(k).obj(x))
            }
        })
        .collect();
    (objects, arrows)
}

/// Components of the image of `f` along the trail at stage `k`.
pub(crate) fn trail_morphism(h: &StrongHomotopy, f: MorId, k: usize, a: usize) -> Vec<MorId> {
    (0..=a).map(|s| h.stage(s.min(k)).mor(f)).collect()
}

/// Components of the step from the stage-`k` trail to the stage-`k+1`
/// trail (or back, for a backward link): link `k` from position `k+1` on.
pub(crate) fn trail_step(h: &StrongHomotopy, x: ObjId, k: usize, a: usize) -> Vec<MorId> {
    let d = h.target();
    (0..=a)
        .map(|s| {
            if s > k {
                h.link(k).component(x)
            } else {
                d.identity(h.stage(s).obj(x))
            }
        })
        .collect()
}

/// `(from, to)` stage indices of link `k`.
pub(crate) fn link_ends(k: usize) -> (usize, usize) {
    if link_is_forward(k) {
        (k, k + 1)
    } else {
        (k + 1, k)
    }
}

/// `G ∘ H`, stage by stage and link by link.
pub fn post_compose(h: &StrongHomotopy, g: &Functor) -> Result<StrongHomotopy, LiftError> {
    let stages: Vec<Functor> = h
        .stages()
        .iter()
        .map(|s| g.after(s).map_err(|e| LiftError::Problem(e.to_string())))
        .collect::<Result<_, _>>()?;
    let links = (0..h.len())
        .map(|k| {
            let (from, to) = link_ends(k);
            let comps = h.link(k).components().iter().map(|&c| g.mor(c)).collect();
            NatTrans::new_unchecked(stages[from].clone(), stages[to].clone(), comps)
        })
        .collect();
    Ok(StrongHomotopy::new(stages, links)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fincat_core::standard::{interval, terminal};

    fn arrow_homotopy() -> StrongHomotopy {
        let two = interval();
        let (x, y) = (two.object_by_name("x").unwrap(), two.object_by_name("y").unwrap());
        let f = two.morphism_by_name("f").unwrap();
        let at = |o| Functor::constant(&terminal(), &two, o);
        let link = NatTrans::new(at(x), at(y), vec![f]).unwrap();
        StrongHomotopy::new(vec![at(x), at(y)], vec![link]).unwrap()
    }

    #[test]
    fn even_ceil_rounds_up() {
        assert_eq!((0..6).map(even_ceil).collect::<Vec<_>>(), vec![0, 2, 2, 4, 4, 6]);
    }

    #[test]
    fn trail_stops_moving_after_its_stage() {
        let h = arrow_homotopy();
        let x = ObjId(0);
        let (still, arrows) = trail(&h, x, 0, 2);
        assert!(still.iter().all(|&o| o == h.stage(0).obj(x)));
        assert!(arrows.iter().all(|&m| h.target().is_identity(m)));
        let (moved, arrows) = trail(&h, x, 1, 2);
        assert_eq!(moved, vec![h.stage(0).obj(x), h.stage(1).obj(x), h.stage(1).obj(x)]);
        assert_eq!(arrows[0], h.link(0).component(x));
    }

    #[test]
    fn step_uses_the_link_past_its_stage() {
        let h = arrow_homotopy();
        let step = trail_step(&h, ObjId(0), 0, 2);
        assert!(h.target().is_identity(step[0]));
        assert_eq!(&step[1..], &[h.link(0).component(ObjId(0)); 2]);
    }

    #[test]
    fn link_ends_alternate() {
        assert_eq!(link_ends(0), (0, 1));
        assert_eq!(link_ends(1), (2, 1));
    }
}
