use fincat_core::{same_category, Functor, MorId, NatTrans, ObjId};

/// Searches for a natural transformation `from ⇒ to`, assigning components
/// object by object and checking every square as soon as both of its
/// components are known. `None` means none exists.
pub fn nat_trans_search(from: &Functor, to: &Functor) -> Option<NatTrans> {
    assert!(same_category(from.source(), to.source()) && same_category(from.target(), to.target()));
    let s = &**from.source();
    let n = s.num_objects();
    // Squares to check once object `o` is assigned: morphisms whose later
    // endpoint (in object order) is `o`.
    let mut checks: Vec<Vec<MorId>> = vec![Vec::new(); n];
    for m in s.non_identity_morphisms() {
        let k = s.dom(m).max(s.cod(m));
        checks[k.index()].push(m);
    }
    let mut comps: Vec<MorId> = Vec::with_capacity(n);
    fn go(
        from: &Functor,
        to: &Functor,
        checks: &[Vec<MorId>],
        comps: &mut Vec<MorId>,
    ) -> bool {
        let s = &**from.source();
        let t = &**from.target();
        let o = ObjId(comps.len() as u32);
        if o.index() == s.num_objects() {
            return true;
        }
        for &c in t.hom(from.obj(o), to.obj(o)) {
            comps.push(c);
            let ok = checks[o.index()].iter().all(|&m| {
                let (a, b) = (s.dom(m), s.cod(m));
                t.compose(to.mor(m), comps[a.index()]) == t.compose(comps[b.index()], from.mor(m))
            });
            if ok && go(from, to, checks, comps) {
                return true;
            }
            comps.pop();
        }
        false
    }
    if go(from, to, &checks, &mut comps) {
        Some(NatTrans::new_unchecked(from.clone(), to.clone(), comps))
    } else {
        None
    }
}

/// Cheap necessary condition for `from ⇒ to`: every component hom is inhabited.
pub fn objectwise_possible(from: &Functor, to: &Functor) -> bool {
    let t = &**from.target();
    from.source()
        .objects()
        .all(|o| !t.hom(from.obj(o), to.obj(o)).is_empty())
}
