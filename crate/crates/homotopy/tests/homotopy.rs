use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use fincat_core::sample::{random_category, random_functor};
use fincat_core::standard::{discrete, interval, parallel_pair, terminal, zigzag};
use fincat_core::*;
use homotopy::*;
use paths::Path;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CAP: u64 = 1 << 24;

fn fun(c: &Arc<FinCat>, d: &Arc<FinCat>, objs: &[(&str, &str)], mors: &[(&str, &str)]) -> Functor {
    let raw = RawFunctor {
        objects: objs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        morphisms: mors.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    };
    Functor::from_raw(c, d, &raw).unwrap()
}

/// Every choice of components, checked with the library validator.
fn brute_nat_exists(f: &Functor, g: &Functor) -> bool {
    let c = f.source();
    let d = f.target();
    let homs: Vec<&[MorId]> = c.objects().map(|x| d.hom(f.obj(x), g.obj(x))).collect();
    if homs.iter().any(|h| h.is_empty()) {
        return false;
    }
    let mut idx = vec![0usize; homs.len()];
    loop {
        let comps = idx.iter().zip(&homs).map(|(&i, h)| h[i]).collect();
        if NatTrans::new(f.clone(), g.clone(), comps).is_ok() {
            return true;
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return false;
            }
            idx[k] += 1;
            if idx[k] < homs[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Shortest alternating zig-zag length by level sets, or `None`.
fn brute_distance(all: &[Functor], f: &Functor, g: &Functor) -> Option<usize> {
    let mut level: BTreeSet<usize> = all.iter().position(|x| x == f).into_iter().collect();
    for k in 0..=2 * all.len() + 1 {
        if level.iter().any(|&u| &all[u] == g) {
            return Some(k);
        }
        let next: BTreeSet<usize> = (0..all.len())
            .filter(|&v| {
                level.iter().any(|&u| {
                    if k % 2 == 0 {
                        brute_nat_exists(&all[u], &all[v])
                    } else {
                        brute_nat_exists(&all[v], &all[u])
                    }
                })
            })
            .collect();
        level = next;
    }
    None
}

fn circle_functors() -> (Arc<FinCat>, Functor, Functor, Functor, Functor) {
    let s = parallel_pair();
    let id = Functor::identity(&s);
    let swap = fun(&s, &s, &[("x", "x"), ("y", "y")], &[("f", "g"), ("g", "f")]);
    let ff = fun(&s, &s, &[("x", "x"), ("y", "y")], &[("f", "f"), ("g", "f")]);
    let cx = Functor::constant(&s, &s, s.object_by_name("x").unwrap());
    (s, id, swap, ff, cx)
}

#[test]
fn nat_trans_search_examples() {
    let (s, id, _, ff, cx) = circle_functors();
    let t = nat_trans_search(&id, &id).unwrap();
    assert_eq!(t, NatTrans::identity(&id));
    assert!(nat_trans_search(&cx, &id).is_none());
    let cy = Functor::constant(&s, &s, s.object_by_name("y").unwrap());
    let t = nat_trans_search(&ff, &cy).unwrap();
    t.check().unwrap();
    let x = s.object_by_name("x").unwrap();
    let y = s.object_by_name("y").unwrap();
    assert_eq!(t.component(x), s.morphism_by_name("f").unwrap());
    assert_eq!(t.component(y), s.identity(y));
}

#[test]
fn nat_trans_search_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..80 {
        let c = random_category(&mut rng, 5);
        let d = random_category(&mut rng, 6);
        let (Some(f), Some(g)) = (random_functor(&mut rng, &c, &d, CAP), random_functor(&mut rng, &c, &d, CAP)) else {
            continue;
        };
        let found = nat_trans_search(&f, &g);
        if let Some(t) = &found {
            t.check().unwrap();
        }
        assert_eq!(found.is_some(), brute_nat_exists(&f, &g));
    }
}

#[test]
fn circle_functor_graph_components() {
    let (s, id, swap, _, _) = circle_functors();
    let graph = FunctorGraph::new(&s, &s, CAP).unwrap();
    assert_eq!(graph.len(), 6);
    let comps: Vec<HashSet<Functor>> = graph
        .components()
        .into_iter()
        .map(|c| c.into_iter().map(|u| graph.functor(u).clone()).collect())
        .collect();
    assert_eq!(comps.len(), 3);
    let sizes: BTreeSet<usize> = comps.iter().map(|c| c.len()).collect();
    assert_eq!(sizes, BTreeSet::from([1, 4]));
    assert!(comps.iter().any(|c| c.len() == 1 && c.contains(&id)));
    assert!(comps.iter().any(|c| c.len() == 1 && c.contains(&swap)));
    let big = comps.iter().find(|c| c.len() == 4).unwrap();
    assert!(big.iter().filter(|f| f.is_constant()).count() == 2);

    // All 30 ordered pairs against the brute-force edge oracle.
    let all = graph.functors();
    for u in 0..all.len() {
        for v in 0..all.len() {
            if u != v {
                assert_eq!(graph.out(u).contains(&v), brute_nat_exists(&all[u], &all[v]));
            }
        }
    }
}

#[test]
fn strong_homotopy_examples() {
    let (s, id, _, _, cx) = circle_functors();
    let h = strong_homotopic(&id, &id, CAP).unwrap().unwrap();
    assert_eq!(h.len(), 0);
    assert!(strong_homotopic(&id, &cx, CAP).unwrap().is_none());
    assert!(!s.is_empty());

    let two = interval();
    let cx = Functor::constant(&two, &two, two.object_by_name("x").unwrap());
    let id = Functor::identity(&two);
    let h = strong_homotopic(&cx, &id, CAP).unwrap().unwrap();
    assert_eq!(h.len(), 1);
    let f = two.morphism_by_name("f").unwrap();
    assert_eq!(h.link(0).components(), &[two.identity(ObjId(0)), f]);
    h.replay().unwrap();
}

#[test]
fn bfs_lengths_match_level_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 40 {
        let c = random_category(&mut rng, 4);
        let d = random_category(&mut rng, 6);
        let Ok(all) = enumerate_functors(&c, &d, 4096) else { continue };
        if all.is_empty() || all.len() > 40 {
            continue;
        }
        checked += 1;
        let graph = FunctorGraph::from_functors(&c, &d, all.clone());
        for (i, f) in all.iter().enumerate().step_by(3) {
            let g = &all[(i * 7 + 1) % all.len()];
            let h = graph.homotopy(i, graph.index_of(g).unwrap());
            assert_eq!(h.as_ref().map(|h| h.len()), brute_distance(&all, f, g));
            if let Some(h) = h {
                h.check().unwrap();
                let r = h.replay().unwrap();
                assert_eq!(StrongHomotopy::from_replay(&r).unwrap(), h);
                assert_eq!(h.start(), f);
                assert_eq!(h.end(), g);
            }
        }
    }
}

#[test]
fn equivalence_relation_certificates_replay() {
    let z = zigzag(3);
    let graph = FunctorGraph::new(&z, &z, CAP).unwrap();
    let id = graph.index_of(&Functor::identity(&z)).unwrap();
    let c0 = graph.index_of(&Functor::constant(&z, &z, ObjId(0))).unwrap();
    let c3 = graph.index_of(&Functor::constant(&z, &z, ObjId(3))).unwrap();
    let a = graph.homotopy(id, c0).unwrap();
    let b = graph.homotopy(c0, c3).unwrap();
    let rev = a.reversed();
    rev.check().unwrap();
    rev.replay().unwrap();
    assert_eq!(rev.start(), a.end());
    assert_eq!(rev.end(), a.start());
    let ab = a.concat(&b).unwrap();
    ab.check().unwrap();
    ab.replay().unwrap();
    assert_eq!(ab.end(), b.end());
    assert!(a.concat(&a).is_err() || a.start() == a.end());
    let refl = StrongHomotopy::constant(graph.functor(id));
    refl.replay().unwrap();
}

#[test]
fn certificate_json_round_trip() {
    let z = zigzag(2);
    let graph = FunctorGraph::new(&z, &z, CAP).unwrap();
    let id = graph.index_of(&Functor::identity(&z)).unwrap();
    let h = graph.homotopy_to(id, |u| graph.functor(u).is_constant()).unwrap();
    let text = serde_json::to_string(&h.to_json()).unwrap();
    assert!(text.contains("\"dir\":\"fwd\""));
    let raw: RawStrongHomotopy = serde_json::from_str(&text).unwrap();
    assert_eq!(StrongHomotopy::from_raw(&z, &z, &raw).unwrap(), h);

    let mut bad = raw.clone();
    if let Some(l) = bad.links.first_mut() {
        l.dir = LinkDir::Bwd;
        assert!(matches!(StrongHomotopy::from_raw(&z, &z, &bad), Err(HomotopyError::LinkDirection(0))));
    }
}

#[test]
fn tampered_link_is_rejected() {
    let two = interval();
    let cx = Functor::constant(&two, &two, two.object_by_name("x").unwrap());
    let id = Functor::identity(&two);
    let bad = NatTrans::new_unchecked(id.clone(), cx.clone(), vec![two.identity(ObjId(0)), two.identity(ObjId(0))]);
    assert!(StrongHomotopy::new(vec![id.clone(), cx.clone()], vec![bad]).is_err());
    let good = nat_trans_search(&cx, &id).unwrap();
    // Right transformation, wrong slot: link 1 must run backward.
    let h = StrongHomotopy::new(vec![cx.clone(), cx.clone(), id.clone()], vec![NatTrans::identity(&cx), good]);
    assert!(matches!(h, Err(HomotopyError::LinkDirection(1))));
}

#[test]
fn weak_conversion_examples() {
    let two = interval();
    let cx = Functor::constant(&two, &two, two.object_by_name("x").unwrap());
    let id = Functor::identity(&two);
    let w = weak_homotopic(&cx, &id, CAP).unwrap().unwrap();
    w.check().unwrap();
    w.check_endpoints(&cx, &id).unwrap();
    assert!(w.paths().iter().all(|p| p.len() == 2));
    assert_eq!(w.endpoint_functors(), (cx.clone(), id.clone()));

    let w0 = weak_homotopic(&id, &id, CAP).unwrap().unwrap();
    assert!(w0.paths().iter().all(|p| p.len() == 0));

    let z = zigzag(4);
    let id = Functor::identity(&z);
    let c0 = Functor::constant(&z, &z, ObjId(0));
    let w = weak_homotopic(&id, &c0, CAP).unwrap().unwrap();
    w.check().unwrap();
    w.check_endpoints(&id, &c0).unwrap();
    let lens: BTreeSet<usize> = w.normal_forms().iter().map(Path::len).collect();
    assert!(lens.len() > 1, "normal form lengths {lens:?}");
    assert_eq!(w.normal_forms()[0].len(), 0);
}

#[test]
fn direct_weak_search_agrees_with_strong() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut done = 0;
    while done < 40 {
        let c = random_category(&mut rng, 4);
        let d = random_category(&mut rng, 6);
        let (Some(f), Some(g)) = (random_functor(&mut rng, &c, &d, CAP), random_functor(&mut rng, &c, &d, CAP)) else {
            continue;
        };
        done += 1;
        let strong = strong_homotopic(&f, &g, CAP).unwrap();
        let len = strong.as_ref().map_or(4, |h| h.len() + h.len() % 2);
        let direct = weak_homotopic_direct(&f, &g, len, CAP).unwrap();
        assert_eq!(strong.is_some(), direct.is_some());
        if let Some(w) = direct {
            w.check().unwrap();
            w.check_endpoints(&f, &g).unwrap();
        }
    }
}

#[test]
fn contractibility_examples() {
    let (_, h) = is_contractible(&terminal(), CAP).unwrap().unwrap();
    assert_eq!(h.len(), 0);
    for m in 1..=6 {
        let z = zigzag(m);
        let (_, h) = is_contractible(&z, CAP).unwrap().unwrap();
        assert!(h.start() == &Functor::identity(&z) && h.end().is_constant());
        h.replay().unwrap();
    }
    assert!(is_contractible(&discrete(2), CAP).unwrap().is_none());
    assert!(is_contractible(&parallel_pair(), CAP).unwrap().is_none());
}

#[test]
fn homotopy_equivalence_examples() {
    let pt = terminal();
    let e = homotopy_equivalent(&pt, &pt, CAP).unwrap().unwrap();
    assert_eq!(e.forward, Functor::identity(&pt));
    let e = homotopy_equivalent(&interval(), &pt, CAP).unwrap().unwrap();
    e.source_roundtrip.check().unwrap();
    assert_eq!(e.source_roundtrip.end(), &Functor::identity(&interval()));
    assert!(homotopy_equivalent(&discrete(2), &pt, CAP).unwrap().is_none());
}

#[test]
fn functor_budget_is_reported() {
    let z = zigzag(6);
    assert!(strong_homotopic(&Functor::identity(&z), &Functor::constant(&z, &z, ObjId(0)), 1000).is_err());
}

fn pair_strategy() -> impl Strategy<Value = (Functor, Functor)> {
    any::<u64>().prop_filter_map("no functors", |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_category(&mut rng, 4);
        let d = random_category(&mut rng, 6);
        Some((random_functor(&mut rng, &c, &d, CAP)?, random_functor(&mut rng, &c, &d, CAP)?))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn strong_certificates_convert_to_valid_weak((f, g) in pair_strategy()) {
        if let Some(h) = strong_homotopic(&f, &g, CAP).unwrap() {
            h.check().unwrap();
            h.replay().unwrap();
            let w = WeakHomotopy::from_strong(&h);
            w.check().unwrap();
            w.check_endpoints(&f, &g).unwrap();
            let back = strong_homotopic(&g, &f, CAP).unwrap().unwrap();
            // The first link always runs forward, so reversal may cost one step.
            prop_assert!(back.len() <= h.len() + 1 && h.len() <= back.len() + 1);
        } else {
            prop_assert!(strong_homotopic(&g, &f, CAP).unwrap().is_none());
        }
    }
}
