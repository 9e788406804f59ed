use std::collections::BTreeSet;
use std::sync::Arc;

use fincat_core::io::{from_json_str, save, to_json_string};
use fincat_core::sample::random_category;
use fincat_core::standard::{discrete, interval, parallel_pair, terminal, zigzag};
use fincat_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn two_arrows_no_composite() -> CategoryBuilder {
    let mut b = CategoryBuilder::new();
    b.object_with_identity("x")
        .object_with_identity("y")
        .object_with_identity("z")
        .morphism("f", "x", "y")
        .morphism("g", "y", "z");
    b
}

/// One object, non-associative table on {1, a, b}.
fn broken() -> CategoryBuilder {
    let mut b = CategoryBuilder::new();
    b.object_with_identity("o")
        .morphism("a", "o", "o")
        .morphism("b", "o", "o")
        .compose("a", "a", "a")
        .compose("a", "b", "a")
        .compose("b", "a", "b")
        .compose("b", "b", "a");
    b
}

/// Law check straight on the name tables, independent of the builder.
fn raw_satisfies_laws(raw: &RawCategory) -> bool {
    use std::collections::HashMap;
    let dc: HashMap<&str, (&str, &str)> = raw
        .morphisms
        .iter()
        .map(|m| (m.id.as_str(), (m.dom.as_str(), m.cod.as_str())))
        .collect();
    let mut table: HashMap<(&str, &str), &str> = HashMap::new();
    for [g, f, h] in &raw.compose {
        if table.insert((g.as_str(), f.as_str()), h.as_str()).is_some() {
            return false;
        }
    }
    for m in &raw.morphisms {
        let l = raw.identities[&m.cod].as_str();
        let r = raw.identities[&m.dom].as_str();
        for key in [(l, m.id.as_str()), (m.id.as_str(), r)] {
            match table.get(&key) {
                Some(&h) if h != m.id => return false,
                Some(_) => {}
                None => {
                    table.insert(key, m.id.as_str());
                }
            }
        }
    }
    let comp = |g: &str, f: &str| -> Option<&str> {
        if dc[f].1 != dc[g].0 {
            return None;
        }
        table.get(&(g, f)).copied()
    };
    for f in dc.keys() {
        for g in dc.keys() {
            if dc[f].1 != dc[g].0 {
                continue;
            }
            let Some(gf) = comp(g, f) else { return false };
            if dc[gf] != (dc[f].0, dc[g].1) {
                return false;
            }
            for h in dc.keys() {
                if dc[g].1 != dc[h].0 {
                    continue;
                }
                let Some(hg) = comp(h, g) else { return false };
                if comp(h, gf) != comp(hg, f) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every functor by trying every object and morphism assignment.
fn brute_force_functors(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Vec<Functor> {
    let (no, nm) = (c.num_objects(), c.num_morphisms());
    let mut out = Vec::new();
    let mut obj = vec![0usize; no];
    loop {
        let mut mor = vec![0usize; nm];
        loop {
            let f = Functor::new(
                c.clone(),
                d.clone(),
                obj.iter().map(|&i| ObjId(i as u32)).collect(),
                mor.iter().map(|&i| MorId(i as u32)).collect(),
            );
            if let Ok(f) = f {
                out.push(f);
            }
            if !bump(&mut mor, d.num_morphisms()) {
                break;
            }
        }
        if !bump(&mut obj, d.num_objects()) {
            break;
        }
    }
    out.sort_by(|a, b| (a.obj_map(), a.mor_map()).cmp(&(b.obj_map(), b.mor_map())));
    out
}

fn bump(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[test]
fn terminal_and_interval_validate() {
    let t = terminal();
    assert_eq!((t.num_objects(), t.num_morphisms()), (1, 1));
    let i = interval();
    assert_eq!((i.num_objects(), i.num_morphisms()), (2, 3));
}

#[test]
fn missing_composite_is_reported() {
    let err = two_arrows_no_composite().build().unwrap_err();
    assert_eq!(
        err,
        CategoryError::MissingComposite {
            g: "g".into(),
            f: "f".into()
        }
    );
    let mut ok = two_arrows_no_composite();
    ok.morphism("gf", "x", "z").compose("g", "f", "gf");
    assert!(ok.build().is_ok());
}

#[test]
fn associativity_violation_is_reported() {
    assert!(matches!(
        broken().build().unwrap_err(),
        CategoryError::AssociativityViolation { .. }
    ));
}

#[test]
fn dangling_and_identity_errors() {
    let mut b = CategoryBuilder::new();
    b.object_with_identity("x").morphism("f", "x", "w");
    assert!(matches!(b.build().unwrap_err(), CategoryError::DanglingId { .. }));

    let mut b = CategoryBuilder::new();
    b.object_with_identity("x")
        .morphism("e", "x", "x")
        .compose("1_x", "e", "1_x")
        .compose("e", "e", "e");
    assert!(matches!(
        b.build().unwrap_err(),
        CategoryError::IdentityLawViolation { .. }
    ));

    let mut b = CategoryBuilder::new();
    b.object("x");
    assert!(matches!(b.build().unwrap_err(), CategoryError::MissingIdentity(_)));
}

#[test]
fn empty_category_is_valid_but_not_connected() {
    let c = CategoryBuilder::new().build().unwrap();
    assert!(c.is_empty());
    assert!(is_connected(&c).is_err());
}

#[test]
fn json_round_trip_is_canonical() {
    let text = r#"{
        "objects": ["y", "x"],
        "morphisms": [{"id": "f", "dom": "x", "cod": "y"},
                      {"id": "1_y", "dom": "y", "cod": "y"},
                      {"id": "1_x", "dom": "x", "cod": "x"}],
        "identities": {"y": "1_y", "x": "1_x"},
        "compose": [["1_y", "f", "f"]]
    }"#;
    let raw: RawCategory = serde_json::from_str(text).unwrap();
    let cat = validate_category(&raw).unwrap();
    assert_eq!(save(&cat), raw.canonical());
    let out = to_json_string(&cat);
    assert_eq!(to_json_string(&from_json_str(&out).unwrap()), out);
}

#[test]
fn mutated_composites_match_law_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..200 {
        let cat = random_category(&mut rng, 8);
        let raw = save(&cat);
        for i in 0..raw.compose.len() {
            let [g, f, h] = raw.compose[i].clone();
            let hid = cat.morphism_by_name(&h).unwrap();
            for alt in cat.hom(cat.dom(hid), cat.cod(hid)) {
                let alt = cat.morphism_name(*alt).to_string();
                if alt == h {
                    continue;
                }
                let mut bad = raw.clone();
                bad.compose[i] = [g.clone(), f.clone(), alt];
                checked += 1;
                assert_eq!(validate_category(&bad).is_ok(), raw_satisfies_laws(&bad));
            }
            let mut dropped = raw.clone();
            dropped.compose.remove(i);
            assert!(matches!(
                validate_category(&dropped),
                Err(CategoryError::MissingComposite { .. })
            ));
        }
    }
    assert!(checked > 0);
}

#[test]
fn product_counts() {
    let two = interval();
    let p = product(&two, &two);
    assert_eq!(p.cat().num_objects(), 4);
    // Oracle: morphisms of 𝟚 × 𝟚 are pairs of morphisms.
    let pairs: BTreeSet<(MorId, MorId)> = two
        .morphisms()
        .flat_map(|a| two.morphisms().map(move |b| (a, b)))
        .collect();
    assert_eq!(pairs.len(), 9);
    assert_eq!(p.cat().num_morphisms(), 9);
    check_laws(p.cat()).unwrap();

    let d = discrete(2);
    let q = product(&d, &d);
    assert_eq!((q.cat().num_objects(), q.cat().num_morphisms()), (4, 4));

    let s = parallel_pair();
    let u = product(&terminal(), &s);
    let p2 = u.p2();
    p2.check().unwrap();
    assert_eq!(u.cat().num_morphisms(), s.num_morphisms());
    let imgs: BTreeSet<MorId> = u.cat().morphisms().map(|m| p2.mor(m)).collect();
    assert_eq!(imgs.len(), s.num_morphisms());
}

#[test]
fn pullbacks_of_identities_and_over_terminal() {
    let s = parallel_pair();
    let id = Functor::identity(&s);
    let pb = pullback(&id, &id).unwrap();
    assert_eq!(pb.cat().num_morphisms(), s.num_morphisms());
    pb.pr_a().check().unwrap();

    let t = terminal();
    let two = interval();
    let f = Functor::constant(&two, &t, ObjId(0));
    let g = Functor::constant(&s, &t, ObjId(0));
    let pb = pullback(&f, &g).unwrap();
    let prod = product(&two, &s);
    assert_eq!(
        save(pb.cat()),
        save(prod.cat()),
        "pullback over the terminal category is the product"
    );
}

#[test]
fn pullback_universal_property_on_cones() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let a = random_category(&mut rng, 5);
        let b = random_category(&mut rng, 5);
        let c = random_category(&mut rng, 5);
        let Some(f) = fincat_core::sample::random_functor(&mut rng, &a, &c, 10_000) else { continue };
        let Some(g) = fincat_core::sample::random_functor(&mut rng, &b, &c, 10_000) else { continue };
        let pb = pullback(&f, &g).unwrap();
        check_laws(pb.cat()).unwrap();
        let x = random_category(&mut rng, 3);
        let Ok(us) = enumerate_functors(&x, &a, 10_000) else { continue };
        let Ok(vs) = enumerate_functors(&x, &b, 10_000) else { continue };
        for u in us.iter().take(5) {
            for v in vs.iter().take(5) {
                let cone = f.after(u).unwrap() == g.after(v).unwrap();
                let induced = pb.induced(u, v);
                assert_eq!(cone, induced.is_some());
                if let Some(k) = induced {
                    k.check().unwrap();
                    assert_eq!(&pb.pr_a().after(&k).unwrap(), u);
                    assert_eq!(&pb.pr_b().after(&k).unwrap(), v);
                    let all = enumerate_functors(&x, pb.cat(), 100_000).unwrap();
                    let matching: Vec<_> = all
                        .iter()
                        .filter(|h| &pb.pr_a().after(h).unwrap() == u && &pb.pr_b().after(h).unwrap() == v)
                        .collect();
                    assert_eq!(matching.len(), 1);
                }
            }
        }
    }
}

#[test]
fn generated_subcategories() {
    let two = interval();
    let empty = Subcategory::generated(&two, [], []);
    assert!(empty.is_empty() && empty.num_morphisms() == 0);
    let f = two.morphism_by_name("f").unwrap();
    assert!(Subcategory::generated(&two, [f], []).is_whole());

    let s = parallel_pair();
    let f = s.morphism_by_name("f").unwrap();
    let piece = Subcategory::generated(&s, [f], []);
    let names: BTreeSet<&str> = piece.morphism_ids().map(|m| s.morphism_name(m)).collect();
    assert_eq!(names, BTreeSet::from(["1_x", "1_y", "f"]));
    assert_eq!(piece.num_objects(), 2);
}

#[test]
fn connectivity_examples() {
    assert!(is_connected(&terminal()).unwrap());
    assert!(!is_connected(&discrete(2)).unwrap());
    assert!(is_connected(&zigzag(4)).unwrap());
}

#[test]
fn functor_enumeration_examples() {
    let s = parallel_pair();
    assert_eq!(enumerate_functors(&terminal(), &s, 100).unwrap().len(), 2);
    let all = enumerate_functors(&s, &s, 100).unwrap();
    assert_eq!(all.len(), 6);
    assert_eq!(all, brute_force_functors(&s, &s));
    assert_eq!(enumerate_functors(&interval(), &terminal(), 100).unwrap().len(), 1);
    assert!(enumerate_functors(&zigzag(6), &zigzag(6), 1000).is_err());
}

#[test]
fn enumeration_matches_brute_force_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..60 {
        let c = random_category(&mut rng, 4);
        let d = random_category(&mut rng, 5);
        if d.num_morphisms().pow(c.num_morphisms() as u32) > 200_000 {
            continue;
        }
        assert_eq!(enumerate_functors(&c, &d, 1 << 30).unwrap(), brute_force_functors(&c, &d));
    }
}

#[test]
fn nat_trans_validation() {
    let two = interval();
    let cx = Functor::constant(&two, &two, two.object_by_name("x").unwrap());
    let id = Functor::identity(&two);
    let comps = vec![two.identity(ObjId(0)), two.morphism_by_name("f").unwrap()];
    let a = NatTrans::new(cx.clone(), id.clone(), comps).unwrap();
    assert!(NatTrans::new(id.clone(), cx.clone(), a.components().to_vec()).is_err());
    let composed = NatTrans::identity(&cx).then(&a).unwrap();
    composed.check().unwrap();
}

fn category_strategy() -> impl Strategy<Value = Arc<FinCat>> {
    any::<u64>().prop_map(|seed| random_category(&mut ChaCha8Rng::seed_from_u64(seed), 6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projections_split_the_diagonal(c in category_strategy()) {
        let p = product(&c, &c);
        let delta = diagonal(&p);
        delta.check().unwrap();
        prop_assert_eq!(p.p1().after(&delta).unwrap(), Functor::identity(&c));
        prop_assert_eq!(p.p2().after(&delta).unwrap(), Functor::identity(&c));
        prop_assert!(check_laws(p.cat()).is_ok());
        prop_assert_eq!(p.cat().num_morphisms(), c.num_morphisms() * c.num_morphisms());
    }

    #[test]
    fn generation_is_monotone_and_idempotent(c in category_strategy(), mask in any::<u32>(), extra in any::<u32>()) {
        let seeds: Vec<MorId> = c.morphisms().filter(|m| mask >> (m.0 % 32) & 1 == 1).collect();
        let more: Vec<MorId> = c.morphisms().filter(|m| (mask | extra) >> (m.0 % 32) & 1 == 1).collect();
        let s = Subcategory::generated(&c, seeds.clone(), []);
        prop_assert!(s.check().is_ok());
        let again = Subcategory::generated(&c, s.morphism_ids().collect::<Vec<_>>(), []);
        prop_assert_eq!(&again, &s);
        let bigger = Subcategory::generated(&c, more, []);
        prop_assert!(s.is_subset(&bigger));
    }

    #[test]
    fn save_load_round_trip(c in category_strategy()) {
        let text = to_json_string(&c);
        let back = from_json_str(&text).unwrap();
        prop_assert_eq!(&back, &*c);
        prop_assert_eq!(to_json_string(&back), text);
    }

    #[test]
    fn materialized_pieces_are_categories(c in category_strategy(), mask in any::<u32>()) {
        let seeds: Vec<MorId> = c.morphisms().filter(|m| mask >> (m.0 % 32) & 1 == 1).collect();
        let s = Subcategory::generated(&c, seeds, []);
        let (cat, inc) = s.materialize();
        prop_assert!(check_laws(&cat).is_ok());
        prop_assert!(inc.check().is_ok());
        prop_assert_eq!(cat.num_morphisms(), s.num_morphisms());
    }
}
