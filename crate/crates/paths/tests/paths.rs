use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use fincat_core::sample::{random_category, random_functor};
use fincat_core::standard::{interval, parallel_pair, terminal};
use fincat_core::{check_laws, pullback, FinCat, Functor, MorId, ObjId, Product};
use paths::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lit(base: &FinCat, s: &[&str]) -> Path {
    exact_path_from_literal(base, s).unwrap()
}

fn random_path<R: Rng>(rng: &mut R, base: &FinCat, len: usize) -> Path {
    loop {
        let mut objects = vec![ObjId(rng.gen_range(0..base.num_objects()) as u32)];
        let mut arrows = Vec::new();
        for i in 0..len {
            let cur = *objects.last().unwrap();
            let opts: Vec<MorId> = if is_forward(i) {
                base.outgoing(cur).to_vec()
            } else {
                base.incoming(cur).to_vec()
            };
            let a = opts[rng.gen_range(0..opts.len())];
            arrows.push(a);
            objects.push(if is_forward(i) { base.cod(a) } else { base.dom(a) });
        }
        if let Ok(p) = Path::new(base, objects, arrows) {
            return p;
        }
    }
}

#[test]
fn normalization_examples() {
    let two = interval();
    let x = two.object_by_name("x").unwrap();
    let c = Path::constant(&two, x, 4);
    assert_eq!(c.normal_form(&two), Path::constant(&two, x, 0));

    let odd = path_from_literal(&*two, &["x", "f", "y"]).unwrap();
    assert_eq!(odd, lit(&two, &["x", "f", "y", "1_y", "y"]));
    assert!(odd.is_reduced(&two));

    let s = parallel_pair();
    let i = lit(&s, &["x", "f", "y", "f", "x", "f", "y", "g", "x"]);
    assert_eq!(i.normal_form(&s), i);
    let x = s.object_by_name("x").unwrap();
    assert_eq!(endpoints(&i), (x, x));
}

#[test]
fn reverse_examples() {
    let s = parallel_pair();
    let p = lit(&s, &["x", "f", "y", "g", "x"]);
    assert_eq!(reverse_path(&p), lit(&s, &["x", "g", "y", "f", "x"]));
    let c = Path::constant(&s, ObjId(0), 2);
    assert_eq!(reverse_path(&c), c);
}

#[test]
fn localized_example_morphism() {
    let s = parallel_pair();
    let i = lit(&s, &["x", "f", "y", "f", "x", "f", "y", "g", "x"]);
    let j = lit(&s, &["x", "f", "y", "g", "x"]);
    let t = Instant::now();
    let out = find_path_morphism(&s, &i, &j, PathSearchOptions::default()).unwrap();
    let PathSearchOutcome::Found(m) = out else { panic!("expected a morphism") };
    m.check(&s, 3).unwrap();
    let [Leg::Forward(pm)] = m.legs() else { panic!("expected a direct morphism") };
    let names: Vec<&str> = pm.components().iter().map(|&c| s.morphism_name(c)).collect();
    assert_eq!(names, ["1_x", "1_y", "f", "1_y", "1_x"]);
    assert_eq!(pm.reparam().map(), &[0, 1, 1, 1, 2]);

    let strict = PathSearchOptions {
        mode: SearchMode::Strict,
        ..Default::default()
    };
    assert_eq!(
        find_path_morphism(&s, &i, &j, strict).unwrap(),
        PathSearchOutcome::NotFound { exhaustive: true }
    );
    assert!(t.elapsed().as_secs_f64() < 1.0);
}

/// Oracle for the example: every reparametrization and component choice.
#[test]
fn example_morphism_is_unique_by_brute_force() {
    let s = parallel_pair();
    let i = lit(&s, &["x", "f", "y", "f", "x", "f", "y", "g", "x"]);
    let j = lit(&s, &["x", "f", "y", "g", "x"]);
    let mut found = Vec::new();
    for code in 0..3usize.pow(5) {
        let map: Vec<usize> = (0..5).map(|k| code / 3usize.pow(k) % 3).collect();
        let Ok(r) = Reparam::new(2, map) else { continue };
        let homs: Vec<Vec<MorId>> = (0..5).map(|k| s.hom(i.object(k), j.object(r.apply(k))).to_vec()).collect();
        let mut idx = vec![0usize; 5];
        'outer: loop {
            if homs.iter().all(|h| !h.is_empty()) {
                let comps = (0..5).map(|k| homs[k][idx[k]]).collect();
                if let Ok(m) = PathMorphism::new(&s, i.clone(), j.clone(), r.clone(), comps) {
                    found.push(m);
                }
            } else {
                break;
            }
            for k in 0..5 {
                idx[k] += 1;
                if idx[k] < homs[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
    }
    assert_eq!(found.len(), 1);
}

#[test]
fn identity_search_and_stutter_inversion() {
    let two = interval();
    let p = lit(&two, &["x", "f", "y", "1_y", "y"]);
    let PathSearchOutcome::Found(m) = find_path_morphism(&two, &p, &p, PathSearchOptions::default()).unwrap() else {
        panic!()
    };
    let [Leg::Forward(pm)] = m.legs() else { panic!() };
    assert_eq!(pm, &PathMorphism::identity(&two, &p));

    // A path that only maps to a shorter one after padding: the constant
    // path at x reaches (x f y 1 y) only through an inserted identity pair.
    let x = two.object_by_name("x").unwrap();
    let c = Path::constant(&two, x, 0);
    let out = find_path_morphism(&two, &c, &p, PathSearchOptions::default()).unwrap();
    let PathSearchOutcome::Found(m) = out else { panic!() };
    m.check(&two, 3).unwrap();
    assert!(matches!(m.legs()[0], Leg::Backward(_)));

    let y = two.object_by_name("y").unwrap();
    let out = find_path_morphism(&two, &Path::constant(&two, y, 0), &c, PathSearchOptions::default()).unwrap();
    assert_eq!(out, PathSearchOutcome::NotFound { exhaustive: true });
}

#[test]
fn truncation_of_terminal_and_level_zero() {
    let t = terminal();
    for len in [0, 2, 4] {
        let pc = truncated_path_category(&t, len, DEFAULT_MORPHISM_CAP).unwrap();
        assert_eq!((pc.level.cat().num_objects(), pc.level.cat().num_morphisms()), (1, 1));
    }
    let s = parallel_pair();
    let pc = truncated_path_category(&s, 0, DEFAULT_MORPHISM_CAP).unwrap();
    let p0 = pc.level.start_functor();
    p0.check().unwrap();
    assert_eq!(pc.level.cat().num_morphisms(), s.num_morphisms());
    let imgs: BTreeSet<MorId> = pc.level.cat().morphisms().map(|m| p0.mor(m)).collect();
    assert_eq!(imgs.len(), s.num_morphisms());
    let delta = fincat_core::diagonal(&pc.product);
    assert_eq!(pc.endpoint, delta.after(&p0).unwrap());
}

/// Reduced paths of length at most `max`, straight from the definition.
fn reduced_paths_oracle(base: &FinCat, max: usize) -> BTreeSet<Path> {
    let mut out = BTreeSet::new();
    for len in (0..=max).step_by(2) {
        for p in all_paths(base, len, None) {
            if p.is_reduced(base) {
                out.insert(p);
            }
        }
    }
    out
}

#[test]
fn level_two_of_interval_matches_reduced_paths() {
    let two = interval();
    let pc = truncated_path_category(&two, 2, DEFAULT_MORPHISM_CAP).unwrap();
    assert_eq!(pc.level.cat().num_objects(), 5);
    let forms: BTreeSet<Path> = pc.level.cat().objects().map(|o| pc.level.normal_form(o)).collect();
    assert_eq!(forms, reduced_paths_oracle(&two, 2));
    check_laws(pc.level.cat()).unwrap();
    pc.endpoint.check().unwrap();
    for o in pc.level.cat().objects() {
        let p = pc.level.path(o);
        assert_eq!(pc.product.split_obj(pc.endpoint.obj(o)), p.endpoints());
    }
}

#[test]
fn normal_forms_cover_reduced_paths_up_to_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let c = random_category(&mut rng, 5);
        for len in [2, 4] {
            let level = LevelCategory::all(&c, len, DEFAULT_MORPHISM_CAP).unwrap();
            let forms: BTreeSet<Path> = level.cat().objects().map(|o| level.normal_form(o)).collect();
            assert_eq!(forms, reduced_paths_oracle(&c, len));
        }
    }
}

#[test]
fn path_categories_are_categories_and_functorial() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..15 {
        let c = random_category(&mut rng, 5);
        let d = random_category(&mut rng, 5);
        let Some(g) = random_functor(&mut rng, &c, &d, 10_000) else { continue };
        let pc = LevelCategory::all(&c, 2, DEFAULT_MORPHISM_CAP).unwrap();
        let pd = LevelCategory::all(&d, 2, DEFAULT_MORPHISM_CAP).unwrap();
        check_laws(pc.cat()).unwrap();
        let pg = pc.map_functor(&g, &pd).expect("image paths exist");
        pg.check().unwrap();
        for j in [0, 2] {
            assert_eq!(pd.evaluation(j).after(&pg).unwrap(), g.after(&pc.evaluation(j)).unwrap());
        }
    }
}

#[test]
fn product_paths_split_componentwise() {
    let two = interval();
    let s = parallel_pair();
    let prod = Product::new(&two, &s);
    for len in [0, 2, 4] {
        let joint: BTreeSet<(Path, Path)> = all_paths(prod.cat(), len, None)
            .into_iter()
            .map(|p| {
                let a = p.map(&prod.p1());
                let b = p.map(&prod.p2());
                (a, b)
            })
            .collect();
        let pairs: BTreeSet<(Path, Path)> = all_paths(&two, len, None)
            .into_iter()
            .flat_map(|a| all_paths(&s, len, None).into_iter().map(move |b| (a.clone(), b)))
            .collect();
        assert_eq!(joint, pairs);
        assert_eq!(all_paths(prod.cat(), len, None).len(), pairs.len());
    }
}

#[test]
fn pullback_of_endpoints_gives_pairs_with_paths() {
    let two = interval();
    let pc = truncated_path_category(&two, 2, DEFAULT_MORPHISM_CAP).unwrap();
    let x = two.object_by_name("x").unwrap();
    let f = Functor::constant(&two, &two, x);
    let g = Functor::identity(&two);
    let fg = pc.product.pairing(&f, &g).unwrap();
    let pb = pullback(&fg, &pc.endpoint).unwrap();
    let got: BTreeSet<(ObjId, Path)> = pb
        .cat()
        .objects()
        .map(|o| (pb.pr_a().obj(o), pc.level.path(pb.pr_b().obj(o)).clone()))
        .collect();
    let mut want = BTreeSet::new();
    for c in two.objects() {
        for p in all_paths(&two, 2, None) {
            if p.start() == f.obj(c) && p.end() == g.obj(c) {
                want.insert((c, p));
            }
        }
    }
    assert_eq!(got, want);
}

fn category_strategy() -> impl Strategy<Value = Arc<FinCat>> {
    any::<u64>().prop_map(|seed| random_category(&mut ChaCha8Rng::seed_from_u64(seed), 6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn reverse_swaps_endpoints(c in category_strategy(), seed in any::<u64>(), half in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_path(&mut rng, &c, 2 * half);
        prop_assert_eq!(reverse_path(&p).endpoints(), (p.end(), p.start()));
        prop_assert_eq!(reverse_path(&reverse_path(&p)), p.clone());
        prop_assert!(reverse_path(&p).check(&c).is_ok());
    }

    #[test]
    fn concat_laws(c in category_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_path(&mut rng, &c, 2);
        let unit = Path::constant(&c, p.end(), 0);
        prop_assert_eq!(concat_paths(&p, &unit).unwrap().normal_form(&c), p.normal_form(&c));
        let back = concat_paths(&p, &reverse_path(&p)).unwrap();
        prop_assert_eq!(back.endpoints(), (p.start(), p.start()));
        // Associativity on three composable paths.
        let q = {
            let q = random_path(&mut rng, &c, 2);
            if q.start() == p.end() { q } else { Path::constant(&c, p.end(), 2) }
        };
        let r = Path::constant(&c, q.end(), 2);
        let left = concat_paths(&concat_paths(&p, &q).unwrap(), &r).unwrap();
        let right = concat_paths(&p, &concat_paths(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(left.normal_form(&c), right.normal_form(&c));
        prop_assert_eq!(left.len(), p.len() + q.len() + r.len());
    }

    #[test]
    fn normalization_is_idempotent_and_w_invariant(c in category_strategy(), seed in any::<u64>(), d in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_path(&mut rng, &c, 4);
        let n = p.normal_form(&c);
        prop_assert_eq!(n.normal_form(&c), n.clone());
        prop_assert!(n.is_reduced(&c));
        for w in stutter_expansions(&c, &p, d) {
            prop_assert!(w.check(&c).is_ok());
            prop_assert!(w.is_w(&c));
            prop_assert_eq!(w.from().normal_form(&c), n.clone());
        }
    }

    #[test]
    fn found_morphisms_validate(c in category_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_path(&mut rng, &c, 2);
        let q = random_path(&mut rng, &c, 2);
        for mode in [SearchMode::Localized, SearchMode::Strict] {
            let opts = PathSearchOptions { mode, ..Default::default() };
            if let PathSearchOutcome::Found(m) = find_path_morphism(&c, &p, &q, opts).unwrap() {
                prop_assert!(m.check(&c, 3).is_ok());
                prop_assert_eq!(m.source(), &p);
                prop_assert_eq!(m.target(), &q);
            }
        }
    }
}
