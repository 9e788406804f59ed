use std::sync::Arc;

use fincat_core::sample::random_category;
use fincat_core::standard::{discrete, interval, parallel_pair, terminal};
use fincat_core::*;
use fibrations::*;
use homotopy::StrongHomotopy;
use invariants::{distance_fibration, secat, svarc_genus, Budget, Mode, SectionMode};
use paths::{truncated_path_category, Path, DEFAULT_MORPHISM_CAP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u64 = 1_000_000;

/// Replays a solution by plain functor composition, without `validate`.
fn replay(p: &Functor, problem: &LiftingProblem, sol: &LiftSolution) {
    let h = problem.homotopy();
    assert_eq!(sol.lift.len(), h.len());
    assert_eq!(&sol.projection.after(&sol.embedding).unwrap(), p);
    assert_eq!(sol.lift.start(), &sol.embedding.after(problem.floor()).unwrap());
    for k in 0..=h.len() {
        assert_eq!(&sol.projection.after(sol.lift.stage(k)).unwrap(), h.stage(k), "stage {k}");
    }
    for k in 0..h.len() {
        let down: Vec<MorId> = sol.lift.link(k).components().iter().map(|&c| sol.projection.mor(c)).collect();
        assert_eq!(down, h.link(k).components(), "link {k}");
    }
}

fn solve(proc: &impl LiftProcedure, problem: &LiftingProblem) -> LiftSolution {
    let sol = proc.lift(problem).unwrap();
    validate(proc.projection(), problem, &sol).unwrap();
    replay(proc.projection(), problem, &sol);
    sol
}

fn small_source(rng: &mut ChaCha8Rng) -> Arc<FinCat> {
    loop {
        let x = random_category(rng, 4);
        if x.num_objects() <= 3 {
            return x;
        }
    }
}

fn random_problems(rng: &mut ChaCha8Rng, p: &Functor, count: usize, max_len: usize) -> Vec<LiftingProblem> {
    let mut out = Vec::new();
    while out.len() < count {
        let x = small_source(rng);
        let len = rng.gen_range(0..=max_len);
        if let Some(problem) = random_problem(rng, p, &x, len, CAP).unwrap() {
            out.push(problem);
        }
    }
    out
}

fn pair_in(prod: &Product, a: &str, b: &str) -> ObjId {
    let (l, r) = (prod.left(), prod.right());
    prod.obj(l.object_by_name(a).unwrap(), r.object_by_name(b).unwrap())
}

fn point_homotopy(prod: &Product, stages: &[(&str, &str)], links: &[(&str, &str)]) -> StrongHomotopy {
    let point = terminal();
    let target = prod.cat();
    let fs: Vec<Functor> = stages
        .iter()
        .map(|&(a, b)| Functor::constant(&point, target, pair_in(prod, a, b)))
        .collect();
    let (l, r) = (prod.left(), prod.right());
    let ls = links
        .iter()
        .enumerate()
        .map(|(k, &(u, v))| {
            let m = prod.mor(l.morphism_by_name(u).unwrap(), r.morphism_by_name(v).unwrap());
            let (from, to) = if k % 2 == 0 { (k, k + 1) } else { (k + 1, k) };
            NatTrans::new(fs[from].clone(), fs[to].clone(), vec![m]).unwrap()
        })
        .collect();
    StrongHomotopy::new(fs, ls).unwrap()
}

#[test]
fn constant_homotopy_lifts_to_itself() {
    let pc = truncated_path_category(&parallel_pair(), 2, DEFAULT_MORPHISM_CAP).unwrap();
    let lifter = PathFibrationLift::from_path_category(pc);
    let e = lifter.level().cat().clone();
    for o in e.objects() {
        let floor = Functor::constant(&terminal(), &e, o);
        let h = StrongHomotopy::constant(&lifter.projection().after(&floor).unwrap());
        let problem = lifter.problem(h, floor.clone()).unwrap();
        let sol = solve(&lifter, &problem);
        assert!(sol.length_preserving);
        assert_eq!(sol.lift.stages(), &[sol.embedding.after(&floor).unwrap()]);
    }
}

#[test]
fn staircase_over_the_arrow() {
    let two = interval();
    let pc = truncated_path_category(&two, 2, DEFAULT_MORPHISM_CAP).unwrap();
    let lifter = PathFibrationLift::from_path_category(pc);
    let (x, y) = (two.object_by_name("x").unwrap(), two.object_by_name("y").unwrap());
    let f = two.morphism_by_name("f").unwrap();
    let path = Path::new(&two, vec![x, y, y], vec![f, two.identity(y)]).unwrap();
    let e = lifter.level().cat().clone();
    let floor = Functor::constant(&terminal(), &e, lifter.level().object_of(&path).unwrap());
    let h = point_homotopy(lifter.product(), &[("x", "y"), ("y", "y"), ("x", "y")], &[("f", "1_y"), ("f", "1_y")]);
    let problem = lifter.problem(h, floor).unwrap();
    let sol = solve(&lifter, &problem);
    assert_eq!(sol.lift.stages().len(), 3);
    assert!(sol.length_preserving);
}

#[test]
fn random_path_fibration_lifts_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 50 {
        let b = random_category(&mut rng, 6);
        if b.num_objects() < 2 {
            continue;
        }
        let pc = truncated_path_category(&b, 2, DEFAULT_MORPHISM_CAP).unwrap();
        let lifter = PathFibrationLift::from_path_category(pc);
        for problem in random_problems(&mut rng, lifter.projection(), 5, 4) {
            let sol = solve(&lifter, &problem);
            assert!(sol.length_preserving);
            done += 1;
        }
    }
}

#[test]
fn replacement_of_identity_on_point() {
    let id = Functor::identity(&terminal());
    let r = fibrant_replacement(&id, 2, DEFAULT_MORPHISM_CAP).unwrap();
    assert_eq!(r.total().num_objects(), 1);
    assert_eq!(r.total().num_morphisms(), 1);
}

#[test]
fn replacement_of_constant_collects_paths_from_the_point() {
    let d = parallel_pair();
    let x = d.object_by_name("x").unwrap();
    let f = Functor::constant(&terminal(), &d, x);
    let r = fibrant_replacement(&f, 2, DEFAULT_MORPHISM_CAP).unwrap();
    let from_x = paths::all_paths(&d, 2, None).into_iter().filter(|p| p.start() == x).count();
    assert_eq!(r.total().num_objects(), from_x);
    for o in r.total().objects() {
        assert_eq!(r.level().path(r.pullback().pr_b().obj(o)).start(), x);
    }
}

#[test]
fn replacement_of_identity_on_arrow_has_zero_genus() {
    let two = interval();
    let id = Functor::identity(&two);
    let r = fibrant_replacement(&id, 2, DEFAULT_MORPHISM_CAP).unwrap();
    let budget = Budget::default();
    let s = secat(r.project(), SectionMode::Weak, &budget).unwrap();
    let g = svarc_genus(&id, Mode::Weak, &budget).unwrap();
    assert_eq!(s.value.exact(), Some(0));
    assert_eq!(g.value.exact(), Some(0));
}

#[test]
fn replacement_equations_hold_for_random_functors() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 10 {
        let c = random_category(&mut rng, 4);
        let d = random_category(&mut rng, 5);
        let Some(f) = fincat_core::sample::random_functor(&mut rng, &c, &d, CAP) else { continue };
        let r = fibrant_replacement(&f, 2, DEFAULT_MORPHISM_CAP).unwrap();
        assert_eq!(r.project().after(r.include()).unwrap(), f);
        assert_eq!(r.retract().after(r.include()).unwrap(), Functor::identity(&c));
        r.weak_retraction()
            .check_endpoints(&r.include().after(r.retract()).unwrap(), &Functor::identity(r.total()))
            .unwrap();
        done += 1;
    }
}

#[test]
fn fibrant_lifts_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 30 {
        let c = random_category(&mut rng, 4);
        let d = random_category(&mut rng, 5);
        let Some(f) = fincat_core::sample::random_functor(&mut rng, &c, &d, CAP) else { continue };
        let r = fibrant_replacement(&f, 2, DEFAULT_MORPHISM_CAP).unwrap();
        let lifter = FibrantLift::new(r);
        for problem in random_problems(&mut rng, lifter.projection(), 3, 4) {
            let sol = solve(&lifter, &problem);
            assert!(sol.length_preserving);
            done += 1;
        }
    }
}

#[test]
fn fibrant_lift_of_constant_homotopy_stays_put() {
    let two = interval();
    let r = fibrant_replacement(&Functor::identity(&two), 2, DEFAULT_MORPHISM_CAP).unwrap();
    let e = r.total().clone();
    for o in e.objects() {
        let floor = Functor::constant(&terminal(), &e, o);
        let h = StrongHomotopy::constant(&r.project().after(&floor).unwrap());
        let problem = LiftingProblem::new(r.project(), h, floor.clone()).unwrap();
        let sol = fibrant_lift(&r, &problem).unwrap();
        validate(r.project(), &problem, &sol).unwrap();
        assert_eq!(sol.lift.len(), 0);
    }
}

#[test]
fn pullback_along_identity_keeps_lifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = parallel_pair();
    let pc = truncated_path_category(&b, 2, DEFAULT_MORPHISM_CAP).unwrap();
    let lifter = PathFibrationLift::from_path_category(pc);
    let id = Functor::identity(lifter.projection().target());
    let pulled = pullback_fibration(lifter.clone(), &id).unwrap();
    for problem in random_problems(&mut rng, pulled.projection(), 10, 3) {
        let sol = solve(&pulled, &problem);
        let floor = pulled.pullback().pr_b().after(problem.floor()).unwrap();
        let direct = solve(&lifter, &lifter.problem(problem.homotopy().clone(), floor).unwrap());
        let back = sol.projection.clone();
        assert_eq!(back.target(), id.source());
        // Forget the identity factor and compare stage by stage.
        let total = Pullback::new(&id, &direct.projection).unwrap();
        assert!(same_category(total.cat(), &sol.total));
        for k in 0..=sol.lift.len() {
            assert_eq!(&total.pr_b().after(sol.lift.stage(k)).unwrap(), direct.lift.stage(k));
        }
    }
}

#[test]
fn projections_lift_as_pullbacks_of_terminal_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut done = 0;
    while done < 20 {
        let c = random_category(&mut rng, 4);
        let d = random_category(&mut rng, 4);
        let to_point = Functor::constant(&c, &terminal(), ObjId(0));
        let pulled = pullback_fibration(TerminalLift::to_terminal(&d), &to_point).unwrap();
        let prod = Product::new(&c, &d);
        assert!(same_category(pulled.pullback().cat(), prod.cat()));
        assert_eq!(pulled.projection().with_categories(prod.cat().clone(), c.clone()), prod.p1());
        for problem in random_problems(&mut rng, pulled.projection(), 1, 4) {
            let sol = solve(&pulled, &problem);
            assert!(same_category(&sol.total, prod.cat()));
            done += 1;
        }
    }
}

#[test]
fn distance_fibration_inherits_path_lifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let c = interval();
    let d = parallel_pair();
    let funs = enumerate_functors(&c, &d, CAP).unwrap();
    for f in &funs {
        for g in &funs {
            let q = distance_fibration(f, g, 2, DEFAULT_MORPHISM_CAP).unwrap();
            let pair = q.paths.product.pairing(f, g).unwrap();
            let lifter = PathFibrationLift::from_path_category(q.paths.clone());
            let pulled = pullback_fibration(lifter, &pair).unwrap();
            assert!(same_category(pulled.pullback().cat(), q.pullback.cat()));
            assert_eq!(pulled.projection(), &q.q);
            for problem in random_problems(&mut rng, &q.q, 2, 3) {
                solve(&pulled, &problem);
            }
        }
    }
}

#[test]
fn start_projection_lifts_through_the_composite() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let b = interval();
    let pc = truncated_path_category(&b, 2, DEFAULT_MORPHISM_CAP).unwrap();
    let start = pc.level.start_functor();
    let lifter = PathFibrationLift::from_path_category(pc);
    let to_point = Functor::constant(&b, &terminal(), ObjId(0));
    let first_factor = pullback_fibration(TerminalLift::to_terminal(&b), &to_point).unwrap();
    let composite = compose_fibrations(lifter, first_factor).unwrap();
    assert_eq!(composite.projection().with_categories(start.source().clone(), b.clone()), start);
    for problem in random_problems(&mut rng, composite.projection(), 10, 4) {
        solve(&composite, &problem);
    }
}

#[test]
fn identity_composite_is_identity() {
    let b = parallel_pair();
    let c = compose_fibrations(IdentityLift::new(&b), IdentityLift::new(&b)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for problem in random_problems(&mut rng, c.projection(), 5, 3) {
        let sol = solve(&c, &problem);
        assert_eq!(&sol.lift, problem.homotopy());
    }
}

#[test]
fn identity_lifts_everything() {
    let b = interval();
    let report = check_fibration(&Functor::identity(&b), &Battery::default()).unwrap();
    assert!(report.problems.len() > 0);
    assert_eq!(report.strong_lifted(), report.problems.len());
    assert!(report.agree());
    assert_eq!(report.verdict(), "no counterexample within battery");
}

#[test]
fn map_to_point_lifts_everything() {
    let p = Functor::constant(&discrete(2), &terminal(), ObjId(0));
    let report = check_fibration(&p, &Battery::default()).unwrap();
    assert_eq!(report.strong_lifted(), report.problems.len());
    assert_eq!(report.weak_lifted(), report.problems.len());
    assert!(report.length_preserving());
}

#[test]
fn point_inclusion_has_a_counterexample() {
    let two = interval();
    let x = two.object_by_name("x").unwrap();
    let p = Functor::constant(&terminal(), &two, x);
    let report = check_fibration(&p, &Battery::default()).unwrap();
    assert!(report.agree());
    let bad = report.counterexample().expect("strong counterexample");
    assert!(report.weak_counterexample().is_some());
    assert_eq!(report.verdict(), "counterexample");
    assert!(strong_lift(&p, bad, 1000).unwrap().is_none());
    assert!(weak_lift(&p, bad).unwrap().is_none());
}

#[test]
fn battery_verdicts_agree_on_small_functors() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let battery = Battery {
        max_problems: 60,
        ..Battery::default()
    };
    for _ in 0..8 {
        let e = random_category(&mut rng, 4);
        let b = random_category(&mut rng, 4);
        let Some(p) = fincat_core::sample::random_functor(&mut rng, &e, &b, CAP) else { continue };
        let report = check_fibration(&p, &battery).unwrap();
        assert!(report.agree(), "disagreements {:?}", report.disagreements());
    }
}

#[test]
fn search_lift_matches_battery_verdict() {
    let two = interval();
    let p = Functor::constant(&terminal(), &two, two.object_by_name("y").unwrap());
    let lifter = SearchLift::new(p.clone(), 10_000);
    let report = check_fibration(&p, &Battery::default()).unwrap();
    for (problem, cell) in report.problems.iter().zip(&report.cells) {
        match lifter.lift(problem) {
            Ok(sol) => {
                assert!(cell.strong);
                validate(&p, problem, &sol).unwrap();
            }
            Err(LiftError::NoLift) => assert!(!cell.strong),
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn problems_round_trip_through_json() {
    let two = interval();
    let p = Functor::identity(&two);
    let report = check_fibration(&p, &Battery::default()).unwrap();
    let text = serde_json::to_string(&report.to_json()).unwrap();
    let back: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(back["problems"], report.problems.len());
    assert_eq!(back["agree"], true);
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

    #[test]
    fn staircase_lifts_validate_for_any_seed(seed in 0u64..u64::MAX) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_category(&mut rng, 5);
        let pc = truncated_path_category(&b, 2, DEFAULT_MORPHISM_CAP).unwrap();
        let lifter = PathFibrationLift::from_path_category(pc);
        for problem in random_problems(&mut rng, lifter.projection(), 2, 3) {
            let sol = solve(&lifter, &problem);
            proptest::prop_assert!(sol.length_preserving);
        }
    }

    #[test]
    fn fibrant_lifts_validate_for_any_seed(seed in 0u64..u64::MAX) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_category(&mut rng, 3);
        let d = random_category(&mut rng, 4);
        if let Some(f) = fincat_core::sample::random_functor(&mut rng, &c, &d, CAP) {
            let lifter = FibrantLift::new(fibrant_replacement(&f, 2, DEFAULT_MORPHISM_CAP).unwrap());
            for problem in random_problems(&mut rng, lifter.projection(), 2, 3) {
                solve(&lifter, &problem);
            }
        }
    }
}
