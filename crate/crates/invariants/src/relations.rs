use std::sync::Arc;

use fincat_core::standard::terminal;
use fincat_core::{
    connected_components, diagonal, enumerate_functors, FinCat, Functor, ObjId, Product, Pullback,
};
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::compute::{ccat, cdist, ctc, secat, svarc_genus, Budget, InvariantError};
use crate::result::{InvariantResult, Mode, SectionMode, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Debug, Clone)]
pub struct Relation {
    pub name: String,
    /// `lhs <= rhs` or `lhs = rhs`.
    pub equality: bool,
    pub lhs: Value,
    pub rhs: Value,
    pub status: Status,
}

#[derive(Debug, Clone, Default)]
pub struct RelationReport {
    pub relations: Vec<Relation>,
}

impl RelationReport {
    pub fn violations(&self) -> Vec<&Relation> {
        self.relations.iter().filter(|r| r.status == Status::Fail).collect()
    }

    pub fn to_json(&self) -> Json {
        json!({
            "relations": self.relations.iter().map(|r| json!({
                "name": r.name,
                "relation": if r.equality { "=" } else { "<=" },
                "lhs": r.lhs.to_string(),
                "rhs": r.rhs.to_string(),
                "status": match &r.status {
                    Status::Pass => "pass".to_string(),
                    Status::Fail => "fail".to_string(),
                    Status::Skipped(why) => format!("skipped: {why}"),
                },
            })).collect::<Vec<_>>(),
            "violations": self.violations().len(),
        })
    }
}

type Computed = Result<InvariantResult, InvariantError>;

fn relate(name: String, equality: bool, lhs: &Computed, rhs: &Computed) -> Relation {
    let (l, r) = match (lhs, rhs) {
        (Ok(l), Ok(r)) => (l.value, r.value),
        (Err(e), _) | (_, Err(e)) => {
            return Relation {
                name,
                equality,
                lhs: Value::Unknown { lower: 0, upper: None },
                rhs: Value::Unknown { lower: 0, upper: None },
                status: Status::Skipped(e.to_string()),
            }
        }
    };
    let status = if !l.is_known() || !r.is_known() {
        Status::Skipped("budget exhausted".into())
    } else if equality {
        if l == r {
            Status::Pass
        } else {
            Status::Fail
        }
    } else if l.le(r) == Some(true) {
        Status::Pass
    } else {
        Status::Fail
    };
    Relation {
        name,
        equality,
        lhs: l,
        rhs: r,
        status,
    }
}

fn skipped(name: String, why: &str) -> Relation {
    Relation {
        name,
        equality: false,
        lhs: Value::Unknown { lower: 0, upper: None },
        rhs: Value::Unknown { lower: 0, upper: None },
        status: Status::Skipped(why.into()),
    }
}

/// Test functor pairs `C → C`: a constant against the identity, the
/// identity against itself, and the first against the last enumerated.
fn sample_pairs(c: &Arc<FinCat>, cap: u64) -> Vec<(String, Functor, Functor)> {
    let id = Functor::identity(c);
    let c0 = Functor::constant(c, c, ObjId(0));
    let mut out = vec![
        (format!("(const_{}, id)", c.object_name(ObjId(0))), c0, id.clone()),
        ("(id, id)".to_string(), id.clone(), id),
    ];
    if let Ok(all) = enumerate_functors(c, c, cap) {
        if all.len() > 1 {
            out.push(("(first, last)".to_string(), all[0].clone(), all[all.len() - 1].clone()));
        }
    }
    out
}

/// Evaluates the order relations among the invariants on `c` and on
/// functors built from it. Each item is computed independently; budget
/// failures mark the item skipped.
pub fn verify_relations(c: &Arc<FinCat>, budget: &Budget) -> RelationReport {
    if c.num_objects() == 0 {
        return RelationReport::default();
    }
    let connected = connected_components(c).len() == 1;
    let ((ccat_w, ccat_s), (ctc_w, ctc_s)) = rayon::join(
        || rayon::join(|| ccat(c, Mode::Weak, budget), || ccat(c, Mode::Strong, budget)),
        || {
            if connected {
                rayon::join(|| Some(ctc(c, Mode::Weak, budget)), || Some(ctc(c, Mode::Strong, budget)))
            } else {
                (None, None)
            }
        },
    );
    let prod = Product::new(c, c);
    let pt = terminal();
    let mut jobs: Vec<Box<dyn Fn() -> Vec<Relation> + Send + Sync + '_>> = Vec::new();

    jobs.push(Box::new(|| vec![relate("ccat_w = ccat".into(), true, &ccat_w, &ccat_s)]));
    jobs.push(Box::new(|| match (&ctc_w, &ctc_s) {
        (Some(w), Some(s)) => vec![relate("ctc_w = ctc".into(), true, w, s)],
        _ => vec![skipped("ctc_w = ctc".into(), "disconnected")],
    }));
    for (label, f, g) in sample_pairs(c, budget.functor_cap) {
        let ccat_w = &ccat_w;
        jobs.push(Box::new(move || {
            let w = cdist(&f, &g, Mode::Weak, budget);
            let s = cdist(&f, &g, Mode::Strong, budget);
            let back = cdist(&g, &f, Mode::Weak, budget);
            let mut out = vec![
                relate(format!("cD_w{label} <= cD{label}"), false, &w, &s),
                relate(format!("cD_w{label} = cD{label} (finite)"), true, &w, &s),
                relate(format!("cD_w{label} symmetric"), true, &w, &back),
            ];
            if connected {
                out.push(relate(format!("cD_w{label} <= ccat_w"), false, &w, ccat_w));
            } else {
                out.push(skipped(format!("cD_w{label} <= ccat_w"), "disconnected"));
            }
            out
        }));
    }
    // Composition: SG_w(G) <= SG_w(G ∘ F).
    {
        let (prod, pt) = (&prod, &pt);
        jobs.push(Box::new(move || {
            let g = prod.p1();
            let gf = g.after(&diagonal(prod)).unwrap();
            vec![relate(
                "SG_w(p1) <= SG_w(p1 ∘ Δ)".into(),
                false,
                &svarc_genus(&g, Mode::Weak, budget),
                &svarc_genus(&gf, Mode::Weak, budget),
            )]
        }));
        jobs.push(Box::new(move || {
            let g = Functor::identity(c);
            let point = Functor::constant(pt, c, ObjId(0));
            let gf = g.after(&point).unwrap();
            vec![relate(
                "SG_w(id) <= SG_w(id ∘ c)".into(),
                false,
                &svarc_genus(&g, Mode::Weak, budget),
                &svarc_genus(&gf, Mode::Weak, budget),
            )]
        }));
    }
    // Homotopy invariance: homotopic points have equal genus.
    {
        let pt = &pt;
        let comps = connected_components(c);
        for comp in comps {
            for &o in comp.iter().skip(1) {
                let first = comp[0];
                jobs.push(Box::new(move || {
                    let a = Functor::constant(pt, c, first);
                    let b = Functor::constant(pt, c, o);
                    let mut out = vec![relate(
                        format!("SG_w({}) = SG_w({})", c.object_name(first), c.object_name(o)),
                        true,
                        &svarc_genus(&a, Mode::Weak, budget),
                        &svarc_genus(&b, Mode::Weak, budget),
                    )];
                    out.push(relate(
                        format!("SG_w({0}) = SG({0}) (finite)", c.object_name(o)),
                        true,
                        &svarc_genus(&b, Mode::Weak, budget),
                        &svarc_genus(&b, Mode::Strong, budget),
                    ));
                    out
                }));
            }
        }
    }
    // Pullbacks and the bound by ccat, for the projection p1: C × C → C.
    {
        let (prod, pt, ccat_w) = (&prod, &pt, &ccat_w);
        jobs.push(Box::new(move || {
            let p = prod.p1();
            let base = secat(&p, SectionMode::Strict, budget);
            let mut out = Vec::new();
            for o in c.objects() {
                let h = Functor::constant(pt, c, o);
                let pb = Pullback::new(&h, &p).expect("common target");
                let pulled = secat(pb.pr_a(), SectionMode::Strict, budget);
                out.push(relate(
                    format!("secat(p1 pulled back along {}) <= secat(p1)", c.object_name(o)),
                    false,
                    &pulled,
                    &base,
                ));
            }
            let id = Functor::identity(c);
            let pb = Pullback::new(&id, &p).expect("common target");
            out.push(relate(
                "secat(p1 pulled back along id) <= secat(p1)".into(),
                false,
                &secat(pb.pr_a(), SectionMode::Strict, budget),
                &base,
            ));
            // p1 is a weak fibration, surjective on objects.
            out.push(relate("secat(p1) <= ccat_w".into(), false, &base, ccat_w));
            out.push(relate(
                "secat(p1) = SG_w(p1) (fibration)".into(),
                true,
                &base,
                &svarc_genus(&p, Mode::Weak, budget),
            ));
            out
        }));
    }
    let relations = jobs.par_iter().map(|job| job()).collect::<Vec<_>>().into_iter().flatten().collect();
    RelationReport { relations }
}
