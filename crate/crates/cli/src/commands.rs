use std::path::Path as FilePath;
use std::sync::Arc;

use covers::{is_geometric_cover, CoverCheck, CoverSearchOptions};
use fibrations::{check_fibration, fibrant_replacement, Battery};
use fincat_core::io::save;
use fincat_core::{FinCat, Functor, RawPiece, Subcategory};
use homotopy::{strong_homotopic, weak_homotopic};
use invariants::{
    ccat, cdist, ctc, revalidate, secat, svarc_genus, verify_relations, Budget, InvariantResult, Mode, Query, SectionMode,
};
use paths::{
    exact_path_from_literal, find_path_morphism, path_from_literal, truncated_path_category, Leg, Path, PathSearchOptions,
    PathSearchOutcome, SearchMode, DEFAULT_MORPHISM_CAP,
};
use serde_json::{json, Value as Json};

use crate::input::{self, functor_json, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Weak,
    Strong,
    Strict,
}

/// Budgets and knobs shared by every command.
#[derive(Debug, Clone)]
pub struct Settings {
    pub mode: Option<ModeArg>,
    pub max_len: Option<usize>,
    pub zigzag_depth: usize,
    pub functor_cap: u64,
    pub cover_cap: u64,
    pub seed: u64,
}

pub const DEFAULT_TRUNCATION: usize = 4;

impl Settings {
    fn budget(&self) -> Budget {
        Budget {
            functor_cap: self.functor_cap,
            cover: CoverSearchOptions {
                piece_cap: self.cover_cap,
                ..CoverSearchOptions::default()
            },
        }
    }

    fn homotopy_mode(&self) -> Result<Mode, Failure> {
        match self.mode.unwrap_or(ModeArg::Weak) {
            ModeArg::Weak => Ok(Mode::Weak),
            ModeArg::Strong => Ok(Mode::Strong),
            ModeArg::Strict => Err(Failure::Invalid("strict mode only applies to secat".into())),
        }
    }

    fn truncation(&self) -> usize {
        self.max_len.unwrap_or(DEFAULT_TRUNCATION)
    }
}

/// The JSON report and whether a budget ran out on the way.
pub struct Output {
    pub json: Json,
    pub exhausted: bool,
}

impl Output {
    fn done(json: Json) -> Output {
        Output { json, exhausted: false }
    }
}

fn invariant(r: InvariantResult, input: Json) -> Output {
    let exhausted = r.budget.is_some();
    let mut json = r.to_json();
    json["input"] = input;
    Output { json, exhausted }
}

pub fn validate(path: &FilePath) -> Result<Output, Failure> {
    let c = input::category(path)?;
    Ok(Output::done(json!({
        "valid": true,
        "objects": c.num_objects(),
        "morphisms": c.num_morphisms(),
    })))
}

pub fn homotopic(f: &FilePath, g: &FilePath, s: &Settings) -> Result<Output, Failure> {
    let (f, g) = (input::functor(f)?, input::functor(g)?);
    input::parallel(&f, &g)?;
    let mode = s.homotopy_mode()?;
    let certificate = match mode {
        Mode::Strong => strong_homotopic(&f, &g, s.functor_cap)?.map(|h| h.to_json()),
        Mode::Weak => weak_homotopic(&f, &g, s.functor_cap)?.map(|w| {
            let d = w.target();
            json!({
                "paths": w.paths().iter().map(|p| path_names(d, p)).collect::<Vec<_>>(),
                "morphisms": w.source().non_identity_morphisms().map(|m| json!({
                    "morphism": w.source().morphism_name(m),
                    "components": w.morphism(m).components().iter().map(|&c| d.morphism_name(c)).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            })
        }),
    };
    Ok(Output::done(json!({
        "mode": mode.name(),
        "homotopic": certificate.is_some(),
        "certificate": certificate,
        "input": {"f": functor_json(&f), "g": functor_json(&g)},
    })))
}

pub fn ccat_cmd(path: &FilePath, s: &Settings) -> Result<Output, Failure> {
    let c = input::category(path)?;
    let r = ccat(&c, s.homotopy_mode()?, &s.budget())?;
    Ok(invariant(r, json!({ "category": save(&c) })))
}

pub fn ctc_cmd(path: &FilePath, s: &Settings) -> Result<Output, Failure> {
    let c = input::category(path)?;
    let r = ctc(&c, s.homotopy_mode()?, &s.budget())?;
    Ok(invariant(r, json!({ "category": save(&c) })))
}

pub fn distance(f: &FilePath, g: &FilePath, s: &Settings) -> Result<Output, Failure> {
    let (f, g) = (input::functor(f)?, input::functor(g)?);
    input::parallel(&f, &g)?;
    let r = cdist(&f, &g, s.homotopy_mode()?, &s.budget())?;
    Ok(invariant(r, json!({"f": functor_json(&f), "g": functor_json(&g)})))
}

pub fn secat_cmd(p: &FilePath, s: &Settings) -> Result<Output, Failure> {
    let p = input::functor(p)?;
    let mode = match s.mode.unwrap_or(ModeArg::Strict) {
        ModeArg::Strict => SectionMode::Strict,
        ModeArg::Weak => SectionMode::Weak,
        ModeArg::Strong => SectionMode::Strong,
    };
    let r = secat(&p, mode, &s.budget())?;
    Ok(invariant(r, json!({ "p": functor_json(&p) })))
}

pub fn sg(p: &FilePath, s: &Settings) -> Result<Output, Failure> {
    let p = input::functor(p)?;
    let r = svarc_genus(&p, s.homotopy_mode()?, &s.budget())?;
    Ok(invariant(r, json!({ "p": functor_json(&p) })))
}

fn section_mode(name: &str) -> Result<SectionMode, Failure> {
    match name {
        "strict" => Ok(SectionMode::Strict),
        "weak" => Ok(SectionMode::Weak),
        "strong" => Ok(SectionMode::Strong),
        other => Err(Failure::Invalid(format!("unknown mode `{other}`"))),
    }
}

/// Checks either a report written by an invariant command (its certificate
/// is replayed against its embedded input) or a bare
/// `{"category": .., "pieces": [..]}` cover.
pub fn cover_check(path: &FilePath) -> Result<Output, Failure> {
    let v = input::file(path)?;
    let dir = path.parent().unwrap_or(FilePath::new(""));
    if let Some(name) = v.get("invariant").and_then(Json::as_str) {
        let cert = v
            .get("certificate")
            .filter(|c| !c.is_null())
            .ok_or_else(|| Failure::Invalid("report carries no certificate".into()))?;
        let mode = section_mode(v.get("mode").and_then(Json::as_str).unwrap_or("weak"))?;
        let inp = v.get("input").ok_or_else(|| Failure::Invalid("report carries no input".into()))?;
        let cat = |k: &str| -> Result<Arc<FinCat>, Failure> {
            let raw = inp.get(k).ok_or_else(|| Failure::Invalid(format!("input is missing `{k}`")))?;
            let raw = serde_json::from_value(raw.clone()).map_err(|e| Failure::Invalid(e.to_string()))?;
            Ok(Arc::new(fincat_core::validate_category(&raw)?))
        };
        let fun = |k: &str| -> Result<Functor, Failure> {
            let raw = inp.get(k).ok_or_else(|| Failure::Invalid(format!("input is missing `{k}`")))?;
            input::functor_from_json(raw, dir)
        };
        let n = match name {
            "ccat" => revalidate(&Query::Ccat(&cat("category")?), mode, cert),
            "ctc" => revalidate(&Query::Complexity(&cat("category")?), mode, cert),
            "cdist" => {
                let (f, g) = (fun("f")?, fun("g")?);
                revalidate(&Query::Distance(&f, &g), mode, cert)
            }
            "secat" | "sg" => revalidate(&Query::Sections(&fun("p")?), mode, cert),
            other => return Err(Failure::Invalid(format!("unknown invariant `{other}`"))),
        }
        .map_err(|e| Failure::Invalid(format!("certificate rejected: {e}")))?;
        return Ok(Output::done(json!({ "valid": true, "invariant": name, "value": n })));
    }
    let cat_raw = v
        .get("category")
        .ok_or_else(|| Failure::Invalid("expected an invariant report or a `category` with `pieces`".into()))?;
    let c = match cat_raw {
        Json::String(p) => input::category(&dir.join(p))?,
        raw => {
            let raw = serde_json::from_value(raw.clone()).map_err(|e| Failure::Invalid(e.to_string()))?;
            Arc::new(fincat_core::validate_category(&raw)?)
        }
    };
    let raw: Vec<RawPiece> = serde_json::from_value(v.get("pieces").cloned().unwrap_or(Json::Null))
        .map_err(|e| Failure::Invalid(format!("pieces: {e}")))?;
    let pieces = raw
        .iter()
        .map(|p| Subcategory::from_raw(&c, p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    match is_geometric_cover(&c, &pieces) {
        CoverCheck::Ok => Ok(Output::done(json!({ "valid": true, "pieces": pieces.len() }))),
        CoverCheck::BadChain(chain) => {
            let names: Vec<&str> = chain.iter().map(|&m| c.morphism_name(m)).collect();
            Err(Failure::Invalid(format!("chain {names:?} is not covered by any piece")))
        }
    }
}

fn path_names(base: &FinCat, p: &Path) -> Vec<String> {
    let mut out = vec![base.object_name(p.start()).to_string()];
    for i in 0..p.len() {
        out.push(base.morphism_name(p.arrow(i)).to_string());
        out.push(base.object_name(p.object(i + 1)).to_string());
    }
    out
}

fn literal(base: &FinCat, text: &str) -> Result<Path, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    exact_path_from_literal(base, &parts)
        .or_else(|_| path_from_literal(base, &parts))
        .map_err(|e| Failure::Invalid(format!("path `{text}`: {e}")))
}

/// The truncated path category, and optionally a search for a morphism
/// between two paths given as comma-separated literals.
pub fn pathcat(path: &FilePath, from: Option<&str>, to: Option<&str>, s: &Settings) -> Result<Output, Failure> {
    let c = input::category(path)?;
    let len = s.truncation();
    if len % 2 == 1 {
        return Err(Failure::Invalid(format!("path length {len} is odd")));
    }
    let pc = truncated_path_category(&c, len, DEFAULT_MORPHISM_CAP)?;
    let mut out = json!({
        "len": len,
        "objects": pc.level.cat().num_objects(),
        "morphisms": pc.level.cat().num_morphisms(),
        "paths": pc.level.paths().iter().map(|p| path_names(&c, p)).collect::<Vec<_>>(),
    });
    if let (Some(from), Some(to)) = (from, to) {
        let (a, b) = (literal(&c, from)?, literal(&c, to)?);
        let options = PathSearchOptions {
            zigzag_bound: s.zigzag_depth,
            mode: if s.mode == Some(ModeArg::Strict) { SearchMode::Strict } else { SearchMode::Localized },
            ..PathSearchOptions::default()
        };
        out["search"] = match find_path_morphism(&c, &a, &b, options)? {
            PathSearchOutcome::Found(m) => json!({
                "found": true,
                "legs": m.legs().iter().map(|leg| {
                    let (dir, pm) = match leg {
                        Leg::Forward(pm) => ("forward", pm),
                        Leg::Backward(pm) => ("backward", pm),
                    };
                    json!({
                        "dir": dir,
                        "from": path_names(&c, pm.from()),
                        "to": path_names(&c, pm.to()),
                        "reparam": pm.reparam().map(),
                        "components": pm.components().iter().map(|&m| c.morphism_name(m)).collect::<Vec<_>>(),
                    })
                }).collect::<Vec<_>>(),
            }),
            PathSearchOutcome::NotFound { exhaustive } => json!({ "found": false, "exhaustive": exhaustive }),
        };
    }
    Ok(Output::done(out))
}

pub fn fibcheck(p: &FilePath, max_problems: usize, s: &Settings) -> Result<Output, Failure> {
    let p = input::functor(p)?;
    let defaults = Battery::default();
    let battery = Battery {
        max_len: s.max_len.unwrap_or(defaults.max_len),
        max_problems,
        seed: s.seed,
        functor_cap: s.functor_cap,
        ..defaults
    };
    let report = check_fibration(&p, &battery)?;
    let mut json = report.to_json();
    json["input"] = json!({ "p": functor_json(&p) });
    Ok(Output::done(json))
}

pub fn replace(f: &FilePath, s: &Settings) -> Result<Output, Failure> {
    let f = input::functor(f)?;
    let len = s.truncation();
    let r = fibrant_replacement(&f, len, DEFAULT_MORPHISM_CAP)?;
    Ok(Output::done(json!({
        "len": len,
        "verified": true,
        "total": save(r.total()),
        "include": r.include().to_raw(),
        "project": r.project().to_raw(),
        "retract": r.retract().to_raw(),
        "retraction": r.retraction().to_json(),
        "input": { "f": functor_json(&f) },
    })))
}

pub fn relations(path: &FilePath, s: &Settings) -> Result<Output, Failure> {
    let c = input::category(path)?;
    let report = verify_relations(&c, &s.budget());
    let exhausted = report
        .relations
        .iter()
        .any(|r| matches!(&r.status, invariants::Status::Skipped(why) if why.contains("budget")));
    Ok(Output {
        json: report.to_json(),
        exhausted,
    })
}
