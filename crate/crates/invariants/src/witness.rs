use std::sync::Arc;

use covers::GeometricCover;
use fincat_core::{diagonal, same_category, FinCat, Functor, ObjId, Product, RawFunctor, RawPiece, Subcategory};
use homotopy::{RawStrongHomotopy, StrongHomotopy, WeakHomotopy};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::result::SectionMode;

/// Per-piece evidence for the defining predicate of an invariant. Functors
/// have the materialized piece as source.
#[derive(Debug, Clone)]
pub enum Witness {
    /// `ι ≃ const_c`.
    Contraction { constant: ObjId, homotopy: StrongHomotopy },
    /// `F|U ≃ G|U`.
    Homotopy(StrongHomotopy),
    /// `ι ≃ Δ ∘ motion`, into `C × C`.
    Farber { motion: Functor, homotopy: StrongHomotopy },
    /// `P ∘ section = ι`, or `P ∘ section ≃ ι` along the homotopy.
    Section { section: Functor, homotopy: Option<StrongHomotopy> },
}

impl Witness {
    pub fn to_json(&self) -> Json {
        match self {
            Witness::Contraction { constant, homotopy } => json!({
                "constant": homotopy.target().object_name(*constant),
                "homotopy": homotopy.to_json(),
            }),
            Witness::Homotopy(h) => json!({ "homotopy": h.to_json() }),
            Witness::Farber { motion, homotopy } => json!({
                "motion": motion.to_raw(),
                "homotopy": homotopy.to_json(),
            }),
            Witness::Section { section, homotopy } => json!({
                "section": section.to_raw(),
                "homotopy": homotopy.as_ref().map(|h| h.to_json()),
            }),
        }
    }
}

/// What a certificate claims to measure.
#[derive(Debug, Clone, Copy)]
pub enum Query<'a> {
    Ccat(&'a Arc<FinCat>),
    Distance(&'a Functor, &'a Functor),
    Complexity(&'a Arc<FinCat>),
    Sections(&'a Functor),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("piece {index}: {reason}")]
    Piece { index: usize, reason: String },
    #[error("pieces do not form a geometric cover: {0}")]
    Cover(String),
    #[error("claimed n = {claimed} but there are {pieces} pieces")]
    Count { claimed: usize, pieces: usize },
}

fn field<'a>(v: &'a Json, key: &str) -> Result<&'a Json, String> {
    v.get(key).ok_or_else(|| format!("missing `{key}`"))
}

fn parse<T: serde::de::DeserializeOwned>(v: &Json) -> Result<T, String> {
    serde_json::from_value(v.clone()).map_err(|e| e.to_string())
}

fn homotopy(v: &Json, source: &Arc<FinCat>, target: &Arc<FinCat>) -> Result<StrongHomotopy, String> {
    let raw: RawStrongHomotopy = parse(v)?;
    let h = StrongHomotopy::from_raw(source, target, &raw).map_err(|e| e.to_string())?;
    h.replay().map_err(|e| e.to_string())?;
    Ok(h)
}

fn functor(v: &Json, source: &Arc<FinCat>, target: &Arc<FinCat>) -> Result<Functor, String> {
    let raw: RawFunctor = parse(v)?;
    Functor::from_raw(source, target, &raw).map_err(|e| e.to_string())
}

fn ends(h: &StrongHomotopy, from: &Functor, to: &Functor, weak: bool) -> Result<(), String> {
    if h.start() != from || h.end() != to {
        return Err("homotopy has the wrong ends".into());
    }
    if weak {
        let w = WeakHomotopy::from_strong(h);
        w.check().map_err(|e| e.to_string())?;
        w.check_endpoints(from, to).map_err(|e| e.to_string())?;
    }
    Ok(())
}

/// Checks one witness against its piece.
fn check_piece(query: &Query, mode: SectionMode, piece: &Subcategory, w: &Json) -> Result<(), String> {
    let (cat, incl) = piece.materialize();
    let weak = mode == SectionMode::Weak;
    match query {
        Query::Ccat(c) => {
            let name = field(w, "constant")?.as_str().ok_or("`constant` is not a string")?;
            let o = c.object_by_name(name).ok_or_else(|| format!("unknown object `{name}`"))?;
            let h = homotopy(field(w, "homotopy")?, &cat, c)?;
            ends(&h, &incl, &Functor::constant(&cat, c, o), weak)
        }
        Query::Distance(f, g) => {
            let d = f.target();
            let h = homotopy(field(w, "homotopy")?, &cat, d)?;
            let (fu, gu) = (f.after(&incl).unwrap(), g.after(&incl).unwrap());
            ends(&h, &fu.with_categories(cat.clone(), d.clone()), &gu.with_categories(cat.clone(), d.clone()), weak)
        }
        Query::Complexity(c) => {
            let prod = Product::new(c, c);
            let motion = functor(field(w, "motion")?, &cat, c)?;
            let h = homotopy(field(w, "homotopy")?, &cat, prod.cat())?;
            let target = diagonal(&prod).after(&motion).unwrap();
            ends(&h, &incl.with_categories(cat.clone(), prod.cat().clone()), &target, weak)
        }
        Query::Sections(p) => {
            let s = functor(field(w, "section")?, &cat, p.source())?;
            let ps = p.after(&s).unwrap();
            let incl = incl.with_categories(cat.clone(), p.target().clone());
            match (mode, field(w, "homotopy")?) {
                (SectionMode::Strict, _) => {
                    if ps == incl {
                        Ok(())
                    } else {
                        Err("section does not split the functor".into())
                    }
                }
                (_, Json::Null) => Err("homotopic section without homotopy".into()),
                (_, hv) => {
                    let h = homotopy(hv, &cat, p.target())?;
                    ends(&h, &ps, &incl, weak)
                }
            }
        }
    }
}

/// Revalidates a serialized certificate `{"n", "pieces", "witnesses"}` from
/// scratch and returns `n`.
pub fn revalidate(query: &Query, mode: SectionMode, cert: &Json) -> Result<usize, CertificateError> {
    let bad = CertificateError::Malformed;
    let n = field(cert, "n").map_err(bad)?.as_u64().ok_or(bad("`n` is not a number".into()))? as usize;
    let pieces: Vec<RawPiece> = parse(field(cert, "pieces").map_err(bad)?).map_err(bad)?;
    let witnesses: Vec<Json> = parse(field(cert, "witnesses").map_err(bad)?).map_err(bad)?;
    if pieces.len() != n + 1 {
        return Err(CertificateError::Count {
            claimed: n,
            pieces: pieces.len(),
        });
    }
    if witnesses.len() != pieces.len() {
        return Err(bad("one witness per piece".into()));
    }
    let base = match query {
        Query::Ccat(c) => (*c).clone(),
        Query::Distance(f, g) => {
            if !same_category(f.source(), g.source()) || !same_category(f.target(), g.target()) {
                return Err(bad("functors are not parallel".into()));
            }
            f.source().clone()
        }
        Query::Complexity(c) => Product::new(c, c).cat().clone(),
        Query::Sections(p) => p.target().clone(),
    };
    let cover = GeometricCover::from_raw(&base, &pieces).map_err(|e| CertificateError::Cover(e.to_string()))?;
    for (i, (p, w)) in cover.pieces().iter().zip(&witnesses).enumerate() {
        check_piece(query, mode, p, w).map_err(|reason| CertificateError::Piece { index: i, reason })?;
    }
    Ok(n)
}
