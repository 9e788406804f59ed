use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use fibrations::LiftError;
use fincat_core::io::{load_file, save, validate_category, LoadError, RawCategory};
use fincat_core::{BudgetExceeded, CategoryError, FinCat, Functor, RawFunctor};
use invariants::InvariantError;
use serde_json::{json, Value as Json};

/// Why a command stopped: bad input (exit 1) or an exhausted budget (exit 2).
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Budget(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Budget(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(m) => write!(f, "invalid input: {m}"),
            Failure::Budget(m) => write!(f, "budget exhausted: {m}"),
        }
    }
}

/// `Variant: message`, so scripts can match on the variant name.
fn category_error(e: &CategoryError) -> String {
    let debug = format!("{e:?}");
    let variant = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("");
    format!("{variant}: {e}")
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Invalid(c) => Failure::Invalid(category_error(&c)),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<CategoryError> for Failure {
    fn from(e: CategoryError) -> Self {
        Failure::Invalid(category_error(&e))
    }
}

impl From<BudgetExceeded> for Failure {
    fn from(e: BudgetExceeded) -> Self {
        Failure::Budget(e.to_string())
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<LiftError> for Failure {
    fn from(e: LiftError) -> Self {
        match e {
            LiftError::Budget(b) => Failure::Budget(b.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn invalid(m: impl fmt::Display) -> Failure {
    Failure::Invalid(m.to_string())
}

pub fn category(path: &Path) -> Result<Arc<FinCat>, Failure> {
    Ok(Arc::new(load_file(path)?))
}

fn read_json(path: &Path) -> Result<Json, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

/// A category given inline or as a path relative to `dir`.
fn category_field(v: &Json, dir: &Path) -> Result<Arc<FinCat>, Failure> {
    match v {
        Json::String(p) => category(&dir.join(p)),
        other => {
            let raw: RawCategory = serde_json::from_value(other.clone()).map_err(invalid)?;
            Ok(Arc::new(validate_category(&raw)?))
        }
    }
}

/// `{"source": .., "target": .., "objects": {..}, "morphisms": {..}}`.
pub fn functor_from_json(v: &Json, dir: &Path) -> Result<Functor, Failure> {
    let part = |k: &str| v.get(k).ok_or_else(|| invalid(format!("functor is missing `{k}`")));
    let source = category_field(part("source")?, dir)?;
    let target = category_field(part("target")?, dir)?;
    let raw: RawFunctor = serde_json::from_value(v.clone()).map_err(invalid)?;
    Functor::from_raw(&source, &target, &raw).map_err(invalid)
}

pub fn functor(path: &Path) -> Result<Functor, Failure> {
    let dir: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    functor_from_json(&read_json(path)?, &dir)
}

/// Self-contained form of a functor, readable by [`functor_from_json`].
pub fn functor_json(f: &Functor) -> Json {
    let raw = f.to_raw();
    json!({
        "source": save(f.source()),
        "target": save(f.target()),
        "objects": raw.objects,
        "morphisms": raw.morphisms,
    })
}

pub fn file(path: &Path) -> Result<Json, Failure> {
    read_json(path)
}

/// Two functors must share source and target.
pub fn parallel(f: &Functor, g: &Functor) -> Result<(), Failure> {
    if fincat_core::same_category(f.source(), g.source()) && fincat_core::same_category(f.target(), g.target()) {
        Ok(())
    } else {
        Err(invalid("functors are not parallel"))
    }
}
