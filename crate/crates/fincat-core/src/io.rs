use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::{CategoryBuilder, CategoryError, FinCat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

/// On-disk form of a category. `compose` entries are `[g, f, h]` with
/// `g ∘ f = h`; composites with an identity may be left out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed category JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] CategoryError),
}

impl RawCategory {
    pub fn to_builder(&self) -> CategoryBuilder {
        let mut b = CategoryBuilder::new();
        for o in &self.objects {
            b.object(o.clone());
        }
        for m in &self.morphisms {
            b.morphism(m.id.clone(), m.dom.clone(), m.cod.clone());
        }
        for (o, m) in &self.identities {
            b.identity(o.clone(), m.clone());
        }
        for [g, f, h] in &self.compose {
            b.compose(g.clone(), f.clone(), h.clone());
        }
        b
    }

    /// Sorted form with identity composites dropped. This is what
    /// [`save`] produces for any category loaded from `self`.
    pub fn canonical(&self) -> RawCategory {
        let ids: std::collections::BTreeSet<&String> = self.identities.values().collect();
        let mut objects = self.objects.clone();
        objects.sort();
        let mut morphisms = self.morphisms.clone();
        morphisms.sort_by(|a, b| a.id.cmp(&b.id));
        let mut compose: Vec<[String; 3]> = self
            .compose
            .iter()
            .filter(|[g, f, _]| !ids.contains(g) && !ids.contains(f))
            .cloned()
            .collect();
        compose.sort();
        compose.dedup();
        RawCategory {
            objects,
            morphisms,
            identities: self.identities.clone(),
            compose,
        }
    }
}

pub fn validate_category(raw: &RawCategory) -> Result<FinCat, CategoryError> {
    raw.to_builder().build()
}

pub fn save(cat: &FinCat) -> RawCategory {
    let objects = cat.objects().map(|o| cat.object_name(o).to_string()).collect();
    let morphisms = cat
        .morphisms()
        .map(|m| RawMorphism {
            id: cat.morphism_name(m).to_string(),
            dom: cat.object_name(cat.dom(m)).to_string(),
            cod: cat.object_name(cat.cod(m)).to_string(),
        })
        .collect();
    let identities = cat
        .objects()
        .map(|o| {
            (
                cat.object_name(o).to_string(),
                cat.morphism_name(cat.identity(o)).to_string(),
            )
        })
        .collect();
    let mut compose: Vec<[String; 3]> = cat
        .composable_pairs()
        .filter(|&(g, f)| !cat.is_identity(g) && !cat.is_identity(f))
        .map(|(g, f)| {
            [
                cat.morphism_name(g).to_string(),
                cat.morphism_name(f).to_string(),
                cat.morphism_name(cat.compose(g, f).unwrap()).to_string(),
            ]
        })
        .collect();
    compose.sort();
    RawCategory {
        objects,
        morphisms,
        identities,
        compose,
    }
}

pub fn from_json_str(text: &str) -> Result<FinCat, LoadError> {
    let raw: RawCategory = serde_json::from_str(text)?;
    Ok(validate_category(&raw)?)
}

pub fn to_json_string(cat: &FinCat) -> String {
    let mut s = serde_json::to_string_pretty(&save(cat)).expect("category serializes");
    s.push('\n');
    s
}

pub fn load_file(path: impl AsRef<Path>) -> Result<FinCat, LoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_json_str(&text)
}
