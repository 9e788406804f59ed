//! Zig-zag paths in a finite category, path morphisms, the bounded search
//! for morphisms of the localized path category, and truncated path
//! categories with their endpoint functors.

pub mod level;
pub mod morphism;
pub mod path;

pub use level::{level_transformations, truncated_path_category, LevelCategory, PathCategory, DEFAULT_MORPHISM_CAP};
pub use morphism::{
    find_path_morphism, right_padding, stutter_expansions, Leg, LocalizedPathMorphism, MorphismError,
    PathMorphism, PathSearchOptions, PathSearchOutcome, Reparam, SearchMode,
};
pub use path::{
    all_paths, concat_paths, endpoints, exact_path_from_literal, is_forward, normalize_path, parse_literal,
    path_from_literal, reverse_path, Path, PathError,
};
