//! Geometric covers of finite categories: a decision procedure over all
//! composable chains, enumeration of subcategories, and the minimal-cover
//! search shared by the counting invariants.

pub mod automaton;
pub mod pieces;
pub mod search;

pub use automaton::{is_geometric_cover, CoverCheck, CoverError, GeometricCover};
pub use pieces::{enumerate_pieces, DEFAULT_PIECE_CAP};
pub use search::{
    maximal_passing_pieces, minimal_cover_search, CoverSearchError, CoverSearchOptions, CoverSolution, LowerBound,
    PiecePredicate,
};
