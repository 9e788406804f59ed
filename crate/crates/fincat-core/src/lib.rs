//! Finite categories as composition tables, with functors, natural
//! transformations, subcategories, products and pullbacks.

pub mod category;
pub mod construct;
pub mod enumerate;
pub mod functor;
pub mod io;
pub mod sample;
pub mod standard;
pub mod subcategory;

pub use category::{check_laws, CategoryBuilder, CategoryError, FinCat, MorId, ObjId};
pub use construct::{diagonal, pullback, product, Product, Pullback};
pub use enumerate::{enumerate_functors, BudgetExceeded, FunctorSearch, DEFAULT_FUNCTOR_CAP};
pub use functor::{same_category, Functor, FunctorError, NatTrans, NatTransError, RawFunctor};
pub use io::{validate_category, RawCategory};
pub use subcategory::{connected_components, is_connected, EmptyCategory, RawPiece, Subcategory, SubcategoryError};
