//! Counting invariants of finite categories (ccat, complexity, homotopic
//! distance, sectional category and Švarc genus) computed by minimal
//! geometric covers, with certificates that revalidate from JSON alone.

pub mod compute;
pub mod fibration;
pub mod relations;
pub mod result;
pub mod witness;

pub use compute::{ccat, cdist, ctc, pair_homotopies, secat, svarc_genus, Budget, InvariantError};
pub use fibration::{distance_fibration, DistanceFibration};
pub use relations::{verify_relations, Relation, RelationReport, Status};
pub use result::{InvariantResult, Mode, SectionMode, Value};
pub use witness::{revalidate, CertificateError, Query, Witness};
