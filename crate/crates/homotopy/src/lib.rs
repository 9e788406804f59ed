//! Strong and weak homotopies between functors of finite categories:
//! natural-transformation search, shortest zig-zag certificates found by
//! breadth-first search over the functor graph, contractibility and
//! homotopy equivalence.

pub mod graph;
pub mod nat;
pub mod strong;
pub mod weak;

pub use graph::{homotopy_equivalent, is_contractible, strong_homotopic, Equivalence, FunctorGraph};
pub use nat::{nat_trans_search, objectwise_possible};
pub use strong::{link_is_forward, HomotopyError, LinkDir, RawLink, RawStrongHomotopy, Replay, StrongHomotopy};
pub use weak::{weak_homotopic, weak_homotopic_direct, WeakHomotopy};
