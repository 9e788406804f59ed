//! Lifting problems for functors of finite categories: constructive lifts
//! for the path fibration and for fibrant replacements, transport along
//! pullbacks and composites, and exhaustive checks of the lifting property
//! on finite batteries.

pub mod battery;
pub mod path_lift;
pub mod problem;
pub mod procedure;
pub mod replacement;
pub mod search;
mod trail;

pub use battery::{battery_problems, check_fibration, floors_over, random_homotopy, random_problem, Battery, Cell, FibrationReport};
pub use path_lift::PathFibrationLift;
pub use problem::{validate, LiftError, LiftSolution, LiftingProblem};
pub use procedure::{
    compose_fibrations, pullback_fibration, CompositeLift, IdentityLift, LiftProcedure, PullbackLift, SearchLift,
    TerminalLift,
};
pub use replacement::{fibrant_lift, fibrant_replacement, FibrantLift, FibrantReplacement};
pub use search::{strong_lift, weak_lift};
pub use trail::post_compose;
