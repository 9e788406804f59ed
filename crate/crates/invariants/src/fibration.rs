use fincat_core::{BudgetExceeded, Functor, Pullback};
use paths::{truncated_path_category, PathCategory};

/// The pullback of the endpoint functor `π: PD_L → D × D` along
/// `(f, g): C → D × D`, with its projection `q` to `C`. Objects are pairs
/// of an object `c` and a path from `f(c)` to `g(c)`.
#[derive(Debug, Clone)]
pub struct DistanceFibration {
    pub paths: PathCategory,
    pub pullback: Pullback,
    pub q: Functor,
}

pub fn distance_fibration(f: &Functor, g: &Functor, len: usize, cap: usize) -> Result<DistanceFibration, BudgetExceeded> {
    let paths = truncated_path_category(f.target(), len, cap)?;
    let pair = paths.product.pairing(f, g).expect("parallel functors");
    let pullback = Pullback::new(&pair, &paths.endpoint).expect("common target");
    let q = pullback.pr_a().clone();
    Ok(DistanceFibration { paths, pullback, q })
}
