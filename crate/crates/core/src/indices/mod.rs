//! Multi-indices, weight sequences and thresholded index sets.

mod index_set;
mod multi_index;
mod stechkin;
mod weights;

pub use index_set::{build_index_set, check_downward_closed, enumeration_cmp, index_set_metrics, IndexSet};
pub use multi_index::MultiIndex;
pub(crate) use stechkin::ls_slope;
pub use stechkin::{stechkin_check, StechkinOutcome, StechkinReport};
pub(crate) use weights::beta_factor;
pub use weights::{
    beta_weight, c_weight, factorial, rho_from_b, riemann_zeta, surrogate_constants, AdmissibleWeights, DecaySequence,
    SurrogateWeights, WeightModel, MAX_ORDER,
};
