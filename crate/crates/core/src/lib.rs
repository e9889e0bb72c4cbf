//! Weighted anchored and ANOVA decompositions of multivariate functions with
//! first-order mixed derivatives.
//!
//! The crate works on tensor-product polynomials over the unit cube, which
//! admit exact calculus. On top of that it provides
//!
//! * weight schedules `(γ_u)` and the equivalence constants `C_{d,1}`,
//!   `C_{d,∞}` and `C_{d,p} = C_{d,1}^{1/p} C_{d,∞}^{1-1/p}` ([`weights`]),
//! * univariate and tensor polynomial algebra with `L_p` norms ([`funcspace`]),
//! * the anchored and ANOVA component maps, their inverses and the weighted
//!   norms built from them ([`decomp`]),
//! * norm-ratio measurements, the product witness `∏(1 + γ_j x_j)` and bound
//!   sweeps ([`equivalence`]),
//! * brute-force reference integrators and finite differences ([`oracle`]).

pub mod decomp;
pub mod equivalence;
pub mod error;
pub mod funcspace;
pub mod oracle;
pub mod random;
pub mod weights;

pub use decomp::{
    anchored_components, anchored_norm, anchored_reconstruct, anova_components, anova_norm,
    anova_reconstruct, ComponentTuple,
};
pub use equivalence::{
    measure_ratio, verify_bound_sweep, witness_function, witness_lower_bound_check,
    witness_norms_closed, EquivalenceReport, SweepResult,
};
pub use error::{Error, Result};
pub use funcspace::{lp_norm_1d, lp_norm_subset, Poly1, RestrictMode, TensorFunction, TensorTerm};
pub use weights::{CoordSubset, PExponent, WeightFamily, WeightSchedule};
