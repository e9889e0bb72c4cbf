//! Tensor-product polynomials on the unit cube with exact calculus and
//! `L_p` norms.

mod multipoly;
mod norm;
mod poly;
pub mod quadrature;
mod roots;
mod tensor;

pub use multipoly::MultiPoly;
pub use norm::{
    abs_pow_integral_unit, lp_norm_1d, lp_norm_1d_with, lp_norm_subset, lp_norm_subset_with, sup_abs_unit,
    NormMethod, FINITE_QUADRATURE_MAX_AXES, SUP_GRID_MAX_AXES, SUP_GRID_POINTS,
};
pub use poly::Poly1;
pub use roots::{real_roots_in, sign_change_roots, SturmChain};
pub use tensor::{RestrictMode, TensorFunction, TensorTerm};
