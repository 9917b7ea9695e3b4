//! Sparse bivariate polynomials and slope valuations.

mod bipoly;
mod slope;
mod valuation;
pub mod ypoly;

pub use bipoly::BiPoly;
pub use slope::{ceil_rat, floor_rat, fmt_rat, parse_rat, rat, Rat, Slope, Val};
pub use valuation::{
    alpha_lambda, average_slope, d_lambda, in_lambda, is_in_apl, is_in_apl_translated, lambda_parts,
    reciprocal, sigma_prime, tau_lambda, tau_lambda_inverse, trunc_lambda, v_lambda, LambdaParts,
};
