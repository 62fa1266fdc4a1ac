//! Estimation of the minimum location of a Gaussian sample under one-sided
//! contamination, and false discovery rate control for outlier selection
//! with empirically rescaled p-values.
//!
//! Every routine is generic over [`Real`] (`f32` or `f64`). The aliases at the
//! crate root fix the scalar to `f64`, with `*32` variants for `f32`.

pub mod chebyshev;
pub mod compensated;
pub mod error;
pub mod estimate;
pub mod gaussian;
pub mod gosc;
pub mod lepski;
pub mod osc;
pub mod real;
pub mod testing;

pub use chebyshev::{cheb_coeffs, cheb_eval, g_eval, ChebCoefficients};
pub use error::{Error, Result};
pub use estimate::{EstimatorResult, Method, ScaledEstimate, Tuning};
pub use gaussian::{
    density, dyadic_round, even_floor, order_statistic, upper_tail, upper_tail_inverse,
    Observations, OrderStatistics, Probability, Rounding, SampleVector,
};
pub use gosc::{
    adaptive_gosc, eta_hat, psi_hat, q_k_gosc, theta_brackets, theta_med, theta_min, theta_q,
    theta_q_unrestricted, GoscTuning,
};
pub use osc::{
    adaptive_osc, q_k_osc, q_prime_k, quantile_ladder, sigma_tilde, theta_tilde, theta_tilde_qk,
    theta_tilde_qq, unknown_variance, upper_biased, upper_biased_denominator,
    upper_biased_known_scale, upper_biased_orders, QuantilePair,
};
pub use real::Real;
pub use testing::{
    bh_procedure, bh_step_up_sorted, fdp, posthoc_bound, rescaled_pvalues, select_outliers,
    simes_violation, tdp, u_transform, Direction, GroundTruth, PValueVector, Rescaling,
    SelectionOutcome,
};

pub type Sample = SampleVector<f64>;
pub type Sample32 = SampleVector<f32>;
pub type Order = OrderStatistics<f64>;
pub type Order32 = OrderStatistics<f32>;
pub type Estimate = EstimatorResult<f64>;
pub type Estimate32 = EstimatorResult<f32>;
pub type Scaled = ScaledEstimate<f64>;
pub type Scaled32 = ScaledEstimate<f32>;
pub type PValues = PValueVector<f64>;
pub type PValues32 = PValueVector<f32>;
pub type Rescale = Rescaling<f64>;
pub type Rescale32 = Rescaling<f32>;
pub type Outcome = SelectionOutcome<f64>;
pub type Outcome32 = SelectionOutcome<f32>;
