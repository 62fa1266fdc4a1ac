use serde::Serialize;

use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Median,
    Minimum,
    ChebyshevLaplace,
    AdaptiveGosc,
    Quantile,
    AdaptiveOsc,
    UnknownVariance,
    UpperBiased,
    UpperBiasedKnownScale,
}

/// Parameters an estimator actually used. Only the relevant fields are set.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Tuning<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_prime: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<T>,
    /// `None` encodes the `-inf` lower bracket.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_low: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_up: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossing_level: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_regime: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<T>,
    /// Orders of every rung considered by an adaptive rule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorResult<T> {
    pub value: T,
    pub method: Method,
    pub tuning: Tuning<T>,
}

impl<T: Real> EstimatorResult<T> {
    pub fn new(value: T, method: Method) -> Self {
        Self {
            value,
            method,
            tuning: Tuning::default(),
        }
    }

    pub fn with_tuning(value: T, method: Method, tuning: Tuning<T>) -> Self {
        Self {
            value,
            method,
            tuning,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledEstimate<T> {
    pub theta: T,
    pub sigma: T,
    /// Contamination bound the estimate was built for, when one was used.
    pub k0: Option<usize>,
}
