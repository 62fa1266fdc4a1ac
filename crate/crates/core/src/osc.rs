//! Quantile estimators for general one-sided contamination, with known or
//! unknown noise level, plus the upper-biased pair used to rescale p-values.

use crate::error::{Error, Result};
use crate::estimate::{EstimatorResult, Method, ScaledEstimate, Tuning};
use crate::gaussian::{dyadic_round, upper_tail_inverse, Observations, OrderStatistics, Rounding};
use crate::lepski::{self, Candidate};
use crate::real::Real;

/// Smallest sample size accepted by the upper-biased estimators.
pub const MIN_UPPER_BIASED_N: usize = 16;

/// A pair of orders `1 <= q_prime <= q <= n` for quantile differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantilePair {
    pub q: usize,
    pub q_prime: usize,
}

impl QuantilePair {
    pub fn new(q: usize, q_prime: usize, n: usize) -> Result<Self> {
        if q_prime == 0 || q_prime > q {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= q' <= q, got q = {q}, q' = {q_prime}"
            )));
        }
        if q > n {
            return Err(Error::OrderOutOfRange { q, max: n });
        }
        Ok(Self { q, q_prime })
    }
}

fn ratio<T: Real>(q: usize, n: usize) -> T {
    T::from_usize_exact(q) / T::from_usize_exact(n)
}

/// `Y_(q) + upper_tail_inverse(q / n)` for `1 <= q <= ceil(n/2)`, `q < n`.
pub fn theta_tilde<T: Real, Y: Observations<T> + ?Sized>(
    y: &Y,
    q: usize,
) -> Result<EstimatorResult<T>> {
    let os = y.order_stats();
    theta_tilde_sorted(&os, q)
}

fn theta_tilde_sorted<T: Real>(os: &OrderStatistics<T>, q: usize) -> Result<EstimatorResult<T>> {
    let n = os.len();
    let max = n.div_ceil(2).min(n.saturating_sub(1));
    if q == 0 || q > max {
        return Err(Error::OrderOutOfRange { q, max });
    }
    let value = os.get(q)? + upper_tail_inverse(ratio::<T>(q, n))?;
    let tuning = Tuning {
        q: Some(q as i64),
        ..Tuning::default()
    };
    Ok(EstimatorResult::with_tuning(
        value,
        Method::Quantile,
        tuning,
    ))
}

fn check_sparsity(k: usize, n: usize, max: usize) -> Result<()> {
    if k == 0 || k > max {
        return Err(Error::SparsityOutOfRange { k, n, max });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Regime {
    Sparse,
    Intermediate,
    Dense,
}

fn regime(k: usize, n: usize) -> Regime {
    let (kf, nf) = (k as f64, n as f64);
    if kf < 4.0 * nf.sqrt() {
        Regime::Sparse
    } else if kf <= nf - nf.powf(0.8) {
        Regime::Intermediate
    } else {
        Regime::Dense
    }
}

/// Quantile order matched to sparsity `k`, `1 <= k <= n - 1`:
/// `ceil(n/2)` when `k < 4 sqrt n`, the dyadic ceiling of `n^{5/4} / k^{1/2}`
/// up to `k <= n - n^{4/5}`, and 1 beyond. The middle branch is capped at
/// `ceil(n/2)`.
pub fn q_k_osc(k: usize, n: usize) -> Result<usize> {
    check_sparsity(k, n, n.saturating_sub(1))?;
    let half = n.div_ceil(2);
    Ok(match regime(k, n) {
        Regime::Sparse => half,
        Regime::Intermediate => {
            let raw = (n as f64).powf(1.25) / (k as f64).sqrt();
            (dyadic_round(raw, Rounding::Up)? as usize).min(half)
        }
        Regime::Dense => 1,
    })
}

/// Companion order for the scale estimate, `1 <= k <= n - 2`:
/// `ceil(n/3)`, the dyadic floor of `n^{7/4} / k^{3/2}`, or 1.
pub fn q_prime_k(k: usize, n: usize) -> Result<usize> {
    check_sparsity(k, n, n.saturating_sub(2))?;
    Ok(match regime(k, n) {
        Regime::Sparse => n.div_ceil(3),
        Regime::Intermediate => {
            let raw = (n as f64).powf(1.75) / (k as f64).powf(1.5);
            (dyadic_round(raw, Rounding::Down)? as usize).max(1)
        }
        Regime::Dense => 1,
    })
}

fn sigma_tilde_sorted<T: Real>(os: &OrderStatistics<T>, pair: QuantilePair) -> Result<T> {
    let n = os.len();
    let pair = QuantilePair::new(pair.q, pair.q_prime, n)?;
    if pair.q == pair.q_prime {
        return Ok(T::zero());
    }
    if pair.q >= n {
        return Err(Error::OrderOutOfRange {
            q: pair.q,
            max: n - 1,
        });
    }
    let num = os.get(pair.q)? - os.get(pair.q_prime)?;
    let den = upper_tail_inverse(ratio::<T>(pair.q_prime, n))?
        - upper_tail_inverse(ratio::<T>(pair.q, n))?;
    Ok(num / den)
}

/// `(Y_(q) - Y_(q')) / (upper_tail_inverse(q'/n) - upper_tail_inverse(q/n))`, with `0/0 = 0`
/// when `q = q'`.
pub fn sigma_tilde<T: Real, Y: Observations<T> + ?Sized>(y: &Y, pair: QuantilePair) -> Result<T> {
    let os = y.order_stats();
    sigma_tilde_sorted(&os, pair)
}

fn theta_tilde_qq_sorted<T: Real>(
    os: &OrderStatistics<T>,
    pair: QuantilePair,
) -> Result<ScaledEstimate<T>> {
    let sigma = sigma_tilde_sorted(os, pair)?;
    let n = os.len();
    let y_q = os.get(pair.q)?;
    let theta = if sigma == T::zero() {
        y_q
    } else {
        y_q + sigma * upper_tail_inverse(ratio::<T>(pair.q, n))?
    };
    Ok(ScaledEstimate {
        theta,
        sigma,
        k0: None,
    })
}

/// `Y_(q) + sigma_tilde * upper_tail_inverse(q/n)` together with the scale used.
pub fn theta_tilde_qq<T: Real, Y: Observations<T> + ?Sized>(
    y: &Y,
    pair: QuantilePair,
) -> Result<ScaledEstimate<T>> {
    let os = y.order_stats();
    theta_tilde_qq_sorted(&os, pair)
}

/// Unknown-variance estimate at the orders `(q_k, q'_k)` matched to `k`.
pub fn unknown_variance<T: Real, Y: Observations<T> + ?Sized>(
    y: &Y,
    k: usize,
) -> Result<ScaledEstimate<T>> {
    let os = y.order_stats();
    let n = os.len();
    let pair = QuantilePair::new(q_k_osc(k, n)?, q_prime_k(k, n)?, n)?;
    let mut est = theta_tilde_qq_sorted(&os, pair)?;
    est.k0 = Some(k);
    Ok(est)
}

/// `theta_tilde_{q_k}` with the order matched to a known `k`.
pub fn theta_tilde_qk<T: Real, Y: Observations<T> + ?Sized>(
    y: &Y,
    k: usize,
) -> Result<EstimatorResult<T>> {
    let os = y.order_stats();
    let mut r = theta_tilde_sorted(&os, q_k_osc(k, os.len())?)?;
    r.tuning.k = Some(k);
    Ok(r)
}

/// Distinct values of `q_k_osc(k, n)` over `k = 1..n-1`, ascending.
pub fn quantile_ladder(n: usize) -> Result<Vec<usize>> {
    if n < 2 {
        return Err(Error::SampleTooSmall { n, min: 2 });
    }
    let mut q: Vec<usize> = (1..n).map(|k| q_k_osc(k, n)).collect::<Result<_>>()?;
    q.sort_unstable();
    q.dedup();
    Ok(q)
}

/// Tolerance `delta_q`: `c0 sqrt(ln n)` below `sqrt(2) n^{1/4}`, else
/// `c0 n^{1/6} / (q^{2/3} sqrt(max(ln(n/q), 1)))`.
pub fn osc_threshold<T: Real>(q: usize, n: usize, c0: T) -> T {
    let (qf, nf) = (T::from_usize_exact(q), T::from_usize_exact(n));
    if qf < T::SQRT_2() * nf.powf(T::lit(0.25)) {
        c0 * nf.ln().sqrt()
    } else {
        let log_term = (nf / qf).ln().max(T::one()).sqrt();
        c0 * nf.powf(T::one() / T::lit(6.0)) / (qf.powf(T::lit(2.0) / T::lit(3.0)) * log_term)
    }
}

/// Lepski selection over the quantile ladder: the largest order agreeing with
/// every smaller order within that order's tolerance.
pub fn adaptive_osc<T: Real, Y: Observations<T> + ?Sized>(
    y: &Y,
    c0: T,
) -> Result<EstimatorResult<T>> {
    let os = y.order_stats();
    let n = os.len();
    if n < 4 {
        return Err(Error::SampleTooSmall { n, min: 4 });
    }
    if !(c0 > T::zero()) {
        return Err(Error::NonPositive {
            what: "c0",
            value: c0.as_f64(),
        });
    }
    let orders = quantile_ladder(n)?;
    let ladder: Vec<Candidate<T>> = orders
        .iter()
        .map(|&q| {
            Ok(Candidate {
                order: q as i64,
                estimate: theta_tilde_sorted(&os, q)?.value,
                threshold: osc_threshold(q, n, c0),
            })
        })
        .collect::<Result<_>>()?;
    let pick = lepski::select_largest(&ladder);
    let tuning = Tuning {
        q: Some(ladder[pick].order),
        c0: Some(c0),
        ladder: Some(orders.iter().map(|&q| q as i64).collect()),
        ..Tuning::default()
    };
    Ok(EstimatorResult::with_tuning(
        ladder[pick].estimate,
        Method::AdaptiveOsc,
        tuning,
    ))
}

/// `(floor(n^{3/4}), floor(n^{1/4}))`.
pub fn upper_biased_orders(n: usize) -> (usize, usize) {
    (floor_pow(n, 3, 4), floor_pow(n, 1, 4))
}

/// `floor(n^{num/den})` in exact integer arithmetic.
fn floor_pow(n: usize, num: u32, den: u32) -> usize {
    let target = (n as u128).pow(num);
    let mut r = (n as f64).powf(num as f64 / den as f64).floor() as u128;
    while r > 0 && r.pow(den) > target {
        r -= 1;
    }
    while (r + 1).pow(den) <= target {
        r += 1;
    }
    r as usize
}

fn check_k0(k0: usize, n: usize) -> Result<usize> {
    if n < MIN_UPPER_BIASED_N {
        return Err(Error::SampleTooSmall {
            n,
            min: MIN_UPPER_BIASED_N,
        });
    }
    let max = n * 9 / 10;
    if k0 > max {
        return Err(Error::ContaminationBound { k0, max });
    }
    Ok(max)
}

/// `upper_tail_inverse(q'_n / (n - k0)) - upper_tail_inverse(q_n / n)`, the
/// scale denominator of [`upper_biased`]; an error unless it is positive.
pub fn upper_biased_denominator<T: Real>(n: usize, k0: usize) -> Result<T> {
    check_k0(k0, n)?;
    let (q_n, q_prime_n) = upper_biased_orders(n);
    let inner = ratio::<T>(q_prime_n, n - k0);
    if !(inner < T::one()) {
        return Err(Error::DegenerateScale(format!(
            "q'_n / (n - k0) = {q_prime_n}/{} is not below 1",
            n - k0
        )));
    }
    let den = upper_tail_inverse(inner)? - upper_tail_inverse(ratio::<T>(q_n, n))?;
    if !(den > T::zero()) {
        return Err(Error::DegenerateScale(format!(
            "quantile gap {den} is not positive for n = {n}, k0 = {k0}"
        )));
    }
    Ok(den)
}

/// Upper-biased pair for rescaling p-values under a contamination bound
/// `k0 <= floor(0.9 n)`:
/// `sigma_+ = (Y_(q_n) - Y_(q'_n)) / upper_biased_denominator(n, k0)`
/// and `theta_+ = Y_(q_n) + sigma_+ upper_tail_inverse(q_n / n)`.
///
/// The bound `n_1 <= k0` on the true number of outliers is assumed, not checked.
pub fn upper_biased<T: Real, Y: Observations<T> + ?Sized>(
    y: &Y,
    k0: usize,
) -> Result<ScaledEstimate<T>> {
    let os = y.order_stats();
    let n = os.len();
    let den = upper_biased_denominator::<T>(n, k0)?;
    let (q_n, q_prime_n) = upper_biased_orders(n);
    let y_q = os.get(q_n)?;
    let sigma = (y_q - os.get(q_prime_n)?) / den;
    if !(sigma > T::zero()) {
        return Err(Error::DegenerateScale(format!(
            "scale estimate {sigma} is not positive"
        )));
    }
    Ok(ScaledEstimate {
        theta: y_q + sigma * upper_tail_inverse(ratio::<T>(q_n, n))?,
        sigma,
        k0: Some(k0),
    })
}

/// Location `Y_(q_n) + sigma upper_tail_inverse(q_n / n)` for a known noise level.
pub fn upper_biased_known_scale<T: Real, Y: Observations<T> + ?Sized>(
    y: &Y,
    sigma: T,
) -> Result<ScaledEstimate<T>> {
    if !(sigma > T::zero()) {
        return Err(Error::NonPositive {
            what: "sigma",
            value: sigma.as_f64(),
        });
    }
    let os = y.order_stats();
    let n = os.len();
    if n < MIN_UPPER_BIASED_N {
        return Err(Error::SampleTooSmall {
            n,
            min: MIN_UPPER_BIASED_N,
        });
    }
    let (q_n, _) = upper_biased_orders(n);
    let theta = os.get(q_n)? + sigma * upper_tail_inverse(ratio::<T>(q_n, n))?;
    Ok(ScaledEstimate {
        theta,
        sigma,
        k0: None,
    })
}
