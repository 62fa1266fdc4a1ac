//! Estimators of the minimum effect under one-sided Gaussian contamination:
//! median, debiased minimum, the Chebyshev–Laplace crossing estimator and its
//! Lepski-adaptive combination.

use crate::chebyshev::{cheb_coeffs, ChebCoefficients, MAX_DEGREE};
use crate::compensated::{self, DoubleWord};
use crate::error::{Error, Result};
use crate::estimate::{EstimatorResult, Method, Tuning};
use crate::gaussian::{
    even_floor, upper_tail_inverse, Observations, OrderStatistics, SampleVector,
};
use crate::lepski::{self, Candidate};
use crate::real::Real;

/// Grid resolution of the crossing search in `theta_q`. A degree-`q`
/// polynomial crosses a level at most `q` times, so excursions narrower than
/// one cell are the only ones that can be missed.
pub const CROSSING_GRID: usize = 4096;

const BISECTION_WIDTH: f64 = 1e-12;
const EXP_LIMIT: f64 = 700.0;

/// `3 (1 + ln(3 + 2 sqrt 2))`, about 8.2923.
pub fn laplace_constant<T: Real>() -> T {
    let growth = T::lit(3.0) + T::lit(2.0) * T::SQRT_2();
    T::lit(3.0) * (T::one() + growth.ln())
}

/// Sample-size dependent constants of the Chebyshev–Laplace estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoscTuning<T> {
    pub n: usize,
    pub a: T,
    pub q_max: i64,
}

impl<T: Real> GoscTuning<T> {
    pub fn new(n: usize) -> Self {
        let a = laplace_constant::<T>();
        let log_n = T::from_usize_exact(n).ln();
        let q_max = even_floor(log_n / (T::lit(2.0) * a)) - 2;
        Self { n, a, q_max }
    }

    /// Same constants with a caller-chosen `q_max`, for exploring degrees the
    /// sample size does not license.
    pub fn with_q_max(n: usize, q_max: i64) -> Self {
        Self {
            q_max,
            ..Self::new(n)
        }
    }

    /// True when `q_max < 2` and no Chebyshev degree is admissible.
    pub fn is_degenerate(&self) -> bool {
        self.q_max < 2
    }

    pub fn lambda(&self, q: i64) -> T {
        (T::lit(2.0) / T::from_i64(q).expect("degree")).sqrt()
    }

    /// `1 + e^{a q} / sqrt(n)`.
    pub fn crossing_level(&self, q: i64) -> T {
        let q_r = T::from_i64(q).expect("degree");
        T::one() + (self.a * q_r).exp() / T::from_usize_exact(self.n).sqrt()
    }

    /// `pi^2 / (144 q_max^{3/2})`, defined only when `q_max >= 2`.
    pub fn vbar(&self) -> Option<T> {
        if self.is_degenerate() {
            return None;
        }
        let qm = T::from_i64(self.q_max).expect("q_max");
        Some(T::PI() * T::PI() / (T::lit(144.0) * qm.powf(T::lit(1.5))))
    }

    /// Degrees up to `3 ln(n) / (10 a)` get a finite lower bracket.
    pub fn low_bracket_cutoff(&self) -> T {
        T::lit(3.0) * T::from_usize_exact(self.n).ln() / (T::lit(10.0) * self.a)
    }
}

/// `Y_(ceil(n/2))`.
pub fn theta_med<T: Real, Y: Observations<T> + ?Sized>(y: &Y) -> EstimatorResult<T> {
    let os = y.order_stats();
    let n = os.len();
    let value = os.sorted()[n.div_ceil(2) - 1];
    EstimatorResult::new(value, Method::Median)
}

/// `Y_(1) + upper_tail_inverse(1/n)`, requires `n >= 2`.
pub fn theta_min<T: Real, Y: Observations<T> + ?Sized>(y: &Y) -> Result<EstimatorResult<T>> {
    let os = y.order_stats();
    let n = os.len();
    if n < 2 {
        return Err(Error::SampleTooSmall { n, min: 2 });
    }
    let debias = upper_tail_inverse(T::one() / T::from_usize_exact(n))?;
    Ok(EstimatorResult::new(os.min() + debias, Method::Minimum))
}

/// Rough range `[low, up]` known to contain the minimum effect with high
/// probability. `low` may be `-inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Brackets<T> {
    pub low: T,
    pub up: T,
}

fn check_degree(q: i64) -> Result<()> {
    if q < 2 || q % 2 != 0 {
        return Err(Error::InvalidDegree(q));
    }
    if q > MAX_DEGREE as i64 {
        return Err(Error::DegreeTooLarge {
            q: q as u32,
            max: MAX_DEGREE,
        });
    }
    Ok(())
}

fn brackets_with<T: Real>(
    os: &OrderStatistics<T>,
    q: i64,
    tuning: &GoscTuning<T>,
) -> Result<Brackets<T>> {
    let n = os.len();
    if n < 2 {
        return Err(Error::SampleTooSmall { n, min: 2 });
    }
    let up = os.min() + T::lit(2.0) * T::from_usize_exact(n).ln().sqrt();
    let q_r = T::from_i64(q).expect("degree");
    let low = match tuning.vbar() {
        Some(vbar) if q_r <= tuning.low_bracket_cutoff() => theta_med(os).value - vbar,
        _ => T::neg_infinity(),
    };
    Ok(Brackets { low, up })
}

/// `theta_up = Y_(1) + 2 sqrt(ln n)` and `theta_low = theta_med - vbar`, the
/// latter `-inf` for degrees above the cutoff or when `q_max < 2`.
pub fn theta_brackets<T: Real, Y: Observations<T> + ?Sized>(y: &Y, q: i64) -> Result<Brackets<T>> {
    check_degree(q)?;
    let os = y.order_stats();
    brackets_with(&os, q, &GoscTuning::new(os.len()))
}

fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if lambda > T::zero() && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive {
            what: "lambda",
            value: lambda.as_f64(),
        })
    }
}

/// Natural log of the empirical Laplace statistic, shifted by the sample
/// minimum so no intermediate exponential overflows.
pub fn log_eta_hat<T: Real>(y: &SampleVector<T>, lambda: T, u: T) -> Result<T> {
    check_lambda(lambda)?;
    let values = y.values();
    let shift = values.iter().copied().fold(T::infinity(), T::min);
    let n = T::from_usize_exact(values.len());
    let mean = compensated::sum(values.iter().map(|&v| (-lambda * (v - shift)).exp())) / n;
    Ok(lambda * (u - shift) - lambda * lambda / T::lit(2.0) + mean.ln())
}

/// `n^{-1} sum_i exp(lambda (u - Y_i) - lambda^2 / 2)`.
pub fn eta_hat<T: Real>(y: &SampleVector<T>, lambda: T, u: T) -> Result<T> {
    Ok(log_eta_hat(y, lambda, u)?.exp())
}

/// The statistic `u -> sum_j a_{j,q} eta_hat_{j lambda}(u)` as a polynomial
/// in `w = exp(lambda (u - min Y))`.
#[derive(Debug, Clone)]
pub struct LaplacePolynomial<T> {
    lambda: T,
    shift: T,
    terms: Vec<DoubleWord<T>>,
}

impl<T: Real> LaplacePolynomial<T> {
    pub fn new(values: &[T], coeffs: &ChebCoefficients<T>, lambda: T) -> Result<Self> {
        check_lambda(lambda)?;
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        let q = coeffs.degree() as usize;
        let shift = values.iter().copied().fold(T::infinity(), T::min);
        let n = T::from_usize_exact(values.len());
        let ratios: Vec<T> = values
            .iter()
            .map(|&v| (-lambda * (v - shift)).exp())
            .collect();
        let mut powers = vec![T::one(); values.len()];
        let mut terms = Vec::with_capacity(q + 1);
        terms.push(coeffs.split()[0]);
        for j in 1..=q {
            for (p, &r) in powers.iter_mut().zip(&ratios) {
                *p = *p * r;
            }
            let j_r = T::from_usize_exact(j);
            let damping = (-(j_r * j_r) * lambda * lambda / T::lit(2.0)).exp();
            let moment = compensated::sum(powers.iter().copied()) / n * damping;
            terms.push(coeffs.split()[j].mul_single(moment));
        }
        Ok(Self {
            lambda,
            shift,
            terms,
        })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    /// The sample minimum the polynomial variable is centred on.
    pub fn shift(&self) -> T {
        self.shift
    }

    pub fn degree(&self) -> usize {
        self.terms.len() - 1
    }

    /// `sum_{j >= 1} |a_j d_j|`, bounding `|psi_hat(u) - 1|` by `w` times
    /// this value whenever `w <= 1`.
    pub fn tail_abs_sum(&self) -> T {
        compensated::sum(self.terms.iter().skip(1).map(|t| t.value().abs()))
    }

    pub fn eval(&self, u: T) -> T {
        let x = self.lambda * (u - self.shift);
        let q = T::from_usize_exact(self.degree());
        if x * q <= T::lit(EXP_LIMIT) {
            return compensated::horner(&self.terms, x.exp());
        }
        // log-space with a shared max-exponent shift
        let logs: Vec<(T, T)> = self
            .terms
            .iter()
            .enumerate()
            .map(|(j, t)| {
                let c = t.value();
                (T::from_usize_exact(j) * x + c.abs().ln(), c.signum())
            })
            .collect();
        let top = logs.iter().map(|&(e, _)| e).fold(T::neg_infinity(), T::max);
        let scaled = compensated::sum(logs.iter().map(|&(e, s)| s * (e - top).exp()));
        scaled * top.exp()
    }
}

/// `sum_{j=0}^{q} a_{j,q} eta_hat_{j lambda}(u)`, the `j = 0` term being `a_0 = 1`.
pub fn psi_hat<T: Real>(y: &SampleVector<T>, q: i64, lambda: T, u: T) -> Result<T> {
    check_degree(q)?;
    let coeffs = cheb_coeffs::<T>(q as u32)?;
    Ok(LaplacePolynomial::new(y.values(), &coeffs, lambda)?.eval(u))
}

/// `n^{-1} sum_i g_q(lambda (u - gamma_i))` for known means `gamma`.
pub fn psi_population<T: Real>(gamma: &[T], q: i64, lambda: T, u: T) -> Result<T> {
    check_degree(q)?;
    check_lambda(lambda)?;
    if gamma.is_empty() {
        return Err(Error::EmptySample);
    }
    let coeffs = cheb_coeffs::<T>(q as u32)?;
    let n = T::from_usize_exact(gamma.len());
    Ok(compensated::sum(gamma.iter().map(|&g| coeffs.g(lambda * (u - g)))) / n)
}

/// Smallest `u` in `[lo, hi]` at which `poly(u) > level`, found by a uniform
/// scan over `grid` points followed by bisection. Returns `None` when no grid
/// point exceeds the level.
pub fn crossing_infimum<T: Real>(
    poly: &LaplacePolynomial<T>,
    level: T,
    lo: T,
    hi: T,
    grid: usize,
) -> Option<T> {
    let above = |u: T| poly.eval(u) > level;
    if above(lo) {
        return Some(lo);
    }
    if !(hi > lo) || grid < 2 {
        return None;
    }
    let cells = T::from_usize_exact(grid - 1);
    let width = hi - lo;
    let mut prev = lo;
    for i in 1..grid {
        let u = if i == grid - 1 {
            hi
        } else {
            lo + width * T::from_usize_exact(i) / cells
        };
        if above(u) {
            let (mut a, mut b) = (prev, u);
            while b - a > T::lit(BISECTION_WIDTH) {
                let m = a + (b - a) / T::lit(2.0);
                if m <= a || m >= b {
                    break;
                }
                if above(m) {
                    b = m;
                } else {
                    a = m;
                }
            }
            return Some(b);
        }
        prev = u;
    }
    None
}

/// Chebyshev–Laplace estimator for an explicit set of sample-size constants.
///
/// With `strict`, the degree must satisfy `2 <= q <= q_max`; otherwise any
/// even degree is accepted and the result is flagged `in_regime = false`.
pub fn theta_q_with<T: Real>(
    os: &OrderStatistics<T>,
    q: i64,
    tuning: &GoscTuning<T>,
    strict: bool,
) -> Result<EstimatorResult<T>> {
    check_degree(q)?;
    let in_regime = !tuning.is_degenerate() && q <= tuning.q_max;
    if strict {
        if tuning.is_degenerate() {
            return Err(Error::DegenerateRegime {
                n: tuning.n,
                q_max: tuning.q_max,
            });
        }
        if q > tuning.q_max {
            return Err(Error::DegreeOutOfRegime {
                q,
                q_max: tuning.q_max,
            });
        }
    }
    let brackets = brackets_with(os, q, tuning)?;
    let lambda = tuning.lambda(q);
    let level = tuning.crossing_level(q);
    let coeffs = cheb_coeffs::<T>(q as u32)?;
    let poly = LaplacePolynomial::new(os.sorted(), &coeffs, lambda)?;

    // below w* = (level - 1) / sum_{j>=1} |a_j d_j| the statistic cannot reach the level
    let excess = level - T::one();
    let tail = poly.tail_abs_sum();
    let floor_w = if tail > T::zero() {
        (excess / tail).min(T::one())
    } else {
        T::one()
    };
    let u_floor = poly.shift() + floor_w.ln() / lambda;
    let lo = if brackets.low.is_finite() {
        brackets.low.max(u_floor)
    } else {
        u_floor
    };

    let value = if excess.is_finite() && lo < brackets.up {
        crossing_infimum(&poly, level, lo, brackets.up, CROSSING_GRID).unwrap_or(brackets.up)
    } else {
        brackets.up
    };

    let tuning_record = Tuning {
        q: Some(q),
        q_max: Some(tuning.q_max),
        lambda: Some(lambda),
        theta_low: brackets.low.is_finite().then_some(brackets.low),
        theta_up: Some(brackets.up),
        crossing_level: Some(level),
        in_regime: Some(in_regime),
        ..Tuning::default()
    };
    Ok(EstimatorResult::with_tuning(
        value,
        Method::ChebyshevLaplace,
        tuning_record,
    ))
}

/// `inf { u in [theta_low, theta_up] : psi_hat_{q, lambda_q}(u) > 1 + e^{aq}/sqrt(n) }`,
/// with `inf {} = theta_up`. Requires `2 <= q <= q_max`.
pub fn theta_q<T: Real, Y: Observations<T> + ?Sized>(y: &Y, q: i64) -> Result<EstimatorResult<T>> {
    let os = y.order_stats();
    theta_q_with(&os, q, &GoscTuning::new(os.len()), true)
}

/// `theta_q` for any even degree, including when the sample size leaves no
/// admissible degree.
pub fn theta_q_unrestricted<T: Real, Y: Observations<T> + ?Sized>(
    y: &Y,
    q: i64,
) -> Result<EstimatorResult<T>> {
    let os = y.order_stats();
    theta_q_with(&os, q, &GoscTuning::new(os.len()), false)
}

/// Degree matched to sparsity `k`: `even_floor(ln(k / sqrt n) / a)` capped at `q_max`.
/// Values below 2 mean the median or minimum estimator applies.
///
/// Takes 128-bit counts: the degree only leaves the degenerate range for
/// sample sizes beyond `e^{8a}`, far past `usize`.
pub fn q_k_gosc(k: u128, n: u128) -> i64 {
    let a = laplace_constant::<f64>();
    let log_n = (n as f64).ln();
    let q_max = even_floor(log_n / (2.0 * a)) - 2;
    let ratio = k as f64 / (n as f64).sqrt();
    even_floor(ratio.ln() / a).min(q_max)
}

/// Lepski selection over `{median, theta_2, ..., theta_{q_max}, minimum}` with
/// explicit sample-size constants.
pub fn adaptive_gosc_with<T: Real>(
    os: &OrderStatistics<T>,
    tuning: &GoscTuning<T>,
) -> Result<EstimatorResult<T>> {
    let n = os.len();
    if n < 2 {
        return Err(Error::SampleTooSmall { n, min: 2 });
    }
    let n_r = T::from_usize_exact(n);
    let q_max = tuning.q_max;
    let mut ladder = vec![Candidate {
        order: 0,
        estimate: theta_med(os).value,
        threshold: T::infinity(),
    }];
    if !tuning.is_degenerate() {
        for q in (2..=q_max).step_by(2) {
            let q_r = T::from_i64(q).expect("degree");
            let threshold = if q == q_max {
                T::lit(25.0) / q_r.powf(T::lit(1.5))
            } else {
                T::lit(10.0) * (tuning.a * (q_r + T::lit(2.0))).exp()
                    / (n_r.sqrt() * q_r.powf(T::lit(1.5)))
            };
            ladder.push(Candidate {
                order: q,
                estimate: theta_q_with(os, q, tuning, true)?.value,
                threshold,
            });
        }
    }
    ladder.push(Candidate {
        order: q_max.max(0) + 2,
        estimate: theta_min(os)?.value,
        threshold: T::lit(4.0) * (T::lit(2.0) * n_r.ln()).sqrt(),
    });
    let pick = lepski::select_smallest(&ladder);
    let tuning_record = Tuning {
        q: Some(ladder[pick].order),
        q_max: Some(q_max),
        in_regime: Some(!tuning.is_degenerate()),
        ladder: Some(ladder.iter().map(|c| c.order).collect()),
        ..Tuning::default()
    };
    Ok(EstimatorResult::with_tuning(
        ladder[pick].estimate,
        Method::AdaptiveGosc,
        tuning_record,
    ))
}

/// Adaptive estimator: the smallest rung agreeing with every larger rung
/// within that rung's tolerance. When `q_max < 2` the ladder is
/// `{median, minimum}`.
pub fn adaptive_gosc<T: Real, Y: Observations<T> + ?Sized>(y: &Y) -> Result<EstimatorResult<T>> {
    let os = y.order_stats();
    adaptive_gosc_with(&os, &GoscTuning::new(os.len()))
}
