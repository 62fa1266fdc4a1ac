//! Standard-normal tail and quantile functions, order statistics and the
//! dyadic / even rounding helpers shared by all estimators.

use std::borrow::Cow;
use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;

/// A value strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Probability<T>(T);

impl<T: Real> Probability<T> {
    pub fn new(value: T) -> Result<Self> {
        if value > T::zero() && value < T::one() {
            Ok(Self(value))
        } else {
            Err(Error::InvalidProbability(value.as_f64()))
        }
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// Observations `Y_1..Y_n`: non-empty, every entry finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleVector<T> {
    values: Vec<T>,
}

impl<T: Real> SampleVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((index, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite {
                index,
                value: v.as_f64(),
            });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_inner(self) -> Vec<T> {
        self.values
    }

    /// Applies `y -> scale * y + shift` to every entry.
    pub fn affine(&self, scale: T, shift: T) -> Result<Self> {
        Self::new(self.values.iter().map(|&y| scale * y + shift).collect())
    }

    pub fn order_statistics(&self) -> OrderStatistics<T> {
        let mut sorted = self.values.clone();
        sorted.sort_unstable_by(total_cmp);
        OrderStatistics { sorted }
    }
}

impl<T> AsRef<[T]> for SampleVector<T> {
    fn as_ref(&self) -> &[T] {
        &self.values
    }
}

#[inline]
pub(crate) fn total_cmp<T: Real>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// A sample sorted once so that the many order statistics needed by an
/// estimator are O(1) lookups.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStatistics<T> {
    sorted: Vec<T>,
}

impl<T: Real> OrderStatistics<T> {
    /// Wraps values that are already sorted ascending.
    pub fn from_sorted(sorted: Vec<T>) -> Result<Self> {
        let sample = SampleVector::new(sorted)?;
        if sample.values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(
                "values are not sorted ascending".into(),
            ));
        }
        Ok(Self {
            sorted: sample.values,
        })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    /// The `q`-th smallest value, 1-based.
    pub fn get(&self, q: usize) -> Result<T> {
        if q == 0 || q > self.sorted.len() {
            return Err(Error::OrderOutOfRange {
                q,
                max: self.sorted.len(),
            });
        }
        Ok(self.sorted[q - 1])
    }

    pub fn min(&self) -> T {
        self.sorted[0]
    }
}

/// Anything an estimator can read order statistics from.
pub trait Observations<T: Real> {
    fn order_stats(&self) -> Cow<'_, OrderStatistics<T>>;
}

impl<T: Real> Observations<T> for SampleVector<T> {
    fn order_stats(&self) -> Cow<'_, OrderStatistics<T>> {
        Cow::Owned(self.order_statistics())
    }
}

impl<T: Real> Observations<T> for OrderStatistics<T> {
    fn order_stats(&self) -> Cow<'_, OrderStatistics<T>> {
        Cow::Borrowed(self)
    }
}

/// Standard normal density.
#[inline]
pub fn density<T: Real>(t: T) -> T {
    (-(t * t) / T::lit(2.0)).exp() / T::lit(2.0 * std::f64::consts::PI).sqrt()
}

/// Upper tail `1 - Phi(t)` of the standard normal.
#[inline]
pub fn upper_tail<T: Real>(t: T) -> T {
    T::lit(0.5) * (t / T::SQRT_2()).erfc()
}

/// Lower-quantile rational approximation (relative error about 1.15e-9).
fn acklam_lower_quantile<T: Real>(p: T) -> T {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    let horner =
        |coeffs: &[f64], x: T| coeffs.iter().fold(T::zero(), |acc, &c| acc * x + T::lit(c));
    let p_low = T::lit(0.02425);
    if p < p_low {
        let q = (T::lit(-2.0) * p.ln()).sqrt();
        horner(&C, q) / (horner(&D, q) * q + T::one())
    } else {
        let q = p - T::lit(0.5);
        let r = q * q;
        horner(&A, r) * q / (horner(&B, r) * r + T::one())
    }
}

/// Inverse upper tail: the unique `t` with `upper_tail(t) == p`.
///
/// Rational starting point refined by two Halley steps on `upper_tail`.
/// Values above one half are reflected through `1 - p`, which is exact there,
/// so the function is exactly antisymmetric about 1/2.
pub fn upper_tail_inverse<T: Real>(p: T) -> Result<T> {
    let p = Probability::new(p)?.value();
    if p > T::lit(0.5) {
        return Ok(-tail_quantile(T::one() - p));
    }
    Ok(tail_quantile(p))
}

fn tail_quantile<T: Real>(p: T) -> T {
    if p == T::lit(0.5) {
        return T::zero();
    }
    let mut t = -acklam_lower_quantile(p);
    for _ in 0..2 {
        let phi = density(t);
        if phi <= T::zero() || !phi.is_finite() {
            break;
        }
        let u = (upper_tail(t) - p) / phi;
        t = t + u / (T::one() - t * u / T::lit(2.0));
    }
    t
}

/// The `q`-th smallest value (1-based) among all entries, or among the first
/// `m` entries when `m` is given.
pub fn order_statistic<T: Real>(y: &SampleVector<T>, q: usize, m: Option<usize>) -> Result<T> {
    let n = y.len();
    let m = m.unwrap_or(n);
    if m == 0 || m > n {
        return Err(Error::OrderOutOfRange { q: m, max: n });
    }
    if q == 0 || q > m {
        return Err(Error::OrderOutOfRange { q, max: m });
    }
    let mut head = y.values()[..m].to_vec();
    head.sort_unstable_by(total_cmp);
    Ok(head[q - 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Up,
    Down,
}

/// Rounds a positive number to a power of two: `2^floor(log2 x)` or `2^ceil(log2 x)`.
pub fn dyadic_round<T: Real>(x: T, direction: Rounding) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::NonPositive {
            what: "dyadic rounding argument",
            value: x.as_f64(),
        });
    }
    let two = T::lit(2.0);
    let mut p = two.powf(x.log2().floor());
    // log2 can be off by one ulp near exact powers of two
    while p > x {
        p = p / two;
    }
    while p * two <= x {
        p = p * two;
    }
    Ok(match direction {
        Rounding::Down => p,
        Rounding::Up if p == x => p,
        Rounding::Up => p * two,
    })
}

/// Largest even integer not exceeding `x`. May be zero or negative.
pub fn even_floor<T: Real>(x: T) -> i64 {
    let f = x
        .floor()
        .to_i64()
        .expect("even_floor argument within i64 range");
    f - f.rem_euclid(2)
}
