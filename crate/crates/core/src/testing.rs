//! Rescaled p-values, the Benjamini-Hochberg step-up procedure, false and
//! true discovery proportions and the Simes post hoc bound.
//!
//! Indices are 0-based.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{total_cmp, upper_tail, upper_tail_inverse, Probability, SampleVector};
use crate::osc::upper_biased;
use crate::real::Real;

/// Smallest p-value written to files; in-memory values are never clipped.
pub const EXPORT_FLOOR: f64 = 1e-300;

/// Location `u` and scale `s > 0` applied before computing p-values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rescaling<T> {
    u: T,
    s: T,
}

impl<T: Real> Rescaling<T> {
    pub fn new(u: T, s: T) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "location {u} is not finite"
            )));
        }
        if !(s > T::zero()) || !s.is_finite() {
            return Err(Error::NonPositive {
                what: "scale",
                value: s.as_f64(),
            });
        }
        Ok(Self { u, s })
    }

    /// The uncorrected pair `(0, 1)`.
    pub fn standard() -> Self {
        Self {
            u: T::zero(),
            s: T::one(),
        }
    }

    pub fn u(&self) -> T {
        self.u
    }

    pub fn s(&self) -> T {
        self.s
    }

    /// `upper_tail((y - u) / s)`.
    #[inline]
    pub fn pvalue(&self, y: T) -> T {
        upper_tail((y - self.u) / self.s)
    }
}

/// p-values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PValueVector<T> {
    values: Vec<T>,
}

impl<T: Real> PValueVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(&p) = values
            .iter()
            .find(|p| !(**p >= T::zero() && **p <= T::one()))
        {
            return Err(Error::InvalidParameter(format!(
                "p-value {p} is outside [0, 1]"
            )));
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
        self.values.is_empty()
    }

    /// Values clipped to `[EXPORT_FLOOR, 1]` for writing to files.
    pub fn exported(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|p| p.as_f64().clamp(EXPORT_FLOOR, 1.0))
            .collect()
    }

    /// Values sorted ascending.
    pub fn sorted(&self) -> Vec<T> {
        let mut s = self.values.clone();
        s.sort_unstable_by(total_cmp);
        s
    }
}

/// `p_i = upper_tail((Y_i - u) / s)`.
pub fn rescaled_pvalues<T: Real>(y: &SampleVector<T>, r: &Rescaling<T>) -> PValueVector<T> {
    PValueVector {
        values: y.values().iter().map(|&v| r.pvalue(v)).collect(),
    }
}

/// Result of a step-up procedure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionOutcome<T> {
    /// Rejected indices, ascending.
    pub rejected: Vec<usize>,
    pub ell_hat: usize,
    pub t_hat: T,
}

/// Which coordinates are nulls.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundTruth {
    is_null: Vec<bool>,
    n0: usize,
}

impl GroundTruth {
    pub fn from_nulls(is_null: Vec<bool>) -> Self {
        let n0 = is_null.iter().filter(|&&b| b).count();
        Self { is_null, n0 }
    }

    /// Nulls everywhere except `outliers`.
    pub fn from_outliers(n: usize, outliers: &[usize]) -> Result<Self> {
        let mut is_null = vec![true; n];
        for &i in outliers {
            *is_null
                .get_mut(i)
                .ok_or(Error::IndexOutOfRange { index: i, n })? = false;
        }
        Ok(Self::from_nulls(is_null))
    }

    pub fn len(&self) -> usize {
        self.is_null.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_null.is_empty()
    }

    pub fn is_null(&self, i: usize) -> bool {
        self.is_null[i]
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn n1(&self) -> usize {
        self.is_null.len() - self.n0
    }

    pub fn nulls(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_null[i]).collect()
    }

    pub fn outliers(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.is_null[i]).collect()
    }
}

#[inline]
fn bh_threshold<T: Real>(alpha: T, ell: usize, n: usize) -> T {
    alpha * T::from_usize_exact(ell) / T::from_usize_exact(n)
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    Probability::new(alpha).map(|_| ())
}

/// `(ell_hat, t_hat)` from p-values sorted ascending:
/// `ell_hat = max{l : p_(l) <= alpha l / n}` (0 when none) and
/// `t_hat = alpha ell_hat / n`.
pub fn bh_step_up_sorted<T: Real>(sorted: &[T], alpha: T) -> (usize, T) {
    let n = sorted.len();
    let ell = (1..=n)
        .rev()
        .find(|&l| sorted[l - 1] <= bh_threshold(alpha, l, n))
        .unwrap_or(0);
    let t_hat = if n == 0 {
        T::zero()
    } else {
        bh_threshold(alpha, ell, n)
    };
    (ell, t_hat)
}

/// Benjamini-Hochberg at level `alpha`: rejects every index with `p_i <= t_hat`.
pub fn bh_procedure<T: Real>(p: &PValueVector<T>, alpha: T) -> Result<SelectionOutcome<T>> {
    check_alpha(alpha)?;
    let (ell_hat, t_hat) = bh_step_up_sorted(&p.sorted(), alpha);
    let rejected = if ell_hat == 0 {
        Vec::new()
    } else {
        (0..p.len()).filter(|&i| p.values[i] <= t_hat).collect()
    };
    Ok(SelectionOutcome {
        rejected,
        ell_hat,
        t_hat,
    })
}

fn check_indices(set: &[usize], n: usize) -> Result<()> {
    match set.iter().find(|&&i| i >= n) {
        Some(&index) => Err(Error::IndexOutOfRange { index, n }),
        None => Ok(()),
    }
}

/// `|R ∩ H0| / max(|R|, 1)`.
pub fn fdp(rejected: &[usize], truth: &GroundTruth) -> Result<f64> {
    check_indices(rejected, truth.len())?;
    let false_hits = rejected.iter().filter(|&&i| truth.is_null(i)).count();
    Ok(false_hits as f64 / rejected.len().max(1) as f64)
}

/// `|R ∩ H1| / max(n1, 1)`.
pub fn tdp(rejected: &[usize], truth: &GroundTruth) -> Result<f64> {
    check_indices(rejected, truth.len())?;
    let hits = rejected.iter().filter(|&&i| !truth.is_null(i)).count();
    Ok(hits as f64 / truth.n1().max(1) as f64)
}

/// Post hoc bound on the false discovery proportion of `set`:
/// `1 ∧ min_l (#{i in S : p_i > alpha l / n} + l - 1) / max(|S|, 1)`.
pub fn posthoc_bound<T: Real>(p: &PValueVector<T>, set: &[usize], alpha: T) -> Result<f64> {
    check_alpha(alpha)?;
    let n = p.len();
    check_indices(set, n)?;
    if set.is_empty() {
        return Ok(0.0);
    }
    let mut ps: Vec<T> = set.iter().map(|&i| p.values[i]).collect();
    ps.sort_unstable_by(total_cmp);
    Ok(posthoc_bound_sorted(&ps, n, alpha))
}

/// The post hoc bound from the p-values of `S` sorted ascending, out of `n` tests.
pub fn posthoc_bound_sorted<T: Real>(ps: &[T], n: usize, alpha: T) -> f64 {
    let size = ps.len();
    if size == 0 {
        return 0.0;
    }
    let mut below = 0;
    let mut best = usize::MAX;
    // beyond l = |S| + 1 the objective only grows
    for l in 1..=n.min(size + 1) {
        let thr = bh_threshold(alpha, l, n);
        while below < size && ps[below] <= thr {
            below += 1;
        }
        best = best.min(size - below + l - 1);
    }
    (best as f64 / size as f64).min(1.0)
}

/// True when some `l <= n0` has `p_(l:H0) <= alpha l / n`, where `p_(l:H0)`
/// is the `l`-th smallest null p-value.
pub fn simes_violation<T: Real>(
    p: &PValueVector<T>,
    truth: &GroundTruth,
    alpha: T,
) -> Result<bool> {
    if truth.len() != p.len() {
        return Err(Error::InvalidParameter(format!(
            "{} p-values for {} coordinates",
            p.len(),
            truth.len()
        )));
    }
    let n = p.len();
    let mut nulls: Vec<T> = (0..n)
        .filter(|&i| truth.is_null(i))
        .map(|i| p.values[i])
        .collect();
    nulls.sort_unstable_by(total_cmp);
    Ok(nulls
        .iter()
        .enumerate()
        .any(|(j, &v)| v <= bh_threshold(alpha, j + 1, n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// `U(t) = upper_tail((s / sigma) upper_tail_inverse(t) + (u - theta) / sigma)`, or its inverse.
pub fn u_transform<T: Real>(
    t: T,
    r: &Rescaling<T>,
    theta: T,
    sigma: T,
    direction: Direction,
) -> Result<Probability<T>> {
    let t = Probability::new(t)?;
    if !(sigma > T::zero()) {
        return Err(Error::NonPositive {
            what: "sigma",
            value: sigma.as_f64(),
        });
    }
    let z = upper_tail_inverse(t.value())?;
    let arg = match direction {
        Direction::Forward => (r.s() * z + r.u() - theta) / sigma,
        Direction::Inverse => (sigma * z - r.u() + theta) / r.s(),
    };
    Probability::new(upper_tail(arg))
}

/// Upper-biased rescaling followed by Benjamini-Hochberg.
pub fn select_outliers<T: Real>(
    y: &SampleVector<T>,
    alpha: T,
    k0: usize,
) -> Result<(SelectionOutcome<T>, Rescaling<T>)> {
    check_alpha(alpha)?;
    let est = upper_biased(y, k0)?;
    let r = Rescaling::new(est.theta, est.sigma)?;
    let outcome = bh_procedure(&rescaled_pvalues(y, &r), alpha)?;
    Ok((outcome, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: &[f64]) -> PValueVector<f64> {
        PValueVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pvalue_at_location() {
        let y = SampleVector::new(vec![1.5, 0.0, 3.0]).unwrap();
        let r = Rescaling::new(1.5, 2.0).unwrap();
        let p = rescaled_pvalues(&y, &r);
        assert_eq!(p.values()[0], 0.5);
        assert!(p.values()[1] > p.values()[0] && p.values()[0] > p.values()[2]);
        assert!(Rescaling::new(0.0, 0.0).is_err());
        assert!(Rescaling::new(0.0, -1.0).is_err());
    }

    #[test]
    fn bh_examples() {
        let out = bh_procedure(&pv(&[0.01, 0.04, 0.03, 0.5]), 0.1).unwrap();
        assert_eq!(out.ell_hat, 3);
        assert_eq!(out.rejected, vec![0, 1, 2]);
        let out = bh_procedure(&pv(&[0.5, 0.6, 0.9]), 0.1).unwrap();
        assert_eq!(out.ell_hat, 0);
        assert!(out.rejected.is_empty());
        assert_eq!(out.t_hat, 0.0);
        let out = bh_procedure(&pv(&[0.0; 5]), 0.1).unwrap();
        assert_eq!(out.rejected.len(), 5);
        assert!(bh_procedure(&pv(&[0.1]), 1.0).is_err());
    }

    #[test]
    fn bh_ties_at_threshold() {
        // p_(2) = 0.1 = 0.2 * 2 / 4 ties exactly with the threshold
        let out = bh_procedure(&pv(&[0.1, 0.1, 0.9, 0.9]), 0.2).unwrap();
        assert_eq!(out.ell_hat, 2);
        assert_eq!(out.rejected, vec![0, 1]);
    }

    #[test]
    fn fdp_tdp_examples() {
        let truth = GroundTruth::from_outliers(5, &[0, 3]).unwrap();
        assert_eq!(truth.nulls(), vec![1, 2, 4]);
        assert!((fdp(&[0, 1, 2], &truth).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(fdp(&[], &truth).unwrap(), 0.0);
        assert_eq!(tdp(&[], &truth).unwrap(), 0.0);
        assert_eq!(fdp(&[0, 3], &truth).unwrap(), 0.0);
        assert_eq!(tdp(&[0, 3], &truth).unwrap(), 1.0);
        assert!(fdp(&[5], &truth).is_err());
    }

    #[test]
    fn posthoc_examples() {
        let p = pv(&[1.0; 10]);
        assert_eq!(posthoc_bound(&p, &[], 0.2).unwrap(), 0.0);
        let all: Vec<usize> = (0..10).collect();
        assert_eq!(posthoc_bound(&p, &all, 0.2).unwrap(), 1.0);
        let p = pv(&[0.001, 0.002, 0.5, 0.9]);
        // l = 3 leaves two of S above 0.15 but costs 2; l = 1 leaves 2 above 0.05
        assert_eq!(posthoc_bound(&p, &[0, 1, 2, 3], 0.2).unwrap(), 0.5);
    }

    #[test]
    fn simes_event() {
        let truth = GroundTruth::from_outliers(4, &[0]).unwrap();
        assert!(!simes_violation(&pv(&[0.0, 0.5, 0.6, 0.7]), &truth, 0.2).unwrap());
        assert!(simes_violation(&pv(&[0.0, 0.04, 0.6, 0.7]), &truth, 0.2).unwrap());
    }

    #[test]
    fn u_transform_identity_and_roundtrip() {
        let r = Rescaling::new(0.0, 1.0).unwrap();
        let t: f64 = u_transform(0.05, &r, 0.0, 1.0, Direction::Forward)
            .unwrap()
            .value();
        assert!((t - 0.05).abs() < 1e-15);
        let r = Rescaling::new(0.3, 1.4).unwrap();
        let f = u_transform(0.05, &r, -0.2, 0.8, Direction::Forward)
            .unwrap()
            .value();
        let back: f64 = u_transform(f, &r, -0.2, 0.8, Direction::Inverse)
            .unwrap()
            .value();
        assert!((back - 0.05).abs() < 1e-10);
        assert!(u_transform(0.0, &r, 0.0, 1.0, Direction::Forward).is_err());
    }
}
