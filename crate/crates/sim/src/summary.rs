use serde::Serialize;

/// Sample quantile with linear interpolation between order statistics
/// (`h = (n - 1) p`). `sorted` must be ascending and non-empty.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Mean and its standard error.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let m = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (m, f64::NAN);
    }
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxSummary {
    pub whisker_low: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_high: f64,
}

impl BoxSummary {
    /// Quartiles plus whiskers at the most extreme points within 1.5 IQR of the box.
    pub fn new(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let s = sorted(values);
        let (q1, median, q3) = (quantile(&s, 0.25), quantile(&s, 0.5), quantile(&s, 0.75));
        let reach = 1.5 * (q3 - q1);
        let whisker_low = *s.iter().find(|&&v| v >= q1 - reach).unwrap_or(&q1);
        let whisker_high = *s.iter().rev().find(|&&v| v <= q3 + reach).unwrap_or(&q3);
        Some(Self {
            whisker_low,
            q1,
            median,
            q3,
            whisker_high,
        })
    }

    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }

    pub fn outliers<'a>(&self, values: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        let (lo, hi) = (self.whisker_low, self.whisker_high);
        values.iter().copied().filter(move |&v| v < lo || v > hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolated_quartiles() {
        let s = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&s, 0.25), 1.75);
        assert_eq!(quantile(&s, 0.5), 2.5);
        assert_eq!(quantile(&s, 1.0), 4.0);
        assert_eq!(quantile(&[7.0], 0.3), 7.0);
    }

    #[test]
    fn whiskers_exclude_far_points() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0, 100.0];
        let b = BoxSummary::new(&v).unwrap();
        assert_eq!(b.whisker_low, 1.0);
        assert_eq!(b.whisker_high, 5.0);
        assert_eq!(b.outliers(&v).collect::<Vec<_>>(), vec![100.0]);
        assert!(BoxSummary::new(&[]).is_none());
    }

    #[test]
    fn mean_and_error() {
        let (m, se) = mean_se(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - (1.0_f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
