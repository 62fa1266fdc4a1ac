//! Empirical risk `E|theta_hat - theta|` over a grid of sample sizes and sparsities.

use std::time::Instant;

use minfx_core::{
    adaptive_gosc, adaptive_osc, q_k_osc, theta_med, theta_min, theta_tilde, unknown_variance,
    OrderStatistics,
};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{replicate, ExperimentOutput};
use crate::error::{config_err, Result};
use crate::plot::{line_svg, Series};
use crate::report::{ExperimentReport, Table};
use crate::rng::{cell_stream, stream};
use crate::summary::mean_se;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RiskEstimator {
    Median,
    Minimum,
    /// Quantile at the order matched to the true `k`.
    QuantileQk,
    AdaptiveOsc,
    UnknownVariance,
    AdaptiveGosc,
}

impl RiskEstimator {
    pub const ALL: [RiskEstimator; 6] = [
        RiskEstimator::Median,
        RiskEstimator::Minimum,
        RiskEstimator::QuantileQk,
        RiskEstimator::AdaptiveOsc,
        RiskEstimator::UnknownVariance,
        RiskEstimator::AdaptiveGosc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RiskEstimator::Median => "median",
            RiskEstimator::Minimum => "minimum",
            RiskEstimator::QuantileQk => "quantile-qk",
            RiskEstimator::AdaptiveOsc => "adaptive-osc",
            RiskEstimator::UnknownVariance => "unknown-variance",
            RiskEstimator::AdaptiveGosc => "adaptive-gosc",
        }
    }

    /// Estimate of the location; the sparsity-matched rules use order `q_1` when `k = 0`.
    pub fn estimate(self, os: &OrderStatistics<f64>, k: usize, c0: f64) -> Result<f64> {
        let k = k.max(1);
        Ok(match self {
            RiskEstimator::Median => theta_med(os).value,
            RiskEstimator::Minimum => theta_min(os)?.value,
            RiskEstimator::QuantileQk => theta_tilde(os, q_k_osc(k, os.len())?)?.value,
            RiskEstimator::AdaptiveOsc => adaptive_osc(os, c0)?.value,
            RiskEstimator::UnknownVariance => unknown_variance(os, k)?.theta,
            RiskEstimator::AdaptiveGosc => adaptive_gosc(os)?.value,
        })
    }
}

impl std::str::FromStr for RiskEstimator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        RiskEstimator::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown estimator '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskConfig {
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
    pub estimators: Vec<RiskEstimator>,
    pub reps: usize,
    /// Shift of the contaminated coordinates.
    pub mu: f64,
    pub c0: f64,
    pub seed: u64,
}

impl Default for RiskConfig {
    fn default() -> Self {
        Self {
            ns: vec![100, 1_000, 10_000],
            ks: vec![0, 5, 50],
            estimators: RiskEstimator::ALL.to_vec(),
            reps: 200,
            mu: 3.0,
            c0: 2.0,
            seed: 1,
        }
    }
}

impl RiskConfig {
    fn validate(&self) -> Result<()> {
        if self.ns.is_empty() || self.ks.is_empty() || self.estimators.is_empty() {
            return config_err("the n, k and estimator grids must be non-empty");
        }
        if self.reps == 0 {
            return config_err("reps must be positive");
        }
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return config_err(format!("mu = {} must be non-negative", self.mu));
        }
        if !(self.c0 > 0.0) {
            return config_err("c0 must be positive");
        }
        for &n in &self.ns {
            if n < 16 {
                return config_err(format!("n = {n} is below 16"));
            }
            if let Some(k) = self.ks.iter().find(|&&k| k + 2 > n) {
                return config_err(format!("k = {k} needs n >= k + 2, got n = {n}"));
            }
        }
        Ok(())
    }
}

pub fn run_risk_experiment(cfg: &RiskConfig) -> Result<ExperimentOutput> {
    let start = Instant::now();
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = cfg
        .ns
        .iter()
        .flat_map(|&n| cfg.ks.iter().map(move |&k| (n, k)))
        .collect();
    let mut errors: Vec<Vec<Vec<f64>>> = Vec::with_capacity(cells.len());
    for (ci, &(n, k)) in cells.iter().enumerate() {
        let per_rep: Vec<Vec<f64>> = replicate(cfg.reps, |rep| {
            let mut rng = stream(cfg.seed, cell_stream(ci as u32, rep as u32));
            let mut y: Vec<f64> = (0..n)
                .map(|i| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    if i < k {
                        z + cfg.mu
                    } else {
                        z
                    }
                })
                .collect();
            y.sort_unstable_by(f64::total_cmp);
            let os = OrderStatistics::from_sorted(y)?;
            cfg.estimators
                .iter()
                .map(|e| e.estimate(&os, k, cfg.c0))
                .collect()
        })?;
        errors.push(per_rep);
    }

    let mut records = Table::new(&["n", "k", "estimator", "rep", "estimate", "abs_error"]);
    let mut agg = Table::new(&["n", "k", "estimator", "risk", "risk_se"]);
    let mut series = Vec::new();
    for (ci, &(n, k)) in cells.iter().enumerate() {
        for (ei, e) in cfg.estimators.iter().enumerate() {
            for (rep, est) in errors[ci].iter().enumerate() {
                let v = est[ei];
                records.push(vec![
                    n.into(),
                    k.into(),
                    e.name().into(),
                    rep.into(),
                    v.into(),
                    v.abs().into(),
                ]);
            }
            let abs: Vec<f64> = errors[ci].iter().map(|est| est[ei].abs()).collect();
            let (risk, se) = mean_se(&abs);
            agg.push(vec![
                n.into(),
                k.into(),
                e.name().into(),
                risk.into(),
                se.into(),
            ]);
        }
    }
    // one curve per (estimator, k) against log10 n
    for e in &cfg.estimators {
        for &k in &cfg.ks {
            let points = cfg
                .ns
                .iter()
                .map(|&n| {
                    let risk = agg.select(
                        "risk",
                        &[
                            ("n", &n.to_string()),
                            ("k", &k.to_string()),
                            ("estimator", e.name()),
                        ],
                    );
                    ((n as f64).log10(), risk[0])
                })
                .collect();
            series.push(Series {
                name: format!("{} k={k}", e.name()),
                points,
                dashed: k != cfg.ks[0],
            });
        }
    }
    let svg = line_svg(
        "estimation risk E|theta_hat - theta|",
        "log10 n",
        "risk",
        &series,
    );
    let mut report = ExperimentReport::new("risk", cfg.seed, cfg, records, agg)?;
    report.wall_clock_ms = start.elapsed().as_millis();
    Ok(ExperimentOutput { report, svg })
}
