//! Post hoc FDP envelopes over the nested sets of the `t` largest alternative means.

use std::time::Instant;

use minfx_core::{posthoc_bound, rescaled_pvalues};
use serde::{Deserialize, Serialize};

use super::{replicate, validate_alpha, ExperimentOutput, Variant};
use crate::alternatives::{build_alternatives, AltShape};
use crate::error::{config_err, Result};
use crate::generate::{gen_equicorr, EquiCorrConfig};
use crate::plot::{line_svg, Series};
use crate::report::{ExperimentReport, Table};
use crate::rng::{stream, FROZEN_STREAM};
use crate::summary::mean_se;

/// Trajectories drawn per variant in the figure.
const PLOTTED: usize = 25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosthocConfig {
    pub n: usize,
    pub reps: usize,
    pub rho: f64,
    pub k_frac: f64,
    pub delta: f64,
    pub alpha: f64,
    pub t_max: usize,
    pub shape: AltShape,
    pub seed: u64,
}

impl Default for PosthocConfig {
    fn default() -> Self {
        Self {
            n: 1_000,
            reps: 200,
            rho: 0.3,
            k_frac: 0.05,
            delta: 4.0,
            alpha: 0.2,
            t_max: 200,
            shape: AltShape::Constant,
            seed: 1,
        }
    }
}

/// Indices ordered by decreasing true mean (nulls last, ties by index).
pub fn set_order(means: &[f64], n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..means.len()).collect();
    order.sort_by(|&a, &b| means[b].total_cmp(&means[a]).then(a.cmp(&b)));
    order.extend(means.len()..n);
    order
}

struct Envelope {
    bounds: Vec<f64>,
    covered: bool,
}

pub fn run_posthoc_experiment(cfg: &PosthocConfig) -> Result<ExperimentOutput> {
    let start = Instant::now();
    validate_alpha(cfg.alpha)?;
    if cfg.reps == 0 {
        return config_err("reps must be positive");
    }
    if cfg.t_max == 0 || cfg.t_max > cfg.n {
        return config_err(format!("t_max = {} is outside 1..={}", cfg.t_max, cfg.n));
    }
    let n1 = (cfg.k_frac * cfg.n as f64).round() as usize;
    if n1 == 0 || n1 > cfg.n * 9 / 10 {
        return config_err(format!("n1 = {n1} is outside 1..=floor(0.9 n)"));
    }
    let means = build_alternatives(
        cfg.shape,
        n1,
        cfg.delta,
        &mut stream(cfg.seed, FROZEN_STREAM),
    )?;
    let order = set_order(&means, cfg.n);
    let ecfg = EquiCorrConfig::new(cfg.n, cfg.rho, means)?;
    let true_fdp: Vec<f64> = (1..=cfg.t_max)
        .map(|t| order[..t].iter().filter(|&&i| i >= n1).count() as f64 / t as f64)
        .collect();

    let runs: Vec<Vec<Envelope>> = replicate(cfg.reps, |rep| {
        let draw = gen_equicorr(&ecfg, &mut stream(cfg.seed, rep))?;
        let os = draw.y.order_statistics();
        Variant::ALL
            .iter()
            .map(|v| {
                let r = v.rescaling(&ecfg, &draw, &os)?;
                let p = rescaled_pvalues(&draw.y, &r);
                let bounds = (1..=cfg.t_max)
                    .map(|t| posthoc_bound(&p, &order[..t], cfg.alpha))
                    .collect::<minfx_core::Result<Vec<f64>>>()?;
                let covered = bounds.iter().zip(&true_fdp).all(|(b, f)| f <= b);
                Ok(Envelope { bounds, covered })
            })
            .collect()
    })?;

    let mut records = Table::new(&["rep", "variant", "t", "bound", "true_fdp"]);
    for (rep, per_variant) in runs.iter().enumerate() {
        for (v, env) in Variant::ALL.iter().zip(per_variant) {
            for (i, b) in env.bounds.iter().enumerate() {
                records.push(vec![
                    rep.into(),
                    v.name().into(),
                    (i + 1).into(),
                    (*b).into(),
                    true_fdp[i].into(),
                ]);
            }
        }
    }

    let mut agg = Table::new(&[
        "variant",
        "t",
        "bound_mean",
        "bound_se",
        "true_fdp",
        "coverage",
        "coverage_se",
    ]);
    let mut series = Vec::new();
    for (vi, v) in Variant::ALL.iter().enumerate() {
        let hits: Vec<f64> = runs.iter().map(|r| r[vi].covered as u8 as f64).collect();
        let (coverage, coverage_se) = mean_se(&hits);
        for t in 0..cfg.t_max {
            let (m, se) = mean_se(&runs.iter().map(|r| r[vi].bounds[t]).collect::<Vec<_>>());
            agg.push(vec![
                v.name().into(),
                (t + 1).into(),
                m.into(),
                se.into(),
                true_fdp[t].into(),
                coverage.into(),
                coverage_se.into(),
            ]);
        }
        for r in runs.iter().take(PLOTTED) {
            series.push(Series {
                name: v.name().into(),
                points: r[vi]
                    .bounds
                    .iter()
                    .enumerate()
                    .map(|(t, &b)| ((t + 1) as f64, b))
                    .collect(),
                dashed: false,
            });
        }
    }
    series.push(Series {
        name: "true-fdp".into(),
        points: true_fdp
            .iter()
            .enumerate()
            .map(|(t, &f)| ((t + 1) as f64, f))
            .collect(),
        dashed: true,
    });
    let title = format!(
        "post hoc bounds, n={}, rho={}, k/n={}, Delta={}, alpha={}",
        cfg.n, cfg.rho, cfg.k_frac, cfg.delta, cfg.alpha
    );
    let svg = line_svg(&title, "t", "FDP bound on S_t", &series);
    let mut report = ExperimentReport::new("posthoc", cfg.seed, cfg, records, agg)?;
    report.wall_clock_ms = start.elapsed().as_millis();
    Ok(ExperimentOutput { report, svg })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets_follow_decreasing_means() {
        assert_eq!(set_order(&[1.0, 3.0, 3.0], 5), vec![1, 2, 0, 3, 4]);
        assert_eq!(set_order(&[2.0; 3], 4), vec![0, 1, 2, 3]);
    }
}
