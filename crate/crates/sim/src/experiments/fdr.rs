//! Rescaled BH in the equi-correlated design: FDP / TDP boxplots at a fixed
//! level and mean TDP curves over a grid of levels.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{replicate, validate_alpha, ExperimentOutput, Ranked, Variant};
use crate::alternatives::{build_alternatives, AltShape};
use crate::error::{config_err, Result};
use crate::generate::{gen_equicorr, EquiCorrConfig};
use crate::plot::{boxplot_svg, line_svg, BoxPanel, Series};
use crate::report::{Cell, ExperimentReport, Table};
use crate::rng::{stream, FROZEN_STREAM};
use crate::summary::{mean_se, BoxSummary};

pub const ROC_ALPHAS: [f64; 11] = [0.005, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdrConfig {
    pub n: usize,
    pub reps: usize,
    pub rho: f64,
    pub k_frac: f64,
    pub delta: f64,
    pub alpha: f64,
    pub shape: AltShape,
    pub seed: u64,
}

impl Default for FdrConfig {
    fn default() -> Self {
        Self {
            n: 100_000,
            reps: 50,
            rho: 0.3,
            k_frac: 0.1,
            delta: 3.0,
            alpha: 0.2,
            shape: AltShape::Constant,
            seed: 1,
        }
    }
}

impl FdrConfig {
    pub fn full_scale() -> Self {
        Self {
            n: 1_000_000,
            reps: 100,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocConfig {
    pub n: usize,
    pub reps: usize,
    pub rho: f64,
    pub k_frac: f64,
    pub delta: f64,
    pub alphas: Vec<f64>,
    pub shape: AltShape,
    pub seed: u64,
}

impl Default for RocConfig {
    fn default() -> Self {
        Self {
            n: 100_000,
            reps: 50,
            rho: 0.3,
            k_frac: 0.1,
            delta: 2.5,
            alphas: ROC_ALPHAS.to_vec(),
            shape: AltShape::Constant,
            seed: 1,
        }
    }
}

impl RocConfig {
    pub fn full_scale() -> Self {
        Self {
            n: 1_000_000,
            reps: 100,
            ..Self::default()
        }
    }
}

struct Design<'a> {
    n: usize,
    reps: usize,
    rho: f64,
    k_frac: f64,
    delta: f64,
    shape: AltShape,
    seed: u64,
    alphas: &'a [f64],
}

struct VariantRun {
    u: f64,
    s: f64,
    /// One entry per level.
    selections: Vec<super::Selection>,
}

fn run_design(d: &Design) -> Result<Vec<Vec<VariantRun>>> {
    if d.reps == 0 {
        return config_err("reps must be positive");
    }
    if d.alphas.is_empty() {
        return config_err("at least one level is needed");
    }
    for &a in d.alphas {
        validate_alpha(a)?;
    }
    if !(d.k_frac > 0.0 && d.k_frac <= 0.9) {
        return config_err(format!("k/n = {} is outside (0, 0.9]", d.k_frac));
    }
    let n1 = (d.k_frac * d.n as f64).round() as usize;
    if n1 == 0 || n1 > d.n * 9 / 10 {
        return config_err(format!(
            "n1 = {n1} is outside 1..=floor(0.9 n) for n = {}",
            d.n
        ));
    }
    let means = build_alternatives(d.shape, n1, d.delta, &mut stream(d.seed, FROZEN_STREAM))?;
    let cfg = EquiCorrConfig::new(d.n, d.rho, means)?;
    replicate(d.reps, |rep| {
        let draw = gen_equicorr(&cfg, &mut stream(d.seed, rep))?;
        let ranked = Ranked::new(&draw)?;
        Variant::ALL
            .iter()
            .map(|v| {
                let r = v.rescaling(&cfg, &draw, ranked.order_statistics())?;
                let p = ranked.sorted_pvalues(&r);
                Ok(VariantRun {
                    u: r.u(),
                    s: r.s(),
                    selections: d.alphas.iter().map(|&a| ranked.bh(&p, a)).collect(),
                })
            })
            .collect()
    })
}

const RECORD_COLUMNS: [&str; 9] = [
    "rep",
    "variant",
    "alpha",
    "delta",
    "u",
    "s",
    "rejections",
    "fdp",
    "tdp",
];

fn records(runs: &[Vec<VariantRun>], alphas: &[f64], delta: f64) -> Table {
    let mut t = Table::new(&RECORD_COLUMNS);
    for (rep, per_variant) in runs.iter().enumerate() {
        for (v, run) in Variant::ALL.iter().zip(per_variant) {
            for (&alpha, sel) in alphas.iter().zip(&run.selections) {
                t.push(vec![
                    rep.into(),
                    v.name().into(),
                    alpha.into(),
                    delta.into(),
                    run.u.into(),
                    run.s.into(),
                    sel.rejections.into(),
                    sel.fdp.into(),
                    sel.tdp.into(),
                ]);
            }
        }
    }
    t
}

fn column(
    runs: &[Vec<VariantRun>],
    v: usize,
    a: usize,
    f: impl Fn(&super::Selection) -> f64,
) -> Vec<f64> {
    runs.iter().map(|r| f(&r[v].selections[a])).collect()
}

fn box_cells(values: &[f64]) -> Vec<Cell> {
    let b = BoxSummary::new(values).expect("at least one replication");
    vec![
        b.whisker_low.into(),
        b.q1.into(),
        b.median.into(),
        b.q3.into(),
        b.whisker_high.into(),
    ]
}

/// Boxplots of FDP and TDP per rescaling at one level.
pub fn run_fdr_experiment(cfg: &FdrConfig) -> Result<ExperimentOutput> {
    let start = Instant::now();
    let alphas = [cfg.alpha];
    let runs = run_design(&Design {
        n: cfg.n,
        reps: cfg.reps,
        rho: cfg.rho,
        k_frac: cfg.k_frac,
        delta: cfg.delta,
        shape: cfg.shape,
        seed: cfg.seed,
        alphas: &alphas,
    })?;

    let mut agg = Table::new(&[
        "variant",
        "alpha",
        "delta",
        "fdr",
        "fdr_se",
        "tdp_mean",
        "tdp_se",
        "fdp_iqr",
        "fdp_whisker_low",
        "fdp_q1",
        "fdp_median",
        "fdp_q3",
        "fdp_whisker_high",
        "tdp_whisker_low",
        "tdp_q1",
        "tdp_median",
        "tdp_q3",
        "tdp_whisker_high",
    ]);
    let mut fdp_panel = Vec::new();
    let mut tdp_panel = Vec::new();
    for (vi, v) in Variant::ALL.iter().enumerate() {
        let fdps = column(&runs, vi, 0, |s| s.fdp);
        let tdps = column(&runs, vi, 0, |s| s.tdp);
        let (fdr, fdr_se) = mean_se(&fdps);
        let (tdp, tdp_se) = mean_se(&tdps);
        let iqr = BoxSummary::new(&fdps).map_or(f64::NAN, |b| b.iqr());
        let mut row: Vec<Cell> = vec![
            v.name().into(),
            cfg.alpha.into(),
            cfg.delta.into(),
            fdr.into(),
            fdr_se.into(),
            tdp.into(),
            tdp_se.into(),
            iqr.into(),
        ];
        row.extend(box_cells(&fdps));
        row.extend(box_cells(&tdps));
        agg.push(row);
        fdp_panel.push((v.name().to_string(), fdps));
        tdp_panel.push((v.name().to_string(), tdps));
    }
    let title = format!(
        "n={}, rho={}, k/n={}, Delta={}, alpha={}, {} reps",
        cfg.n, cfg.rho, cfg.k_frac, cfg.delta, cfg.alpha, cfg.reps
    );
    let svg = boxplot_svg(
        &title,
        &[
            BoxPanel {
                title: "FDP".into(),
                y_label: "FDP".into(),
                groups: fdp_panel,
            },
            BoxPanel {
                title: "TDP".into(),
                y_label: "TDP".into(),
                groups: tdp_panel,
            },
        ],
    );
    let mut report = ExperimentReport::new(
        "fdr",
        cfg.seed,
        cfg,
        records(&runs, &alphas, cfg.delta),
        agg,
    )?;
    report.wall_clock_ms = start.elapsed().as_millis();
    Ok(ExperimentOutput { report, svg })
}

/// Mean TDP (and FDP) per rescaling over a grid of levels.
pub fn run_roc_experiment(cfg: &RocConfig) -> Result<ExperimentOutput> {
    let start = Instant::now();
    let runs = run_design(&Design {
        n: cfg.n,
        reps: cfg.reps,
        rho: cfg.rho,
        k_frac: cfg.k_frac,
        delta: cfg.delta,
        shape: cfg.shape,
        seed: cfg.seed,
        alphas: &cfg.alphas,
    })?;
    let mut agg = Table::new(&["variant", "alpha", "tdp_mean", "tdp_se", "fdr", "fdr_se"]);
    let mut series = Vec::new();
    for (vi, v) in Variant::ALL.iter().enumerate() {
        let mut points = Vec::new();
        for (ai, &alpha) in cfg.alphas.iter().enumerate() {
            let (tdp, tdp_se) = mean_se(&column(&runs, vi, ai, |s| s.tdp));
            let (fdr, fdr_se) = mean_se(&column(&runs, vi, ai, |s| s.fdp));
            agg.push(vec![
                v.name().into(),
                alpha.into(),
                tdp.into(),
                tdp_se.into(),
                fdr.into(),
                fdr_se.into(),
            ]);
            points.push((alpha, tdp));
        }
        series.push(Series {
            name: v.name().into(),
            points,
            dashed: false,
        });
    }
    let title = format!(
        "mean TDP, n={}, rho={}, k/n={}, Delta={}, {} reps",
        cfg.n, cfg.rho, cfg.k_frac, cfg.delta, cfg.reps
    );
    let svg = line_svg(&title, "target FDR level", "mean TDP", &series);
    let mut report = ExperimentReport::new(
        "roc",
        cfg.seed,
        cfg,
        records(&runs, &cfg.alphas, cfg.delta),
        agg,
    )?;
    report.wall_clock_ms = start.elapsed().as_millis();
    Ok(ExperimentOutput { report, svg })
}
