//! The four p-value rescalings compared in the equi-correlated experiments,
//! and the per-replication BH bookkeeping they share.

use minfx_core::{
    bh_step_up_sorted, upper_biased, upper_biased_known_scale, upper_tail, OrderStatistics,
    Rescaling,
};
use serde::Serialize;

use crate::error::Result;
use crate::generate::{EquiCorrConfig, EquiCorrDraw};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `(0, 1)`.
    Uncorrected,
    /// `(rho^{1/2} W, (1 - rho)^{1/2})`.
    Oracle,
    /// Upper-biased location with the scale `(1 - rho)^{1/2}` given.
    RhoKnown,
    /// Upper-biased location and scale with `k0 = n1`.
    RhoUnknown,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Uncorrected,
        Variant::Oracle,
        Variant::RhoKnown,
        Variant::RhoUnknown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Uncorrected => "uncorrected",
            Variant::Oracle => "oracle",
            Variant::RhoKnown => "rho-known",
            Variant::RhoUnknown => "rho-unknown",
        }
    }

    pub fn rescaling(
        self,
        cfg: &EquiCorrConfig,
        draw: &EquiCorrDraw,
        os: &OrderStatistics<f64>,
    ) -> Result<Rescaling<f64>> {
        let (u, s) = match self {
            Variant::Uncorrected => (0.0, 1.0),
            Variant::Oracle => cfg.conditional(draw.w),
            Variant::RhoKnown => {
                let est = upper_biased_known_scale(os, (1.0 - cfg.rho).sqrt())?;
                (est.theta, est.sigma)
            }
            Variant::RhoUnknown => {
                let est = upper_biased(os, cfg.n1())?;
                (est.theta, est.sigma)
            }
        };
        Ok(Rescaling::new(u, s)?)
    }
}

/// A replication sorted once: observations in decreasing order together with
/// the running count of nulls, so that any threshold rule on p-values is a
/// prefix and its FDP / TDP are O(1) lookups.
#[derive(Debug, Clone)]
pub struct Ranked {
    desc: Vec<f64>,
    nulls_before: Vec<u32>,
    n1: usize,
    ascending: OrderStatistics<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub rejections: usize,
    pub false_rejections: usize,
    pub fdp: f64,
    pub tdp: f64,
}

impl Ranked {
    pub fn new(draw: &EquiCorrDraw) -> Result<Self> {
        let y = draw.y.values();
        let mut pairs: Vec<(f64, bool)> = y
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, draw.truth.is_null(i)))
            .collect();
        pairs.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));
        let mut nulls_before = Vec::with_capacity(pairs.len() + 1);
        let mut count = 0u32;
        nulls_before.push(0);
        for &(_, null) in &pairs {
            count += null as u32;
            nulls_before.push(count);
        }
        let desc: Vec<f64> = pairs.into_iter().map(|(v, _)| v).collect();
        let ascending = OrderStatistics::from_sorted(desc.iter().rev().copied().collect())?;
        Ok(Self {
            desc,
            nulls_before,
            n1: draw.truth.n1(),
            ascending,
        })
    }

    pub fn len(&self) -> usize {
        self.desc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.desc.is_empty()
    }

    pub fn order_statistics(&self) -> &OrderStatistics<f64> {
        &self.ascending
    }

    /// P-values in increasing order under rescaling `r`.
    pub fn sorted_pvalues(&self, r: &Rescaling<f64>) -> Vec<f64> {
        self.desc
            .iter()
            .map(|&y| upper_tail((y - r.u()) / r.s()))
            .collect()
    }

    /// The prefix of the ranking with p-values at most `t`.
    pub fn threshold(&self, sorted_p: &[f64], t: f64) -> Selection {
        self.prefix(sorted_p.partition_point(|&p| p <= t))
    }

    /// BH rejection set at level `alpha` from sorted p-values.
    pub fn bh(&self, sorted_p: &[f64], alpha: f64) -> Selection {
        let (ell, t) = bh_step_up_sorted(sorted_p, alpha);
        if ell == 0 {
            return self.prefix(0);
        }
        self.threshold(sorted_p, t)
    }

    /// The top `r` observations.
    pub fn prefix(&self, r: usize) -> Selection {
        let v = self.nulls_before[r] as usize;
        Selection {
            rejections: r,
            false_rejections: v,
            fdp: v as f64 / r.max(1) as f64,
            tdp: (r - v) as f64 / self.n1.max(1) as f64,
        }
    }

    /// Number of nulls among the top `r` observations.
    pub fn nulls_in_top(&self, r: usize) -> usize {
        self.nulls_before[r] as usize
    }
}
