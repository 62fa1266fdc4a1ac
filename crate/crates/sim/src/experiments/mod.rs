//! Experiment drivers. Each returns the report together with its SVG figure.

pub mod fdr;
pub mod posthoc;
pub mod risk;
pub mod variants;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::Result;
use crate::report::{ExperimentReport, WrittenFiles};

pub use fdr::{run_fdr_experiment, run_roc_experiment, FdrConfig, RocConfig, ROC_ALPHAS};
pub use posthoc::{run_posthoc_experiment, PosthocConfig};
pub use risk::{run_risk_experiment, RiskConfig, RiskEstimator};
pub use variants::{Ranked, Selection, Variant};

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub report: ExperimentReport,
    pub svg: String,
}

impl ExperimentOutput {
    /// Writes the report files, and `<experiment>.svg` when `plot` is set.
    pub fn write(&self, dir: &Path, plot: bool) -> Result<(WrittenFiles, Option<PathBuf>)> {
        let files = self.report.write(dir)?;
        let svg = if plot {
            let path = dir.join(format!("{}.svg", self.report.experiment));
            fs::write(&path, &self.svg)?;
            Some(path)
        } else {
            None
        };
        Ok((files, svg))
    }
}

/// Runs `f(rep)` for every replication on the current rayon pool; the output
/// is ordered by replication index whatever the scheduling.
pub(crate) fn replicate<T, F>(reps: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    (0..reps as u64).into_par_iter().map(&f).collect()
}

pub(crate) fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        crate::error::config_err(format!("alpha = {alpha} is outside (0, 1)"))
    }
}
