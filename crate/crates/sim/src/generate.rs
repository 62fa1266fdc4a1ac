//! Data generators for the contamination models and the equi-correlated design.

use minfx_core::{GroundTruth, SampleVector};
use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::Serialize;

use crate::error::{config_err, Result};

/// Law of one coordinate relative to the null `theta + sigma xi`.
/// Every variant is stochastically larger than the null.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Contamination {
    None,
    /// `theta + mu + sigma xi`, `mu >= 0`.
    GaussianShift {
        mu: f64,
    },
    /// `theta + max(sigma xi, m)`: the null with its mass below `m` moved to `m`.
    PointMass {
        m: f64,
    },
    /// `theta + sigma xi + E`, `E ~ Exp(rate)`.
    ExponentialShift {
        rate: f64,
    },
    /// `theta + sigma xi + |Z|`, `Z ~ N(0, scale^2)`.
    HalfNormalShift {
        scale: f64,
    },
}

impl Contamination {
    fn validate(&self) -> Result<()> {
        match *self {
            Contamination::None => Ok(()),
            Contamination::GaussianShift { mu } if mu >= 0.0 && mu.is_finite() => Ok(()),
            Contamination::PointMass { m } if m.is_finite() => Ok(()),
            Contamination::ExponentialShift { rate } if rate > 0.0 && rate.is_finite() => Ok(()),
            Contamination::HalfNormalShift { scale } if scale > 0.0 && scale.is_finite() => Ok(()),
            other => config_err(format!(
                "contamination {other:?} does not dominate the null"
            )),
        }
    }

    fn is_gaussian(&self) -> bool {
        matches!(
            self,
            Contamination::None | Contamination::GaussianShift { .. }
        )
    }

    fn draw<R: Rng + ?Sized>(&self, theta: f64, sigma: f64, rng: &mut R) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        let noise = sigma * z;
        match *self {
            Contamination::None => theta + noise,
            Contamination::GaussianShift { mu } => theta + noise + mu,
            Contamination::PointMass { m } => theta + noise.max(m),
            Contamination::ExponentialShift { rate } => {
                let e: f64 = Exp::new(rate).expect("validated rate").sample(rng);
                theta + noise + e
            }
            Contamination::HalfNormalShift { scale } => {
                let h: f64 = StandardNormal.sample(rng);
                theta + noise + scale * h.abs()
            }
        }
    }
}

/// Location, noise level and per-index contamination of a sample.
/// Indices beyond `contaminations.len()` are null.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContaminationSpec {
    pub theta: f64,
    pub sigma: f64,
    pub n: usize,
    pub contaminations: Vec<Contamination>,
}

impl ContaminationSpec {
    pub fn new(
        theta: f64,
        sigma: f64,
        n: usize,
        contaminations: Vec<Contamination>,
    ) -> Result<Self> {
        if !theta.is_finite() {
            return config_err("theta must be finite");
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return config_err(format!("sigma must be positive, got {sigma}"));
        }
        if n == 0 {
            return config_err("n must be positive");
        }
        if contaminations.len() > n {
            return config_err(format!(
                "{} contaminations for n = {n}",
                contaminations.len()
            ));
        }
        for c in &contaminations {
            c.validate()?;
        }
        Ok(Self {
            theta,
            sigma,
            n,
            contaminations,
        })
    }

    /// Gaussian shifts `mu_i` on the first `mu.len()` indices.
    pub fn gaussian_shifts(theta: f64, sigma: f64, n: usize, mu: &[f64]) -> Result<Self> {
        let cs = mu
            .iter()
            .map(|&mu| Contamination::GaussianShift { mu })
            .collect();
        Self::new(theta, sigma, n, cs)
    }

    pub fn truth(&self) -> GroundTruth {
        GroundTruth::from_nulls(
            (0..self.n)
                .map(|i| self.contaminations.get(i).is_none_or(|c| is_null(c)))
                .collect(),
        )
    }
}

fn is_null(c: &Contamination) -> bool {
    matches!(
        c,
        Contamination::None | Contamination::GaussianShift { mu: 0.0 }
    )
}

/// `theta + mu_i + sigma xi_i`, one normal per index in index order.
fn draw_shifted<R: Rng + ?Sized>(
    theta: f64,
    sigma: f64,
    mu: &[f64],
    n: usize,
    rng: &mut R,
) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let z: f64 = StandardNormal.sample(rng);
            let y = theta + sigma * z;
            match mu.get(i) {
                Some(&m) => y + m,
                None => y,
            }
        })
        .collect()
}

/// Independent draws under the Gaussian-shift model.
pub fn gen_gosc<R: Rng + ?Sized>(
    spec: &ContaminationSpec,
    rng: &mut R,
) -> Result<SampleVector<f64>> {
    if let Some(c) = spec.contaminations.iter().find(|c| !c.is_gaussian()) {
        return config_err(format!("{c:?} is not a Gaussian shift"));
    }
    let mu: Vec<f64> = spec
        .contaminations
        .iter()
        .map(|c| match *c {
            Contamination::GaussianShift { mu } => mu,
            _ => 0.0,
        })
        .collect();
    Ok(SampleVector::new(draw_shifted(
        spec.theta, spec.sigma, &mu, spec.n, rng,
    ))?)
}

/// Independent draws under general one-sided contamination.
pub fn gen_osc<R: Rng + ?Sized>(
    spec: &ContaminationSpec,
    rng: &mut R,
) -> Result<SampleVector<f64>> {
    if spec.contaminations.iter().all(Contamination::is_gaussian) {
        return gen_gosc(spec, rng);
    }
    let y = (0..spec.n)
        .map(|i| {
            spec.contaminations
                .get(i)
                .unwrap_or(&Contamination::None)
                .draw(spec.theta, spec.sigma, rng)
        })
        .collect();
    Ok(SampleVector::new(y)?)
}

/// Equi-correlated Gaussian design: `Y_i = m_i + rho^{1/2} W + (1 - rho)^{1/2} zeta_i`,
/// with the outliers at indices `0..means.len()`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquiCorrConfig {
    pub n: usize,
    pub rho: f64,
    pub means: Vec<f64>,
}

impl EquiCorrConfig {
    pub fn new(n: usize, rho: f64, means: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return config_err("n must be positive");
        }
        if !(0.0..1.0).contains(&rho) {
            return config_err(format!("rho = {rho} is outside [0, 1)"));
        }
        if means.len() > n {
            return config_err(format!("n1 = {} exceeds n = {n}", means.len()));
        }
        if let Some(m) = means.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return config_err(format!("alternative mean {m} is not positive"));
        }
        Ok(Self { n, rho, means })
    }

    pub fn n1(&self) -> usize {
        self.means.len()
    }

    pub fn truth(&self) -> GroundTruth {
        GroundTruth::from_nulls((0..self.n).map(|i| i >= self.n1()).collect())
    }

    /// Location and scale of the nulls given `W`.
    pub fn conditional(&self, w: f64) -> (f64, f64) {
        (self.rho.sqrt() * w, (1.0 - self.rho).sqrt())
    }
}

#[derive(Debug, Clone)]
pub struct EquiCorrDraw {
    pub y: SampleVector<f64>,
    pub w: f64,
    pub truth: GroundTruth,
}

/// Draws `W` first, then the coordinates given `W`.
pub fn gen_equicorr<R: Rng + ?Sized>(cfg: &EquiCorrConfig, rng: &mut R) -> Result<EquiCorrDraw> {
    let w: f64 = StandardNormal.sample(rng);
    let (theta, sigma) = cfg.conditional(w);
    let y = SampleVector::new(draw_shifted(theta, sigma, &cfg.means, cfg.n, rng))?;
    Ok(EquiCorrDraw {
        y,
        w,
        truth: cfg.truth(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn rejects_invalid_specs() {
        assert!(ContaminationSpec::new(0.0, 0.0, 5, vec![]).is_err());
        assert!(ContaminationSpec::new(0.0, 1.0, 1, vec![Contamination::None; 2]).is_err());
        assert!(ContaminationSpec::gaussian_shifts(0.0, 1.0, 5, &[-1.0]).is_err());
        assert!(ContaminationSpec::new(
            0.0,
            1.0,
            5,
            vec![Contamination::ExponentialShift { rate: 0.0 }]
        )
        .is_err());
        assert!(EquiCorrConfig::new(10, 1.0, vec![]).is_err());
        assert!(EquiCorrConfig::new(10, 0.3, vec![0.0]).is_err());
    }

    #[test]
    fn gosc_refuses_non_gaussian() {
        let spec =
            ContaminationSpec::new(0.0, 1.0, 5, vec![Contamination::PointMass { m: 3.0 }]).unwrap();
        assert!(gen_gosc(&spec, &mut stream(1, 0)).is_err());
        let y = gen_osc(&spec, &mut stream(1, 0)).unwrap();
        assert!(y.values()[0] >= 3.0);
    }

    #[test]
    fn truth_marks_contaminated_indices() {
        let spec = ContaminationSpec::gaussian_shifts(0.0, 1.0, 4, &[2.0, 0.0]).unwrap();
        assert_eq!(spec.truth().outliers(), vec![0]);
        let cfg = EquiCorrConfig::new(5, 0.3, vec![1.0, 2.0]).unwrap();
        assert_eq!(cfg.truth().outliers(), vec![0, 1]);
    }
}
