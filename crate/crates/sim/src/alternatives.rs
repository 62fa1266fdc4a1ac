use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};

const LOW: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AltShape {
    Constant,
    Linear,
    Uniform,
}

impl std::str::FromStr for AltShape {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "constant" => Ok(AltShape::Constant),
            "linear" => Ok(AltShape::Linear),
            "uniform" => Ok(AltShape::Uniform),
            _ => Err(format!("unknown shape '{s}' (constant|linear|uniform)")),
        }
    }
}

/// Means of the `n1` alternatives:
/// constant `Delta`; linear `0.01 + (2 Delta - 0.01)(i - 1) / n1`;
/// uniform i.i.d. on `(0.01, 2 Delta)`. The uniform draw is meant to be made
/// once per experiment, from a stream outside the replication loop.
pub fn build_alternatives<R: Rng + ?Sized>(
    shape: AltShape,
    n1: usize,
    delta: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if n1 == 0 {
        return config_err("n1 must be at least 1");
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return config_err(format!("Delta must be positive, got {delta}"));
    }
    let hi = 2.0 * delta;
    Ok(match shape {
        AltShape::Constant => vec![delta; n1],
        AltShape::Linear => (0..n1)
            .map(|i| LOW + (hi - LOW) * i as f64 / n1 as f64)
            .collect(),
        AltShape::Uniform => {
            if hi <= LOW {
                return config_err(format!("uniform shape needs 2 Delta > {LOW}"));
            }
            (0..n1)
                .map(|_| loop {
                    let u = rng.random_range(LOW..hi);
                    if u > LOW {
                        break u;
                    }
                })
                .collect()
        }
    })
}
