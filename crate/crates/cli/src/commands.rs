use std::fs;
use std::io::Read;

use minfx_core::{
    adaptive_gosc, adaptive_osc, posthoc_bound, rescaled_pvalues, select_outliers, theta_med,
    theta_min, theta_q, theta_q_unrestricted, theta_tilde, unknown_variance, Error, SampleVector,
};
use minfx_sim::{
    run_fdr_experiment, run_posthoc_experiment, run_risk_experiment, run_roc_experiment,
    with_threads, FdrConfig, PosthocConfig, RiskConfig, RocConfig, SimError,
};
use serde_json::{json, Value};

use crate::args::{EstimateArgs, EstimateMethod, Experiment, SelectArgs, SimulateArgs};

/// A failure with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

pub const USAGE: i32 = 2;
pub const NUMERIC: i32 = 3;

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegenerateRegime { .. }
            | Error::DegreeOutOfRegime { .. }
            | Error::DegenerateScale(_) => NUMERIC,
            _ => USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Core(e) => e.into(),
            SimError::Io(e) => Failure::usage(e.to_string()),
            other => Failure::usage(other.to_string()),
        }
    }
}

fn read_source(input: &str) -> Result<String, Failure> {
    if input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::usage(format!("reading standard input: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(input).map_err(|e| Failure::usage(format!("reading {input}: {e}")))
    }
}

pub fn parse_numbers(text: &str) -> Result<Vec<f64>, Failure> {
    text.split_whitespace()
        .enumerate()
        .map(|(i, tok)| {
            tok.parse::<f64>()
                .map_err(|_| Failure::usage(format!("token {} ('{tok}') is not a number", i + 1)))
        })
        .collect()
}

fn read_sample(input: &str) -> Result<SampleVector<f64>, Failure> {
    Ok(SampleVector::new(parse_numbers(&read_source(input)?)?)?)
}

pub fn estimate(args: &EstimateArgs) -> Result<Value, Failure> {
    let y = read_sample(&args.input)?;
    let os = y.order_statistics();
    let need_q = || {
        args.q
            .ok_or_else(|| Failure::usage("--q is required for this method"))
    };
    let result = match args.method {
        EstimateMethod::Median => serde_json::to_value(theta_med(&os)),
        EstimateMethod::Min => serde_json::to_value(theta_min(&os)?),
        EstimateMethod::Quantile => {
            let q = need_q()?;
            let q = usize::try_from(q)
                .map_err(|_| Failure::usage(format!("order {q} must be positive")))?;
            serde_json::to_value(theta_tilde(&os, q)?)
        }
        EstimateMethod::Cheb => {
            let q = need_q()?;
            let r = if args.unrestricted {
                theta_q_unrestricted(&os, q)?
            } else {
                theta_q(&os, q)?
            };
            serde_json::to_value(r)
        }
        EstimateMethod::AdaptiveGosc => serde_json::to_value(adaptive_gosc(&os)?),
        EstimateMethod::AdaptiveOsc => serde_json::to_value(adaptive_osc(&os, args.c0)?),
        EstimateMethod::UnknownVariance => {
            let k = args
                .k
                .ok_or_else(|| Failure::usage("--k is required for unknown-variance"))?;
            let est = unknown_variance(&os, k)?;
            Ok(json!({
                "value": est.theta,
                "sigma": est.sigma,
                "method": "unknown-variance",
                "tuning": { "k": k },
            }))
        }
    };
    let mut value = result.map_err(|e| Failure::usage(e.to_string()))?;
    value["n"] = json!(y.len());
    Ok(value)
}

/// One set of 0-based indices per non-empty line.
pub fn parse_sets(text: &str) -> Result<Vec<Vec<usize>>, Failure> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(ln, line)| {
            line.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>().map_err(|_| {
                        Failure::usage(format!("line {}: '{t}' is not an index", ln + 1))
                    })
                })
                .collect()
        })
        .collect()
}

pub fn select(args: &SelectArgs) -> Result<Value, Failure> {
    let y = read_sample(&args.input)?;
    let (outcome, r) = select_outliers(&y, args.alpha, args.k0)?;
    let mut out = json!({
        "n": y.len(),
        "alpha": args.alpha,
        "k0": args.k0,
        "rescaling": { "u": r.u(), "s": r.s() },
        "rejected": outcome.rejected,
        "ell_hat": outcome.ell_hat,
        "t_hat": outcome.t_hat,
    });
    if let Some(path) = &args.posthoc {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("reading {}: {e}", path.display())))?;
        let p = rescaled_pvalues(&y, &r);
        let bounds = parse_sets(&text)?
            .iter()
            .map(|set| {
                Ok(json!({ "size": set.len(), "bound": posthoc_bound(&p, set, args.alpha)? }))
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        out["posthoc"] = Value::Array(bounds);
    }
    Ok(out)
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

pub fn simulate(args: &SimulateArgs, seed: u64) -> Result<Value, Failure> {
    let run = || match args.experiment {
        Experiment::Fdr => {
            let mut c = if args.full_scale {
                FdrConfig::full_scale()
            } else {
                FdrConfig::default()
            };
            set(&mut c.n, args.n);
            set(&mut c.reps, args.reps);
            set(&mut c.rho, args.rho);
            set(&mut c.delta, args.delta);
            set(&mut c.alpha, args.alpha);
            set(&mut c.k_frac, args.k_frac);
            set(&mut c.shape, args.shape);
            c.seed = seed;
            run_fdr_experiment(&c)
        }
        Experiment::Roc => {
            let mut c = if args.full_scale {
                RocConfig::full_scale()
            } else {
                RocConfig::default()
            };
            set(&mut c.n, args.n);
            set(&mut c.reps, args.reps);
            set(&mut c.rho, args.rho);
            set(&mut c.delta, args.delta);
            set(&mut c.alphas, args.alphas.clone());
            set(&mut c.k_frac, args.k_frac);
            set(&mut c.shape, args.shape);
            c.seed = seed;
            run_roc_experiment(&c)
        }
        Experiment::Posthoc => {
            let mut c = PosthocConfig::default();
            set(&mut c.n, args.n);
            set(&mut c.reps, args.reps);
            set(&mut c.rho, args.rho);
            set(&mut c.delta, args.delta);
            set(&mut c.alpha, args.alpha);
            set(&mut c.k_frac, args.k_frac);
            set(&mut c.shape, args.shape);
            set(&mut c.t_max, args.t_max);
            c.seed = seed;
            run_posthoc_experiment(&c)
        }
        Experiment::Risk => {
            let mut c = RiskConfig::default();
            set(&mut c.ns, args.ns.clone().or(args.n.map(|n| vec![n])));
            set(&mut c.ks, args.ks.clone());
            set(&mut c.estimators, args.estimators.clone());
            set(&mut c.reps, args.reps);
            set(&mut c.mu, args.mu);
            set(&mut c.c0, args.c0);
            c.seed = seed;
            run_risk_experiment(&c)
        }
    };
    let output = with_threads(args.threads, run)??;
    let (files, svg) = output.write(&args.out, args.plot)?;
    Ok(json!({
        "experiment": args.experiment.name(),
        "seed": seed,
        "records": output.report.records.len(),
        "aggregates": output.report.aggregates.len(),
        "wall_clock_ms": output.report.wall_clock_ms as u64,
        "files": {
            "records": files.records_csv,
            "summary": files.summary_csv,
            "json": files.json,
            "svg": svg,
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_sets() {
        assert_eq!(
            parse_numbers(" 3 1\n2\t5 4 ").unwrap(),
            vec![3.0, 1.0, 2.0, 5.0, 4.0]
        );
        let e = parse_numbers("1 x 2").unwrap_err();
        assert_eq!(e.code, USAGE);
        assert!(e.message.contains("token 2"));
        assert_eq!(
            parse_sets("0 1 2\n\n3,4\n").unwrap(),
            vec![vec![0, 1, 2], vec![3, 4]]
        );
        assert!(parse_sets("1 -2").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            Failure::from(Error::DegenerateScale("x".into())).code,
            NUMERIC
        );
        assert_eq!(
            Failure::from(Error::DegenerateRegime { n: 10, q_max: -2 }).code,
            NUMERIC
        );
        assert_eq!(
            Failure::from(Error::OrderOutOfRange { q: 0, max: 3 }).code,
            USAGE
        );
        assert_eq!(Failure::from(Error::EmptySample).code, USAGE);
    }
}
