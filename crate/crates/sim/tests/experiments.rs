use minfx_sim::{
    run_fdr_experiment, run_posthoc_experiment, run_risk_experiment, run_roc_experiment,
    with_threads, AltShape, FdrConfig, PosthocConfig, RiskConfig, RiskEstimator, RocConfig,
    Variant, ROC_ALPHAS,
};

fn small_fdr() -> FdrConfig {
    FdrConfig {
        n: 2_000,
        reps: 12,
        seed: 7,
        ..FdrConfig::default()
    }
}

#[test]
fn fdr_record_counts() {
    let out = run_fdr_experiment(&small_fdr()).unwrap();
    assert_eq!(out.report.records.len(), 12 * 4);
    assert_eq!(out.report.aggregates.len(), 4);
    for v in Variant::ALL {
        let fdp = out.report.records.select("fdp", &[("variant", v.name())]);
        assert_eq!(fdp.len(), 12);
        assert!(fdp.iter().all(|f| (0.0..=1.0).contains(f)));
        // aggregates are recomputable from the records
        let mean = fdp.iter().sum::<f64>() / 12.0;
        let agg = out
            .report
            .aggregates
            .select("fdr", &[("variant", v.name())]);
        assert!((agg[0] - mean).abs() < 1e-12);
    }
}

#[test]
fn oracle_fdr_without_correlation() {
    let cfg = FdrConfig {
        n: 2_000,
        reps: 400,
        rho: 0.0,
        delta: 2.0,
        seed: 11,
        ..FdrConfig::default()
    };
    let out = run_fdr_experiment(&cfg).unwrap();
    let fdr = out
        .report
        .aggregates
        .select("fdr", &[("variant", "oracle")])[0];
    let se = out
        .report
        .aggregates
        .select("fdr_se", &[("variant", "oracle")])[0];
    assert!((fdr - 0.9 * 0.2).abs() < 3.0 * se, "FDR {fdr} (se {se})");
}

#[test]
fn deterministic_across_thread_counts() {
    let cfg = FdrConfig {
        shape: AltShape::Uniform,
        ..small_fdr()
    };
    let one = with_threads(1, || run_fdr_experiment(&cfg))
        .unwrap()
        .unwrap();
    let four = with_threads(4, || run_fdr_experiment(&cfg))
        .unwrap()
        .unwrap();
    assert_eq!(
        one.report.records.to_csv().unwrap(),
        four.report.records.to_csv().unwrap()
    );
    assert_eq!(
        one.report.aggregates.to_csv().unwrap(),
        four.report.aggregates.to_csv().unwrap()
    );
    assert_eq!(one.svg, four.svg);
}

#[test]
fn roc_grid_and_monotonicity() {
    let cfg = RocConfig {
        n: 5_000,
        reps: 20,
        seed: 3,
        ..RocConfig::default()
    };
    let out = run_roc_experiment(&cfg).unwrap();
    assert_eq!(out.report.aggregates.len(), ROC_ALPHAS.len() * 4);
    assert_eq!(out.report.records.len(), 20 * 4 * ROC_ALPHAS.len());
    for v in Variant::ALL {
        for rep in 0..20 {
            let tdp = out
                .report
                .records
                .select("tdp", &[("variant", v.name()), ("rep", &rep.to_string())]);
            assert_eq!(tdp.len(), ROC_ALPHAS.len());
            assert!(
                tdp.windows(2).all(|w| w[0] <= w[1]),
                "{} rep {rep}: {tdp:?}",
                v.name()
            );
        }
    }
    let oracle = out
        .report
        .aggregates
        .select("tdp_mean", &[("variant", "oracle")]);
    let plain = out
        .report
        .aggregates
        .select("tdp_mean", &[("variant", "uncorrected")]);
    assert!(oracle.iter().sum::<f64>() >= plain.iter().sum::<f64>() - 0.05);
}

#[test]
fn posthoc_envelopes() {
    let cfg = PosthocConfig::default();
    let out = run_posthoc_experiment(&cfg).unwrap();
    let n1 = 50;
    let truth = out
        .report
        .aggregates
        .select("true_fdp", &[("variant", "oracle")]);
    assert_eq!(truth.len(), 200);
    assert!(truth[..n1].iter().all(|&f| f == 0.0));
    assert_eq!(truth[2 * n1 - 1], 0.5);
    let coverage = out
        .report
        .aggregates
        .select("coverage", &[("variant", "oracle")])[0];
    assert!(coverage >= 1.0 - 0.2 - 0.05, "coverage {coverage}");
    assert_eq!(out.report.records.len(), 200 * 4 * 200);
    let bounds = out.report.records.select("bound", &[]);
    assert!(bounds.iter().all(|b| (0.0..=1.0).contains(b)));
}

#[test]
fn risk_cells_and_rates() {
    let cfg = RiskConfig {
        ns: vec![100, 1_000],
        ks: vec![0, 10],
        estimators: RiskEstimator::ALL.to_vec(),
        reps: 300,
        ..RiskConfig::default()
    };
    let out = run_risk_experiment(&cfg).unwrap();
    assert_eq!(out.report.aggregates.len(), 2 * 2 * 6);
    assert_eq!(out.report.records.len(), 2 * 2 * 6 * 300);
    let risk = |n: &str, k: &str, e: &str| {
        out.report
            .aggregates
            .select("risk", &[("n", n), ("k", k), ("estimator", e)])[0]
    };
    let se = |n: &str, k: &str, e: &str| {
        out.report
            .aggregates
            .select("risk_se", &[("n", n), ("k", k), ("estimator", e)])[0]
    };
    let ratio = risk("1000", "0", "median") / risk("100", "0", "median");
    assert!(
        (0.316 / 1.5..0.316 * 1.5).contains(&ratio),
        "median ratio {ratio}"
    );
    // a shifted minority pulls the matched quantile up
    for n in ["100", "1000"] {
        let (a, b) = (risk(n, "0", "quantile-qk"), risk(n, "10", "quantile-qk"));
        assert!(
            b + 2.0 * (se(n, "0", "quantile-qk") + se(n, "10", "quantile-qk")) >= a,
            "n={n}: {a} -> {b}"
        );
    }
    assert!(run_risk_experiment(&RiskConfig {
        ks: vec![99],
        ns: vec![100],
        ..cfg
    })
    .is_err());
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(run_fdr_experiment(&FdrConfig {
        alpha: 1.5,
        ..small_fdr()
    })
    .is_err());
    assert!(run_fdr_experiment(&FdrConfig {
        rho: 1.0,
        ..small_fdr()
    })
    .is_err());
    assert!(run_fdr_experiment(&FdrConfig {
        k_frac: 0.95,
        ..small_fdr()
    })
    .is_err());
    assert!(run_fdr_experiment(&FdrConfig {
        reps: 0,
        ..small_fdr()
    })
    .is_err());
    assert!(run_posthoc_experiment(&PosthocConfig {
        t_max: 5000,
        ..PosthocConfig::default()
    })
    .is_err());
}

#[test]
fn written_files_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_fdr_experiment(&small_fdr()).unwrap();
    let (files, svg) = out.write(dir.path(), true).unwrap();
    let csv = std::fs::read_to_string(&files.records_csv).unwrap();
    assert!(csv.starts_with("schema_version,rep,variant,alpha,delta,u,s,rejections,fdp,tdp\n"));
    assert_eq!(csv.lines().count(), 1 + 48);
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&files.json).unwrap()).unwrap();
    assert_eq!(json["records"].as_array().unwrap().len(), 48);
    assert_eq!(json["config"]["n"], 2000);
    let text = std::fs::read_to_string(svg.unwrap()).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let names: Vec<&str> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("series"))
        .filter_map(|n| n.attribute("data-name"))
        .collect();
    // one box per variant in each of the FDP and TDP panels
    assert_eq!(names.len(), 8);
    for v in Variant::ALL {
        assert_eq!(names.iter().filter(|&&n| n == v.name()).count(), 2);
    }
}
