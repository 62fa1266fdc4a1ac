use minfx_core::{rescaled_pvalues, Rescaling};
use minfx_sim::rng::stream;
use minfx_sim::{
    build_alternatives, gen_equicorr, gen_gosc, gen_osc, AltShape, Contamination,
    ContaminationSpec, EquiCorrConfig,
};
use rand::Rng;

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (
        m,
        v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0),
    )
}

#[test]
fn null_moments() {
    let (theta, sigma, n) = (1.5, 2.0, 100_000);
    let spec = ContaminationSpec::gaussian_shifts(theta, sigma, n, &[]).unwrap();
    let y = gen_gosc(&spec, &mut stream(1, 0)).unwrap();
    let (m, v) = mean_var(y.values());
    assert!(
        (m - theta).abs() < 3.0 * sigma / (n as f64).sqrt(),
        "mean {m}"
    );
    assert!((v / (sigma * sigma) - 1.0).abs() < 0.05, "variance {v}");
}

#[test]
fn fixed_seed_is_bit_identical() {
    let spec = ContaminationSpec::gaussian_shifts(0.0, 1.0, 1000, &[1.0; 10]).unwrap();
    let a = gen_gosc(&spec, &mut stream(42, 7)).unwrap();
    let b = gen_gosc(&spec, &mut stream(42, 7)).unwrap();
    assert_eq!(a, b);
    let c = gen_gosc(&spec, &mut stream(42, 8)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn shifts_land_on_leading_indices() {
    let spec = ContaminationSpec::gaussian_shifts(0.0, 1.0, 2000, &[50.0; 100]).unwrap();
    let y = gen_gosc(&spec, &mut stream(2, 0)).unwrap();
    assert!(y.values()[..100].iter().all(|&v| v > 30.0));
    assert!(y.values()[100..].iter().all(|&v| v < 30.0));
    assert_eq!(spec.truth().n1(), 100);
}

#[test]
fn custom_contaminations_dominate_the_null() {
    let n = 20_000;
    let variants = [
        Contamination::PointMass { m: 1.0 },
        Contamination::ExponentialShift { rate: 2.0 },
        Contamination::HalfNormalShift { scale: 1.0 },
    ];
    let null = gen_osc(
        &ContaminationSpec::new(0.0, 1.0, n, vec![]).unwrap(),
        &mut stream(3, 0),
    )
    .unwrap();
    let mut null = null.into_inner();
    null.sort_by(f64::total_cmp);
    for c in variants {
        let spec = ContaminationSpec::new(0.0, 1.0, n, vec![c; n]).unwrap();
        let mut y = gen_osc(&spec, &mut stream(3, 1)).unwrap().into_inner();
        y.sort_by(f64::total_cmp);
        // every decile of the contaminated law sits above the null decile
        for d in 1..10 {
            let i = d * n / 10;
            assert!(y[i] > null[i] - 0.05, "{c:?} decile {d}");
        }
        assert_eq!(spec.truth().n1(), n);
    }
    let pm =
        ContaminationSpec::new(0.0, 1.0, n, vec![Contamination::PointMass { m: 1.0 }; n]).unwrap();
    let y = gen_osc(&pm, &mut stream(3, 2)).unwrap();
    let at_m = y.values().iter().filter(|&&v| v == 1.0).count() as f64 / n as f64;
    assert!((at_m - 0.8413).abs() < 0.02, "mass at m: {at_m}");
}

fn pair_correlation(rho: f64) -> f64 {
    let cfg = EquiCorrConfig::new(10, rho, vec![]).unwrap();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for rep in 0..10_000 {
        let d = gen_equicorr(&cfg, &mut stream(4, rep)).unwrap();
        a.push(d.y.values()[2]);
        b.push(d.y.values()[7]);
    }
    let (ma, va) = mean_var(&a);
    let (mb, vb) = mean_var(&b);
    let cov = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - ma) * (y - mb))
        .sum::<f64>()
        / (a.len() as f64 - 1.0);
    cov / (va * vb).sqrt()
}

#[test]
fn equicorrelation() {
    assert!(pair_correlation(0.0).abs() < 0.03);
    assert!((pair_correlation(0.3) - 0.3).abs() < 0.03);
}

#[test]
fn conditional_reduction() {
    let cfg = EquiCorrConfig::new(500, 0.3, vec![2.0; 50]).unwrap();
    let draw = gen_equicorr(&cfg, &mut stream(5, 3)).unwrap();
    let mut rng = stream(5, 3);
    let w: f64 = rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng);
    assert_eq!(w, draw.w);
    let (theta, sigma) = cfg.conditional(w);
    let spec = ContaminationSpec::gaussian_shifts(theta, sigma, 500, &cfg.means).unwrap();
    assert_eq!(gen_gosc(&spec, &mut rng).unwrap(), draw.y);
    assert_eq!(draw.truth.outliers(), (0..50).collect::<Vec<_>>());
}

#[test]
fn oracle_null_pvalues_are_uniform() {
    let cfg = EquiCorrConfig::new(50_000, 0.3, vec![]).unwrap();
    let draw = gen_equicorr(&cfg, &mut stream(6, 0)).unwrap();
    let (u, s) = cfg.conditional(draw.w);
    let mut p = rescaled_pvalues(&draw.y, &Rescaling::new(u, s).unwrap())
        .values()
        .to_vec();
    p.sort_by(f64::total_cmp);
    let m = p.len() as f64;
    let d = p
        .iter()
        .enumerate()
        .map(|(i, &v)| ((i + 1) as f64 / m - v).max(v - i as f64 / m))
        .fold(0.0, f64::max);
    assert!(d < 1.63 / m.sqrt(), "KS {d}");
}

#[test]
fn alternative_shapes() {
    let mut rng = stream(7, 0);
    assert_eq!(
        build_alternatives(AltShape::Constant, 3, 2.0, &mut rng).unwrap(),
        vec![2.0; 3]
    );
    let lin = build_alternatives(AltShape::Linear, 2, 1.0, &mut rng).unwrap();
    assert_eq!(lin[0], 0.01);
    assert!((lin[1] - 1.005).abs() < 1e-15);
    let uni = build_alternatives(AltShape::Uniform, 10_000, 1.5, &mut rng).unwrap();
    assert!(uni.iter().all(|&m| m > 0.01 && m < 3.0));
    assert!(build_alternatives(AltShape::Constant, 0, 1.0, &mut rng).is_err());
    assert!(build_alternatives(AltShape::Linear, 3, -1.0, &mut rng).is_err());
    // the frozen draw depends only on its stream
    let a = build_alternatives(AltShape::Uniform, 5, 1.0, &mut stream(8, u64::MAX)).unwrap();
    let b = build_alternatives(AltShape::Uniform, 5, 1.0, &mut stream(8, u64::MAX)).unwrap();
    assert_eq!(a, b);
    let _ = rng.random::<u8>();
}
