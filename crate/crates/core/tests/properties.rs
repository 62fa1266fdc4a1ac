use minfx_core::gosc::{theta_brackets, GoscTuning};
use minfx_core::testing::{posthoc_bound, Direction};
use minfx_core::{
    adaptive_gosc, adaptive_osc, bh_procedure, dyadic_round, even_floor, order_statistic, q_k_osc,
    rescaled_pvalues, sigma_tilde, theta_med, theta_min, theta_q_unrestricted, theta_tilde,
    theta_tilde_qq, u_transform, upper_biased, upper_tail, PValueVector, QuantilePair, Rescaling,
    Rounding, SampleVector,
};
use proptest::prelude::*;

fn values(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0..50.0_f64, min..=max)
}

fn permuted(v: Vec<f64>) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    Just(v.clone())
        .prop_shuffle()
        .prop_map(move |p| (v.clone(), p))
}

fn sample(v: &[f64]) -> SampleVector<f64> {
    SampleVector::new(v.to_vec()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn order_statistics_permutation_invariant((v, p) in values(1, 40).prop_flat_map(permuted), q in 1usize..40) {
        let q = 1 + q % v.len();
        prop_assert_eq!(order_statistic(&sample(&v), q, None).unwrap(), order_statistic(&sample(&p), q, None).unwrap());
        prop_assert_eq!(theta_med(&sample(&v)).value, theta_med(&sample(&p)).value);
    }

    #[test]
    fn bh_permutation_equivariant(p in prop::collection::vec(0.0..1.0_f64, 1..40), seed in any::<u64>()) {
        let n = p.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let shuffled: Vec<f64> = perm.iter().map(|&i| p[i]).collect();
        let a = bh_procedure(&PValueVector::new(p).unwrap(), 0.2).unwrap();
        let b = bh_procedure(&PValueVector::new(shuffled).unwrap(), 0.2).unwrap();
        let mut mapped: Vec<usize> = b.rejected.iter().map(|&j| perm[j]).collect();
        mapped.sort_unstable();
        prop_assert_eq!(a.rejected, mapped);
        prop_assert_eq!(a.ell_hat, b.ell_hat);
    }

    #[test]
    fn shift_equivariance(v in values(4, 60), c in -100.0..100.0_f64) {
        let y = sample(&v);
        let z = y.affine(1.0, c).unwrap();
        prop_assert!(close(theta_med(&z).value, theta_med(&y).value + c, 1e-12));
        prop_assert!(close(theta_min(&z).unwrap().value, theta_min(&y).unwrap().value + c, 1e-12));
        let q = 1 + v.len() / 4;
        prop_assert!(close(theta_tilde(&z, q).unwrap().value, theta_tilde(&y, q).unwrap().value + c, 1e-12));
        prop_assert!(close(adaptive_osc(&z, 2.0).unwrap().value, adaptive_osc(&y, 2.0).unwrap().value + c, 1e-12));
        prop_assert!(close(adaptive_gosc(&z).unwrap().value, adaptive_gosc(&y).unwrap().value + c, 1e-12));
        prop_assert!(close(theta_q_unrestricted(&z, 2).unwrap().value, theta_q_unrestricted(&y, 2).unwrap().value + c, 1e-7));
    }

    #[test]
    fn affine_equivariance(v in values(16, 80), c in 0.1..10.0_f64, d in -20.0..20.0_f64) {
        let y = sample(&v);
        let z = y.affine(c, d).unwrap();
        let n = v.len();
        let pair = QuantilePair::new(n / 2, 1 + n / 8, n).unwrap();
        prop_assert!(close(sigma_tilde(&z, pair).unwrap(), c * sigma_tilde(&y, pair).unwrap(), 1e-10));
        let (a, b) = (theta_tilde_qq(&y, pair).unwrap(), theta_tilde_qq(&z, pair).unwrap());
        prop_assert!(close(b.theta, c * a.theta + d, 1e-10));
        if let (Ok(a), Ok(b)) = (upper_biased(&y, n / 2), upper_biased(&z, n / 2)) {
            prop_assert!(close(b.theta, c * a.theta + d, 1e-10));
            prop_assert!(close(b.sigma, c * a.sigma, 1e-10));
        }
    }

    #[test]
    fn brackets_contain_estimate(v in values(2, 60), q in 1i64..4) {
        let y = sample(&v);
        let r = theta_q_unrestricted(&y, 2 * q).unwrap();
        let b = theta_brackets::<f64, _>(&y, 2 * q).unwrap();
        prop_assert!(b.low <= r.value && r.value <= b.up);
    }

    #[test]
    fn upper_tail_monotone(a in -40.0..40.0_f64, b in -40.0..40.0_f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(upper_tail(lo) >= upper_tail(hi));
        if hi - lo > 1e-6 && lo > -8.0 && hi < 8.0 {
            prop_assert!(upper_tail(lo) > upper_tail(hi));
        }
    }

    #[test]
    fn dyadic_brackets_value(x in 1e-6..1e12_f64) {
        let up = dyadic_round(x, Rounding::Up).unwrap();
        let down = dyadic_round(x, Rounding::Down).unwrap();
        prop_assert!(down <= x && x <= up);
        prop_assert!(up <= 2.0 * down);
        prop_assert_eq!(up.log2().fract(), 0.0);
        prop_assert_eq!(down.log2().fract(), 0.0);
    }

    #[test]
    fn even_floor_is_largest_even_below(x in -1e6..1e6_f64) {
        let e = even_floor(x);
        prop_assert_eq!(e.rem_euclid(2), 0);
        prop_assert!(e as f64 <= x && x < e as f64 + 2.0);
    }

    #[test]
    fn pvalues_reverse_observation_order(v in values(2, 40), u in -5.0..5.0_f64, s in 0.1..5.0_f64) {
        let r = Rescaling::new(u, s).unwrap();
        let p = rescaled_pvalues(&sample(&v), &r);
        for i in 0..v.len() {
            for j in 0..v.len() {
                if v[i] < v[j] {
                    prop_assert!(p.values()[i] >= p.values()[j]);
                }
            }
        }
    }

    #[test]
    fn rescaling_at_truth_is_identity(t in 1e-6..0.999_f64, theta in -3.0..3.0_f64, sigma in 0.2..3.0_f64) {
        let r = Rescaling::new(theta, sigma).unwrap();
        let f = u_transform(t, &r, theta, sigma, Direction::Forward).unwrap().value();
        prop_assert!((f - t).abs() < 1e-12);
    }

    #[test]
    fn u_transform_roundtrip(t in 0.001..0.999_f64, u in -1.0..1.0_f64, s in 0.5..2.0_f64) {
        let r = Rescaling::new(u, s).unwrap();
        let (theta, sigma) = (0.1, 0.9);
        let f = u_transform(t, &r, theta, sigma, Direction::Forward).unwrap().value();
        let back = u_transform(f, &r, theta, sigma, Direction::Inverse).unwrap().value();
        prop_assert!((back - t).abs() < 1e-10);
    }

    #[test]
    fn posthoc_bound_in_unit_interval(p in prop::collection::vec(0.0..1.0_f64, 1..60), mask in any::<u64>(), alpha in 0.01..0.99_f64) {
        let set: Vec<usize> = (0..p.len()).filter(|&i| mask >> (i % 64) & 1 == 1).collect();
        let b = posthoc_bound(&PValueVector::new(p).unwrap(), &set, alpha).unwrap();
        prop_assert!((0.0..=1.0).contains(&b));
    }
}

#[test]
fn q_k_osc_regime_continuity() {
    for n in [1_000usize, 10_000, 100_000] {
        let start = (4.0 * (n as f64).sqrt()).ceil() as usize;
        let end = (n as f64 - (n as f64).powf(0.8)).floor() as usize;
        let mut prev = q_k_osc(start, n).unwrap();
        for k in start..=end {
            let q = q_k_osc(k, n).unwrap();
            assert!(q <= prev, "n={n} k={k}");
            assert!(2 * q >= prev, "n={n} k={k}");
            prev = q;
        }
    }
}

#[test]
fn degenerate_tuning_is_flagged() {
    for n in [2usize, 100, 1_000_000, 1 << 40] {
        assert!(GoscTuning::<f64>::new(n).is_degenerate());
    }
}
