use gennorm::estimation::{sample_d2_log_pdf, sample_score};
use gennorm::rng::derive_seed;
use gennorm::{mle_theta, run_crlb_experiment, ExperimentConfig, GenNormParams};
use proptest::prelude::*;

#[test]
fn consistent_on_a_large_sample() {
    let (theta, beta, n) = (2.0, 4.0, 1_000_000);
    let samples = GenNormParams::new(theta, beta).unwrap().sample(n, 7).unwrap();
    let theta_hat = mle_theta(&samples, beta).unwrap();
    let sd = (theta * theta / (n as f64 * beta)).sqrt();
    assert!((theta_hat - theta).abs() <= 4.0 * sd, "{theta_hat}");
}

#[test]
fn every_trial_is_a_stationary_maximum() {
    let config = ExperimentConfig::new(4, 3.0, 500, 40, 123).unwrap();
    let params = GenNormParams::new(config.theta_true, config.beta as f64).unwrap();
    for i in 0..config.trials {
        let samples = params.sample(config.n, derive_seed(config.seed, i as u64)).unwrap();
        let theta_hat = mle_theta(&samples, config.beta as f64).unwrap();
        let at_hat = params.with_theta(theta_hat).unwrap();
        let residual = sample_score(&samples, &at_hat);
        assert!(residual.abs() <= 1e-10 * config.n as f64 / theta_hat, "trial {i}: {residual}");
        assert!(sample_d2_log_pdf(&samples, &at_hat) < 0.0, "trial {i}");
    }
}

#[test]
fn report_is_thread_count_invariant() {
    let config = ExperimentConfig::new(2, 1.0, 20_000, 64, 5).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_crlb_experiment(&config).unwrap())
    };
    let single = run(1);
    let multi = run(4);
    assert_eq!(single, multi);
    assert_eq!(single.mle_variance.to_bits(), multi.mle_variance.to_bits());
    assert_eq!(single.variance_stderr.to_bits(), multi.variance_stderr.to_bits());
}

#[test]
fn sampler_is_thread_count_invariant() {
    let p = GenNormParams::new(1.0, 3.0).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| p.sample(100_000, 77).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn report_fields_are_consistent() {
    let config = ExperimentConfig::new(2, 3.0, 1_000, 200, 8).unwrap();
    let report = run_crlb_experiment(&config).unwrap();
    assert_eq!(report.crlb, 9.0 / (2.0 * 1_000.0));
    assert_eq!(report.efficiency, report.crlb / report.mle_variance);
    assert!(report.efficiency > 0.0);
    assert!((report.mle_mean - 3.0).abs() < 0.05);
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["config"]["theta_true"], 3.0);
    assert_eq!(json["failed_trials"], 0);
}

proptest! {
    #[test]
    fn mle_is_scale_equivariant(
        samples in prop::collection::vec(-100.0f64..100.0, 1..50),
        beta in 0.5f64..20.0,
        c in prop::sample::select(vec![0.5, 2.0, 10.0]),
    ) {
        prop_assume!(samples.iter().any(|x| *x != 0.0));
        let base = mle_theta(&samples, beta).unwrap();
        let scaled: Vec<f64> = samples.iter().map(|x| c * x).collect();
        let got = mle_theta(&scaled, beta).unwrap();
        prop_assert!((got - c * base).abs() <= 8.0 * f64::EPSILON * c * base);
    }

    #[test]
    fn mle_zeroes_the_sample_score(
        samples in prop::collection::vec(-100.0f64..100.0, 1..200),
        beta in 0.5f64..20.0,
    ) {
        prop_assume!(samples.iter().any(|x| *x != 0.0));
        let theta_hat = mle_theta(&samples, beta).unwrap();
        let p = GenNormParams::new(theta_hat, beta).unwrap();
        prop_assert!(sample_score(&samples, &p).abs() <= 1e-10 * samples.len() as f64 / theta_hat);
        prop_assert!(sample_d2_log_pdf(&samples, &p) < 0.0);
    }
}
