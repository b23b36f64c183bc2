use mimohop::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

#[test]
fn scalar_channel_matches_ergodic_capacity() {
    // E[log2(1 + rho |h|^2)] = e^{1/rho} E1(1/rho) / ln 2, 40-digit references
    let ant = AntennaConfig::new(1, 1).unwrap();
    for (rho, exact) in [
        (1.0, 0.860_347_382_270_885_9),
        (10.0, 2.906_514_808_414_805),
    ] {
        let s = sample_mutual_information_batch(Snr::new(rho).unwrap(), ant, 200_000, 17);
        let (m, se) = mean_se(&s);
        assert!(
            (m - exact).abs() < 4.0 * se,
            "rho={rho}: {m} vs {exact} (se {se})"
        );
    }
}

/// Independent 2x2 sampler: Box-Muller normals from a different generator
/// and the closed-form 2x2 determinant.
fn mi_2x2_reference(rho: f64, rng: &mut ChaCha8Rng) -> f64 {
    let mut normal = || {
        let u: f64 = 1.0 - rng.random::<f64>();
        let v: f64 = rng.random();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    };
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // h[r][t] = (re, im)
    let h: Vec<[(f64, f64); 2]> = (0..2)
        .map(|_| [(normal() * s, normal() * s), (normal() * s, normal() * s)])
        .collect();
    let c = rho / 2.0;
    let n0 = h[0][0].0.powi(2) + h[0][0].1.powi(2) + h[1][0].0.powi(2) + h[1][0].1.powi(2);
    let n1 = h[0][1].0.powi(2) + h[0][1].1.powi(2) + h[1][1].0.powi(2) + h[1][1].1.powi(2);
    // off-diagonal sum_r conj(h[r][0]) h[r][1]
    let (mut re, mut im) = (0.0, 0.0);
    for row in &h {
        let (a, b) = row[0];
        let (x, y) = row[1];
        re += a * x + b * y;
        im += a * y - b * x;
    }
    let det = (1.0 + c * n0) * (1.0 + c * n1) - c * c * (re * re + im * im);
    det.log2()
}

#[test]
fn two_by_two_mean_matches_independent_sampler() {
    let ant = AntennaConfig::new(2, 2).unwrap();
    for rho in [1.0, 6.0] {
        let s = sample_mutual_information_batch(Snr::new(rho).unwrap(), ant, 200_000, 5);
        let (m, se) = mean_se(&s);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let r: Vec<f64> = (0..200_000)
            .map(|_| mi_2x2_reference(rho, &mut rng))
            .collect();
        let (mr, ser) = mean_se(&r);
        let tol = 4.0 * (se * se + ser * ser).sqrt();
        assert!((m - mr).abs() < tol, "rho={rho}: {m} vs {mr} (tol {tol})");
    }
}

#[test]
fn batch_is_thread_count_invariant() {
    let ant = AntennaConfig::new(2, 3).unwrap();
    let snr = Snr::new(2.0).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sample_mutual_information_batch(snr, ant, 10_000, 3))
    };
    let one: Vec<f64> = run(1);
    assert_eq!(one, run(4));
    let (p1, _) = empirical_success_prob(snr, 3.0, ant, 10_000, 3).unwrap();
    let (p2, _) = success_fraction(&one, 3.0);
    assert_eq!(p1, p2);
}

/// Largest |empirical - Gaussian| over high-rate targets, at the SNR the
/// Gaussian model says meets each target. At low rates the required SNR is
/// small and the model's high-SNR variance does not apply.
fn max_deviation(ant: AntennaConfig, trials: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for (rate, eps) in [(16.0, 0.1_f64), (16.0, 0.3), (32.0, 0.1), (32.0, 0.3)] {
        let target = OutageTarget::new(rate, eps).unwrap();
        let snr = required_snr(ant, &target).unwrap();
        let (p, _) = empirical_success_prob(snr, rate, ant, trials, 11).unwrap();
        worst = worst.max((p.value() - (1.0 - eps)).abs());
    }
    worst
}

#[test]
fn gaussian_model_tightens_with_more_receive_antennas() {
    let d: Vec<f64> = [2, 8, 32, 128]
        .iter()
        .map(|&nr| max_deviation(AntennaConfig::new(2, nr).unwrap(), 80_000))
        .collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    assert!(d[3] < 0.05, "{d:?}");
}
