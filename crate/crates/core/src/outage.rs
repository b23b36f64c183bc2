//! MIMO outage model.
//!
//! Mutual information of an `N_r x N_t` Rayleigh channel with spatial
//! multiplexing is `log2 det(I + (rho/N_t) H^H H)`. For large arrays it is
//! approximately Gaussian with mean `N_t log2(1 + rho N_r / N_t)` and variance
//! `(N_t/N_r) log2(e)^2`, which gives a closed-form success probability and
//! its inversion for the SNR needed to meet a target.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::rng::{blocks, StreamId, BLOCK_LEN};
use crate::scalar::{pow2_m1, Real};
use crate::special_fn::{erfc, erfc_inv_with, InverseMode, Probability};

/// Transmit and receive antenna counts of every node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AntennaConfig {
    n_t: u32,
    n_r: u32,
}

impl AntennaConfig {
    pub fn new(n_t: u32, n_r: u32) -> Result<Self> {
        if n_t == 0 {
            return domain("n_t", 0.0, ">= 1");
        }
        if n_r == 0 {
            return domain("n_r", 0.0, ">= 1");
        }
        Ok(Self { n_t, n_r })
    }

    pub fn n_t(self) -> u32 {
        self.n_t
    }

    pub fn n_r(self) -> u32 {
        self.n_r
    }

    /// `N_t / N_r`, the factor converting `2^k - 1` into SNR.
    pub fn array_ratio<T: Real>(self) -> T {
        T::count(self.n_t) / T::count(self.n_r)
    }

    /// `sqrt(2 / (N_t N_r)) log2(e)`, the weight of `erfc^-1` in `k`.
    pub fn dispersion<T: Real>(self) -> T {
        (T::lit(2.0) / (T::count(self.n_t) * T::count(self.n_r))).sqrt() * T::LOG2_E()
    }
}

/// Rate threshold and tolerated failure probability `eps = 1 - p`.
///
/// The failure probability is stored rather than `p` so that targets very
/// close to one keep full precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageTarget<T> {
    rate: T,
    failure_prob: T,
}

impl<T: Real> OutageTarget<T> {
    pub fn new(rate: T, failure_prob: T) -> Result<Self> {
        if !(rate > T::zero()) || !rate.is_finite() {
            return domain("rate", rate.to_f64_lossy(), "(0, inf)");
        }
        if !(failure_prob > T::zero() && failure_prob < T::one()) {
            return domain("failure probability", failure_prob.to_f64_lossy(), "(0, 1)");
        }
        Ok(Self { rate, failure_prob })
    }

    /// Builds a target from a success probability `p`.
    pub fn from_success_prob(rate: T, success_prob: T) -> Result<Self> {
        Self::new(rate, T::one() - success_prob)
    }

    pub fn rate(&self) -> T {
        self.rate
    }

    pub fn failure_prob(&self) -> T {
        self.failure_prob
    }

    pub fn success_prob(&self) -> T {
        T::one() - self.failure_prob
    }

    /// Same rate, different failure probability.
    pub fn with_failure_prob(&self, failure_prob: T) -> Result<Self> {
        Self::new(self.rate, failure_prob)
    }
}

/// Linear average SNR per receive antenna (path loss included).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Snr<T>(T);

impl<T: Real> Snr<T> {
    pub fn new(value: T) -> Result<Self> {
        if value > T::zero() && value.is_finite() {
            Ok(Self(value))
        } else {
            domain("snr", value.to_f64_lossy(), "(0, inf)")
        }
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// Standardized erfc argument `(R - N_t log2(1 + rho N_r/N_t)) / (sqrt(2 N_t/N_r) log2 e)`.
fn gaussian_z<T: Real>(snr: Snr<T>, rate: T, ant: AntennaConfig) -> T {
    let n_t = T::count(ant.n_t);
    let mean = n_t * (snr.0 / ant.array_ratio::<T>()).ln_1p() * T::LOG2_E();
    let spread = (T::lit(2.0) * ant.array_ratio::<T>()).sqrt() * T::LOG2_E();
    (rate - mean) / spread
}

/// Success probability `P(I > R)` under the Gaussian approximation.
pub fn gaussian_success_prob<T: Real>(snr: Snr<T>, rate: T, ant: AntennaConfig) -> Probability<T> {
    let p = T::lit(0.5) * erfc(gaussian_z(snr, rate, ant));
    Probability::new(p.min(T::one())).expect("erfc/2 lies in [0, 1]")
}

/// Failure probability `P(I <= R)` under the Gaussian approximation,
/// accurate when it is tiny.
pub fn gaussian_failure_prob<T: Real>(snr: Snr<T>, rate: T, ant: AntennaConfig) -> T {
    T::lit(0.5) * erfc(-gaussian_z(snr, rate, ant))
}

/// `k` for an arbitrary per-link failure probability.
pub(crate) fn offset_k<T: Real>(
    rate: T,
    ant: AntennaConfig,
    failure_prob: T,
    mode: InverseMode,
) -> Result<T> {
    let n_t = T::count(ant.n_t);
    let inv = erfc_inv_with(T::lit(2.0) * failure_prob, mode)?;
    Ok(rate / n_t + ant.dispersion::<T>() * inv)
}

/// `k = R/N_t + sqrt(2/(N_t N_r)) log2(e) erfc^-1(2 eps)`, so that the
/// required SNR is `(N_t/N_r)(2^k - 1)`.
pub fn rate_offset_k<T: Real>(ant: AntennaConfig, target: &OutageTarget<T>) -> T {
    offset_k(target.rate, ant, target.failure_prob, InverseMode::Exact)
        .expect("validated target gives erfc_inv argument in (0, 2)")
}

/// [`rate_offset_k`] with a choice of `erfc^-1` evaluation.
pub fn rate_offset_k_with<T: Real>(
    ant: AntennaConfig,
    target: &OutageTarget<T>,
    mode: InverseMode,
) -> Result<T> {
    offset_k(target.rate, ant, target.failure_prob, mode)
}

pub(crate) fn feasible_k<T: Real>(k: T) -> Result<T> {
    if k > T::zero() {
        Ok(k)
    } else {
        Err(Error::InfeasibleAtZeroPower {
            k: k.to_f64_lossy(),
        })
    }
}

/// Per-antenna SNR needed to meet `target` under the Gaussian approximation.
pub fn required_snr<T: Real>(ant: AntennaConfig, target: &OutageTarget<T>) -> Result<Snr<T>> {
    required_snr_with(ant, target, InverseMode::Exact)
}

pub fn required_snr_with<T: Real>(
    ant: AntennaConfig,
    target: &OutageTarget<T>,
    mode: InverseMode,
) -> Result<Snr<T>> {
    let k = feasible_k(rate_offset_k_with(ant, target, mode)?)?;
    Snr::new(ant.array_ratio::<T>() * pow2_m1(k))
}

fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::lit(re * scale), T::lit(im * scale))
}

/// `log2 det(G)` for a Hermitian positive-definite `n x n` matrix stored
/// row-major, via Cholesky.
pub(crate) fn hermitian_log2_det<T: Real>(g: &[Complex<T>], n: usize) -> T {
    let mut l = vec![Complex::new(T::zero(), T::zero()); n * n];
    let mut log_det = T::zero();
    for j in 0..n {
        let mut d = g[j * n + j].re;
        for k in 0..j {
            d = d - l[j * n + k].norm_sqr();
        }
        log_det = log_det + d.ln();
        let ljj = d.sqrt();
        l[j * n + j] = Complex::new(ljj, T::zero());
        for i in (j + 1)..n {
            let mut s = g[i * n + j];
            for k in 0..j {
                s = s - l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / ljj;
        }
    }
    log_det * T::LOG2_E()
}

/// Draws one channel and returns its mutual information in bits.
///
/// `H` has i.i.d. circularly symmetric complex Gaussian entries with
/// variance 0.5 per real dimension.
pub fn sample_mutual_information<T: Real, R: Rng + ?Sized>(
    snr: Snr<T>,
    ant: AntennaConfig,
    rng: &mut R,
) -> T {
    let (nt, nr) = (ant.n_t as usize, ant.n_r as usize);
    let h: Vec<Complex<T>> = (0..nr * nt).map(|_| complex_normal(rng)).collect();
    let scale = snr.0 / T::count(ant.n_t);
    let mut g = vec![Complex::new(T::zero(), T::zero()); nt * nt];
    for a in 0..nt {
        for b in a..nt {
            let mut s = Complex::new(T::zero(), T::zero());
            for r in 0..nr {
                s = s + h[r * nt + a].conj() * h[r * nt + b];
            }
            let mut v = s * scale;
            if a == b {
                v = Complex::new(T::one() + v.re, T::zero());
            }
            g[a * nt + b] = v;
            g[b * nt + a] = v.conj();
        }
    }
    hermitian_log2_det(&g, nt).max(T::zero())
}

/// `trials` mutual-information draws, in a fixed order independent of how
/// the blocks are scheduled across threads.
pub fn sample_mutual_information_batch<T: Real>(
    snr: Snr<T>,
    ant: AntennaConfig,
    trials: usize,
    seed: u64,
) -> Vec<T> {
    let chunks: Vec<(u64, usize)> = blocks(trials).collect();
    let parts: Vec<Vec<T>> = chunks
        .into_par_iter()
        .map(|(block, len)| {
            let mut rng = StreamId::new(seed, block).rng();
            (0..len)
                .map(|_| sample_mutual_information(snr, ant, &mut rng))
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(trials);
    for p in parts {
        out.extend(p);
    }
    debug_assert!(out.len() == trials && BLOCK_LEN > 0);
    out
}

/// Fraction of samples strictly above `rate` and its binomial standard error.
pub fn success_fraction<T: Real>(samples: &[T], rate: T) -> (Probability<T>, T) {
    let n = samples.len().max(1);
    let hits = samples.iter().filter(|&&i| i > rate).count();
    let p = T::from_usize(hits).unwrap() / T::from_usize(n).unwrap();
    let se = (p * (T::one() - p) / T::from_usize(n).unwrap()).sqrt();
    (Probability::new(p).expect("fraction lies in [0, 1]"), se)
}

/// Monte Carlo estimate of `P(I > R)` with its standard error.
pub fn empirical_success_prob<T: Real>(
    snr: Snr<T>,
    rate: T,
    ant: AntennaConfig,
    trials: usize,
    seed: u64,
) -> Result<(Probability<T>, T)> {
    if trials == 0 {
        return domain("trials", 0.0, ">= 1");
    }
    let hits: usize = blocks(trials)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(block, len)| {
            let mut rng = StreamId::new(seed, block).rng();
            (0..len)
                .filter(|_| sample_mutual_information(snr, ant, &mut rng) > rate)
                .count()
        })
        .sum();
    let n = T::from_usize(trials).unwrap();
    let p = T::from_usize(hits).unwrap() / n;
    let se = (p * (T::one() - p) / n).sqrt();
    Ok((Probability::new(p)?, se))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamId;
    use crate::special_fn::erfc_inv;

    fn ant(t: u32, r: u32) -> AntennaConfig {
        AntennaConfig::new(t, r).unwrap()
    }

    #[test]
    fn dispersion_for_two_by_two() {
        let c: f64 = ant(2, 2).dispersion();
        assert!((c - 1.020_139_446_596_789_5).abs() < 1e-15);
    }

    #[test]
    fn half_success_at_median_rate() {
        let a = ant(2, 2);
        let rho = 3.0_f64;
        let rate = 2.0 * (1.0_f64 + rho).log2();
        let p = gaussian_success_prob(Snr::new(rho).unwrap(), rate, a).value();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn direct_formula_evaluation() {
        // rho = 1.5, R = 3, 2x2: reference from a 40-digit evaluation.
        let p = gaussian_success_prob(Snr::new(1.5_f64).unwrap(), 3.0, ant(2, 2)).value();
        assert!((p - 0.402_508_256_724_203_3).abs() < 1e-14);
        // rho = 1, R = 2: the mean is exactly 2 bits.
        let p = gaussian_success_prob(Snr::new(1.0_f64).unwrap(), 2.0, ant(2, 2)).value();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn k_at_even_odds_is_rate_per_antenna() {
        let t = OutageTarget::new(4.0_f64, 0.5).unwrap();
        assert_eq!(rate_offset_k(ant(2, 2), &t), 2.0);
        let t = OutageTarget::new(2.0_f64, 0.5).unwrap();
        let rho = required_snr(ant(2, 4), &t).unwrap().value();
        assert!((rho - 0.5).abs() < 1e-15);
    }

    #[test]
    fn k_and_snr_for_ninety_percent() {
        let t = OutageTarget::from_success_prob(4.0_f64, 0.9).unwrap();
        let k = rate_offset_k(ant(2, 2), &t);
        let expect = 2.0 + 1.020_139_446_596_789_5 * erfc_inv(0.2_f64).unwrap();
        assert!((k - expect).abs() < 1e-13);
        assert!((k - 2.924_444_044_127_341).abs() < 1e-12);
        let rho = required_snr(ant(2, 2), &t).unwrap().value();
        assert!((rho - 6.591_810_829_338_842).abs() < 1e-11);
    }

    #[test]
    fn infeasible_when_k_not_positive() {
        // eps close to one pushes erfc_inv(2 eps) strongly negative.
        let t = OutageTarget::new(0.1_f64, 0.99).unwrap();
        assert!(matches!(
            required_snr(ant(2, 2), &t),
            Err(Error::InfeasibleAtZeroPower { .. })
        ));
    }

    #[test]
    fn required_snr_monotone() {
        let a = ant(2, 2);
        let lo = required_snr(a, &OutageTarget::from_success_prob(4.0_f64, 0.9).unwrap()).unwrap();
        let hi = required_snr(a, &OutageTarget::from_success_prob(4.0_f64, 0.99).unwrap()).unwrap();
        assert!(hi > lo);
    }

    #[test]
    fn invalid_inputs() {
        assert!(AntennaConfig::new(0, 2).is_err());
        assert!(AntennaConfig::new(2, 0).is_err());
        assert!(OutageTarget::new(0.0_f64, 0.1).is_err());
        assert!(OutageTarget::new(1.0_f64, 0.0).is_err());
        assert!(OutageTarget::new(1.0_f64, 1.0).is_err());
        assert!(Snr::new(0.0_f64).is_err());
    }

    #[test]
    fn mutual_information_limits() {
        let mut rng = StreamId::new(3, 0).rng();
        let tiny = Snr::new(1e-300_f64).unwrap();
        for _ in 0..10 {
            assert!(sample_mutual_information(tiny, ant(3, 2), &mut rng) < 1e-290);
        }
    }

    #[test]
    fn scalar_channel_reduces_to_log_one_plus() {
        // Same stream: the first two normals are Re and Im of h.
        let rho = 4.0_f64;
        let mut a = StreamId::new(11, 5).rng();
        let mut b = StreamId::new(11, 5).rng();
        let i = sample_mutual_information(Snr::new(rho).unwrap(), ant(1, 1), &mut a);
        let h: Complex<f64> = complex_normal(&mut b);
        assert!((i - (1.0 + rho * h.norm_sqr()).log2()).abs() < 1e-14);
    }

    #[test]
    fn cholesky_log_det_matches_closed_form_2x2() {
        let g = [
            Complex::new(3.0_f64, 0.0),
            Complex::new(1.0, 1.0),
            Complex::new(1.0, -1.0),
            Complex::new(2.0, 0.0),
        ];
        // det = 3*2 - |1+i|^2 = 4
        assert!((hermitian_log2_det(&g, 2) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn empirical_extremes_and_determinism() {
        let snr = Snr::new(2.0_f64).unwrap();
        let a = ant(2, 2);
        let (p0, _) = empirical_success_prob(snr, 0.0, a, 5000, 9).unwrap();
        assert_eq!(p0.value(), 1.0);
        let (pinf, _) = empirical_success_prob(snr, 1e9, a, 5000, 9).unwrap();
        assert_eq!(pinf.value(), 0.0);
        let x = empirical_success_prob(snr, 3.0, a, 9000, 42).unwrap();
        let y = empirical_success_prob(snr, 3.0, a, 9000, 42).unwrap();
        assert_eq!(x, y);
        let batch = sample_mutual_information_batch(snr, a, 9000, 42);
        assert_eq!(success_fraction(&batch, 3.0), x);
        assert!(empirical_success_prob(snr, 1.0, a, 0, 1).is_err());
    }
}
