use crate::error::{domain, Result};
use crate::line_network::{per_hop_failure_short, short_long_ratio};
use crate::outage::{offset_k, AntennaConfig, OutageTarget};
use crate::random_network::path_efficiency;
use crate::scalar::Real;
use crate::special_fn::{erfc_inv, erfc_inv_philip, InverseMode};

use super::report::{Check, TheoremCheck, TrendReport};

/// Number of terms kept in the `-ln(1 - x)` series.
pub const SERIES_TERMS: usize = 10_000;

/// Hop count and antennas of the worked example behind `f`, `g`, `g'`.
pub const EXAMPLE_HOPS: u32 = 3;

fn example_ant() -> AntennaConfig {
    AntennaConfig::new(2, 2).unwrap()
}

fn check_p<T: Real>(p: T) -> Result<()> {
    if p >= T::lit(0.9) && p < T::one() {
        Ok(())
    } else {
        domain("p_r", p.to_f64_lossy(), "[0.9, 1)")
    }
}

/// `sum_{k=lo}^{SERIES_TERMS} x^(k - shift) / k^div` with powers built by
/// repeated multiplication and summed smallest-first.
fn power_series<T: Real>(x: T, lo: usize, shift: usize, divide: bool) -> T {
    let mut terms = Vec::with_capacity(SERIES_TERMS);
    let mut pow = T::one();
    for k in 1..=SERIES_TERMS {
        // pow = x^(k - shift) once k >= shift
        if k > shift {
            pow = pow * x;
        }
        if k >= lo {
            let t = if divide {
                pow / T::from_usize(k).unwrap()
            } else {
                pow
            };
            terms.push(t);
        }
    }
    terms.iter().rev().fold(T::zero(), |acc, &t| acc + t)
}

/// `-ln(1 - x)` truncated after `SERIES_TERMS` terms.
pub fn neg_log1m_series<T: Real>(x: T) -> T {
    power_series(x, 1, 0, true)
}

/// Derivative of [`neg_log1m_series`].
fn neg_log1m_series_prime<T: Real>(x: T) -> T {
    power_series(x, 1, 1, false)
}

/// `f(p) = k_m - k_s + 1` at hop count 3 on a 2x2 link, exact `erfc^-1`.
pub fn appendix_b_f<T: Real>(p_r: T) -> Result<T> {
    appendix_b_f_with(p_r, EXAMPLE_HOPS, example_ant())
}

pub fn appendix_b_f_with<T: Real>(p_r: T, n: u32, ant: AntennaConfig) -> Result<T> {
    check_p(p_r)?;
    let eps = T::one() - p_r;
    let c = ant.dispersion::<T>();
    let short = erfc_inv(T::lit(2.0) * per_hop_failure_short(eps, n))?;
    let long = erfc_inv(T::lit(2.0) * eps)?;
    Ok(c * (short - long) + T::one())
}

/// Radicand after the Philip form, the truncated `-ln(1-q)` series and the
/// two first-order log expansions:
/// `-ln(2 sqrt(pi)) + S(q) - (-1 - ln 2 + q)/2`.
fn radicand<T: Real>(q: T) -> T {
    let ln_2sqrtpi = (T::lit(2.0) * T::PI().sqrt()).ln();
    -ln_2sqrtpi + neg_log1m_series(q) - T::lit(0.5) * (-T::one() - T::LN_2() + q)
}

/// Derivative of [`radicand`] in `q`: `S'(q) - 1/2`.
fn radicand_prime<T: Real>(q: T) -> T {
    neg_log1m_series_prime(q) - T::lit(0.5)
}

/// The approximation `g(p)` of `f(p)`; hop count 3, 2x2 link.
pub fn appendix_b_g<T: Real>(p_r: T) -> Result<T> {
    appendix_b_g_with(p_r, EXAMPLE_HOPS, example_ant())
}

pub fn appendix_b_g_with<T: Real>(p_r: T, n: u32, ant: AntennaConfig) -> Result<T> {
    check_p(p_r)?;
    let c = ant.dispersion::<T>();
    let q = p_r.powf(T::one() / T::count(n));
    Ok(c * (radicand(q).sqrt() - radicand(p_r).sqrt()) + T::one())
}

/// `dg/dp`; hop count 3, 2x2 link.
pub fn appendix_b_gprime<T: Real>(p_r: T) -> Result<T> {
    appendix_b_gprime_with(p_r, EXAMPLE_HOPS, example_ant())
}

pub fn appendix_b_gprime_with<T: Real>(p_r: T, n: u32, ant: AntennaConfig) -> Result<T> {
    check_p(p_r)?;
    let half_c = T::lit(0.5) * ant.dispersion::<T>();
    let inv_n = T::one() / T::count(n);
    let q = p_r.powf(inv_n);
    let dq = inv_n * p_r.powf(inv_n - T::one());
    let short = radicand_prime(q) * dq / radicand(q).sqrt();
    let long = radicand_prime(p_r) / radicand(p_r).sqrt();
    Ok(half_c * (short - long))
}

/// `(a(n), b(n), c(n))`: the scaled exact and Philip `erfc^-1` of the
/// short-hop argument, and their difference.
pub fn appendix_a_decomposition<T: Real>(n: u32, eps: T, ant: AntennaConfig) -> Result<(T, T, T)> {
    let coef = ant.dispersion::<T>();
    let x = T::lit(2.0) * per_hop_failure_short(eps, n);
    let a = coef * erfc_inv(x)?;
    let b = coef * erfc_inv_philip(x)?;
    Ok((a, b, a - b))
}

/// `(1/n) 48 n / ((48 - pi^2) n + pi^2)`, i.e. `1/(n * efficiency)` at
/// `alpha = 2`, `phi = pi/2`.
pub fn random_prefactor<T: Real>(n: u32) -> T {
    let nn = T::count(n);
    let pi2 = T::PI() * T::PI();
    T::lit(48.0) * nn / ((T::lit(48.0) - pi2) * nn + pi2) / nn
}

/// `f`, `g`, `|f - g|` and `g'` on `p_grid` (ascending, inside [0.9, 1)).
pub fn appendix_b_check<T: Real>(p_grid: &[T], tail: usize) -> Result<TheoremCheck<T>> {
    let mut f = Vec::with_capacity(p_grid.len());
    let mut g = Vec::with_capacity(p_grid.len());
    let mut gp = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        f.push(appendix_b_f(p)?);
        g.push(appendix_b_g(p)?);
        gp.push(appendix_b_gprime(p)?);
    }
    let gap: Vec<T> = f.iter().zip(&g).map(|(a, b)| (*a - *b).abs()).collect();
    let log2_3 = T::lit(3.0).log2();
    let grid = p_grid.to_vec();
    let mut check = TheoremCheck::new("appendix-b");
    check.reports.push(TrendReport::assess(
        "f",
        "p_r",
        grid.clone(),
        f,
        &[Check::FirstBelow(log2_3), Check::TailDecreasing(tail)],
    ));
    check.reports.push(TrendReport::assess(
        "g",
        "p_r",
        grid.clone(),
        g,
        &[Check::FirstBelow(log2_3), Check::TailDecreasing(tail)],
    ));
    check.reports.push(TrendReport::assess(
        "gprime",
        "p_r",
        grid.clone(),
        gp,
        &[Check::AllBelow(T::zero()), Check::TailDecreasing(tail)],
    ));
    check.reports.push(TrendReport::assess(
        "abs-f-minus-g",
        "p_r",
        grid,
        gap,
        &[Check::AllBelow(T::lit(0.01)), Check::TailIncreasing(tail)],
    ));
    check.notes.push(format!(
        "series truncated at {SERIES_TERMS} terms; coefficient sqrt(2/(NtNr)) log2(e) = {}",
        example_ant().dispersion::<T>()
    ));
    Ok(check)
}

/// Prefactor, the `2^{k_s}/(2^{k_s} - 1) < 4/3` bound and the resulting
/// `E_A/E_B < 1` chain at `alpha = 2`, `phi = pi/2`, `n = 3` over
/// `eps_grid` (descending).
pub fn appendix_c_check<T: Real>(
    rate: T,
    ant: AntennaConfig,
    eps_grid: &[T],
    tail: usize,
) -> Result<TheoremCheck<T>> {
    let n = EXAMPLE_HOPS;
    let alpha = T::lit(2.0);
    let pref = random_prefactor::<T>(n);
    let mut frac = Vec::new();
    let mut bound = Vec::new();
    let mut ratio = Vec::new();
    for &eps in eps_grid {
        let target = OutageTarget::new(rate, eps)?;
        let k_s = offset_k(rate, ant, eps, InverseMode::Exact)?;
        let two_ks = k_s.exp2();
        frac.push(two_ks / (two_ks - T::one()));
        let line = short_long_ratio(alpha, n, ant, &target, InverseMode::Exact)?;
        // n^(1-alpha) 2^(k_m-k_s+1) divided back by n^(1-alpha)
        let gap = line.upper_bound * T::count(n).powf(alpha - T::one());
        bound.push(pref * T::lit(2.0) / T::lit(3.0) * gap);
        ratio.push(line.ratio / path_efficiency(alpha, T::FRAC_PI_2(), n));
    }
    let grid = eps_grid.to_vec();
    let mut check = TheoremCheck::new("appendix-c");
    check.reports.push(TrendReport::assess(
        "ks-fraction",
        "eps",
        grid.clone(),
        frac,
        &[
            Check::AllBelow(T::lit(4.0) / T::lit(3.0)),
            Check::TailDecreasing(tail),
        ],
    ));
    check.reports.push(TrendReport::assess(
        "bound-chain",
        "eps",
        grid.clone(),
        bound,
        &[Check::AllBelow(T::one()), Check::TailDecreasing(tail)],
    ));
    check.reports.push(TrendReport::assess(
        "ratio-a-b",
        "eps",
        grid,
        ratio,
        &[Check::AllBelow(T::one()), Check::TailDecreasing(tail)],
    ));
    check.notes.push(format!("prefactor at n=3: {pref}"));
    Ok(check)
}
