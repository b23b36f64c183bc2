//! Transmit energy over a deterministic line network with spacing `d`.
//!
//! Long-hop routing covers `n` spacings in one transmission and must meet
//! the end-to-end target on that link. Short-hop routing makes `n`
//! transmissions, each meeting `p^(1/n)`. Multi-transmit long-hop routing
//! repeats the long hop in each of `n` slots, each slot meeting failure
//! `eps^(1/n)`.

use crate::error::{domain, Result};
use crate::outage::{feasible_k, offset_k, AntennaConfig, OutageTarget};
use crate::scalar::{pow2_m1, pow2_m1_ratio, Real};
use crate::special_fn::InverseMode;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineNetworkParams<T> {
    d: T,
    alpha: T,
    n0: T,
    n_hops: u32,
}

impl<T: Real> LineNetworkParams<T> {
    pub fn new(d: T, alpha: T, n0: T, n_hops: u32) -> Result<Self> {
        if !(d > T::zero()) || !d.is_finite() {
            return domain("d", d.to_f64_lossy(), "(0, inf)");
        }
        if !(alpha > T::one()) || !alpha.is_finite() {
            return domain("alpha", alpha.to_f64_lossy(), "(1, inf)");
        }
        if !(n0 > T::zero()) || !n0.is_finite() {
            return domain("n0", n0.to_f64_lossy(), "(0, inf)");
        }
        if n_hops == 0 {
            return domain("n_hops", 0.0, ">= 1");
        }
        Ok(Self {
            d,
            alpha,
            n0,
            n_hops,
        })
    }

    pub fn d(&self) -> T {
        self.d
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn n0(&self) -> T {
        self.n0
    }

    pub fn n_hops(&self) -> u32 {
        self.n_hops
    }

    /// `N_0 d^alpha`: energy scale of one spacing.
    fn spacing_energy(&self) -> T {
        self.n0 * self.d.powf(self.alpha)
    }

    fn n(&self) -> T {
        T::count(self.n_hops)
    }
}

/// Per-hop failure `1 - (1 - eps)^(1/n)` for short-hop routing, evaluated as
/// `-expm1(ln1p(-eps) / n)`.
pub fn per_hop_failure_short<T: Real>(eps: T, n: u32) -> T {
    if n == 1 {
        return eps;
    }
    -((-eps).ln_1p() / T::count(n)).exp_m1()
}

/// Per-slot failure `eps^(1/n)` for multi-transmit long-hop routing.
pub fn per_slot_failure_multi<T: Real>(eps: T, n: u32) -> T {
    if n == 1 {
        return eps;
    }
    (eps.ln() / T::count(n)).exp()
}

/// Exponents `k_s`, `k_m` and `k_{s,mult}` for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopExponents<T> {
    pub long: T,
    pub short: T,
    pub multi: T,
}

impl<T: Real> HopExponents<T> {
    pub fn new(
        ant: AntennaConfig,
        target: &OutageTarget<T>,
        n: u32,
        mode: InverseMode,
    ) -> Result<Self> {
        let eps = target.failure_prob();
        let rate = target.rate();
        Ok(Self {
            long: offset_k(rate, ant, eps, mode)?,
            short: offset_k(rate, ant, per_hop_failure_short(eps, n), mode)?,
            multi: offset_k(rate, ant, per_slot_failure_multi(eps, n), mode)?,
        })
    }
}

/// `E_s = n^alpha N_0 d^alpha (N_t/N_r)(2^{k_s} - 1)`.
pub fn energy_long_hop<T: Real>(
    params: &LineNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
) -> Result<T> {
    let k = feasible_k(offset_k(
        target.rate(),
        ant,
        target.failure_prob(),
        InverseMode::Exact,
    )?)?;
    Ok(params.n().powf(params.alpha)
        * params.spacing_energy()
        * ant.array_ratio::<T>()
        * pow2_m1(k))
}

/// `E_m = n N_0 d^alpha (N_t/N_r)(2^{k_m} - 1)`.
pub fn energy_short_hop<T: Real>(
    params: &LineNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
) -> Result<T> {
    let eps = per_hop_failure_short(target.failure_prob(), params.n_hops);
    let k = feasible_k(offset_k(target.rate(), ant, eps, InverseMode::Exact)?)?;
    Ok(params.n() * params.spacing_energy() * ant.array_ratio::<T>() * pow2_m1(k))
}

/// `E_{s,mult} = n^(alpha+1) N_0 d^alpha (N_t/N_r)(2^{k_{s,mult}} - 1)`.
pub fn energy_multi_transmit_long<T: Real>(
    params: &LineNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
) -> Result<T> {
    let eps = per_slot_failure_multi(target.failure_prob(), params.n_hops);
    let k = feasible_k(offset_k(target.rate(), ant, eps, InverseMode::Exact)?)?;
    Ok(params.n().powf(params.alpha + T::one())
        * params.spacing_energy()
        * ant.array_ratio::<T>()
        * pow2_m1(k))
}

/// `E_m / E_s` with the two upper bounds from the ratio's inequality chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortLongRatio<T> {
    /// `n^(1-alpha) (2^{k_m} - 1)/(2^{k_s} - 1)`.
    pub ratio: T,
    /// `n^(1-alpha) 2^{k_m}/(2^{k_s} - 1)`.
    pub intermediate_bound: T,
    /// `n^(1-alpha) 2^{k_m - k_s + 1}`.
    pub upper_bound: T,
    pub k_long: T,
    pub k_short: T,
}

pub fn ratio_short_to_long<T: Real>(
    params: &LineNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
) -> Result<ShortLongRatio<T>> {
    ratio_short_to_long_with(params, ant, target, InverseMode::Exact)
}

/// Ratio in exponent space; `d` and `N_0` cancel and are never evaluated.
pub fn ratio_short_to_long_with<T: Real>(
    params: &LineNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
    mode: InverseMode,
) -> Result<ShortLongRatio<T>> {
    short_long_ratio(params.alpha, params.n_hops, ant, target, mode)
}

pub(crate) fn short_long_ratio<T: Real>(
    alpha: T,
    n: u32,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
    mode: InverseMode,
) -> Result<ShortLongRatio<T>> {
    let eps = target.failure_prob();
    let k_s = feasible_k(offset_k(target.rate(), ant, eps, mode)?)?;
    let k_m = feasible_k(offset_k(
        target.rate(),
        ant,
        per_hop_failure_short(eps, n),
        mode,
    )?)?;
    let geo = T::count(n).powf(T::one() - alpha);
    let ln2 = T::LN_2();
    let gap = ((k_m - k_s) * ln2).exp();
    Ok(ShortLongRatio {
        ratio: geo * pow2_m1_ratio(k_m, k_s),
        intermediate_bound: geo * gap / crate::scalar::one_minus_pow2_neg(k_s),
        upper_bound: geo * gap * T::lit(2.0),
        k_long: k_s,
        k_short: k_m,
    })
}

/// `E_{s,mult} / E_m = n^alpha (2^{k_{s,mult}} - 1)/(2^{k_m} - 1)`.
pub fn ratio_mult_to_short<T: Real>(
    params: &LineNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
) -> Result<T> {
    ratio_mult_to_short_with(params, ant, target, InverseMode::Exact)
}

pub fn ratio_mult_to_short_with<T: Real>(
    params: &LineNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
    mode: InverseMode,
) -> Result<T> {
    mult_short_ratio(params.alpha, params.n_hops, ant, target, mode)
}

pub(crate) fn mult_short_ratio<T: Real>(
    alpha: T,
    n: u32,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
    mode: InverseMode,
) -> Result<T> {
    let eps = target.failure_prob();
    let k_mult = feasible_k(offset_k(
        target.rate(),
        ant,
        per_slot_failure_multi(eps, n),
        mode,
    )?)?;
    let k_m = feasible_k(offset_k(
        target.rate(),
        ant,
        per_hop_failure_short(eps, n),
        mode,
    )?)?;
    Ok(T::count(n).powf(alpha) * pow2_m1_ratio(k_mult, k_m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn ant22() -> AntennaConfig {
        AntennaConfig::new(2, 2).unwrap()
    }

    fn params(n: u32) -> LineNetworkParams<f64> {
        LineNetworkParams::new(1.0, 2.0, 1.0, n).unwrap()
    }

    #[test]
    fn per_hop_failure_values() {
        assert_eq!(per_hop_failure_short(0.3_f64, 1), 0.3);
        let v = per_hop_failure_short(0.1_f64, 3);
        assert!((v - 0.034_510_615_394_370_24).abs() < 1e-16);
        let v = per_hop_failure_short(1e-12_f64, 4);
        assert!(((v - 2.500_000_000_000_937_5e-13) / v).abs() < 1e-12);
        assert!((per_slot_failure_multi(1e-4_f64, 2) - 0.01).abs() < 1e-17);
    }

    #[test]
    fn single_hop_strategies_coincide() {
        let t = OutageTarget::from_success_prob(4.0_f64, 0.95).unwrap();
        let p = LineNetworkParams::new(1.7, 3.0, 0.2, 1).unwrap();
        let es = energy_long_hop(&p, ant22(), &t).unwrap();
        let em = energy_short_hop(&p, ant22(), &t).unwrap();
        let emult = energy_multi_transmit_long(&p, ant22(), &t).unwrap();
        assert_eq!(es, em);
        assert_eq!(es, emult);
        let r = ratio_short_to_long(&p, ant22(), &t).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-15);
        assert!((ratio_mult_to_short(&p, ant22(), &t).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn long_hop_scales_with_n_to_alpha() {
        let t = OutageTarget::from_success_prob(4.0_f64, 0.95).unwrap();
        let e3 = energy_long_hop(&params(3), ant22(), &t).unwrap();
        let e6 = energy_long_hop(&params(6), ant22(), &t).unwrap();
        assert!((e6 / e3 - 4.0).abs() < 1e-13);
    }

    #[test]
    fn worked_example_alpha2_n3() {
        // k_s = 2 + c erfc_inv(0.1); E_s = 9 (2^k_s - 1); 40-digit reference.
        let t = OutageTarget::from_success_prob(4.0_f64, 0.95).unwrap();
        let es = energy_long_hop(&params(3), ant22(), &t).unwrap();
        assert!((es - 72.936_597_906_515_43).abs() < 1e-10);
        let em = energy_short_hop(&params(3), ant22(), &t).unwrap();
        assert!((em - 31.657_264_752_545_73).abs() < 1e-10);
        let r = ratio_short_to_long(&params(3), ant22(), &t).unwrap();
        assert!((r.ratio - em / es).abs() < 1e-14);
    }

    #[test]
    fn bound_chain_ordering() {
        let t = OutageTarget::from_success_prob(4.0_f64, 0.93).unwrap();
        for n in 2..8 {
            let r = ratio_short_to_long(&params(n), ant22(), &t).unwrap();
            assert!(r.ratio < r.intermediate_bound);
            assert!(r.intermediate_bound < r.upper_bound);
        }
    }

    #[test]
    fn infeasible_propagates() {
        let t = OutageTarget::new(0.05_f64, 0.9).unwrap();
        assert!(matches!(
            energy_long_hop(&params(2), ant22(), &t),
            Err(Error::InfeasibleAtZeroPower { .. })
        ));
        assert!(ratio_short_to_long(&params(2), ant22(), &t).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(LineNetworkParams::new(0.0_f64, 2.0, 1.0, 2).is_err());
        assert!(LineNetworkParams::new(1.0_f64, 1.0, 1.0, 2).is_err());
        assert!(LineNetworkParams::new(1.0_f64, 2.0, 0.0, 2).is_err());
        assert!(LineNetworkParams::new(1.0_f64, 2.0, 1.0, 0).is_err());
    }

    #[test]
    fn multi_transmit_beats_short_hop_at_extreme_reliability() {
        let t = OutageTarget::new(4.0_f64, 1e-300).unwrap();
        let r = ratio_mult_to_short(&params(2), ant22(), &t).unwrap();
        assert!(r < 1.0, "{r}");
        let t = OutageTarget::from_success_prob(4.0_f64, 0.96).unwrap();
        assert!(ratio_mult_to_short(&params(2), ant22(), &t).unwrap() > 1.0);
    }
}
