//! Expected transmit energy in a 2-D Poisson network of unit intensity,
//! normalized by `N_0 (N_t/N_r)`.
//!
//! Strategy A relays to the nearest node with positive progress inside a
//! sector of angle `phi`; Strategy B transmits straight to every `n`-th node
//! of A's route. B's hops are credited with the second-order path-efficiency
//! factor `1 - alpha phi^2 (n-1)/(24 n)`.

use crate::error::{domain, Error, Result};
use crate::line_network::{
    mult_short_ratio, per_hop_failure_short, per_slot_failure_multi, short_long_ratio,
};
use crate::outage::{feasible_k, offset_k, AntennaConfig, OutageTarget};
use crate::scalar::{pow2_m1, Real};
use crate::special_fn::{gamma, InverseMode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomNetworkParams<T> {
    alpha: T,
    phi: T,
    n_hops: u32,
}

impl<T: Real> RandomNetworkParams<T> {
    pub fn new(alpha: T, phi: T, n_hops: u32) -> Result<Self> {
        if !(alpha > T::one()) || !alpha.is_finite() {
            return domain("alpha", alpha.to_f64_lossy(), "(1, inf)");
        }
        if !(phi > T::zero() && phi <= T::PI()) {
            return domain("phi", phi.to_f64_lossy(), "(0, pi]");
        }
        if n_hops == 0 {
            return domain("n_hops", 0.0, ">= 1");
        }
        Ok(Self { alpha, phi, n_hops })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    pub fn n_hops(&self) -> u32 {
        self.n_hops
    }

    /// `1 - alpha phi^2 (n-1) / (24 n)`; may be non-positive.
    pub fn path_efficiency(&self) -> T {
        path_efficiency(self.alpha, self.phi, self.n_hops)
    }

    /// The path-efficiency factor, or `InvalidGeometry` when it is not positive.
    pub fn checked_path_efficiency(&self) -> Result<T> {
        let f = self.path_efficiency();
        if f > T::zero() {
            Ok(f)
        } else {
            Err(Error::InvalidGeometry {
                factor: f.to_f64_lossy(),
            })
        }
    }

    /// `(2/phi)^(alpha/2) Gamma(1 + alpha/2)`: expected `d^alpha` of one
    /// nearest-neighbour hop in the sector.
    pub fn hop_moment(&self) -> T {
        let half_alpha = self.alpha * T::lit(0.5);
        (T::lit(2.0) / self.phi).powf(half_alpha)
            * gamma(T::one() + half_alpha).expect("alpha > 1 keeps gamma argument positive")
    }
}

pub(crate) fn path_efficiency<T: Real>(alpha: T, phi: T, n: u32) -> T {
    let n = T::count(n);
    T::one() - alpha * phi * phi * (n - T::one()) / (T::lit(24.0) * n)
}

/// `E_B = n^alpha (2/phi)^(alpha/2) Gamma(1+alpha/2) (1 - alpha phi^2 (n-1)/(24n)) (2^{k_s} - 1)`.
pub fn energy_strategy_b<T: Real>(
    params: &RandomNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
) -> Result<T> {
    let eff = params.checked_path_efficiency()?;
    let k = feasible_k(offset_k(
        target.rate(),
        ant,
        target.failure_prob(),
        InverseMode::Exact,
    )?)?;
    Ok(T::count(params.n_hops).powf(params.alpha) * params.hop_moment() * eff * pow2_m1(k))
}

/// `E_A = n (2/phi)^(alpha/2) Gamma(1+alpha/2) (2^{k_m} - 1)`.
pub fn energy_strategy_a<T: Real>(
    params: &RandomNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
) -> Result<T> {
    let eps = per_hop_failure_short(target.failure_prob(), params.n_hops);
    let k = feasible_k(offset_k(target.rate(), ant, eps, InverseMode::Exact)?)?;
    Ok(T::count(params.n_hops) * params.hop_moment() * pow2_m1(k))
}

/// `E_{B,mult} = n^(alpha+1) (2/phi)^(alpha/2) Gamma(1+alpha/2) (1 - ...) (2^{k_{s,mult}} - 1)`.
pub fn energy_multi_transmit_b<T: Real>(
    params: &RandomNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
) -> Result<T> {
    let eff = params.checked_path_efficiency()?;
    let eps = per_slot_failure_multi(target.failure_prob(), params.n_hops);
    let k = feasible_k(offset_k(target.rate(), ant, eps, InverseMode::Exact)?)?;
    Ok(T::count(params.n_hops).powf(params.alpha + T::one())
        * params.hop_moment()
        * eff
        * pow2_m1(k))
}

/// `E_A / E_B`: the line-network ratio divided by the path-efficiency factor.
pub fn ratio_a_to_b<T: Real>(
    params: &RandomNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
) -> Result<T> {
    ratio_a_to_b_with(params, ant, target, InverseMode::Exact)
}

pub fn ratio_a_to_b_with<T: Real>(
    params: &RandomNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
    mode: InverseMode,
) -> Result<T> {
    let eff = params.checked_path_efficiency()?;
    let line = short_long_ratio(params.alpha, params.n_hops, ant, target, mode)?;
    Ok(line.ratio / eff)
}

/// `E_{B,mult} / E_A`.
pub fn ratio_mult_b_to_a<T: Real>(
    params: &RandomNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
) -> Result<T> {
    ratio_mult_b_to_a_with(params, ant, target, InverseMode::Exact)
}

pub fn ratio_mult_b_to_a_with<T: Real>(
    params: &RandomNetworkParams<T>,
    ant: AntennaConfig,
    target: &OutageTarget<T>,
    mode: InverseMode,
) -> Result<T> {
    let eff = params.checked_path_efficiency()?;
    Ok(mult_short_ratio(params.alpha, params.n_hops, ant, target, mode)? * eff)
}
