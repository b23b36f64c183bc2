use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::line_network::per_hop_failure_short;
use crate::outage::{AntennaConfig, OutageTarget};
use crate::rng::StreamId;
use crate::scalar::Real;

use super::points::{generate_ppp, generate_uniform_count, PointSet, SectorRegion};
use super::route::{
    route_energy, route_strategy_a_anchored, route_strategy_b, Route, SectorAnchor,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement<T> {
    /// Exactly `count` uniform nodes.
    Uniform { count: usize },
    /// Poisson point process of the given intensity.
    Poisson { intensity: T },
}

/// How the end-to-end failure budget is divided among hops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum HopSplit {
    /// Each strategy splits over its own realized hop count.
    #[default]
    Realized,
    /// A splits over the nominal `n`; every B hop gets the full budget.
    Nominal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig<T> {
    pub placement: Placement<T>,
    pub region: SectorRegion<T>,
    /// Search-sector angle used by Strategy A.
    pub routing_phi: T,
    pub alpha: T,
    pub ant: AntennaConfig,
    pub target: OutageTarget<T>,
    pub anchor: SectorAnchor,
    pub split: HopSplit,
}

impl<T: Real> SimConfig<T> {
    /// `count` uniform nodes at unit density in a sector of angle `phi`, routed
    /// with the same angle.
    pub fn uniform(
        count: usize,
        phi: T,
        alpha: T,
        ant: AntennaConfig,
        target: OutageTarget<T>,
    ) -> Result<Self> {
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return domain("alpha", alpha.to_f64_lossy(), "(0, inf)");
        }
        Ok(Self {
            placement: Placement::Uniform { count },
            region: SectorRegion::with_unit_density(count, phi)?,
            routing_phi: phi,
            alpha,
            ant,
            target,
            anchor: SectorAnchor::default(),
            split: HopSplit::default(),
        })
    }

    pub fn generate(&self, stream: StreamId) -> Result<PointSet<T>> {
        match self.placement {
            Placement::Uniform { count } => Ok(generate_uniform_count(self.region, count, stream)),
            Placement::Poisson { intensity } => generate_ppp(self.region, intensity, stream),
        }
    }

    pub fn route_a(&self, points: &PointSet<T>) -> Route<T> {
        route_strategy_a_anchored(points, self.routing_phi, self.anchor)
    }

    fn energies(&self, a: &Route<T>, b: &Route<T>, n: u32) -> Result<(T, T)> {
        let eps = self.target.failure_prob();
        let (eps_a, eps_b) = match self.split {
            HopSplit::Realized => (
                per_hop_failure_short(eps, a.hops() as u32),
                per_hop_failure_short(eps, b.hops() as u32),
            ),
            HopSplit::Nominal => (per_hop_failure_short(eps, n), eps),
        };
        let rate = self.target.rate();
        Ok((
            route_energy(a, self.alpha, self.ant, eps_a, rate)?,
            route_energy(b, self.alpha, self.ant, eps_b, rate)?,
        ))
    }
}

/// Energies and hop counts of one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome<T> {
    pub energy_a: T,
    pub energy_b: T,
    pub hops_a: usize,
    pub hops_b: usize,
}

/// One realization at stream `(seed, trial)` for every `n` in `ns`. All `n`
/// share the same point set and Strategy A route.
pub fn simulate_trial_sweep<T: Real>(
    config: &SimConfig<T>,
    ns: &[u32],
    seed: u64,
    trial: u64,
) -> Result<Vec<TrialOutcome<T>>> {
    let points = config.generate(StreamId::new(seed, trial))?;
    let a = config.route_a(&points);
    ns.iter()
        .map(|&n| {
            let b = route_strategy_b(&a, n)?;
            let (energy_a, energy_b) = config.energies(&a, &b, n)?;
            Ok(TrialOutcome {
                energy_a,
                energy_b,
                hops_a: a.hops(),
                hops_b: b.hops(),
            })
        })
        .collect()
}

pub fn simulate_trial<T: Real>(
    config: &SimConfig<T>,
    n: u32,
    seed: u64,
    trial: u64,
) -> Result<TrialOutcome<T>> {
    Ok(simulate_trial_sweep(config, &[n], seed, trial)?[0])
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyStats<T> {
    pub mean: T,
    pub stderr: T,
    pub trials: usize,
}

impl<T: Real> EnergyStats<T> {
    /// Two-pass mean and unbiased variance; `stderr` is 0 for one sample.
    /// Panics on an empty slice.
    pub fn from_samples(samples: &[T]) -> Self {
        assert!(!samples.is_empty(), "EnergyStats needs at least one sample");
        let len = T::from_usize(samples.len()).unwrap();
        let mean = samples.iter().fold(T::zero(), |a, &x| a + x) / len;
        let stderr = if samples.len() > 1 {
            let ss = samples
                .iter()
                .fold(T::zero(), |a, &x| a + (x - mean) * (x - mean));
            (ss / (len - T::one()) / len).sqrt()
        } else {
            T::zero()
        };
        Self {
            mean,
            stderr,
            trials: samples.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareStats<T> {
    pub n: u32,
    pub a: EnergyStats<T>,
    pub b: EnergyStats<T>,
    /// Per-trial `E_A / E_B`.
    pub ratio: EnergyStats<T>,
    /// Per-trial `E_B - E_A`.
    pub gap: EnergyStats<T>,
    pub mean_hops_a: T,
    pub mean_hops_b: T,
}

/// Monte Carlo comparison for a single `n`.
pub fn monte_carlo_compare<T: Real>(
    config: &SimConfig<T>,
    n: u32,
    trials: usize,
    seed: u64,
) -> Result<CompareStats<T>> {
    Ok(monte_carlo_sweep(config, &[n], trials, seed)?
        .stats
        .remove(0))
}

/// Statistics per `n` plus paired gap increments between consecutive `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepStats<T> {
    pub stats: Vec<CompareStats<T>>,
    /// Entry `i` summarizes `gap(n_{i+1}) - gap(n_i)` over common trials.
    pub gap_increments: Vec<EnergyStats<T>>,
}

/// Runs `trials` independent realizations (trial `t` uses stream `(seed, t)`)
/// and evaluates every `n` on each. Results do not depend on the thread count.
pub fn monte_carlo_sweep<T: Real>(
    config: &SimConfig<T>,
    ns: &[u32],
    trials: usize,
    seed: u64,
) -> Result<SweepStats<T>> {
    if trials == 0 {
        return domain("trials", 0.0, ">= 1");
    }
    if ns.is_empty() {
        return Err(crate::error::Error::Config("empty hop-count list".into()));
    }
    let outcomes: Vec<Vec<TrialOutcome<T>>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| simulate_trial_sweep(config, ns, seed, t))
        .collect::<Result<_>>()?;

    let column = |j: usize, f: &dyn Fn(&TrialOutcome<T>) -> T| -> Vec<T> {
        outcomes.iter().map(|row| f(&row[j])).collect()
    };
    let len = T::from_usize(trials).unwrap();
    let stats = ns
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let mean_of = |v: Vec<T>| v.iter().fold(T::zero(), |a, &x| a + x) / len;
            CompareStats {
                n,
                a: EnergyStats::from_samples(&column(j, &|o| o.energy_a)),
                b: EnergyStats::from_samples(&column(j, &|o| o.energy_b)),
                ratio: EnergyStats::from_samples(&column(j, &|o| o.energy_a / o.energy_b)),
                gap: EnergyStats::from_samples(&column(j, &|o| o.energy_b - o.energy_a)),
                mean_hops_a: mean_of(column(j, &|o| T::from_usize(o.hops_a).unwrap())),
                mean_hops_b: mean_of(column(j, &|o| T::from_usize(o.hops_b).unwrap())),
            }
        })
        .collect();
    let gap_increments = (1..ns.len())
        .map(|j| {
            let d: Vec<T> = outcomes
                .iter()
                .map(|row| {
                    (row[j].energy_b - row[j].energy_a)
                        - (row[j - 1].energy_b - row[j - 1].energy_a)
                })
                .collect();
            EnergyStats::from_samples(&d)
        })
        .collect();
    Ok(SweepStats {
        stats,
        gap_increments,
    })
}
