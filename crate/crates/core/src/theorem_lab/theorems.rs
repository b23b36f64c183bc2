use crate::error::{Error, Result};
use crate::grid::{grid, integer_grid, Scale};
use crate::line_network::{
    mult_short_ratio, per_hop_failure_short, per_slot_failure_multi, short_long_ratio,
};
use crate::outage::{offset_k, AntennaConfig, OutageTarget};
use crate::random_network::path_efficiency;
use crate::scalar::Real;
use crate::special_fn::InverseMode;

use super::appendix::appendix_a_decomposition;
use super::report::{Check, TheoremCheck, TrendReport};

/// Knobs shared by the theorem checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabOptions<T> {
    pub mode: InverseMode,
    /// Sector angle; enables the random-network corollary reports.
    pub phi: Option<T>,
    /// Overrides the per-theorem threshold at the grid maximum.
    pub threshold: Option<T>,
    /// Points in the monotone-tail check.
    pub tail: usize,
}

impl<T> Default for LabOptions<T> {
    fn default() -> Self {
        Self {
            mode: InverseMode::Exact,
            phi: None,
            threshold: None,
            tail: 8,
        }
    }
}

pub fn default_n_grid() -> Vec<u32> {
    integer_grid(2, 512, 40, Scale::Geometric).unwrap()
}

/// 45 log-spaced failure probabilities from 1e-1 down to 1e-12.
pub fn default_theorem2_eps_grid<T: Real>() -> Vec<T> {
    grid(T::lit(1e-1), T::lit(1e-12), 45, Scale::Log).unwrap()
}

pub fn default_antenna_grid() -> Vec<u32> {
    (1..=256).collect()
}

/// 76 log-spaced failure probabilities from 0.04 down to 1e-300.
pub fn default_theorem4_eps_grid<T: Real>() -> Vec<T> {
    grid(T::lit(0.04), T::lit(1e-300), 76, Scale::Log).unwrap()
}

fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn require_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::one() && alpha.is_finite() {
        Ok(())
    } else {
        Err(config(format!("alpha must exceed 1, got {alpha}")))
    }
}

fn require_strict<T: PartialOrd + Copy>(
    v: &[T],
    ascending: bool,
    what: &str,
    tail: usize,
) -> Result<()> {
    if v.len() < tail.max(2) {
        return Err(config(format!(
            "{what} needs at least {} points",
            tail.max(2)
        )));
    }
    let ok = v
        .windows(2)
        .all(|w| if ascending { w[0] < w[1] } else { w[0] > w[1] });
    if ok {
        Ok(())
    } else {
        let dir = if ascending {
            "increasing"
        } else {
            "decreasing"
        };
        Err(config(format!("{what} must be strictly {dir}")))
    }
}

fn require_phi<T: Real>(alpha: T, phi: T) -> Result<()> {
    if !(phi > T::zero() && phi <= T::PI()) {
        return Err(config(format!("phi must lie in (0, pi], got {phi}")));
    }
    if !(alpha * phi * phi < T::lit(24.0)) {
        return Err(config(format!(
            "alpha phi^2 = {} must be below 24",
            alpha * phi * phi
        )));
    }
    Ok(())
}

fn geo<T: Real>(n: u32, alpha: T) -> T {
    T::count(n).powf(T::one() - alpha)
}

fn as_real<T: Real>(v: &[u32]) -> Vec<T> {
    v.iter().map(|&x| T::count(x)).collect()
}

/// Growing hop count at fixed `eps`: `E_m/E_s` falls below the threshold
/// (default 0.01) at the largest `n`.
pub fn check_theorem1<T: Real>(
    alpha: T,
    eps: T,
    ant: AntennaConfig,
    rate: T,
    n_grid: &[u32],
    opts: &LabOptions<T>,
) -> Result<TheoremCheck<T>> {
    require_alpha(alpha)?;
    if !(eps > T::zero() && eps < T::lit(0.1)) {
        return Err(config(format!("eps must lie in (0, 0.1), got {eps}")));
    }
    require_strict(n_grid, true, "n grid", opts.tail)?;
    if n_grid[0] == 0 {
        return Err(config("n grid must start at 1 or more"));
    }
    if let Some(phi) = opts.phi {
        require_phi(alpha, phi)?;
    }
    let target = OutageTarget::new(rate, eps)?;
    let threshold = opts.threshold.unwrap_or(T::lit(0.01));
    let tail = opts.tail;

    let mut ratio = Vec::new();
    let mut bound = Vec::new();
    let mut corollary = Vec::new();
    let mut c_n = Vec::new();
    for &n in n_grid {
        let r = short_long_ratio(alpha, n, ant, &target, opts.mode)?;
        ratio.push(r.ratio);
        bound.push(r.upper_bound);
        if let Some(phi) = opts.phi {
            corollary.push(r.ratio / path_efficiency(alpha, phi, n));
        }
        c_n.push(appendix_a_decomposition(n, eps, ant)?.2.abs());
    }
    let grid = as_real::<T>(n_grid);
    let mut check = TheoremCheck::new(format!("theorem1[{}]", opts.mode));
    check.reports.push(TrendReport::assess(
        "ratio",
        "n",
        grid.clone(),
        ratio,
        &[Check::TailDecreasing(tail), Check::FinalBelow(threshold)],
    ));
    check.reports.push(TrendReport::assess(
        "upper-bound",
        "n",
        grid.clone(),
        bound,
        &[Check::TailDecreasing(tail)],
    ));
    check.reports.push(TrendReport::assess(
        "abs-c-n",
        "n",
        grid.clone(),
        c_n,
        &[Check::TailDecreasing(tail), Check::FinalBelow(T::lit(0.05))],
    ));
    if let Some(phi) = opts.phi {
        check.reports.push(TrendReport::assess(
            "corollary-ratio",
            "n",
            grid,
            corollary,
            &[Check::TailDecreasing(tail), Check::FinalBelow(threshold)],
        ));
        let limit = T::one() - alpha * phi * phi / T::lit(24.0);
        check.notes.push(format!(
            "limiting efficiency divisor 1/{limit} = {}",
            T::one() / limit
        ));
    }
    check
        .notes
        .push(format!("threshold {threshold} at the largest n"));
    Ok(check)
}

/// Fixed hop count, `eps -> 0`: `E_m/E_s < 1` at the smallest `eps` and the
/// Philip-form bound `f_2 = n^(1-alpha) 2^{f_1}` approaches `2 n^(1-alpha)`.
pub fn check_theorem2<T: Real>(
    alpha: T,
    n: u32,
    ant: AntennaConfig,
    rate: T,
    eps_grid: &[T],
    opts: &LabOptions<T>,
) -> Result<TheoremCheck<T>> {
    require_alpha(alpha)?;
    require_strict(eps_grid, false, "eps grid", opts.tail)?;
    let g = geo(n, alpha);
    if !(g < T::lit(0.5)) {
        return Err(Error::Precondition(format!(
            "n^(1-alpha) = {g} is not below 1/2"
        )));
    }
    let eff = match opts.phi {
        Some(phi) => {
            require_phi(alpha, phi)?;
            let eff = path_efficiency(alpha, phi, n);
            if !(g / eff < T::lit(0.5)) {
                return Err(Error::Precondition(format!(
                    "n^(1-alpha)/efficiency = {} is not below 1/2",
                    g / eff
                )));
            }
            Some(eff)
        }
        None => None,
    };
    let threshold = opts.threshold.unwrap_or(T::one());
    let tail = opts.tail;

    let mut ratio = Vec::new();
    let mut f2 = Vec::new();
    let mut corollary = Vec::new();
    for &eps in eps_grid {
        let target = OutageTarget::new(rate, eps)?;
        let r = short_long_ratio(alpha, n, ant, &target, opts.mode)?;
        ratio.push(r.ratio);
        let p = short_long_ratio(alpha, n, ant, &target, InverseMode::Philip)?;
        f2.push(p.upper_bound);
        if let Some(eff) = eff {
            corollary.push(r.ratio / eff);
        }
    }
    let grid = eps_grid.to_vec();
    let limit = T::lit(2.0) * g;
    let mut check = TheoremCheck::new(format!("theorem2[{}]", opts.mode));
    check.reports.push(TrendReport::assess(
        "ratio",
        "eps",
        grid.clone(),
        ratio,
        &[Check::TailDecreasing(tail), Check::FinalBelow(threshold)],
    ));
    let gap: Vec<T> = f2.iter().map(|&v| v - limit).collect();
    check.reports.push(TrendReport::assess(
        "f2-minus-limit",
        "eps",
        grid.clone(),
        gap,
        &[Check::TailDecreasing(tail)],
    ));
    if eff.is_some() {
        check.reports.push(TrendReport::assess(
            "corollary-ratio",
            "eps",
            grid,
            corollary,
            &[Check::TailDecreasing(tail), Check::FinalBelow(threshold)],
        ));
    }
    check
        .notes
        .push(format!("limit of f2: 2 n^(1-alpha) = {limit}"));
    Ok(check)
}

/// Growing antenna counts at fixed `n` and `eps`: the ratio should fall
/// below the threshold (default 0.1) at the largest array, and `k_m - k_s`
/// should vanish.
pub fn check_theorem3<T: Real>(
    alpha: T,
    n: u32,
    rate: T,
    eps: T,
    base: AntennaConfig,
    antenna_grid: &[u32],
    opts: &LabOptions<T>,
) -> Result<TheoremCheck<T>> {
    require_alpha(alpha)?;
    require_strict(antenna_grid, true, "antenna grid", opts.tail)?;
    if antenna_grid[0] == 0 {
        return Err(config("antenna grid must start at 1 or more"));
    }
    let g = geo(n, alpha);
    if !(T::lit(2.0) * g < T::one()) {
        return Err(Error::Precondition(format!(
            "2 n^(1-alpha) = {} is not below 1",
            T::lit(2.0) * g
        )));
    }
    let eff = match opts.phi {
        Some(phi) => {
            require_phi(alpha, phi)?;
            Some(path_efficiency(alpha, phi, n))
        }
        None => None,
    };
    let target = OutageTarget::new(rate, eps)?;
    let threshold = opts.threshold.unwrap_or(T::lit(0.1));
    let tail = opts.tail;
    let grid = as_real::<T>(antenna_grid);

    let sweep = |make: &dyn Fn(u32) -> Result<AntennaConfig>| -> Result<(Vec<T>, Vec<T>)> {
        let mut ratio = Vec::new();
        let mut gap = Vec::new();
        for &m in antenna_grid {
            let r = short_long_ratio(alpha, n, make(m)?, &target, opts.mode)?;
            ratio.push(r.ratio);
            gap.push(r.k_short - r.k_long);
        }
        Ok((ratio, gap))
    };
    let (by_nt, _) = sweep(&|m| AntennaConfig::new(m, base.n_r()))?;
    let (by_nr, _) = sweep(&|m| AntennaConfig::new(base.n_t(), m))?;
    let (by_both, k_gap) = sweep(&|m| AntennaConfig::new(m, m))?;

    let checks = [Check::TailDecreasing(tail), Check::FinalBelow(threshold)];
    let mut check = TheoremCheck::new(format!("theorem3[{}]", opts.mode));
    check.reports.push(TrendReport::assess(
        "ratio-vs-nt",
        "n_t",
        grid.clone(),
        by_nt,
        &checks,
    ));
    check.reports.push(TrendReport::assess(
        "ratio-vs-nr",
        "n_r",
        grid.clone(),
        by_nr,
        &checks,
    ));
    check.reports.push(TrendReport::assess(
        "ratio-vs-both",
        "n_t=n_r",
        grid.clone(),
        by_both.clone(),
        &checks,
    ));
    check.reports.push(TrendReport::assess(
        "km-minus-ks",
        "n_t=n_r",
        grid.clone(),
        k_gap,
        &[Check::TailDecreasing(tail), Check::FinalBelow(threshold)],
    ));

    // Square arrays from 2x2 to 64x64.
    let (dg, dv): (Vec<T>, Vec<T>) = antenna_grid
        .iter()
        .zip(&by_both)
        .filter(|(m, _)| (2..=64).contains(*m))
        .map(|(&m, &v)| (T::count(m), v))
        .unzip();
    if !dg.is_empty() {
        check.reports.push(TrendReport::assess(
            "square-2-to-64",
            "n_t=n_r",
            dg,
            dv,
            &[Check::FinalBelowFirst, Check::TailDecreasing(tail)],
        ));
    }
    if let Some(eff) = eff {
        let cor: Vec<T> = by_both.iter().map(|&v| v / eff).collect();
        check.reports.push(TrendReport::assess(
            "corollary-ratio-vs-both",
            "n_t=n_r",
            grid,
            cor,
            &checks,
        ));
    }
    // Large-array limits: k ~ R/N_t + c erfc^-1(2 eps) with c -> 0.
    let a_s = crate::special_fn::erfc_inv(T::lit(2.0) * eps)?;
    let a_m = crate::special_fn::erfc_inv(T::lit(2.0) * per_hop_failure_short(eps, n))?;
    check.notes.push(format!(
        "n_t -> inf with n_r fixed: ratio -> n^(1-alpha) a_m/a_s = {}",
        g * a_m / a_s
    ));
    check.notes.push(format!(
        "n_r -> inf with n_t fixed: ratio -> n^(1-alpha) = {g}"
    ));
    check.notes.push(format!(
        "upper bound n^(1-alpha) 2^(k_m-k_s+1) -> 2 n^(1-alpha) = {}",
        T::lit(2.0) * g
    ));
    Ok(check)
}

/// Multi-transmit long hops vs. short hops as `eps -> 0`. Reports the exact
/// ratio, `n^alpha 2^{f_4}` with exact and Philip `erfc^-1`, and the first
/// grid point where the exact ratio drops below 1.
pub fn check_theorem4<T: Real>(
    alpha: T,
    n: u32,
    ant: AntennaConfig,
    rate: T,
    eps_grid: &[T],
    opts: &LabOptions<T>,
) -> Result<TheoremCheck<T>> {
    require_alpha(alpha)?;
    require_strict(eps_grid, false, "eps grid", opts.tail)?;
    if let Some(phi) = opts.phi {
        require_phi(alpha, phi)?;
    }
    let tail = opts.tail;
    let threshold = opts.threshold.unwrap_or(T::one());
    let na = T::count(n).powf(alpha);

    let mut ratio = Vec::new();
    let mut exact_f4 = Vec::new();
    let mut philip_f4 = Vec::new();
    let mut corollary = Vec::new();
    for &eps in eps_grid {
        let target = OutageTarget::new(rate, eps)?;
        let r = mult_short_ratio(alpha, n, ant, &target, opts.mode)?;
        ratio.push(r);
        let f4 = |mode| -> Result<T> {
            let k_mult = offset_k(rate, ant, per_slot_failure_multi(eps, n), mode)?;
            let k_m = offset_k(rate, ant, per_hop_failure_short(eps, n), mode)?;
            Ok(na * (k_mult - k_m).exp2())
        };
        exact_f4.push(f4(InverseMode::Exact)?);
        philip_f4.push(f4(InverseMode::Philip)?);
        if let Some(phi) = opts.phi {
            corollary.push(r * path_efficiency(alpha, phi, n));
        }
    }
    let grid = eps_grid.to_vec();
    let crossing = ratio.iter().position(|&v| v < T::one()).map(|i| grid[i]);
    let headline = [
        Check::FirstAbove(T::one()),
        Check::TailDecreasing(tail),
        Check::FinalBelow(threshold),
    ];
    let mut check = TheoremCheck::new(format!("theorem4[{}]", opts.mode));
    check.reports.push(TrendReport::assess(
        "ratio",
        "eps",
        grid.clone(),
        ratio,
        &headline,
    ));
    check.reports.push(TrendReport::assess(
        "n-alpha-2-f4-exact",
        "eps",
        grid.clone(),
        exact_f4,
        &[Check::TailDecreasing(tail), Check::FinalBelow(threshold)],
    ));
    check.reports.push(TrendReport::assess(
        "n-alpha-2-f4-philip",
        "eps",
        grid.clone(),
        philip_f4,
        &[Check::TailDecreasing(tail), Check::FinalBelow(threshold)],
    ));
    if opts.phi.is_some() {
        check.reports.push(TrendReport::assess(
            "corollary-ratio",
            "eps",
            grid,
            corollary,
            &headline,
        ));
    }
    check.crossing = crossing;
    if eps_grid.last().is_some_and(|&e| e < T::lit(1e-16)) {
        check.notes.push(
            "eps below 1e-16: 1 - eps rounds to 1, so only eps-based evaluation is meaningful"
                .into(),
        );
    }
    Ok(check)
}
