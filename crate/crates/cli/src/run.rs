//! One function per subcommand. Each returns the CSV body (header first) and
//! a flag saying whether any row was infeasible.

use std::fmt::Write as _;

use mimohop::ppp_sim::{
    monte_carlo_sweep, write_points_csv, write_route_csv, Placement, SimConfig,
};
use mimohop::theorem_lab::{
    appendix_b_check, appendix_c_check, check_theorem1, check_theorem2, check_theorem3,
    check_theorem4, default_antenna_grid, default_n_grid, default_theorem2_eps_grid,
    default_theorem4_eps_grid, LabOptions, TheoremCheck,
};
use mimohop::{
    empirical_success_prob, energy_long_hop, energy_multi_transmit_b, energy_multi_transmit_long,
    energy_short_hop, energy_strategy_a, energy_strategy_b, gaussian_success_prob, grid,
    ratio_a_to_b_with, ratio_mult_b_to_a_with, ratio_mult_to_short_with, ratio_short_to_long_with,
    required_snr, Error, InverseMode, LineNetworkParams, RandomNetworkParams, Scale, Snr, StreamId,
};
use rayon::prelude::*;

use crate::config::{CheckId, ExperimentConfig, Metric, PlacementKind};
use crate::CliError;

/// CSV body plus side outputs.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub csv: String,
    /// Human-readable summary (theorem checks).
    pub text: String,
    pub infeasible: bool,
}

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One evaluation point: series label plus the sweep value.
struct Point {
    series: String,
    x: f64,
    cfg: ExperimentConfig,
}

fn points(cfg: &ExperimentConfig, default_var: &str) -> Result<(String, Vec<Point>), CliError> {
    let (var, xs) = match &cfg.sweep {
        Some(s) => (s.var.clone(), s.values()?),
        None => {
            let x = match default_var {
                "n" => cfg.n as f64,
                _ => cfg.eps,
            };
            (default_var.to_string(), vec![x])
        }
    };
    let series: Vec<(String, ExperimentConfig)> = match &cfg.family {
        Some(f) => f
            .values
            .iter()
            .map(|&v| Ok((format!("{}={v}", f.var), cfg.with(&f.var, v)?)))
            .collect::<Result<_, CliError>>()?,
        None => vec![("base".to_string(), cfg.clone())],
    };
    let mut out = Vec::new();
    for (label, base) in series {
        for &x in &xs {
            let c = base.with(&var, x)?;
            c.validate()?;
            out.push(Point {
                series: label.clone(),
                x,
                cfg: c,
            });
        }
    }
    Ok((var, out))
}

/// Evaluates `f` on every point in parallel, keeping sweep order. Rows whose
/// Gaussian target is met at zero power are marked and the run continues.
fn rows<F>(pts: &[Point], width: usize, f: F) -> Result<(Vec<String>, bool), CliError>
where
    F: Fn(&ExperimentConfig) -> Result<Vec<f64>, Error> + Sync,
{
    let cells: Vec<Result<Vec<f64>, Error>> = pts.par_iter().map(|p| f(&p.cfg)).collect();
    let mut lines = Vec::with_capacity(pts.len());
    let mut infeasible = false;
    for (p, r) in pts.iter().zip(cells) {
        let head = format!("{},{}", p.series, num(p.x));
        match r {
            Ok(v) => {
                let body: Vec<String> = v.into_iter().map(num).collect();
                lines.push(format!("{head},{},ok", body.join(",")));
            }
            Err(Error::InfeasibleAtZeroPower { .. }) => {
                infeasible = true;
                lines.push(format!("{head},{}infeasible", ",".repeat(width)));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((lines, infeasible))
}

fn assemble(var: &str, columns: &[&str], rows: Vec<String>, infeasible: bool) -> RunOutput {
    let mut csv = format!("series,{var},{},status\n", columns.join(","));
    for r in rows {
        csv.push_str(&r);
        csv.push('\n');
    }
    RunOutput {
        csv,
        text: String::new(),
        infeasible,
    }
}

/// Line network: `E_s, E_m, E_m/E_s`, the `n^(1-alpha) 2^(k_m-k_s+1)` bound
/// and the Philip-mode ratio; or the multi-transmit variant.
pub fn line_compare(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let (var, pts) = points(cfg, "eps")?;
    let out = match cfg.metric {
        Metric::ShortLong => {
            let cols = ["e_s", "e_m", "ratio", "upper_bound", "ratio_philip"];
            let (r, inf) = rows(&pts, cols.len(), |c| {
                let (params, ant, target) = (line_params(c)?, c.ant_core()?, c.target_core()?);
                let exact = ratio_short_to_long_with(&params, ant, &target, c.mode)?;
                let philip = ratio_short_to_long_with(&params, ant, &target, InverseMode::Philip)?;
                Ok(vec![
                    energy_long_hop(&params, ant, &target)?,
                    energy_short_hop(&params, ant, &target)?,
                    exact.ratio,
                    exact.upper_bound,
                    philip.ratio,
                ])
            })?;
            assemble(&var, &cols, r, inf)
        }
        Metric::MultShort => {
            let cols = ["e_s_mult", "e_m", "ratio", "ratio_philip"];
            let (r, inf) = rows(&pts, cols.len(), |c| {
                let (params, ant, target) = (line_params(c)?, c.ant_core()?, c.target_core()?);
                Ok(vec![
                    energy_multi_transmit_long(&params, ant, &target)?,
                    energy_short_hop(&params, ant, &target)?,
                    ratio_mult_to_short_with(&params, ant, &target, c.mode)?,
                    ratio_mult_to_short_with(&params, ant, &target, InverseMode::Philip)?,
                ])
            })?;
            assemble(&var, &cols, r, inf)
        }
    };
    Ok(out)
}

/// Random network: `E_B, E_A, E_A/E_B`, the line bound over the efficiency
/// factor and the Philip-mode ratio; or the multi-transmit variant.
pub fn rand_compare(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let (var, pts) = points(cfg, "eps")?;
    let out = match cfg.metric {
        Metric::ShortLong => {
            let cols = ["e_b", "e_a", "ratio", "upper_bound", "ratio_philip"];
            let (r, inf) = rows(&pts, cols.len(), |c| {
                let (params, ant, target) = (rand_params(c)?, c.ant_core()?, c.target_core()?);
                let eff = params.checked_path_efficiency()?;
                let line = ratio_short_to_long_with(&line_params(c)?, ant, &target, c.mode)?;
                Ok(vec![
                    energy_strategy_b(&params, ant, &target)?,
                    energy_strategy_a(&params, ant, &target)?,
                    ratio_a_to_b_with(&params, ant, &target, c.mode)?,
                    line.upper_bound / eff,
                    ratio_a_to_b_with(&params, ant, &target, InverseMode::Philip)?,
                ])
            })?;
            assemble(&var, &cols, r, inf)
        }
        Metric::MultShort => {
            let cols = ["e_b_mult", "e_a", "ratio", "ratio_philip"];
            let (r, inf) = rows(&pts, cols.len(), |c| {
                let (params, ant, target) = (rand_params(c)?, c.ant_core()?, c.target_core()?);
                Ok(vec![
                    energy_multi_transmit_b(&params, ant, &target)?,
                    energy_strategy_a(&params, ant, &target)?,
                    ratio_mult_b_to_a_with(&params, ant, &target, c.mode)?,
                    ratio_mult_b_to_a_with(&params, ant, &target, InverseMode::Philip)?,
                ])
            })?;
            assemble(&var, &cols, r, inf)
        }
    };
    Ok(out)
}

fn line_params(c: &ExperimentConfig) -> Result<LineNetworkParams<f64>, Error> {
    LineNetworkParams::new(c.d, c.alpha, c.n0, c.n)
}

fn rand_params(c: &ExperimentConfig) -> Result<RandomNetworkParams<f64>, Error> {
    RandomNetworkParams::new(c.alpha, c.phi, c.n)
}

impl ExperimentConfig {
    fn ant_core(&self) -> Result<mimohop::AntennaConfig, Error> {
        mimohop::AntennaConfig::new(self.nt, self.nr)
    }

    fn target_core(&self) -> Result<mimohop::OutageTarget<f64>, Error> {
        mimohop::OutageTarget::new(self.rate, self.eps)
    }

    pub fn sim_config(&self) -> Result<SimConfig<f64>, CliError> {
        let mut s = SimConfig::uniform(
            self.nodes as usize,
            self.phi,
            self.alpha,
            self.ant()?,
            self.target()?,
        )?;
        if self.placement == PlacementKind::Poisson {
            s.placement = Placement::Poisson {
                intensity: self.intensity,
            };
        }
        s.anchor = self.anchor;
        s.split = self.split;
        Ok(s)
    }
}

const PPP_COLUMNS: [&str; 13] = [
    "n_hops",
    "e_a",
    "se_e_a",
    "e_b",
    "se_e_b",
    "ratio",
    "se_ratio",
    "gap",
    "se_gap",
    "gap_increment",
    "se_gap_increment",
    "hops_a",
    "hops_b",
];

/// Monte Carlo comparison of Strategy A and Strategy B on sampled networks.
/// A hop-count sweep shares samples across `n` and reports the paired gap
/// increment `gap(n_i) - gap(n_{i-1})`; other sweeps rerun per point.
pub fn ppp_sim(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let (var, pts) = points(cfg, "n")?;
    let mut csv = format!("series,{var},{},status\n", PPP_COLUMNS.join(","));
    let mut emit = |series: &str, x: f64, cells: Vec<String>| {
        let _ = writeln!(csv, "{series},{},{},ok", num(x), cells.join(","));
    };
    if var == "n" {
        // group by series, one shared-sample sweep each
        let mut i = 0;
        while i < pts.len() {
            let series = pts[i].series.clone();
            let group: Vec<&Point> = pts[i..].iter().take_while(|p| p.series == series).collect();
            i += group.len();
            let ns: Vec<u32> = group.iter().map(|p| p.cfg.n).collect();
            let sweep = monte_carlo_sweep(&group[0].cfg.sim_config()?, &ns, cfg.trials, cfg.seed)?;
            for (j, (p, s)) in group.iter().zip(&sweep.stats).enumerate() {
                let inc = j.checked_sub(1).map(|k| sweep.gap_increments[k]);
                emit(&series, p.x, ppp_cells(s, inc));
            }
        }
    } else {
        for p in &pts {
            let sweep = monte_carlo_sweep(&p.cfg.sim_config()?, &[p.cfg.n], cfg.trials, cfg.seed)?;
            emit(&p.series, p.x, ppp_cells(&sweep.stats[0], None));
        }
    }
    Ok(RunOutput {
        csv,
        ..Default::default()
    })
}

fn ppp_cells(
    s: &mimohop::ppp_sim::CompareStats<f64>,
    inc: Option<mimohop::ppp_sim::EnergyStats<f64>>,
) -> Vec<String> {
    let (gi, gse) = match inc {
        Some(g) => (num(g.mean), num(g.stderr)),
        None => (String::new(), String::new()),
    };
    vec![
        s.n.to_string(),
        num(s.a.mean),
        num(s.a.stderr),
        num(s.b.mean),
        num(s.b.stderr),
        num(s.ratio.mean),
        num(s.ratio.stderr),
        num(s.gap.mean),
        num(s.gap.stderr),
        gi,
        gse,
        num(s.mean_hops_a),
        num(s.mean_hops_b),
    ]
}

/// Writes the first sampled network (stream `(seed, 0)`) and its Strategy A
/// route.
pub fn ppp_dump(cfg: &ExperimentConfig) -> Result<(String, String), CliError> {
    let sim = cfg.sim_config()?;
    let set = sim.generate(StreamId::new(cfg.seed, 0))?;
    let route = sim.route_a(&set);
    let mut pts = Vec::new();
    let mut rte = Vec::new();
    write_points_csv(&mut pts, &set)?;
    write_route_csv(&mut rte, &route)?;
    Ok((
        String::from_utf8_lossy(&pts).into(),
        String::from_utf8_lossy(&rte).into(),
    ))
}

/// Empirical success probability of the Rayleigh MIMO link against the
/// Gaussian model. Without `snr` the SNR is the one the model says meets the
/// target; with `snr` (or an `snr` sweep) it is fixed.
pub fn mc_validate(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let (var, pts) = points(cfg, "eps")?;
    let cols = [
        "n_t",
        "n_r",
        "rate",
        "snr",
        "gaussian",
        "empirical",
        "stderr",
        "deviation",
    ];
    let mut lines = Vec::new();
    let mut infeasible = false;
    for p in &pts {
        let c = &p.cfg;
        let ant = c.ant()?;
        let snr = match c.snr {
            Some(v) => Ok(Snr::new(v)?),
            None => required_snr(ant, &c.target()?),
        };
        let head = format!("{},{}", p.series, num(p.x));
        let snr = match snr {
            Ok(s) => s,
            Err(Error::InfeasibleAtZeroPower { .. }) => {
                infeasible = true;
                lines.push(format!("{head},{}infeasible", ",".repeat(cols.len())));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let gauss = gaussian_success_prob(snr, c.rate, ant).value();
        let (emp, se) = empirical_success_prob(snr, c.rate, ant, c.trials, c.seed)?;
        let emp = emp.value();
        lines.push(format!(
            "{head},{},{},{},{},{},{},{},{},ok",
            c.nt,
            c.nr,
            num(c.rate),
            num(snr.value()),
            num(gauss),
            num(emp),
            num(se),
            num(emp - gauss)
        ));
    }
    Ok(assemble(&var, &cols, lines, infeasible))
}

/// Runs the selected theorem-lab checks. A sweep overrides the grid of a
/// single selected check and must range over that check's variable.
pub fn theorem(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    if cfg.family.is_some() {
        return Err(CliError::config("theorem runs take no family"));
    }
    if let Some(s) = &cfg.sweep {
        let [only] = cfg.checks.as_slice() else {
            return Err(CliError::config("a sweep needs exactly one check"));
        };
        let want = only.grid_var();
        let ok =
            s.var == want || (want == "eps" && s.var == "p_r") || (want == "p_r" && s.var == "eps");
        if !ok {
            return Err(CliError::config(format!(
                "this check sweeps '{want}', not '{}'",
                s.var
            )));
        }
    }
    let opts = LabOptions {
        mode: cfg.mode,
        phi: Some(cfg.phi),
        threshold: cfg.threshold,
        tail: cfg.tail,
    };
    let ant = cfg.ant()?;
    let mut out = RunOutput::default();
    for (i, &id) in cfg.checks.iter().enumerate() {
        let check = run_check(cfg, id, ant, &opts)?;
        let mut csv = Vec::new();
        check.write_csv(&mut csv, i == 0)?;
        out.csv.push_str(&String::from_utf8_lossy(&csv));
        let mut text = Vec::new();
        check.write_text(&mut text)?;
        out.text.push_str(&String::from_utf8_lossy(&text));
    }
    Ok(out)
}

/// The sweep's values as `eps`, converting from `p_r` if needed.
fn eps_values(cfg: &ExperimentConfig) -> Result<Option<Vec<f64>>, CliError> {
    let Some(s) = &cfg.sweep else { return Ok(None) };
    let v = s.values()?;
    Ok(Some(if s.var == "p_r" {
        v.iter().map(|p| 1.0 - p).collect()
    } else {
        v
    }))
}

fn p_values(cfg: &ExperimentConfig) -> Result<Option<Vec<f64>>, CliError> {
    let Some(s) = &cfg.sweep else { return Ok(None) };
    let v = s.values()?;
    Ok(Some(if s.var == "eps" {
        v.iter().map(|e| 1.0 - e).collect()
    } else {
        v
    }))
}

fn run_check(
    cfg: &ExperimentConfig,
    id: CheckId,
    ant: mimohop::AntennaConfig,
    opts: &LabOptions<f64>,
) -> Result<TheoremCheck<f64>, CliError> {
    let n = if cfg.n_explicit {
        cfg.n
    } else {
        id.default_hops()
    };
    let ints = |v: Vec<f64>| v.into_iter().map(|x| x as u32).collect::<Vec<u32>>();
    let check = match id {
        CheckId::T1 => {
            let grid = match &cfg.sweep {
                Some(s) => ints(s.values()?),
                None => default_n_grid(),
            };
            check_theorem1(cfg.alpha, cfg.eps, ant, cfg.rate, &grid, opts)?
        }
        CheckId::T2 => {
            let grid = eps_values(cfg)?.unwrap_or_else(default_theorem2_eps_grid);
            check_theorem2(cfg.alpha, n, ant, cfg.rate, &grid, opts)?
        }
        CheckId::T3 => {
            let grid = match &cfg.sweep {
                Some(s) => ints(s.values()?),
                None => default_antenna_grid(),
            };
            check_theorem3(cfg.alpha, n, cfg.rate, cfg.eps, ant, &grid, opts)?
        }
        CheckId::T4 => {
            let grid = eps_values(cfg)?.unwrap_or_else(default_theorem4_eps_grid);
            check_theorem4(cfg.alpha, n, ant, cfg.rate, &grid, opts)?
        }
        CheckId::B => {
            let grid = match p_values(cfg)? {
                Some(g) => g,
                None => grid(0.9, 0.999, 100, Scale::Linear)?,
            };
            appendix_b_check(&grid, opts.tail)?
        }
        CheckId::C => {
            let grid = eps_values(cfg)?.unwrap_or_else(default_theorem2_eps_grid);
            appendix_c_check(cfg.rate, ant, &grid, opts.tail)?
        }
    };
    Ok(check)
}
