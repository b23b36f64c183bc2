use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mimohop_cli::{effective_config, execute, exit, preset_listing, run, CliError, Command, Layer};

#[derive(Parser)]
#[command(
    name = "mimohop",
    version,
    about = "Short-hop vs. long-hop energy experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Deterministic line network: E_s, E_m and their ratio.
    LineCompare(RunArgs),
    /// 2-D random network: E_A, E_B and their ratio.
    RandCompare(RunArgs),
    /// Monte Carlo of the routing strategies on sampled networks.
    PppSim {
        #[command(flatten)]
        args: RunArgs,
        /// Write the first sampled network here.
        #[arg(long)]
        points_out: Option<PathBuf>,
        /// Write that network's Strategy A route here.
        #[arg(long)]
        route_out: Option<PathBuf>,
    },
    /// Empirical vs. Gaussian-model link success probability.
    McValidate(RunArgs),
    /// Numerical trend checks of the limit results (text on stderr).
    Theorem(RunArgs),
    /// Print the available presets.
    ListPresets,
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    #[arg(long)]
    preset: Option<String>,
    /// Flat key=value file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; never changes results.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<String>,
    /// VAR:MIN:MAX:POINTS[:linear|log|geometric]
    #[arg(long)]
    sweep: Option<String>,
    /// VAR:v1,v2,... (one series per value)
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// exact|philip
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    /// Sector angle; accepts pi/2 style values.
    #[arg(long)]
    phi: Option<String>,
    /// Hop count.
    #[arg(long)]
    n: Option<String>,
    /// Relay spacing.
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    n0: Option<String>,
    #[arg(long)]
    nt: Option<String>,
    #[arg(long)]
    nr: Option<String>,
    /// Target rate R in bits/s/Hz.
    #[arg(long)]
    rate: Option<String>,
    /// End-to-end failure probability.
    #[arg(long)]
    eps: Option<String>,
    /// End-to-end success probability (converted to eps).
    #[arg(long = "p-r")]
    p_r: Option<String>,
    #[arg(long)]
    snr: Option<String>,
    #[arg(long)]
    nodes: Option<String>,
    /// uniform|poisson
    #[arg(long)]
    placement: Option<String>,
    #[arg(long)]
    intensity: Option<String>,
    /// reanchored|source
    #[arg(long)]
    anchor: Option<String>,
    /// realized|nominal
    #[arg(long)]
    split: Option<String>,
    /// short-long|mult-short
    #[arg(long)]
    metric: Option<String>,
    /// 1|2|3|4|b|c|all, comma separated
    #[arg(long)]
    check: Option<String>,
    #[arg(long)]
    threshold: Option<String>,
    #[arg(long)]
    tail: Option<String>,
    /// Any other key, as key=value. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl RunArgs {
    fn flag_layer(&self) -> Result<Layer, CliError> {
        let mut layer = Layer::default();
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("--set '{kv}': expected key=value")))?;
            layer.set(k, v)?;
        }
        let named = [
            ("seed", &self.seed),
            ("sweep", &self.sweep),
            ("family", &self.family),
            ("trials", &self.trials),
            ("mode", &self.mode),
            ("alpha", &self.alpha),
            ("phi", &self.phi),
            ("n", &self.n),
            ("d", &self.d),
            ("n0", &self.n0),
            ("nt", &self.nt),
            ("nr", &self.nr),
            ("rate", &self.rate),
            ("eps", &self.eps),
            ("p_r", &self.p_r),
            ("snr", &self.snr),
            ("nodes", &self.nodes),
            ("placement", &self.placement),
            ("intensity", &self.intensity),
            ("anchor", &self.anchor),
            ("split", &self.split),
            ("metric", &self.metric),
            ("check", &self.check),
            ("threshold", &self.threshold),
            ("tail", &self.tail),
        ];
        for (k, v) in named {
            if let Some(v) = v {
                layer.set(k, v)?;
            }
        }
        Ok(layer)
    }
}

fn write_to(path: Option<&PathBuf>, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, body)?,
        None => io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn run_command(
    command: Command,
    args: &RunArgs,
) -> Result<(mimohop_cli::RunOutput, mimohop_cli::ExperimentConfig), CliError> {
    if let Some(t) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::config(format!("threads: {e}")))?;
    }
    let file = match &args.config {
        Some(p) => Some(Layer::parse(&fs::read_to_string(p)?)?),
        None => None,
    };
    let cfg = effective_config(
        command,
        args.preset.as_deref(),
        file.as_ref(),
        &args.flag_layer()?,
    )?;
    let out = execute(command, args.preset.as_deref(), &cfg)?;
    Ok((out, cfg))
}

fn real_main(cli: Cli) -> Result<i32, CliError> {
    let (command, args, dumps) = match cli.command {
        Cmd::ListPresets => {
            write_to(None, &preset_listing())?;
            return Ok(exit::OK);
        }
        Cmd::LineCompare(a) => (Command::LineCompare, a, None),
        Cmd::RandCompare(a) => (Command::RandCompare, a, None),
        Cmd::PppSim {
            args,
            points_out,
            route_out,
        } => (Command::PppSim, args, Some((points_out, route_out))),
        Cmd::McValidate(a) => (Command::McValidate, a, None),
        Cmd::Theorem(a) => (Command::Theorem, a, None),
    };
    let (out, cfg) = run_command(command, &args)?;
    if let Some((points_out, route_out)) = dumps {
        if points_out.is_some() || route_out.is_some() {
            let (pts, route) = run::ppp_dump(&cfg)?;
            if let Some(p) = points_out {
                fs::write(p, pts)?;
            }
            if let Some(p) = route_out {
                fs::write(p, route)?;
            }
        }
    }
    eprint!("{}", out.text);
    write_to(args.out.as_ref(), &out.csv)?;
    if out.infeasible {
        eprintln!("some points meet the target at non-positive SNR; rows marked infeasible");
        return Ok(exit::INFEASIBLE);
    }
    Ok(exit::OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("mimohop: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
