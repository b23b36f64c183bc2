//! Named parameter blocks for the figure reproductions.
//!
//! Grids the figures do not state are artifact choices: `eps` sweeps use 50
//! log-spaced points per decade and antenna sweeps cover 1..=32.

use crate::config::Layer;
use crate::CliError;

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub command: &'static str,
    pub description: &'static str,
    pub pairs: &'static [(&'static str, &'static str)],
}

impl Preset {
    pub fn layer(&self) -> Layer {
        Layer::pairs(self.pairs.iter().copied()).expect("preset keys are valid")
    }
}

/// p_r from 0.9 to 0.9999 (eps 1e-1 to 1e-4), 50 points per decade.
const EPS_SWEEP: &str = "eps:1e-1:1e-4:151:log";
const NT_SWEEP: &str = "nt:1:32:32:linear";

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig-sublinear-n4",
        command: "line-compare",
        description: "line network, n=4, 2x2, alpha=2, R=4, p_r sweep",
        pairs: &[
            ("n", "4"),
            ("nt", "2"),
            ("nr", "2"),
            ("alpha", "2"),
            ("rate", "4"),
            ("sweep", EPS_SWEEP),
        ],
    },
    Preset {
        name: "fig-sublinear-n3",
        command: "line-compare",
        description: "line network, n=3, 2x2, alpha=2, R=4, p_r sweep",
        pairs: &[
            ("n", "3"),
            ("nt", "2"),
            ("nr", "2"),
            ("alpha", "2"),
            ("rate", "4"),
            ("sweep", EPS_SWEEP),
        ],
    },
    Preset {
        name: "fig-rate-effect",
        command: "line-compare",
        description: "line network, n=4, 2x2, alpha=2, p_r sweep, one series per rate",
        pairs: &[
            ("n", "4"),
            ("nt", "2"),
            ("nr", "2"),
            ("alpha", "2"),
            ("sweep", EPS_SWEEP),
            ("family", "rate:2,4,8,16"),
        ],
    },
    Preset {
        name: "fig-loose-qos",
        command: "line-compare",
        description: "line network, n=5, N_r=2, alpha=2, R=4, N_t sweep, p_r <= 0.93",
        pairs: &[
            ("n", "5"),
            ("nr", "2"),
            ("alpha", "2"),
            ("rate", "4"),
            ("sweep", NT_SWEEP),
            ("family", "p_r:0.91,0.92,0.93"),
        ],
    },
    Preset {
        name: "fig-strict-qos",
        command: "line-compare",
        description: "line network, n=5, N_r=2, alpha=2, R=4, N_t sweep, p_r >= 0.98",
        pairs: &[
            ("n", "5"),
            ("nr", "2"),
            ("alpha", "2"),
            ("rate", "4"),
            ("sweep", NT_SWEEP),
            ("family", "p_r:0.98,0.99,0.995"),
        ],
    },
    Preset {
        name: "fig-rx-antennas",
        command: "line-compare",
        description: "line network, n=5, N_t=2, alpha=2, R=4, N_r sweep",
        pairs: &[
            ("n", "5"),
            ("nt", "2"),
            ("alpha", "2"),
            ("rate", "4"),
            ("sweep", "nr:1:32:32:linear"),
            ("family", "p_r:0.91,0.93,0.95,0.98,0.99"),
        ],
    },
    Preset {
        name: "fig-mult-short-line",
        command: "line-compare",
        description: "multi-transmit long hop vs short hops, line, n=2, N_r=2, N_t sweep",
        pairs: &[
            ("metric", "mult-short"),
            ("n", "2"),
            ("nr", "2"),
            ("alpha", "2"),
            ("rate", "4"),
            ("sweep", NT_SWEEP),
            ("family", "p_r:0.96,0.98,0.99"),
        ],
    },
    Preset {
        name: "fig-mult-short-line2",
        command: "line-compare",
        description: "multi-transmit long hop vs short hops, line, n=2, N_r=4, N_t sweep",
        pairs: &[
            ("metric", "mult-short"),
            ("n", "2"),
            ("nr", "4"),
            ("alpha", "2"),
            ("rate", "4"),
            ("sweep", NT_SWEEP),
            ("family", "p_r:0.96,0.98,0.99"),
        ],
    },
    Preset {
        name: "fig-mult-short-rand",
        command: "rand-compare",
        description: "multi-transmit strategy B vs strategy A, phi=pi/2, n=5, N_r=2, N_t sweep",
        pairs: &[
            ("metric", "mult-short"),
            ("phi", "pi/2"),
            ("n", "5"),
            ("nr", "2"),
            ("alpha", "2"),
            ("rate", "4"),
            ("sweep", NT_SWEEP),
            ("family", "p_r:0.96,0.98,0.99"),
        ],
    },
    Preset {
        name: "fig-energy-ppp",
        command: "ppp-sim",
        description: "30 uniform nodes, phi=pi/2, alpha=2, p_r=0.92, 2x2, R=2, n sweep",
        pairs: &[
            ("nodes", "30"),
            ("placement", "uniform"),
            ("phi", "pi/2"),
            ("alpha", "2"),
            ("p_r", "0.92"),
            ("nt", "2"),
            ("nr", "2"),
            ("rate", "2"),
            ("sweep", "n:2:5:4:linear"),
            ("trials", "10000"),
        ],
    },
    Preset {
        name: "mc-gaussian-2x2",
        command: "mc-validate",
        description: "empirical vs Gaussian success at the model's SNR, 2x2, p_r=0.9, R in 2..16",
        pairs: &[
            ("nt", "2"),
            ("nr", "2"),
            ("p_r", "0.9"),
            ("sweep", "rate:2:16:4:geometric"),
            ("trials", "1000000"),
        ],
    },
];

pub fn find(name: &str) -> Result<&'static Preset, CliError> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| CliError::config(format!("unknown preset '{name}' (see list-presets)")))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::config::{ExperimentConfig, Metric, PlacementKind};

    fn cfg(name: &str) -> ExperimentConfig {
        ExperimentConfig::resolve(&find(name).unwrap().layer()).unwrap()
    }

    fn family_p_r(c: &ExperimentConfig) -> Vec<f64> {
        let f = c.family.as_ref().unwrap();
        assert_eq!(f.var, "p_r");
        f.values.clone()
    }

    #[test]
    fn every_preset_resolves_and_names_are_unique() {
        for (i, p) in PRESETS.iter().enumerate() {
            ExperimentConfig::resolve(&p.layer()).unwrap();
            assert!(PRESETS[i + 1..].iter().all(|q| q.name != p.name));
        }
    }

    #[test]
    fn line_presets_match_figure_parameters() {
        for (name, n) in [("fig-sublinear-n4", 4), ("fig-sublinear-n3", 3)] {
            let c = cfg(name);
            assert_eq!((c.n, c.nt, c.nr, c.alpha, c.rate), (n, 2, 2, 2.0, 4.0));
            let s = c.sweep.unwrap();
            let v = s.values().unwrap();
            assert_eq!(s.var, "eps");
            assert!(v.iter().all(|&e| e > 0.0 && e <= 0.1));
        }
        let c = cfg("fig-rate-effect");
        assert_eq!((c.n, c.nt, c.nr, c.alpha), (4, 2, 2, 2.0));
        assert_eq!(c.family.unwrap().var, "rate");

        let loose = cfg("fig-loose-qos");
        let strict = cfg("fig-strict-qos");
        for c in [&loose, &strict] {
            assert_eq!((c.n, c.nr, c.alpha, c.rate), (5, 2, 2.0, 4.0));
            assert_eq!(c.sweep.as_ref().unwrap().var, "nt");
            assert_eq!(c.metric, Metric::ShortLong);
        }
        assert!(family_p_r(&loose).iter().all(|&p| p > 0.9 && p <= 0.93));
        assert!(family_p_r(&strict)
            .iter()
            .all(|&p| (0.98..1.0).contains(&p)));

        let rx = cfg("fig-rx-antennas");
        assert_eq!((rx.n, rx.nt, rx.alpha, rx.rate), (5, 2, 2.0, 4.0));
        assert_eq!(rx.sweep.as_ref().unwrap().var, "nr");
    }

    #[test]
    fn multi_transmit_presets_match_figure_parameters() {
        for (name, nr) in [("fig-mult-short-line", 2), ("fig-mult-short-line2", 4)] {
            let c = cfg(name);
            assert_eq!(
                (c.n, c.nr, c.alpha, c.rate, c.metric),
                (2, nr, 2.0, 4.0, Metric::MultShort)
            );
            assert!(family_p_r(&c).iter().all(|&p| p > 0.95 && p < 1.0));
        }
        let c = cfg("fig-mult-short-rand");
        assert_eq!(find("fig-mult-short-rand").unwrap().command, "rand-compare");
        assert_eq!(
            (c.n, c.nr, c.phi, c.metric),
            (5, 2, PI / 2.0, Metric::MultShort)
        );
        assert!(family_p_r(&c).iter().all(|&p| p > 0.95 && p < 1.0));
    }

    #[test]
    fn simulation_presets_match_setup() {
        let c = cfg("fig-energy-ppp");
        assert_eq!(
            (c.nodes, c.placement, c.phi, c.alpha),
            (30, PlacementKind::Uniform, PI / 2.0, 2.0)
        );
        assert_eq!((c.nt, c.nr, c.rate), (2, 2, 2.0));
        assert!((1.0 - c.eps - 0.92).abs() < 1e-15);
        assert_eq!(c.sweep.unwrap().values().unwrap(), vec![2.0, 3.0, 4.0, 5.0]);

        let c = cfg("mc-gaussian-2x2");
        assert_eq!((c.nt, c.nr, c.trials), (2, 2, 1_000_000));
        assert_eq!(c.sweep.unwrap().values().unwrap().len(), 4);
    }
}
