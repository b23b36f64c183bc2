//! Transmit-energy models for comparing short-hop and long-hop routing in
//! multihop networks whose links are MIMO spatial-multiplexing channels.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*F64`
//! and `*F32` aliases below fix the scalar type.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod line_network;
pub mod outage;
pub mod ppp_sim;
pub mod random_network;
pub mod rng;
pub mod scalar;
pub mod special_fn;
pub mod theorem_lab;

pub use error::{Error, Result};
pub use grid::{grid, integer_grid, Scale};
pub use line_network::{
    energy_long_hop, energy_multi_transmit_long, energy_short_hop, per_hop_failure_short,
    per_slot_failure_multi, ratio_mult_to_short, ratio_mult_to_short_with, ratio_short_to_long,
    ratio_short_to_long_with, HopExponents, LineNetworkParams, ShortLongRatio,
};
pub use outage::{
    empirical_success_prob, gaussian_failure_prob, gaussian_success_prob, rate_offset_k,
    rate_offset_k_with, required_snr, required_snr_with, sample_mutual_information,
    sample_mutual_information_batch, success_fraction, AntennaConfig, OutageTarget, Snr,
};
pub use random_network::{
    energy_multi_transmit_b, energy_strategy_a, energy_strategy_b, ratio_a_to_b, ratio_a_to_b_with,
    ratio_mult_b_to_a, ratio_mult_b_to_a_with, RandomNetworkParams,
};
pub use rng::StreamId;
pub use scalar::Real;
pub use special_fn::{
    erfc, erfc_inv, erfc_inv_philip, erfc_inv_with, gamma, ErfcArgument, InverseMode, Probability,
};

pub type OutageTargetF64 = OutageTarget<f64>;
pub type OutageTargetF32 = OutageTarget<f32>;
pub type SnrF64 = Snr<f64>;
pub type SnrF32 = Snr<f32>;
pub type ProbabilityF64 = Probability<f64>;
pub type ProbabilityF32 = Probability<f32>;
pub type LineNetworkParamsF64 = LineNetworkParams<f64>;
pub type LineNetworkParamsF32 = LineNetworkParams<f32>;
pub type RandomNetworkParamsF64 = RandomNetworkParams<f64>;
pub type RandomNetworkParamsF32 = RandomNetworkParams<f32>;
pub type SimConfigF64 = ppp_sim::SimConfig<f64>;
pub type PointSetF64 = ppp_sim::PointSet<f64>;
pub type RouteF64 = ppp_sim::Route<f64>;
pub type TrendReportF64 = theorem_lab::TrendReport<f64>;
