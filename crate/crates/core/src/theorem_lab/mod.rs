//! Numerical trend scans for the limit results and the worked examples:
//! finite grids, explicit thresholds, one [`TrendReport`] per curve.

mod appendix;
mod report;
mod theorems;

pub use appendix::{
    appendix_a_decomposition, appendix_b_check, appendix_b_f, appendix_b_f_with, appendix_b_g,
    appendix_b_g_with, appendix_b_gprime, appendix_b_gprime_with, appendix_c_check,
    neg_log1m_series, random_prefactor, EXAMPLE_HOPS, SERIES_TERMS,
};
pub use report::{Check, TheoremCheck, TrendReport, Verdict};
pub use theorems::{
    check_theorem1, check_theorem2, check_theorem3, check_theorem4, default_antenna_grid,
    default_n_grid, default_theorem2_eps_grid, default_theorem4_eps_grid, LabOptions,
};
