//! Exact solution toolkit for the two-walk directed vesicle model.
//!
//! A pair of non-crossing NE lattice paths with common endpoints, weighted
//! per contact (c), per unit of endpoint displacement (s), and per enclosed
//! plaquette (q). The crate provides:
//!
//! * [`enumerate`]: brute-force configuration enumeration and a transfer
//!   recursion for exact partition functions and mean observables;
//! * [`qseries`]: the generating functions H, S, F, G numerically and as an
//!   exact series in the length fugacity;
//! * [`phase`]: dominant-singularity location, phase classification,
//!   densities, Airy asymptotics, and the critical scaling laws;
//! * [`sweep`]: deterministic (optionally rayon-parallel) parameter sweeps.

pub mod airy;
mod dd;
pub mod enumerate;
pub mod error;
pub mod phase;
pub mod poly;
pub mod qseries;
pub mod scaling;
pub mod sweep;

pub use error::{Error, Result};

pub use airy::{airy, find_ai_prime_first_zero, AiryValue, AIRY_AI_PRIME_FIRST_ZERO};
pub use enumerate::{
    brute_force_zn, config_stats, enumerate_pairs, finite_size_exponent, mean_observables,
    mean_observables_profile, transfer_ln_zn, transfer_zn, ConfigStats, MeanObservables,
    Observable, Step, WalkPairConfig,
};
pub use phase::{
    c_of_tp, c_of_tp_auto, c_s, classify, densities_fd, densities_general, density_area_q1_s1,
    density_contacts_q1, s_airy_asymptotic, scaling_crossover, scaling_tp_at_cs, scaling_tp_cusp,
    t_c_q1, t_p_general, t_p_q1, t_r, CrossoverSide, Densities, Phase, SingularityKind,
    SingularityResult,
};
pub use poly::{LaurentPoly3, PolyTerm};
pub use qseries::{
    f_cfrac, f_cfrac_auto, f_closed_q1, f_necklace, functional_equation_residual, g_eval,
    h_series, q_pochhammer, s_eval, s_explicit, s_q1, series_in_t, ModelPoint, SeriesInT,
    TruncationPolicy, XYPoint, MAX_SERIES_ORDER,
};
pub use scaling::{linear_fit, loglog_fit, ScalingFit};
pub use sweep::{
    rows_to_csv, rows_to_json, run_sweep, run_sweep_sequential, AxisParam, AxisSpec, Spacing,
    SweepRow, SweepSpec,
};
