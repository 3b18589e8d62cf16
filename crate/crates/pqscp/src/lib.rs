//! Exact arithmetic for strictly chained (p,q)-ary partitions.
//!
//! A strictly chained partition has distinct parts of the form `p^a q^b`,
//! each part divisible by the next. This crate computes the maximal weight
//! `G(m)` over all such partitions with parts at most `m`, the frontier sets
//! `Z_m` / `Y_m` that witness the maximum, the boundary sequence `l_b`
//! separating single-witness from double-witness prefixes, and a fast
//! evaluation of the witness exponents that runs in `O(log log m)` steps by
//! walking the continued-fraction convergents of `rho = log_p q`.
//!
//! Everything is exact: part values and weights are arbitrary-precision
//! integers, and every branch taken by the fast path is certified either by
//! interval arithmetic with a proven error bound or by an exact big-integer
//! power comparison.

pub mod certified;
pub mod chain;
pub mod contfrac;
pub mod ell;
pub mod error;
pub mod fastalg;
pub mod frontier;
pub mod oracle;
pub mod params;

pub use certified::{CertifiedSign, FixInterval};
pub use chain::{
    count_max_chains, enumerate_max_chains, h, h_alt, h_compare, heaviest_chain, is_scp,
    weight_of_values, ChainPartition, LatticePoint, DEFAULT_ENUM_CAP,
};
pub use contfrac::{BelowTerm, ConvergentTable};
pub use ell::{
    alpha, alpha_plus, alpha_plus_error_bound, beta, ell_value, jump_indices, m_ell, phi, Alpha,
    EllTable, Jump,
};
pub use error::{Error, Result};
pub use fastalg::{
    g_fast, kn_representation, run_fast, y_fast, z_fast, BranchKind, BranchRecord, EvalMode,
    FastRun, StepKind, StepRecord,
};
pub use frontier::{
    check_z_recurrences, y_min, y_set, z_max, z_set, zeta, FrontierSet, RecurrenceReport,
};
pub use oracle::{
    g_exhaustive, g_exhaustive_with_cap, g_frontier_scan, g_recursive, g_recursive_with_cache,
    GCache, DEFAULT_EXHAUSTIVE_CAP,
};
pub use params::Params;
