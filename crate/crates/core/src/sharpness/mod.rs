//! Numerical probes of the upper and lower bounds: the `W` and `Z` ratios,
//! the witness pair, `λ` sweeps and their reports.

pub mod functional;
pub mod report;
pub mod scans;
pub mod witness;

pub use functional::{f_bgls_norm, f_lp_norm, w_functional, z_functional, SweepConfig, ZValue};
pub use report::{sweep_csv, to_json, write_file, CSV_HEADER};
pub use scans::{
    lower_bound_profile, sweep, tail_lower_bound, theorem1_scan, theorem2_check, theorem3_scan, theorem4_scan,
    FloorReport, LowerBoundRow, SweepCell, SweepReport, TailBoundCheck, Theorem1Report, Theorem2Result,
    DEFAULT_LAMBDA_GRID, DEFAULT_P_GRID,
};
pub use witness::{
    exponent_floor, proof_ratio_lhs, proof_ratio_rhs, proof_ratio_simplified, Witness, WitnessCheck, WitnessRow,
    WITNESS_P_GRID,
};
