//! Lifting model-level classes to states: preset observables, grid search,
//! the Bell-basis condition check and sweeps over Boolean-function families.

mod bellcheck;
mod grid;
mod presets;
mod sweep;

pub use bellcheck::{
    bell_basis_logical_search, phi_minus_table, phi_plus_table, BellCheckReport, Condition, ConditionSet, Params,
};
pub use grid::{grid_points, grid_search, GridMode, Objective, MAX_GRID_PARTIES, MAX_PER_PARTY_TUPLES};
pub use presets::{
    dictatorship_factorization, dictatorship_pair, lift_state_class, obs_a, obs_b, obs_c, obs_d, preset_witness,
    swapped_argument_pair, Preset, WitnessReport,
};
pub use sweep::{family_sweep, sweep_csv, sweep_one, SweepRow, MAX_SWEEP_VARS, SWEEP_SAMPLE, SWEEP_SEED};
