//! Measurement scenarios, empirical models built from states, supports and
//! outcome relabelings.

pub mod io;
mod model;
mod scenario;
mod support;

pub use model::{build_model, model_row, pr_box, EmpiricalModel, FLOAT_TOL};
pub use scenario::{
    outcome_label, parse_angle, parse_observable, parse_outcome_label, parse_scenario, PartySettings, Scenario,
    MAX_PARTIES,
};
pub use support::{Relabeling, SupportTable};
