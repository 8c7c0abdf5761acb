//! Where a model sits in the strong / logical / weak hierarchy.

mod assignments;
mod classify;
mod dicke;
mod lp;
pub mod simplex;

pub use assignments::{
    consistent_assignments, count_consistent, describe_sections, non_extendable_sections, GlobalAssignment,
    MAX_ENUM_PARTIES,
};
pub use classify::{check_hierarchy, classify, classify_full, possibilistic_label, ContextualityClass, Label};
pub use dicke::{dicke_certificate, DickeCertificate, Implication, MAX_CERTIFICATE_PARTIES};
pub use lp::{
    cg_terms, check_certificate, lp_all_vertices, lp_noncontextual, BellInequality, CgTerm, LpOutcome,
    CERTIFICATE_TOL, FEASIBILITY_TOL, MAX_LP_PARTIES,
};
