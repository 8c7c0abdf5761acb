use std::fmt;

use serde::Serialize;

use super::assignments::{coverage, describe_sections, missing_sections};
use super::lp::{lp_noncontextual, LpOutcome};
use crate::empirical::{EmpiricalModel, SupportTable};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Label {
    NonContextual,
    Weak,
    Logical,
    Strong,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::NonContextual => "noncontextual",
            Label::Weak => "weak",
            Label::Logical => "logical",
            Label::Strong => "strong",
        })
    }
}

/// Why a model sits where it does in the hierarchy.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextualityClass {
    pub label: Label,
    /// Global assignments consistent with the support.
    pub consistent: u64,
    /// Possible sections extending to no consistent assignment, per context index.
    pub non_extendable: Vec<Vec<usize>>,
    /// Present when the LP was needed (or requested).
    pub lp: Option<LpOutcome>,
}

impl ContextualityClass {
    pub fn n_non_extendable(&self) -> usize {
        self.non_extendable.iter().map(Vec::len).sum()
    }

    pub fn to_json(&self, model: &EmpiricalModel) -> serde_json::Value {
        let lp = self.lp.as_ref().map(|lp| match lp {
            LpOutcome::Feasible(w) => serde_json::json!({
                "status": "feasible",
                "weights": w.iter().map(|(g, p)| serde_json::json!([g.to_string(), p.to_string()])).collect::<Vec<_>>(),
            }),
            LpOutcome::Infeasible(ineq) => serde_json::json!({
                "status": "infeasible",
                "inequality": ineq.describe(model.scenario()),
                "model_value": ineq.model_value.to_string(),
                "bound": ineq.bound.to_string(),
                "violation": ineq.violation.to_string(),
            }),
            LpOutcome::Indeterminate { residual, violation } => serde_json::json!({
                "status": "indeterminate", "residual": residual, "violation": violation,
            }),
        });
        serde_json::json!({
            "class": self.label,
            "consistent_assignments": self.consistent,
            "non_extendable_sections": describe_sections(model.scenario(), &self.non_extendable),
            "lp": lp,
        })
    }

    /// Multi-line report for the CLI.
    pub fn report(&self, model: &EmpiricalModel) -> String {
        let mut out = format!("class: {}\nconsistent global assignments: {}\n", self.label, self.consistent);
        let sections = describe_sections(model.scenario(), &self.non_extendable);
        out.push_str(&format!("non-extendable sections: {}\n", self.n_non_extendable()));
        if self.label == Label::Logical {
            for s in sections {
                out.push_str(&format!("  {s}\n"));
            }
        }
        if let Some(lp) = &self.lp {
            out.push_str(&format!("lp: {lp}\n"));
            if let LpOutcome::Infeasible(ineq) = lp {
                out.push_str(&format!("  inequality: {}\n", ineq.describe(model.scenario())));
            }
        }
        out
    }
}

/// Strong if no global assignment fits the support, logical if some possible
/// section fails to extend, weak if the LP is infeasible, else noncontextual.
/// A float LP too close to call is reported as [`Error::LpIndeterminate`].
pub fn classify(model: &EmpiricalModel) -> Result<ContextualityClass> {
    classify_with(model, false)
}

/// Like [`classify`] but always runs the LP, so the evidence includes the LP
/// verdict at every level. Checks the hierarchy's implications on the way.
pub fn classify_full(model: &EmpiricalModel) -> Result<ContextualityClass> {
    let class = classify_with(model, true)?;
    check_hierarchy(&class, model).map_err(|m| Error::invalid(format!("hierarchy violated: {m}")))?;
    Ok(class)
}

fn classify_with(model: &EmpiricalModel, always_lp: bool) -> Result<ContextualityClass> {
    let support = model.support();
    let (consistent, cov) = coverage(&support)?;
    let non_extendable = missing_sections(&support, &cov);
    let any_missing = non_extendable.iter().any(|s| !s.is_empty());
    let label = if consistent == 0 {
        Label::Strong
    } else if any_missing {
        Label::Logical
    } else {
        Label::Weak
    };
    let lp = if label == Label::Weak || always_lp {
        match lp_noncontextual(model) {
            Ok(lp) => Some(lp),
            Err(Error::SizeBound { .. }) if label != Label::Weak => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let label = match (&lp, label) {
        (Some(LpOutcome::Feasible(_)), Label::Weak) => Label::NonContextual,
        (Some(LpOutcome::Indeterminate { violation, .. }), Label::Weak) => {
            return Err(Error::LpIndeterminate { violation: *violation });
        }
        (_, l) => l,
    };
    let class = ContextualityClass { label, consistent, non_extendable, lp };
    debug_assert_eq!(check_hierarchy(&class, model), Ok(()));
    Ok(class)
}

/// Possibilistic part of the classification: `Strong`, `Logical`, or `None`
/// when every possible section extends to a consistent assignment.
pub fn possibilistic_label(support: &SupportTable) -> Result<Option<Label>> {
    let (consistent, cov) = coverage(support)?;
    if consistent == 0 {
        return Ok(Some(Label::Strong));
    }
    let any_missing = missing_sections(support, &cov).iter().any(|s| !s.is_empty());
    Ok(any_missing.then_some(Label::Logical))
}

/// The implications Strong ⇒ every possible section non-extendable ⇒ LP
/// infeasible, and the evidence each label requires.
pub fn check_hierarchy(class: &ContextualityClass, model: &EmpiricalModel) -> std::result::Result<(), String> {
    let support = model.support();
    let possible = support.n_sections();
    let missing = class.n_non_extendable();
    match class.label {
        Label::Strong if class.consistent != 0 => return Err("strong with consistent assignments".into()),
        Label::Strong if missing != possible => return Err("strong but some section extends".into()),
        Label::Logical if class.consistent == 0 => return Err("logical without a consistent assignment".into()),
        Label::Logical if missing == 0 => return Err("logical without a non-extendable section".into()),
        Label::Weak | Label::NonContextual if class.consistent == 0 || missing != 0 => {
            return Err(format!("{} but the support is not extendable", class.label));
        }
        _ => {}
    }
    match (&class.lp, class.label) {
        (Some(LpOutcome::Feasible(_)), l) if l != Label::NonContextual => Err(format!("{l} but the LP is feasible")),
        (Some(LpOutcome::Infeasible(_)), Label::NonContextual) => Err("noncontextual but the LP is infeasible".into()),
        (None, Label::Weak | Label::NonContextual) => Err("weak/noncontextual without an LP verdict".into()),
        _ => Ok(()),
    }
}
