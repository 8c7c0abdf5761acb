use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::presets::Preset;
use crate::boolfn::{BooleanPolynomial, PredictedClass};
use crate::contextuality::{classify, Label};
use crate::empirical::build_model;
use crate::error::{Error, Result};
use crate::states::func_dep_state;

pub const MAX_SWEEP_VARS: usize = 4;
/// Polynomials classified when the family is too large to enumerate.
pub const SWEEP_SAMPLE: usize = 256;
pub const SWEEP_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub poly: BooleanPolynomial,
    pub predicted: PredictedClass,
    /// Class under `Y/Z` on every party.
    pub yz: Label,
    /// For the dictatorship family: the `A/B` (or `C/D` when negated) preset and its class.
    pub witness: Option<(&'static str, Label)>,
    pub agrees: bool,
}

impl SweepRow {
    /// The best class seen for this polynomial.
    pub fn empirical(&self) -> Label {
        self.witness.map_or(self.yz, |(_, l)| l.max(self.yz))
    }
}

fn agrees(predicted: PredictedClass, yz: Label, witness: Option<Label>) -> bool {
    match predicted {
        PredictedClass::NonContextual => yz == Label::NonContextual,
        PredictedClass::Strong => yz == Label::Strong,
        PredictedClass::AtLeastLogical => yz >= Label::Logical,
        PredictedClass::Weak => yz == Label::NonContextual && witness == Some(Label::Weak),
    }
}

/// Classifies the functionally dependent states of `n_vars` variables. Up to
/// three variables every polynomial is tried; for four, a seeded sample of
/// [`SWEEP_SAMPLE`]. Rows are in polynomial-code order.
pub fn family_sweep(n_vars: usize) -> Result<Vec<SweepRow>> {
    if n_vars == 0 || n_vars > MAX_SWEEP_VARS {
        return Err(Error::SizeBound { what: "variables for the family sweep", value: n_vars, limit: MAX_SWEEP_VARS });
    }
    let total = 1u64 << (1u64 << n_vars);
    let codes: Vec<u64> = if total <= SWEEP_SAMPLE as u64 {
        (0..total).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
        let mut v: Vec<u64> = sample(&mut rng, total as usize, SWEEP_SAMPLE).into_iter().map(|c| c as u64).collect();
        v.sort_unstable();
        v
    };
    codes.into_par_iter().map(|code| sweep_one(BooleanPolynomial::from_code(n_vars, code))).collect()
}

pub fn sweep_one(poly: BooleanPolynomial) -> Result<SweepRow> {
    let predicted = poly.predicted_class();
    let state = func_dep_state(&poly)?;
    let n = state.n_qubits();
    let yz = classify(&build_model(&state, &Preset::YZ.scenario(n)?)?)?.label;
    let witness = if predicted == PredictedClass::Weak {
        let preset = if poly.constant_term() { Preset::CD } else { Preset::AB };
        let label = classify(&build_model(&state, &preset.scenario(n)?)?)?.label;
        Some((preset.name(), label))
    } else {
        None
    };
    let agrees = agrees(predicted, yz, witness.map(|w| w.1));
    Ok(SweepRow { poly, predicted, yz, witness, agrees })
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["polynomial", "name", "predicted", "empirical_yz", "witness", "agrees"]).expect("in-memory csv");
    for r in rows {
        let witness = r.witness.map(|(p, l)| format!("{p}:{l}")).unwrap_or_default();
        w.write_record([
            r.poly.to_string(),
            r.poly.formula_name().unwrap_or("").to_string(),
            r.predicted.to_string(),
            r.yz.to_string(),
            witness,
            r.agrees.to_string(),
        ])
        .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}
