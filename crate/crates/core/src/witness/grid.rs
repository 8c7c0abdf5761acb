use std::f64::consts::PI;

use rayon::prelude::*;

use super::presets::WitnessReport;
use crate::contextuality::{classify, possibilistic_label, Label};
use crate::empirical::{build_model, Scenario};
use crate::error::{Error, Result};
use crate::qcore::{Observable, StateVector};

pub const MAX_GRID_PARTIES: usize = 6;
/// Cap on observable tuples tried by a per-party sweep.
pub const MAX_PER_PARTY_TUPLES: usize = 1_000_000;

const SPECIAL_ANGLES: [f64; 6] = [0.0, PI / 8.0, PI / 4.0, PI / 2.0, 5.0 * PI / 8.0, PI];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Strong,
    /// Logical or stronger.
    Logical,
    /// Any contextual class.
    AnyContextual,
}

impl Objective {
    fn threshold(self) -> Label {
        match self {
            Objective::Strong => Label::Strong,
            Objective::Logical => Label::Logical,
            Objective::AnyContextual => Label::Weak,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridMode {
    /// Every party uses the same pair of grid observables.
    Symmetric,
    /// Each party picks its own pair; parties vary lexicographically, party 1 slowest.
    PerParty,
}

/// Grid points `(θ, φ)` sorted by θ then φ, one per Bloch vector.
pub fn grid_points(resolution: usize) -> Vec<(f64, f64)> {
    let r = resolution as f64;
    let mut thetas: Vec<f64> = (0..=resolution).map(|j| j as f64 * PI / r).chain(SPECIAL_ANGLES).collect();
    let mut phis: Vec<f64> = (0..2 * resolution).map(|j| j as f64 * PI / r).chain(SPECIAL_ANGLES[..5].iter().copied()).collect();
    for v in [&mut thetas, &mut phis] {
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    }
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut seen: Vec<[f64; 3]> = Vec::new();
    for &t in &thetas {
        for &p in &phis {
            let v = [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
            if seen.iter().any(|s| s.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-9)) {
                continue;
            }
            seen.push(v);
            points.push((t, p));
        }
    }
    points
}

fn pairs(points: &[(f64, f64)]) -> Vec<(usize, usize)> {
    (0..points.len()).flat_map(|a| (a + 1..points.len()).map(move |b| (a, b))).collect()
}

fn achieves(state: &StateVector, scenario: &Scenario, objective: Objective) -> bool {
    let Ok(model) = build_model(state, scenario) else { return false };
    match objective {
        Objective::Strong | Objective::Logical => possibilistic_label(&model.support())
            .ok()
            .flatten()
            .is_some_and(|l| l >= objective.threshold()),
        Objective::AnyContextual => classify(&model).is_ok_and(|c| c.label >= Label::Weak),
    }
}

/// First observable choice on the grid meeting `objective`, in a fixed sweep
/// order. Finding nothing says nothing beyond this grid.
pub fn grid_search(state: &StateVector, resolution: usize, objective: Objective, mode: GridMode) -> Result<Option<WitnessReport>> {
    let n = state.n_qubits();
    if n > MAX_GRID_PARTIES {
        return Err(Error::SizeBound { what: "parties for grid search", value: n, limit: MAX_GRID_PARTIES });
    }
    if resolution < 4 {
        return Err(Error::invalid(format!("grid resolution must be at least 4, got {resolution}")));
    }
    let points = grid_points(resolution);
    let pairs = pairs(&points);
    let obs = |i: usize| Observable::bloch(points[i].0, points[i].1);
    let scenario_for = |choice: &[usize]| {
        Scenario::from_observables(choice.iter().map(|&k| [obs(pairs[k].0), obs(pairs[k].1)]).collect()).expect("valid scenario")
    };
    let tuples: usize = match mode {
        GridMode::Symmetric => pairs.len(),
        GridMode::PerParty => pairs.len().checked_pow(n as u32).filter(|&t| t <= MAX_PER_PARTY_TUPLES).ok_or(
            Error::SizeBound { what: "per-party grid tuples", value: pairs.len().saturating_pow(n as u32), limit: MAX_PER_PARTY_TUPLES },
        )?,
    };
    let choice_of = |t: usize| -> Vec<usize> {
        match mode {
            GridMode::Symmetric => vec![t; n],
            GridMode::PerParty => {
                let mut digits = vec![0; n];
                let mut rest = t;
                for d in digits.iter_mut().rev() {
                    *d = rest % pairs.len();
                    rest /= pairs.len();
                }
                digits
            }
        }
    };
    let hit = (0..tuples).into_par_iter().find_first(|&t| achieves(state, &scenario_for(&choice_of(t)), objective));
    let Some(t) = hit else { return Ok(None) };
    let scenario = scenario_for(&choice_of(t));
    let model = build_model(state, &scenario)?;
    let class = classify(&model)?;
    let mode_name = match mode {
        GridMode::Symmetric => "symmetric",
        GridMode::PerParty => "per-party",
    };
    Ok(Some(WitnessReport {
        state: "custom".into(),
        scenario,
        class,
        method: format!("grid r={resolution} {mode_name}, tuple {} of {tuples}", t + 1),
        lower_bound: true,
        notes: Vec::new(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::dicke;

    #[test]
    fn grid_has_specials_and_no_duplicate_poles() {
        let pts = grid_points(4);
        assert_eq!(pts.iter().filter(|p| p.0 == 0.0).count(), 1);
        assert!(pts.iter().any(|p| (p.0 - PI / 2.0).abs() < 1e-12 && (p.1 - PI / 8.0).abs() < 1e-12));
        assert!(pts.iter().any(|p| (p.0 - 5.0 * PI / 8.0).abs() < 1e-12));
    }

    #[test]
    fn w_state_logical_and_product_nothing() {
        let w = dicke(3, 2).unwrap();
        let r = grid_search(&w, 4, Objective::Logical, GridMode::Symmetric).unwrap().unwrap();
        assert!(r.label() >= Label::Logical);
        assert!(r.verify(&w).unwrap());
        let zero = StateVector::basis(3, 0);
        assert!(grid_search(&zero, 4, Objective::AnyContextual, GridMode::Symmetric).unwrap().is_none());
    }

    #[test]
    fn epr_never_strong() {
        let epr = dicke(2, 1).unwrap();
        assert!(grid_search(&epr, 4, Objective::Strong, GridMode::Symmetric).unwrap().is_none());
    }
}
