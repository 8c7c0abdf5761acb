use std::f64::consts::PI;

use super::grid::{grid_search, GridMode, Objective};
use crate::contextuality::{classify, ContextualityClass, Label};
use crate::empirical::{build_model, EmpiricalModel, Scenario};
use crate::error::{Error, Result};
use crate::qcore::{Observable, Sign, StateVector};
use crate::states::{bell, StateSpec};

/// `A = U(π/2, π/8)`.
pub fn obs_a() -> Observable {
    Observable::bloch(PI / 2.0, PI / 8.0)
}

/// `B = U(π/2, 5π/8)`.
pub fn obs_b() -> Observable {
    Observable::bloch(PI / 2.0, 5.0 * PI / 8.0)
}

/// `C = U(π/8, π/2)`.
pub fn obs_c() -> Observable {
    Observable::bloch(PI / 8.0, PI / 2.0)
}

/// `D = U(5π/8, π/2)`.
pub fn obs_d() -> Observable {
    Observable::bloch(5.0 * PI / 8.0, PI / 2.0)
}

/// The second way of writing `C`/`D`: the arguments of `A`/`B` swapped,
/// `U(φ, θ)`.
pub fn swapped_argument_pair(a: (f64, f64), b: (f64, f64)) -> [Observable; 2] {
    [Observable::bloch(a.1, a.0), Observable::bloch(b.1, b.0)]
}

/// A named choice of two settings used by every party.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    XZ,
    YZ,
    XY,
    AB,
    CD,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::XZ, Preset::YZ, Preset::XY, Preset::AB, Preset::CD];

    pub fn name(self) -> &'static str {
        match self {
            Preset::XZ => "X/Z",
            Preset::YZ => "Y/Z",
            Preset::XY => "X/Y",
            Preset::AB => "A/B",
            Preset::CD => "C/D",
        }
    }

    pub fn scenario(self, n: usize) -> Result<Scenario> {
        match self {
            Preset::XZ => Scenario::uniform(n, Observable::x(), Observable::z()),
            Preset::YZ => Scenario::uniform(n, Observable::y(), Observable::z()),
            Preset::XY => Scenario::uniform(n, Observable::x(), Observable::y()),
            Preset::AB => Scenario::uniform_labelled(n, obs_a(), obs_b(), ["A", "B"]),
            Preset::CD => Scenario::uniform_labelled(n, obs_c(), obs_d(), ["C", "D"]),
        }
    }

    /// The preset the family's analysis uses.
    pub fn for_spec(spec: &StateSpec) -> Result<Preset> {
        Ok(match spec {
            StateSpec::Dicke { .. } | StateSpec::ProductZero { .. } => Preset::XZ,
            StateSpec::FuncDep { .. } => Preset::YZ,
            StateSpec::Ghz { .. } => Preset::XY,
            StateSpec::Dictatorship { sign: Sign::Plus, .. } | StateSpec::Bell { .. } => Preset::AB,
            StateSpec::Dictatorship { sign: Sign::Minus, .. } => Preset::CD,
            StateSpec::Explicit { .. } => return Err(Error::UnknownFamily("explicit amplitude list".into())),
        })
    }
}

/// Observables found to witness some class of a state.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    /// Canonical state spec, or `custom`.
    pub state: String,
    pub scenario: Scenario,
    pub class: ContextualityClass,
    /// `preset X/Z`, `grid r=8 symmetric`, …
    pub method: String,
    /// State-level classes are maxima over observables; a search only
    /// establishes a lower bound.
    pub lower_bound: bool,
    pub notes: Vec<String>,
}

impl WitnessReport {
    pub fn label(&self) -> Label {
        self.class.label
    }

    /// Re-runs the classifier on the recorded observables.
    pub fn verify(&self, state: &StateVector) -> Result<bool> {
        let model = build_model(state, &self.scenario)?;
        Ok(classify(&model)?.label == self.class.label)
    }

    pub fn observables(&self) -> Vec<String> {
        self.scenario
            .parties()
            .iter()
            .map(|p| match &p.observables {
                Some([a, b]) if p.labels[0] == a.to_string() && p.labels[1] == b.to_string() => format!("{a}/{b}"),
                Some([a, b]) => format!("{}={a}/{}={b}", p.labels[0], p.labels[1]),
                None => format!("{}/{}", p.labels[0], p.labels[1]),
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "state: {}\nmethod: {}\nobservables: {}\nclass: {}{}\n",
            self.state,
            self.method,
            self.observables().join(", "),
            self.class.label,
            if self.lower_bound { " (lower bound on the state's class)" } else { "" }
        );
        out.push_str(&format!("consistent global assignments: {}\n", self.class.consistent));
        out.push_str(&format!("non-extendable sections: {}\n", self.class.n_non_extendable()));
        if let Some(lp) = &self.class.lp {
            out.push_str(&format!("lp: {lp}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }

    pub fn to_json(&self, model: &EmpiricalModel) -> serde_json::Value {
        serde_json::json!({
            "state": self.state,
            "method": self.method,
            "observables": self.observables(),
            "lower_bound": self.lower_bound,
            "result": self.class.to_json(model),
            "notes": self.notes,
        })
    }
}

fn cd_note() -> String {
    let [c, d] = swapped_argument_pair((PI / 2.0, PI / 8.0), (PI / 2.0, 5.0 * PI / 8.0));
    let same = c.kind() == obs_c().kind() && d.kind() == obs_d().kind();
    format!(
        "C/D given two ways: U(pi/8,pi/2), U(5pi/8,pi/2) and U(phi,theta) of A/B = {c}, {d}; {}",
        if same { "identical at these angles" } else { "they differ" }
    )
}

fn bell_minus_note() -> String {
    "Phi- built as (|00>-|11>)/sqrt2; C/D show no violation on it, A/B do".into()
}

/// Classifies the family's preset scenario.
pub fn preset_witness(spec: &StateSpec) -> Result<WitnessReport> {
    let preset = Preset::for_spec(spec)?;
    let state = spec.build()?;
    let mut report = run_preset(&state, preset, spec.to_string())?;
    match (spec, preset) {
        (_, Preset::CD) => report.notes.push(cd_note()),
        (StateSpec::Bell { sign: Sign::Minus }, _) => report.notes.push(bell_minus_note()),
        _ => {}
    }
    Ok(report)
}

fn run_preset(state: &StateVector, preset: Preset, name: String) -> Result<WitnessReport> {
    let scenario = preset.scenario(state.n_qubits())?;
    let model = build_model(state, &scenario)?;
    let class = classify(&model)?;
    Ok(WitnessReport {
        state: name,
        scenario,
        class,
        method: format!("preset {}", preset.name()),
        lower_bound: false,
        notes: Vec::new(),
    })
}

/// Best class over every preset and, if `grid` is given, a symmetric grid
/// search for a stronger witness. Always a lower bound on the state's class.
pub fn lift_state_class(state: &StateVector, name: &str, grid: Option<usize>) -> Result<WitnessReport> {
    let mut best: Option<WitnessReport> = None;
    for preset in Preset::ALL {
        let r = match run_preset(state, preset, name.to_string()) {
            Ok(r) => r,
            Err(Error::LpIndeterminate { .. }) => continue,
            Err(e) => return Err(e),
        };
        if best.as_ref().is_none_or(|b| r.label() > b.label()) {
            best = Some(r);
        }
    }
    let mut best = best.ok_or_else(|| Error::invalid("no preset could be classified"))?;
    if let Some(res) = grid {
        if best.label() < Label::Strong {
            let target = if best.label() < Label::Logical { Objective::Logical } else { Objective::Strong };
            if let Some(found) = grid_search(state, res, target, GridMode::Symmetric)? {
                if found.label() > best.label() {
                    best = WitnessReport { state: name.to_string(), ..found };
                }
            }
        }
    }
    best.lower_bound = true;
    Ok(best)
}

/// The two-party state on the dictator pair: `Φ+` for `+`, `(|01⟩+|10⟩)/√2` for `-`.
pub fn dictatorship_pair(sign: Sign) -> StateVector {
    match sign {
        Sign::Plus => bell(Sign::Plus),
        Sign::Minus => crate::states::dicke(2, 1).expect("EPR pair"),
    }
}

/// Checks that each dictatorship row, with the outcomes of the product parties
/// fixed, is a multiple of the pair's row. Returns the largest deviation.
pub fn dictatorship_factorization(n_parties: usize, dictator: usize, sign: Sign, pair: [Observable; 2]) -> Result<f64> {
    let state = crate::states::dictatorship(n_parties, dictator, sign)?;
    let [a, b] = pair;
    let scenario = Scenario::uniform(n_parties, a.clone(), b.clone())?;
    let model = build_model(&state, &scenario)?;
    let pair_model = build_model(&dictatorship_pair(sign), &Scenario::uniform(2, a, b)?)?;
    let n = n_parties;
    let (i, j) = (dictator - 1, n - 1);
    let bit = |p: usize| 1usize << (n - 1 - p);
    let mut worst = 0.0f64;
    for c in 0..scenario.n_contexts() {
        let pc = (usize::from(c & bit(i) != 0) << 1) | usize::from(c & bit(j) != 0);
        let pair_row: Vec<f64> = pair_model.rows()[pc].iter().map(|p| p.to_f64()).collect();
        for rest in (0..1usize << n).filter(|o| o & (bit(i) | bit(j)) == 0) {
            let sub: Vec<f64> = (0..4)
                .map(|po| {
                    let o = rest | if po & 2 != 0 { bit(i) } else { 0 } | if po & 1 != 0 { bit(j) } else { 0 };
                    model.rows()[c][o].to_f64()
                })
                .collect();
            let lambda: f64 = sub.iter().sum();
            for (x, y) in sub.iter().zip(&pair_row) {
                worst = worst.max((x - lambda * y).abs());
            }
        }
    }
    Ok(worst)
}
