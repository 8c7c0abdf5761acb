use num::rational::BigRational;
use num::{One, Zero};
use rayon::prelude::*;

use super::scenario::Scenario;
use super::support::{Relabeling, SupportTable};
use crate::error::{Error, Result};
use crate::qcore::{Probability, StateVector};

/// Tolerance for float row sums and no-signalling.
pub const FLOAT_TOL: f64 = 1e-9;

/// Probability of every joint outcome in every context.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalModel {
    scenario: Scenario,
    /// `rows[context][outcome]`
    rows: Vec<Vec<Probability>>,
    exact: bool,
}

impl EmpiricalModel {
    /// Wraps a table after checking shape, non-negativity, row sums and
    /// no-signalling. Mixed exact/float input is converted to float.
    pub fn new(scenario: Scenario, rows: Vec<Vec<Probability>>) -> Result<Self> {
        let model = Self::from_rows_unchecked(scenario, rows);
        model.validate()?;
        Ok(model)
    }

    pub(crate) fn from_rows_unchecked(scenario: Scenario, mut rows: Vec<Vec<Probability>>) -> Self {
        let exact = rows.iter().flatten().all(Probability::is_exact);
        if !exact {
            for p in rows.iter_mut().flatten() {
                *p = Probability::Float(p.to_f64());
            }
        }
        Self { scenario, rows, exact }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.scenario.n_parties();
        if self.rows.len() != self.scenario.n_contexts() {
            return Err(Error::validation("rows", format!("expected {} contexts, found {}", self.scenario.n_contexts(), self.rows.len())));
        }
        for (c, row) in self.rows.iter().enumerate() {
            let loc = || format!("rows[{}] ({})", c, self.scenario.context_label(c));
            if row.len() != 1 << n {
                return Err(Error::validation(loc(), format!("expected {} outcomes, found {}", 1 << n, row.len())));
            }
            if let Some(o) = row.iter().position(|p| p.to_f64() < 0.0 && !p.is_zero()) {
                return Err(Error::validation(loc(), format!("negative probability at outcome {o}")));
            }
            let total = row.iter().fold(Probability::zero(), |a, p| a.add(p));
            let ok = match &total {
                Probability::Exact(r) => r.is_one(),
                Probability::Float(f) => (f - 1.0).abs() <= FLOAT_TOL,
            };
            if !ok {
                return Err(Error::validation(loc(), format!("row sums to {total}, not 1")));
            }
        }
        if let Some((p, c, dev)) = self.signalling_violation() {
            return Err(Error::validation(
                format!("rows[{}] ({})", c, self.scenario.context_label(c)),
                format!("signalling: marginal without party {} changes with its setting (deviation {dev:e})", p + 1),
            ));
        }
        Ok(())
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn n_parties(&self) -> usize {
        self.scenario.n_parties()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn rows(&self) -> &[Vec<Probability>] {
        &self.rows
    }

    pub fn prob(&self, context: usize, outcome: usize) -> &Probability {
        &self.rows[context][outcome]
    }

    pub fn to_float(&self) -> Self {
        let rows = self.rows.iter().map(|r| r.iter().map(|p| Probability::Float(p.to_f64())).collect()).collect();
        Self { scenario: self.scenario.clone(), rows, exact: false }
    }

    /// Marginal of `context` on all parties except `p` (0-based), indexed by
    /// the remaining outcome bits in order.
    fn marginal_without(&self, context: usize, p: usize) -> Vec<Probability> {
        let n = self.n_parties();
        let bit = n - 1 - p;
        let mut out = vec![Probability::zero(); 1 << (n - 1)];
        for (o, prob) in self.rows[context].iter().enumerate() {
            let high = o >> (bit + 1);
            let low = o & ((1 << bit) - 1);
            let idx = (high << bit) | low;
            out[idx] = out[idx].add(prob);
        }
        out
    }

    /// First party/context whose marginal depends on that party's setting,
    /// with the largest deviation found there.
    pub fn signalling_violation(&self) -> Option<(usize, usize, f64)> {
        let n = self.n_parties();
        for p in 0..n {
            let flip = 1 << (n - 1 - p);
            for c in 0..self.scenario.n_contexts() {
                if c & flip != 0 {
                    continue;
                }
                let (a, b) = (self.marginal_without(c, p), self.marginal_without(c | flip, p));
                let mut worst = 0.0f64;
                let mut exact_diff = false;
                for (x, y) in a.iter().zip(&b) {
                    match (x, y) {
                        (Probability::Exact(x), Probability::Exact(y)) => {
                            if x != y {
                                exact_diff = true;
                                worst = worst.max((crate::qcore::rational_to_f64(&(x - y))).abs());
                            }
                        }
                        _ => worst = worst.max((x.to_f64() - y.to_f64()).abs()),
                    }
                }
                if exact_diff || worst > FLOAT_TOL {
                    return Some((p, c, worst));
                }
            }
        }
        None
    }

    /// Largest no-signalling deviation over all parties and contexts.
    pub fn max_signalling_deviation(&self) -> f64 {
        let n = self.n_parties();
        let mut worst = 0.0f64;
        for p in 0..n {
            let flip = 1 << (n - 1 - p);
            for c in (0..self.scenario.n_contexts()).filter(|c| c & flip == 0) {
                let (a, b) = (self.marginal_without(c, p), self.marginal_without(c | flip, p));
                for (x, y) in a.iter().zip(&b) {
                    worst = worst.max((x.to_f64() - y.to_f64()).abs());
                }
            }
        }
        worst
    }

    pub fn support(&self) -> SupportTable {
        SupportTable::from_model(self)
    }

    pub fn relabel(&self, r: &Relabeling) -> Result<Self> {
        let n = self.n_parties();
        if r.n_parties() != n {
            return Err(Error::DimensionMismatch { expected: n, got: r.n_parties() });
        }
        let mask = r.mask();
        let rows = self
            .rows
            .iter()
            .map(|row| (0..row.len()).map(|o| row[o ^ mask].clone()).collect())
            .collect();
        Ok(Self { scenario: self.scenario.clone(), rows, exact: self.exact })
    }

    /// Largest entrywise difference between two models on the same scenario shape.
    pub fn max_difference(&self, other: &EmpiricalModel) -> f64 {
        self.rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
            .fold(0.0, f64::max)
    }
}

/// Born-rule table of `state` under `scenario`; exact when every amplitude and
/// eigenvector is exact.
pub fn build_model(state: &StateVector, scenario: &Scenario) -> Result<EmpiricalModel> {
    check_dims(state, scenario)?;
    let rows: Vec<Vec<Probability>> =
        (0..scenario.n_contexts()).into_par_iter().map(|c| row_unchecked(state, scenario, c)).collect();
    Ok(EmpiricalModel::from_rows_unchecked(scenario.clone(), rows))
}

/// One context's outcome distribution without building the whole table.
pub fn model_row(state: &StateVector, scenario: &Scenario, context: usize) -> Result<Vec<Probability>> {
    check_dims(state, scenario)?;
    if context >= scenario.n_contexts() {
        return Err(Error::invalid(format!("context {context} out of range")));
    }
    Ok(row_unchecked(state, scenario, context))
}

fn check_dims(state: &StateVector, scenario: &Scenario) -> Result<()> {
    let n = state.n_qubits();
    if scenario.n_parties() != n {
        return Err(Error::DimensionMismatch { expected: n, got: scenario.n_parties() });
    }
    if !scenario.has_observables() {
        return Err(Error::invalid("scenario has labels but no observables"));
    }
    Ok(())
}

fn row_unchecked(state: &StateVector, scenario: &Scenario, c: usize) -> Vec<Probability> {
    let maps: Vec<_> = (0..state.n_qubits()).map(|p| scenario.observable(c, p).expect("observables present").outcome_map()).collect();
    state.contract_local(&maps).iter().map(|a| a.norm_sqr().scaled(state.scale())).collect()
}

/// The Popescu–Rohrlich box: `a ⊕ b = s·t` with probability 1, uniform otherwise.
pub fn pr_box() -> EmpiricalModel {
    let scenario = Scenario::labels_only(vec![["0".into(), "1".into()], ["0".into(), "1".into()]]).expect("valid");
    let half = BigRational::new(1.into(), 2.into());
    let rows = (0..4usize)
        .map(|c| {
            let (s, t) = (c >> 1, c & 1);
            (0..4usize)
                .map(|o| {
                    let (a, b) = (o >> 1, o & 1);
                    if a ^ b == s & t {
                        Probability::Exact(half.clone())
                    } else {
                        Probability::Exact(BigRational::zero())
                    }
                })
                .collect()
        })
        .collect();
    EmpiricalModel::new(scenario, rows).expect("PR box is a valid no-signalling model")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::empirical::scenario::parse_outcome_label;
    use crate::qcore::Observable;
    use crate::states::bell;
    use std::f64::consts::PI;

    #[test]
    fn product_state_all_z_is_deterministic() {
        let s = StateVector::basis(3, 0);
        let sc = Scenario::uniform(3, Observable::z(), Observable::x()).unwrap();
        let m = build_model(&s, &sc).unwrap();
        assert!(m.is_exact());
        assert_eq!(m.prob(0, 0), &Probability::Exact(BigRational::one()));
        assert!(m.rows()[0][1..].iter().all(Probability::is_zero));
        m.validate().unwrap();
    }

    #[test]
    fn phi_plus_bloch_values() {
        let sc = Scenario::uniform_labelled(2, Observable::bloch(PI / 2.0, PI / 8.0), Observable::bloch(PI / 2.0, 5.0 * PI / 8.0), ["A", "B"]).unwrap();
        let m = build_model(&bell(crate::qcore::Sign::Plus), &sc).unwrap();
        assert!(!m.is_exact());
        let hi = (2.0 + 2f64.sqrt()) / 8.0;
        let lo = (2.0 - 2f64.sqrt()) / 8.0;
        let aa = m.rows()[0].iter().map(Probability::to_f64).collect::<Vec<_>>();
        for (x, y) in aa.iter().zip([hi, lo, lo, hi]) {
            assert!((x - y).abs() < 1e-12);
        }
        let bb = m.rows()[3].iter().map(Probability::to_f64).collect::<Vec<_>>();
        for (x, y) in bb.iter().zip([lo, hi, hi, lo]) {
            assert!((x - y).abs() < 1e-12);
        }
        m.validate().unwrap();
    }

    #[test]
    fn pr_box_supports() {
        let pr = pr_box();
        let sup = pr.support();
        let row = |c: usize| sup.outcomes(c).collect::<Vec<_>>();
        assert_eq!(row(0), vec![parse_outcome_label("++").unwrap(), parse_outcome_label("--").unwrap()]);
        assert_eq!(row(3), vec![parse_outcome_label("+-").unwrap(), parse_outcome_label("-+").unwrap()]);
    }

    #[test]
    fn validation_rejects_bad_rows() {
        let pr = pr_box();
        let mut rows = pr.rows().to_vec();
        rows[2][0] = Probability::Exact(BigRational::zero());
        let err = EmpiricalModel::new(pr.scenario().clone(), rows).unwrap_err();
        assert!(matches!(err, Error::Validation { ref location, .. } if location.starts_with("rows[2]")));
        // local marginal of party 2 depends on party 1's setting
        let sc = pr.scenario().clone();
        let one = Probability::Exact(BigRational::one());
        let z = Probability::zero();
        let rows = vec![
            vec![one.clone(), z.clone(), z.clone(), z.clone()],
            vec![one.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), one.clone(), z.clone(), z.clone()],
            vec![z.clone(), one.clone(), z.clone(), z.clone()],
        ];
        assert!(matches!(EmpiricalModel::new(sc, rows), Err(Error::Validation { .. })));
    }
}
