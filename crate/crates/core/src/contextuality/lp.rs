//! Membership of a model in the noncontextual polytope.
//!
//! The constraints are the Collins–Gisin marginals: for every subset of parties
//! and every choice of their settings, the probability that all of them answer
//! `+`. For a no-signalling model these `3^n` numbers fix the whole table, so
//! a distribution over global assignments reproduces the model iff it
//! reproduces them. Only assignments consistent with the support are
//! variables; the rest must carry zero weight anyway.

use std::fmt;

use num::rational::BigRational;
use num::{One, Zero};

use super::assignments::{consistent_assignments, GlobalAssignment};
use super::simplex::{phase_one, Field};
use crate::empirical::{outcome_label, EmpiricalModel, Scenario};
use crate::error::{Error, Result};
use crate::qcore::Probability;

pub const MAX_LP_PARTIES: usize = 10;
/// Cap on dense tableau entries (rows × columns).
pub const MAX_TABLEAU: usize = 40_000_000;
/// Float phase-I optimum at or below this counts as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Float certificates must beat their bound by more than this.
pub const CERTIFICATE_TOL: f64 = 1e-7;

/// A Collins–Gisin term: `None` for parties left out, otherwise the setting.
pub type CgTerm = Vec<Option<usize>>;

/// Separating inequality `Σ coeff·P ≤ bound`, satisfied by every
/// noncontextual model and violated by the tested one.
#[derive(Clone, Debug, PartialEq)]
pub struct BellInequality {
    /// Coefficients on probabilities `P(all + on S | settings)`.
    pub cg_terms: Vec<(CgTerm, Probability)>,
    /// The same inequality on full-table entries `[context][outcome]`.
    pub table: Vec<Vec<Probability>>,
    pub bound: Probability,
    pub model_value: Probability,
    /// `model_value - bound`, strictly positive.
    pub violation: Probability,
}

impl BellInequality {
    /// Value of the table form on a model with the same shape.
    pub fn evaluate(&self, model: &EmpiricalModel) -> f64 {
        self.table
            .iter()
            .zip(model.rows())
            .flat_map(|(cs, ps)| cs.iter().zip(ps).map(|(c, p)| c.to_f64() * p.to_f64()))
            .sum()
    }

    pub fn describe(&self, scenario: &Scenario) -> String {
        let mut parts = Vec::new();
        for (term, coeff) in &self.cg_terms {
            if coeff.is_zero() {
                continue;
            }
            let who: Vec<String> = term
                .iter()
                .enumerate()
                .filter_map(|(p, s)| s.map(|s| scenario.parties()[p].labels[s].clone() + &(p + 1).to_string()))
                .collect();
            let event = if who.is_empty() { "1".to_string() } else { format!("P({}=+)", who.join(",")) };
            parts.push(format!("({coeff})*{event}"));
        }
        format!("{} <= {}", parts.join(" + "), self.bound)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    /// Weights on global assignments reproducing the model.
    Feasible(Vec<(GlobalAssignment, Probability)>),
    Infeasible(BellInequality),
    /// Float noise prevents a decision: the phase-I residual exceeds the
    /// feasibility tolerance but the certificate's violation is too small.
    Indeterminate { residual: f64, violation: f64 },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible(_))
    }
}

impl fmt::Display for LpOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpOutcome::Feasible(w) => write!(f, "feasible ({} assignments with weight)", w.len()),
            LpOutcome::Infeasible(ineq) => write!(f, "infeasible (violation {})", ineq.violation),
            LpOutcome::Indeterminate { residual, violation } => {
                write!(f, "indeterminate (residual {residual:e}, certificate violation {violation:e})")
            }
        }
    }
}

/// All `3^n` Collins–Gisin terms, party 1 varying slowest.
pub fn cg_terms(n: usize) -> Vec<CgTerm> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: CgTerm| [None, Some(0), Some(1)].into_iter().map(move |x| {
                let mut t = t.clone();
                t.push(x);
                t
            }))
            .collect();
    }
    out
}

/// Context extending `term`, with absent parties on setting 0.
fn term_context(term: &CgTerm) -> usize {
    term.iter().fold(0, |acc, s| (acc << 1) | s.unwrap_or(0))
}

/// Outcome-bit mask of the parties present in `term`.
fn term_mask(term: &CgTerm) -> usize {
    term.iter().fold(0, |acc, s| (acc << 1) | usize::from(s.is_some()))
}

fn term_value(model: &EmpiricalModel, term: &CgTerm) -> Probability {
    let (c, mask) = (term_context(term), term_mask(term));
    model.rows()[c].iter().enumerate().filter(|(o, _)| o & mask == 0).fold(Probability::zero(), |s, (_, p)| s.add(p))
}

fn term_hit(g: &GlobalAssignment, term: &CgTerm) -> bool {
    term.iter().enumerate().all(|(p, s)| s.is_none_or(|s| g.outcome(p, s) == crate::qcore::Sign::Plus))
}

/// Decides whether `model` lies in the noncontextual polytope. Exact models
/// use rational arithmetic throughout.
pub fn lp_noncontextual(model: &EmpiricalModel) -> Result<LpOutcome> {
    let n = model.n_parties();
    if n > MAX_LP_PARTIES {
        return Err(Error::SizeBound { what: "parties for the LP", value: n, limit: MAX_LP_PARTIES });
    }
    let support = model.support();
    let vars = consistent_assignments(&support)?;
    let terms = cg_terms(n);
    let entries = terms.len() * (vars.len() + terms.len() + 1);
    if entries > MAX_TABLEAU {
        return Err(Error::SizeBound { what: "LP tableau entries", value: entries, limit: MAX_TABLEAU });
    }
    let hits: Vec<Vec<bool>> = terms.iter().map(|t| vars.iter().map(|g| term_hit(g, t)).collect()).collect();
    let b: Vec<Probability> = terms.iter().map(|t| term_value(model, t)).collect();
    if model.is_exact() {
        let b: Vec<BigRational> = b.iter().map(|p| p.as_rational().expect("exact").clone()).collect();
        solve::<BigRational>(model, &terms, &vars, &hits, &b, Probability::Exact)
    } else {
        let b: Vec<f64> = b.iter().map(|p| p.to_f64().max(0.0)).collect();
        solve::<f64>(model, &terms, &vars, &hits, &b, Probability::Float)
    }
}

fn solve<F: Field>(
    model: &EmpiricalModel,
    terms: &[CgTerm],
    vars: &[GlobalAssignment],
    hits: &[Vec<bool>],
    b: &[F],
    wrap: impl Fn(F) -> Probability,
) -> Result<LpOutcome> {
    let a: Vec<Vec<F>> = hits.iter().map(|row| row.iter().map(|&h| if h { F::one() } else { F::zero() }).collect()).collect();
    let res = phase_one(&a, b);
    let exact = model.is_exact();
    let feasible = if exact { res.value.sign() == 0 } else { res.value.to_f64() <= FEASIBILITY_TOL };
    if feasible {
        let weights = vars
            .iter()
            .zip(res.primal)
            .filter(|(_, w)| if exact { w.sign() > 0 } else { w.to_f64() > FEASIBILITY_TOL })
            .map(|(g, w)| (*g, wrap(w)))
            .collect();
        return Ok(LpOutcome::Feasible(weights));
    }
    // Normalise the Farkas dual so its largest coefficient has magnitude 1.
    let mut biggest = F::zero();
    for y in &res.dual {
        if !y.abs_le(&biggest) {
            biggest = y.clone();
        }
    }
    let scale = if biggest.sign() < 0 { F::zero().sub(&biggest) } else { biggest };
    let y: Vec<F> = res.dual.iter().map(|v| v.div(&scale)).collect();
    let dot = |col: &dyn Fn(usize) -> bool| y.iter().enumerate().filter(|(i, _)| col(*i)).fold(F::zero(), |s, (_, v)| s.add(v));
    let mut bound: Option<F> = None;
    for j in 0..vars.len() {
        let v = dot(&|i| hits[i][j]);
        let larger = |b: &F| if exact { v.sub(b).sign() > 0 } else { v.to_f64() > b.to_f64() };
        if bound.as_ref().is_none_or(larger) {
            bound = Some(v);
        }
    }
    // With no consistent assignment every table is cut off by the zero-cell
    // penalties below, so any bound works; use 0.
    let bound = bound.unwrap_or_else(F::zero);
    let value = y.iter().zip(b).fold(F::zero(), |s, (y, b)| s.add(&y.mul(b)));
    let violation = value.sub(&bound);
    if !exact && violation.to_f64() <= CERTIFICATE_TOL {
        return Ok(LpOutcome::Indeterminate { residual: res.value.to_f64(), violation: violation.to_f64() });
    }
    if exact && violation.sign() <= 0 {
        unreachable!("exact phase-I dual always separates");
    }
    let table = full_table(model, terms, &y, &bound);
    let cg_terms = terms.iter().cloned().zip(y.into_iter().map(&wrap)).collect();
    Ok(LpOutcome::Infeasible(BellInequality {
        cg_terms,
        table: table.into_iter().map(|r| r.into_iter().map(&wrap).collect()).collect(),
        bound: wrap(bound),
        model_value: wrap(value),
        violation: wrap(violation),
    }))
}

/// Rewrites the CG inequality on full-table entries, then subtracts a large
/// constant on zero-probability cells so that assignments outside the support
/// also respect the bound. The model's value is unchanged.
fn full_table<F: Field>(model: &EmpiricalModel, terms: &[CgTerm], y: &[F], bound: &F) -> Vec<Vec<F>> {
    let n = model.n_parties();
    let mut table = vec![vec![F::zero(); 1 << n]; 1 << n];
    for (term, coeff) in terms.iter().zip(y) {
        let (c, mask) = (term_context(term), term_mask(term));
        for (o, cell) in table[c].iter_mut().enumerate() {
            if o & mask == 0 {
                *cell = cell.add(coeff);
            }
        }
    }
    // Any assignment scores at most Σ_c max_o |coeff|.
    let mut penalty = if bound.sign() < 0 { F::zero().sub(bound) } else { F::zero() };
    for row in &table {
        let mut m = F::zero();
        for x in row {
            if !x.abs_le(&m) {
                m = x.clone();
            }
        }
        penalty = penalty.add(&if m.sign() < 0 { F::zero().sub(&m) } else { m });
    }
    penalty = penalty.add(&F::one());
    for (row, probs) in table.iter_mut().zip(model.rows()) {
        for (cell, p) in row.iter_mut().zip(probs) {
            if p.is_zero() {
                *cell = cell.sub(&penalty);
            }
        }
    }
    table
}

/// Brute-force membership check for small exact models: the same LP with
/// every deterministic assignment as a variable (no support pruning).
pub fn lp_all_vertices(model: &EmpiricalModel) -> Result<bool> {
    let n = model.n_parties();
    if n > 4 {
        return Err(Error::SizeBound { what: "parties for the vertex oracle", value: n, limit: 4 });
    }
    let vars: Vec<GlobalAssignment> = (0..1u32 << (2 * n)).map(|b| GlobalAssignment::new(n, b)).collect();
    let terms = cg_terms(n);
    let a: Vec<Vec<BigRational>> = terms
        .iter()
        .map(|t| vars.iter().map(|g| if term_hit(g, t) { <BigRational as One>::one() } else { <BigRational as Zero>::zero() }).collect())
        .collect();
    let b: Vec<BigRational> = terms
        .iter()
        .map(|t| match term_value(model, t) {
            Probability::Exact(r) => r,
            Probability::Float(f) => BigRational::from_float(f).unwrap_or_default(),
        })
        .collect();
    Ok(phase_one(&a, &b).value.is_zero())
}

/// Verifies a certificate: every deterministic assignment satisfies the table
/// form and the model violates it.
pub fn check_certificate(ineq: &BellInequality, model: &EmpiricalModel) -> bool {
    let n = model.n_parties();
    let bound = ineq.bound.to_f64();
    let ok_vertices = n > 12
        || (0..1u32 << (2 * n)).all(|bits| {
            let g = GlobalAssignment::new(n, bits);
            let v: f64 = (0..1usize << n).map(|c| ineq.table[c][g.restrict(c)].to_f64()).sum();
            v <= bound + 1e-9
        });
    ok_vertices && ineq.evaluate(model) > bound + ineq.violation.to_f64() * 0.5
}

impl fmt::Display for BellInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.cg_terms.first().map_or(0, |(t, _)| t.len());
        for (c, row) in self.table.iter().enumerate() {
            let cells: Vec<String> = row.iter().enumerate().map(|(o, x)| format!("{}:{}", outcome_label(o, n), x)).collect();
            writeln!(f, "context {c}: {}", cells.join(" "))?;
        }
        write!(f, "bound {}, model {}, violation {}", self.bound, self.model_value, self.violation)
    }
}
