use std::fmt;

use super::model::EmpiricalModel;
use super::scenario::{outcome_label, parse_outcome_label, Scenario};
use crate::error::{Error, Result};

/// Possibilistic collapse of a model: which joint outcomes are possible in
/// each context. Rows are bit-packed.
#[derive(Clone, PartialEq)]
pub struct SupportTable {
    scenario: Scenario,
    rows: Vec<Vec<u64>>,
}

fn words(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

impl SupportTable {
    pub fn from_model(model: &EmpiricalModel) -> Self {
        let n = model.n_parties();
        let rows = model
            .rows()
            .iter()
            .map(|row| {
                let mut bits = vec![0u64; words(n)];
                for (o, p) in row.iter().enumerate() {
                    if !p.is_zero() {
                        bits[o / 64] |= 1 << (o % 64);
                    }
                }
                bits
            })
            .collect();
        Self { scenario: model.scenario().clone(), rows }
    }

    /// Support from explicit outcome lists per context. Every row must be nonempty.
    pub fn from_sets(scenario: Scenario, sets: &[Vec<usize>]) -> Result<Self> {
        let n = scenario.n_parties();
        if sets.len() != scenario.n_contexts() {
            return Err(Error::DimensionMismatch { expected: scenario.n_contexts(), got: sets.len() });
        }
        let mut rows = Vec::with_capacity(sets.len());
        for (c, set) in sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::validation(format!("support row {c}"), "empty support"));
            }
            let mut bits = vec![0u64; words(n)];
            for &o in set {
                if o >= 1 << n {
                    return Err(Error::validation(format!("support row {c}"), format!("outcome {o} out of range")));
                }
                bits[o / 64] |= 1 << (o % 64);
            }
            rows.push(bits);
        }
        Ok(Self { scenario, rows })
    }

    /// Support from 0/1 grid rows, one string of `2^n` digits per context in index order.
    pub fn from_grid(scenario: Scenario, grid: &[&str]) -> Result<Self> {
        let sets: Vec<Vec<usize>> = grid
            .iter()
            .map(|row| row.chars().filter(|c| !c.is_whitespace()).enumerate().filter(|(_, c)| *c == '1').map(|(o, _)| o).collect())
            .collect();
        Self::from_sets(scenario, &sets)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn n_parties(&self) -> usize {
        self.scenario.n_parties()
    }

    pub fn n_contexts(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, context: usize, outcome: usize) -> bool {
        self.rows[context][outcome / 64] >> (outcome % 64) & 1 == 1
    }

    pub fn outcomes(&self, context: usize) -> impl Iterator<Item = usize> + '_ {
        (0..1usize << self.n_parties()).filter(move |&o| self.contains(context, o))
    }

    pub fn row_len(&self, context: usize) -> usize {
        self.rows[context].iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Total number of possible sections over all contexts.
    pub fn n_sections(&self) -> usize {
        (0..self.n_contexts()).map(|c| self.row_len(c)).sum()
    }

    pub fn relabel(&self, r: &Relabeling) -> Result<Self> {
        let n = self.n_parties();
        if r.n_parties() != n {
            return Err(Error::DimensionMismatch { expected: n, got: r.n_parties() });
        }
        let mask = r.mask();
        let rows = (0..self.n_contexts())
            .map(|c| {
                let mut bits = vec![0u64; words(n)];
                for o in self.outcomes(c) {
                    let t = o ^ mask;
                    bits[t / 64] |= 1 << (t % 64);
                }
                bits
            })
            .collect();
        Ok(Self { scenario: self.scenario.clone(), rows })
    }

    /// Same rows irrespective of labels.
    pub fn same_grid(&self, other: &SupportTable) -> bool {
        self.rows == other.rows
    }

    /// 0/1 grid in display order, one line per context.
    pub fn grid_lines(&self) -> Vec<(String, String)> {
        let n = self.n_parties();
        self.scenario
            .display_order()
            .into_iter()
            .map(|c| {
                let cells: Vec<&str> = (0..1usize << n).map(|o| if self.contains(c, o) { "1" } else { "0" }).collect();
                (self.scenario.context_label(c), cells.join(" "))
            })
            .collect()
    }
}

impl fmt::Debug for SupportTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n_parties();
        let header: Vec<String> = (0..1usize << n).map(|o| outcome_label(o, n)).collect();
        writeln!(f, "support {}", header.join(" "))?;
        for (label, cells) in self.grid_lines() {
            writeln!(f, "{label} {cells}")?;
        }
        Ok(())
    }
}

/// Per-party outcome swap: flips `+` and `-` of both settings of each flagged party.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relabeling {
    flips: Vec<bool>,
}

impl Relabeling {
    pub fn new(flips: Vec<bool>) -> Self {
        Self { flips }
    }

    pub fn identity(n: usize) -> Self {
        Self { flips: vec![false; n] }
    }

    /// `+++ ↦ target`: the target label lists which parties flip.
    pub fn from_target(target: &str) -> Result<Self> {
        let mask = parse_outcome_label(target).ok_or_else(|| Error::parse(0, format!("bad relabeling target '{target}'")))?;
        let n = target.chars().count();
        Ok(Self { flips: (0..n).map(|p| (mask >> (n - 1 - p)) & 1 == 1).collect() })
    }

    pub fn n_parties(&self) -> usize {
        self.flips.len()
    }

    pub fn flips(&self) -> &[bool] {
        &self.flips
    }

    /// Outcome-index mask with party 1 as the most significant bit.
    pub fn mask(&self) -> usize {
        self.flips.iter().fold(0, |acc, &f| (acc << 1) | usize::from(f))
    }

    pub fn compose(&self, other: &Relabeling) -> Relabeling {
        Relabeling { flips: self.flips.iter().zip(&other.flips).map(|(a, b)| a ^ b).collect() }
    }
}

impl fmt::Display for Relabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.flips.len();
        write!(f, "{} -> {}", "+".repeat(n), outcome_label(self.mask(), n))
    }
}
