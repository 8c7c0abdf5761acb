//! Boolean functions as polynomials in algebraic normal form over GF(2).
//!
//! A monomial is stored as a bit mask: bit `i-1` set means `q_i` occurs.
//! The empty mask is the constant term.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanPolynomial {
    n_vars: usize,
    monomials: BTreeSet<u32>,
}

/// Class a polynomial's state is predicted to reach under Y/Z (or A/B for dictatorships).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PredictedClass {
    NonContextual,
    Weak,
    AtLeastLogical,
    Strong,
}

impl fmt::Display for PredictedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PredictedClass::NonContextual => "noncontextual",
            PredictedClass::Weak => "weak",
            PredictedClass::AtLeastLogical => "at-least-logical",
            PredictedClass::Strong => "strong",
        })
    }
}

/// The two-variable formulas accepted by name.
pub const NAMED_FORMULAS: &[(&str, &str)] = &[
    ("AND", "q1*q2"),
    ("NAND", "1+q1*q2"),
    ("OR", "q1+q2+q1*q2"),
    ("NOR", "1+q1+q2+q1*q2"),
    ("XOR", "q1+q2"),
    ("NXOR", "1+q1+q2"),
    ("IMP1", "1+q1+q1*q2"),
    ("IMP2", "1+q2+q1*q2"),
    ("NIMP1", "q1+q1*q2"),
    ("NIMP2", "q2+q1*q2"),
    ("DICT1", "q1"),
    ("DICT2", "q2"),
    ("L1", "1+q1+q1*q2"),
    ("L2", "1+q2+q1*q2"),
    ("NL1", "q1+q1*q2"),
    ("NL2", "q2+q1*q2"),
];

impl BooleanPolynomial {
    pub fn zero(n_vars: usize) -> Self {
        Self { n_vars, monomials: BTreeSet::new() }
    }

    pub fn constant(n_vars: usize, value: bool) -> Self {
        let mut p = Self::zero(n_vars);
        if value {
            p.monomials.insert(0);
        }
        p
    }

    /// The single variable `q_i` (1-based).
    pub fn var(n_vars: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n_vars, "variable q{i} out of range");
        let mut p = Self::zero(n_vars);
        p.monomials.insert(1 << (i - 1));
        p
    }

    /// Builds a polynomial from monomial masks; repeated masks cancel.
    pub fn from_monomials(n_vars: usize, masks: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n_vars > MAX_VARS {
            return Err(Error::SizeBound { what: "variables", value: n_vars, limit: MAX_VARS });
        }
        let mut p = Self::zero(n_vars);
        for m in masks {
            if n_vars < 32 && m >> n_vars != 0 {
                return Err(Error::invalid(format!("monomial mask {m:#b} uses a variable beyond q{n_vars}")));
            }
            p.toggle(m);
        }
        Ok(p)
    }

    /// The polynomial whose coefficient of monomial `m` is bit `m` of `code`.
    /// Enumerating `code` over `0..2^(2^n)` lists every `n`-variable polynomial once.
    pub fn from_code(n_vars: usize, code: u64) -> Self {
        let masks = (0..1u32 << n_vars).filter(|&m| code >> m & 1 == 1);
        Self::from_monomials(n_vars, masks).expect("masks within range")
    }

    fn toggle(&mut self, m: u32) {
        if !self.monomials.remove(&m) {
            self.monomials.insert(m);
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn monomials(&self) -> impl Iterator<Item = u32> + '_ {
        self.monomials.iter().copied()
    }

    pub fn contains_monomial(&self, m: u32) -> bool {
        self.monomials.contains(&m)
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn constant_term(&self) -> bool {
        self.monomials.contains(&0)
    }

    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    /// Same polynomial viewed over `n_vars` variables (must not drop used ones).
    pub fn with_n_vars(&self, n_vars: usize) -> Result<Self> {
        Self::from_monomials(n_vars, self.monomials.iter().copied())
    }

    /// `F(bits)`, where `bits[i-1]` is the value of `q_i`.
    pub fn evaluate(&self, bits: &[bool]) -> Result<bool> {
        if bits.len() != self.n_vars {
            return Err(Error::DimensionMismatch { expected: self.n_vars, got: bits.len() });
        }
        let input = bits.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << i));
        Ok(self.eval_mask(input))
    }

    /// Evaluation on an input mask (bit `i-1` is `q_i`).
    pub fn eval_mask(&self, input: u32) -> bool {
        self.monomials.iter().filter(|&&m| m & input == m).count() % 2 == 1
    }

    /// Values on all inputs, indexed by the integer whose most significant of
    /// `n_vars` bits is `q_1` (ket order).
    pub fn truth_table(&self) -> Vec<bool> {
        let n = self.n_vars;
        (0..1usize << n)
            .map(|idx| {
                let mask = (0..n).fold(0u32, |acc, i| acc | ((((idx >> (n - 1 - i)) & 1) as u32) << i));
                self.eval_mask(mask)
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.n_vars.max(other.n_vars));
        for &m in self.monomials.iter().chain(&other.monomials) {
            p.toggle(m);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.n_vars.max(other.n_vars));
        for &a in &self.monomials {
            for &b in &other.monomials {
                p.toggle(a | b);
            }
        }
        p
    }

    /// Finds `q_i + q_j + G` with `G` free of `q_i`, `q_j`; smallest `i`, then `j`.
    pub fn xor_pair_form(&self) -> Option<(usize, usize, BooleanPolynomial)> {
        let bare: Vec<usize> = (1..=self.n_vars)
            .filter(|&i| {
                let bit = 1u32 << (i - 1);
                self.monomials.contains(&bit) && self.monomials.iter().all(|&m| m == bit || m & bit == 0)
            })
            .collect();
        if bare.len() < 2 {
            return None;
        }
        let (i, j) = (bare[0], bare[1]);
        let mut residual = self.clone();
        residual.toggle(1 << (i - 1));
        residual.toggle(1 << (j - 1));
        Some((i, j, residual))
    }

    /// `F = F1 + q_i·F2 + q_j·F3 + q_i·q_j·F4` with each `F_k` free of `q_i`, `q_j`.
    pub fn quadratic_slice(&self, i: usize, j: usize) -> Result<[BooleanPolynomial; 4]> {
        if i == j || i == 0 || j == 0 || i > self.n_vars || j > self.n_vars {
            return Err(Error::invalid(format!("quadratic_slice needs distinct variables in 1..={}, got {i},{j}", self.n_vars)));
        }
        let (bi, bj) = (1u32 << (i - 1), 1u32 << (j - 1));
        let mut parts: [BooleanPolynomial; 4] = std::array::from_fn(|_| Self::zero(self.n_vars));
        for &m in &self.monomials {
            let slot = usize::from(m & bi != 0) + 2 * usize::from(m & bj != 0);
            parts[slot].toggle(m & !bi & !bj);
        }
        Ok(parts)
    }

    /// Inverse of [`quadratic_slice`](Self::quadratic_slice).
    pub fn recompose(parts: &[BooleanPolynomial; 4], i: usize, j: usize, n_vars: usize) -> Self {
        let qi = Self::var(n_vars, i);
        let qj = Self::var(n_vars, j);
        parts[0].add(&qi.mul(&parts[1])).add(&qj.mul(&parts[2])).add(&qi.mul(&qj).mul(&parts[3])).with_n_vars(n_vars).expect("same variables")
    }

    pub fn predicted_class(&self) -> PredictedClass {
        match self.degree() {
            0 => PredictedClass::NonContextual,
            _ if self.xor_pair_form().is_some() => PredictedClass::Strong,
            1 => PredictedClass::Weak,
            _ => PredictedClass::AtLeastLogical,
        }
    }

    /// Name of the two-variable formula this polynomial equals, if any.
    pub fn formula_name(&self) -> Option<&'static str> {
        if self.n_vars != 2 {
            return None;
        }
        NAMED_FORMULAS.iter().find(|(_, text)| parse_poly(text).ok().as_ref() == Some(self)).map(|(name, _)| *name)
    }
}

fn monomial_key(m: u32) -> (u32, Vec<u32>) {
    (m.count_ones(), (0..32).filter(|b| m >> b & 1 == 1).collect())
}

impl fmt::Display for BooleanPolynomial {
    /// Canonical rendering: monomials by size, then lexicographic variable order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        let mut ms: Vec<u32> = self.monomials.iter().copied().collect();
        ms.sort_by_key(|&m| monomial_key(m));
        let terms: Vec<String> = ms
            .into_iter()
            .map(|m| {
                if m == 0 {
                    "1".to_string()
                } else {
                    (0..32).filter(|b| m >> b & 1 == 1).map(|b| format!("q{}", b + 1)).collect::<Vec<_>>().join("*")
                }
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for BooleanPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanPolynomial({}; n={})", self, self.n_vars)
    }
}

impl FromStr for BooleanPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

/// Parses `poly := term ('+' term)*`, `term := '1' | '0' | var ('*' var)*`,
/// `var := 'q' digits`, or one of [`NAMED_FORMULAS`]. The variable count is
/// the largest index used, and at least two.
pub fn parse_poly(text: &str) -> Result<BooleanPolynomial> {
    parse_poly_min_vars(text, 2)
}

/// As [`parse_poly`] with an explicit lower bound on the variable count.
pub fn parse_poly_min_vars(text: &str, min_vars: usize) -> Result<BooleanPolynomial> {
    let trimmed = text.trim();
    if let Some((_, body)) = NAMED_FORMULAS.iter().find(|(name, _)| name.eq_ignore_ascii_case(trimmed)) {
        return parse_terms(body, min_vars.max(2));
    }
    parse_terms(text, min_vars)
}

fn parse_terms(text: &str, min_vars: usize) -> Result<BooleanPolynomial> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let mut masks = Vec::new();
    let mut max_var = 0usize;
    loop {
        skip_ws(&mut pos);
        let start = pos;
        let mut mask = 0u32;
        let mut saw_const = false;
        let mut n_factors = 0;
        loop {
            skip_ws(&mut pos);
            match chars.get(pos) {
                Some('1') | Some('0') if n_factors == 0 => {
                    saw_const = true;
                    if chars[pos] == '0' {
                        mask = u32::MAX;
                    }
                    pos += 1;
                    n_factors += 1;
                }
                Some('q') | Some('Q') => {
                    let vstart = pos;
                    pos += 1;
                    let dstart = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if dstart == pos {
                        return Err(Error::parse(pos, "expected digits after 'q'"));
                    }
                    let idx: usize = chars[dstart..pos]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| Error::parse(dstart, "variable index too large"))?;
                    if idx == 0 {
                        return Err(Error::parse(vstart, "variable index 0 (variables start at q1)"));
                    }
                    if idx > MAX_VARS {
                        return Err(Error::parse(vstart, format!("variable index {idx} exceeds q{MAX_VARS}")));
                    }
                    max_var = max_var.max(idx);
                    mask |= 1 << (idx - 1);
                    n_factors += 1;
                }
                Some(c) => {
                    return Err(Error::parse(pos, format!("unexpected '{c}', expected '1', '0' or a variable")));
                }
                None => return Err(Error::parse(pos, "unexpected end of input, expected a term")),
            }
            skip_ws(&mut pos);
            match chars.get(pos) {
                Some('*') if !saw_const => {
                    pos += 1;
                }
                Some('q') | Some('Q') if !saw_const => {}
                _ => break,
            }
        }
        if pos == start {
            return Err(Error::parse(pos, "empty term"));
        }
        if mask != u32::MAX {
            masks.push(mask);
        }
        skip_ws(&mut pos);
        match chars.get(pos) {
            Some('+') => pos += 1,
            None => break,
            Some(c) => return Err(Error::parse(pos, format!("unexpected '{c}', expected '+'"))),
        }
    }
    BooleanPolynomial::from_monomials(max_var.max(min_vars), masks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BooleanPolynomial {
        parse_poly(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let xor = p("q1+q2");
        assert_eq!(xor.degree(), 1);
        assert_eq!(xor.n_vars(), 2);
        assert_eq!(p("1+q1+q1"), BooleanPolynomial::constant(2, true));
        let and = p("AND");
        assert_eq!(and.monomials().collect::<Vec<_>>(), vec![0b11]);
        assert_eq!(p(" q2 * q1 "), and);
        assert_eq!(p("q1q2"), and);
        assert_eq!(p("0"), BooleanPolynomial::zero(2));
        assert_eq!(p("q3").n_vars(), 3);
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(parse_poly("q1+q0").unwrap_err(), Error::parse(3, "variable index 0 (variables start at q1)"));
        assert!(matches!(parse_poly("q1+"), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_poly("q1 x"), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_poly("q+q1"), Err(Error::Parse { position: 1, .. })));
        assert!(matches!(parse_poly(""), Err(Error::Parse { position: 0, .. })));
    }

    #[test]
    fn evaluation() {
        assert!(p("OR").evaluate(&[true, true]).unwrap());
        assert!(!p("OR").evaluate(&[false, false]).unwrap());
        assert!(p("XOR").evaluate(&[true, false]).unwrap());
        assert!(p("1+q1*q2").evaluate(&[false, false]).unwrap());
        assert!(p("XOR").evaluate(&[true]).is_err());
        // q1 is the most significant index bit
        assert_eq!(p("DICT1").truth_table(), vec![false, false, true, true]);
    }

    #[test]
    fn named_formulas_have_expected_truth_tables() {
        let table = |s: &str| p(s).truth_table();
        assert_eq!(table("AND"), [false, false, false, true]);
        assert_eq!(table("NAND"), [true, true, true, false]);
        assert_eq!(table("NOR"), [true, false, false, false]);
        assert_eq!(table("NXOR"), [true, false, false, true]);
        // q1 => q2 fails only at q1=1, q2=0 (index 0b10)
        assert_eq!(table("IMP1"), [true, true, false, true]);
        assert_eq!(table("IMP2"), [true, false, true, true]);
        assert_eq!(table("NIMP1"), [false, false, true, false]);
        assert_eq!(p("AND").formula_name(), Some("AND"));
    }

    #[test]
    fn xor_pair_examples() {
        assert_eq!(p("q1+q2").xor_pair_form(), Some((1, 2, BooleanPolynomial::zero(2))));
        assert_eq!(p("q1+q2+q3").xor_pair_form(), Some((1, 2, p("q3"))));
        assert_eq!(p("q1+q1*q2").xor_pair_form(), None);
        assert_eq!(p("1+q2+q3+q1*q4").xor_pair_form(), Some((2, 3, p("1+q1*q4"))));
    }

    #[test]
    fn slices() {
        let [f1, f2, f3, f4] = p("AND").quadratic_slice(1, 2).unwrap();
        assert!(f1.is_zero() && f2.is_zero() && f3.is_zero());
        assert_eq!(f4, BooleanPolynomial::constant(2, true));
        let f = p("q1+q1*q2*q3");
        let parts = f.quadratic_slice(1, 2).unwrap();
        assert!(parts[0].is_zero());
        assert_eq!(parts[1], p("1").with_n_vars(3).unwrap());
        assert!(parts[2].is_zero());
        assert_eq!(parts[3], p("q3"));
        assert_eq!(BooleanPolynomial::recompose(&parts, 1, 2, 3), f);
        assert!(f.quadratic_slice(2, 2).is_err());
    }

    #[test]
    fn predicted_classes() {
        assert_eq!(p("XOR").predicted_class(), PredictedClass::Strong);
        assert_eq!(p("q2").predicted_class(), PredictedClass::Weak);
        assert_eq!(p("AND").predicted_class(), PredictedClass::AtLeastLogical);
        assert_eq!(p("1").predicted_class(), PredictedClass::NonContextual);
        assert_eq!(p("NXOR").predicted_class(), PredictedClass::Strong);
    }

    #[test]
    fn rendering_order() {
        assert_eq!(p("q2*q1+q3+1+q1").to_string(), "1+q1+q3+q1*q2");
        assert_eq!(BooleanPolynomial::zero(2).to_string(), "0");
    }
}
