//! Checkable version of the argument that `S(n, k)` is logically non-local
//! under `X`/`Z`.

use num::rational::BigRational;
use num::{BigInt, One, Zero};
use serde::Serialize;

use crate::empirical::{model_row, outcome_label, Scenario};
use crate::error::{Error, Result};
use crate::qcore::{Observable, Probability};
use crate::states::{binomial, dicke};

pub const MAX_CERTIFICATE_PARTIES: usize = 16;

/// `Z` outcomes on every party except `i` and `j` force `x_i ↔ x_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Implication {
    pub i: usize,
    pub j: usize,
    /// Full `n`-party outcome label with `*` at positions `i` and `j`.
    pub z_pattern: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DickeCertificate {
    pub n: usize,
    pub k: usize,
    /// Every instance of the `X_iX_jZ…` implication, each verified on the model.
    pub implications: Vec<Implication>,
    /// Outcomes of the all-`Z` row: exactly those with `k` pluses.
    pub z_disjuncts: Vec<String>,
    /// Each disjunct plus the implications links every pair of `X` outcomes.
    pub closure_merges_all: bool,
    /// Probability that all `X` outcomes agree.
    #[serde(serialize_with = "ser_rational")]
    pub all_equal_mass: BigRational,
    /// `1 - all_equal_mass`: the logical Bell violation.
    #[serde(serialize_with = "ser_rational")]
    pub violation: BigRational,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let root = self.find(self.0[x]);
            self.0[x] = root;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

fn fails(msg: impl Into<String>) -> Error {
    Error::invalid(format!("dicke certificate check failed: {}", msg.into()))
}

/// Builds the `X`/`Z` model rows the argument needs and checks each step.
/// Setting 0 is `X`, setting 1 is `Z`; outcome bit 1 means `-`.
pub fn dicke_certificate(n: usize, k: usize) -> Result<DickeCertificate> {
    if n > MAX_CERTIFICATE_PARTIES {
        return Err(Error::SizeBound { what: "parties for the Dicke certificate", value: n, limit: MAX_CERTIFICATE_PARTIES });
    }
    if n < 2 || k == 0 || k >= n {
        return Err(Error::invalid(format!("Dicke certificate needs n >= 2 and 0 < k < n, got ({n},{k})")));
    }
    let c = binomial(n, k);
    let mass = BigRational::new(c.clone(), BigInt::one() << (n - 1));
    if mass >= BigRational::one() {
        return Err(Error::StrictnessFails { n, k, mass: mass.to_string() });
    }

    let state = dicke(n, k)?;
    let scenario = Scenario::uniform(n, Observable::x(), Observable::z())?;
    let all_z = (1usize << n) - 1;
    let bit = |p: usize| 1usize << (n - 1 - p);
    let is_zero = |p: &Probability| p.as_rational().is_some_and(Zero::is_zero);

    // (a) the X_i X_j rows: with k-1 pluses on the Z parties, x_i ≠ x_j is impossible.
    let mut implications = Vec::new();
    let mut verified = std::collections::HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let ctx = all_z & !bit(i) & !bit(j);
            let row = model_row(&state, &scenario, ctx)?;
            let others = all_z & !bit(i) & !bit(j);
            for pattern in 0..1usize << n {
                if pattern & !others != 0 || (n - 2) - (pattern.count_ones() as usize) != k - 1 {
                    continue;
                }
                for (xi, xj) in [(0, bit(j)), (bit(i), 0)] {
                    let o = pattern | xi | xj;
                    if !is_zero(&row[o]) {
                        return Err(fails(format!("row X{}X{} outcome {} is possible", i + 1, j + 1, outcome_label(o, n))));
                    }
                }
                let mut label: Vec<char> = outcome_label(pattern, n).chars().collect();
                label[i] = '*';
                label[j] = '*';
                implications.push(Implication { i: i + 1, j: j + 1, z_pattern: label.into_iter().collect() });
                verified.insert((i, j, pattern));
            }
        }
    }

    // (b) the all-Z support is exactly the outcomes with k pluses.
    let z_row = model_row(&state, &scenario, all_z)?;
    let mut z_disjuncts = Vec::new();
    for (o, p) in z_row.iter().enumerate() {
        let pluses = n - o.count_ones() as usize;
        if is_zero(p) == (pluses == k) {
            return Err(fails(format!("all-Z support disagrees at {}", outcome_label(o, n))));
        }
        if pluses == k {
            z_disjuncts.push(outcome_label(o, n));
        }
    }

    // (c) each disjunct, through the verified implications, links all X outcomes.
    let mut closure_merges_all = true;
    for (o, _) in z_row.iter().enumerate().filter(|(o, _)| n - o.count_ones() as usize == k) {
        let mut uf = UnionFind((0..n).collect());
        for i in 0..n {
            for j in i + 1..n {
                if (o & bit(i) == 0) != (o & bit(j) == 0) {
                    let pattern = o & !bit(i) & !bit(j);
                    if verified.contains(&(i, j, pattern)) {
                        uf.union(i, j);
                    }
                }
            }
        }
        let root = uf.find(0);
        closure_merges_all &= (1..n).all(|p| uf.find(p) == root);
    }
    if !closure_merges_all {
        return Err(fails("equivalence closure leaves X outcomes unlinked"));
    }

    // (d) the all-X row puts mass C(n,k)/2^(n-1) on the two all-equal outcomes.
    let x_row = model_row(&state, &scenario, 0)?;
    let all_equal = x_row[0].add(&x_row[all_z]);
    let got = all_equal.as_rational().cloned().ok_or_else(|| fails("all-X row is not exact"))?;
    if got != mass {
        return Err(fails(format!("all-equal mass {got} differs from {mass}")));
    }
    Ok(DickeCertificate { n, k, implications, z_disjuncts, closure_merges_all, violation: BigRational::one() - &mass, all_equal_mass: mass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn w_state() {
        let c = dicke_certificate(3, 2).unwrap();
        assert_eq!(c.violation, q(1, 4));
        assert_eq!(c.all_equal_mass, q(3, 4));
        assert_eq!(c.z_disjuncts, ["++-", "+-+", "-++"]);
        assert_eq!(c.implications.len(), 3);
    }

    #[test]
    fn four_one() {
        assert_eq!(dicke_certificate(4, 1).unwrap().violation, q(1, 2));
    }

    #[test]
    fn epr_rejected() {
        assert!(matches!(dicke_certificate(2, 1), Err(Error::StrictnessFails { n: 2, k: 1, .. })));
        assert!(matches!(dicke_certificate(3, 3), Err(Error::InvalidArgument(_))));
    }
}
