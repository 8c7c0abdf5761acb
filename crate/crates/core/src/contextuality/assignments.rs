use std::fmt;

use rayon::prelude::*;

use crate::empirical::{outcome_label, Scenario, SupportTable};
use crate::error::{Error, Result};
use crate::qcore::Sign;

/// Largest party count for global-assignment enumeration.
pub const MAX_ENUM_PARTIES: usize = 14;

/// One outcome for every (party, setting) pair. Bit `2p + s` is set when party
/// `p` (0-based) answers `-` to setting `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlobalAssignment {
    n: usize,
    bits: u32,
}

impl GlobalAssignment {
    pub fn new(n: usize, bits: u32) -> Self {
        debug_assert!(n <= 16 && (n == 16 || bits >> (2 * n) == 0));
        Self { n, bits }
    }

    /// From the outcomes of setting 0 and setting 1, each an outcome index.
    pub fn from_outcomes(n: usize, first: usize, second: usize) -> Self {
        let mut bits = 0u32;
        for p in 0..n {
            let shift = n - 1 - p;
            bits |= ((first >> shift) as u32 & 1) << (2 * p);
            bits |= ((second >> shift) as u32 & 1) << (2 * p + 1);
        }
        Self { n, bits }
    }

    pub fn n_parties(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn outcome(&self, party: usize, setting: usize) -> Sign {
        Sign::from_bit(self.bits >> (2 * party + setting) & 1 == 1)
    }

    /// Joint outcome seen in `context`.
    pub fn restrict(&self, context: usize) -> usize {
        let n = self.n;
        (0..n).fold(0usize, |acc, p| {
            let s = (context >> (n - 1 - p)) & 1;
            (acc << 1) | ((self.bits >> (2 * p + s)) & 1) as usize
        })
    }

    /// `z1z2z3y1y2y3`-style listing: outcomes of every party's first setting,
    /// then of every party's second setting, with the scenario's labels.
    pub fn describe(&self, scenario: &Scenario) -> String {
        let mut names = String::new();
        for s in 0..2 {
            for (p, party) in scenario.parties().iter().enumerate() {
                names.push_str(&format!("{}{}", party.labels[s].to_lowercase(), p + 1));
            }
        }
        format!("{names}={self}")
    }
}

impl fmt::Display for GlobalAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in 0..2 {
            for p in 0..self.n {
                write!(f, "{}", self.outcome(p, s).symbol())?;
            }
        }
        Ok(())
    }
}

/// Prefix tables used to prune the search. `levels[l][t]` is the set of
/// length-`l` outcome prefixes (bit-packed) that a consistent assignment may
/// show on the first `l` parties when they use settings `t`.
struct Pruner {
    n: usize,
    levels: Vec<Vec<Vec<u64>>>,
}

fn words(bits: usize) -> usize {
    bits.div_ceil(64)
}

fn get(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

impl Pruner {
    fn new(support: &SupportTable) -> Self {
        let n = support.n_parties();
        let mut levels: Vec<Vec<Vec<u64>>> = vec![Vec::new(); n + 1];
        levels[n] = (0..1usize << n)
            .map(|c| {
                let mut set = vec![0u64; words(1 << n)];
                for o in support.outcomes(c) {
                    set[o / 64] |= 1 << (o % 64);
                }
                set
            })
            .collect();
        // A prefix survives at level l only if, for both settings of the next
        // party, some surviving longer prefix extends it.
        for l in (0..n).rev() {
            let next = &levels[l + 1];
            let cur: Vec<Vec<u64>> = (0..1usize << l)
                .map(|t| {
                    let mut set = vec![0u64; words(1 << l)];
                    for prefix in 0..1usize << l {
                        let ok = (0..2).all(|s| {
                            let child = &next[(t << 1) | s];
                            get(child, prefix << 1) || get(child, (prefix << 1) | 1)
                        });
                        if ok {
                            set[prefix / 64] |= 1 << (prefix % 64);
                        }
                    }
                    set
                })
                .collect();
            levels[l] = cur;
        }
        Self { n, levels }
    }

    fn search_from(&self, level: usize, bits: u32, prefixes: &[usize], visit: &mut impl FnMut(u32)) {
        if level == self.n {
            visit(bits);
            return;
        }
        let table = &self.levels[level + 1];
        let mut next = vec![0usize; prefixes.len() * 2];
        'choice: for choice in 0..4u32 {
            let (a0, a1) = ((choice & 1) as usize, (choice >> 1) as usize);
            for (t, &o) in prefixes.iter().enumerate() {
                let (n0, n1) = ((o << 1) | a0, (o << 1) | a1);
                if !get(&table[t << 1], n0) || !get(&table[(t << 1) | 1], n1) {
                    continue 'choice;
                }
                next[t << 1] = n0;
                next[(t << 1) | 1] = n1;
            }
            self.search_from(level + 1, bits | (choice << (2 * level)), &next, visit);
        }
    }

    /// Runs `visit` over consistent assignments in increasing order of the
    /// first two parties' choices, with one worker per such branch.
    fn par_fold<A: Send>(&self, init: impl Fn() -> A + Sync, visit: impl Fn(&mut A, u32) + Sync) -> Vec<A> {
        if !get(&self.levels[0][0], 0) {
            return Vec::new();
        }
        let depth = self.n.min(2);
        let branches: Vec<(u32, Vec<usize>)> = {
            let mut out = vec![(0u32, vec![0usize])];
            for level in 0..depth {
                let table = &self.levels[level + 1];
                let mut grown = Vec::new();
                for (bits, prefixes) in out {
                    for choice in 0..4u32 {
                        let (a0, a1) = ((choice & 1) as usize, (choice >> 1) as usize);
                        let mut next = vec![0usize; prefixes.len() * 2];
                        let ok = prefixes.iter().enumerate().all(|(t, &o)| {
                            next[t << 1] = (o << 1) | a0;
                            next[(t << 1) | 1] = (o << 1) | a1;
                            get(&table[t << 1], next[t << 1]) && get(&table[(t << 1) | 1], next[(t << 1) | 1])
                        });
                        if ok {
                            grown.push((bits | (choice << (2 * level)), next));
                        }
                    }
                }
                out = grown;
            }
            out
        };
        branches
            .into_par_iter()
            .map(|(bits, prefixes)| {
                let mut acc = init();
                self.search_from(depth, bits, &prefixes, &mut |b| visit(&mut acc, b));
                acc
            })
            .collect()
    }
}

fn check_size(support: &SupportTable) -> Result<()> {
    let n = support.n_parties();
    if n > MAX_ENUM_PARTIES {
        return Err(Error::SizeBound { what: "parties for assignment enumeration", value: n, limit: MAX_ENUM_PARTIES });
    }
    Ok(())
}

/// Every global assignment whose restriction to each context is possible.
pub fn consistent_assignments(support: &SupportTable) -> Result<Vec<GlobalAssignment>> {
    check_size(support)?;
    let n = support.n_parties();
    let parts = Pruner::new(support).par_fold(Vec::new, |acc: &mut Vec<u32>, b| acc.push(b));
    let mut all: Vec<GlobalAssignment> = parts.into_iter().flatten().map(|b| GlobalAssignment::new(n, b)).collect();
    all.sort_unstable();
    Ok(all)
}

pub fn count_consistent(support: &SupportTable) -> Result<u64> {
    check_size(support)?;
    Ok(Pruner::new(support).par_fold(|| 0u64, |acc, _| *acc += 1).into_iter().sum())
}

/// Consistent-assignment count and, per context, the possible sections that
/// are restrictions of some consistent assignment (bit-packed).
pub(crate) fn coverage(support: &SupportTable) -> Result<(u64, Vec<Vec<u64>>)> {
    check_size(support)?;
    let n = support.n_parties();
    let n_ctx = 1usize << n;
    let empty = || (0u64, vec![vec![0u64; words(1 << n)]; n_ctx]);
    let parts = Pruner::new(support).par_fold(empty, |(count, cov), b| {
        *count += 1;
        let g = GlobalAssignment::new(n, b);
        for (c, set) in cov.iter_mut().enumerate() {
            let o = g.restrict(c);
            set[o / 64] |= 1 << (o % 64);
        }
    });
    let (mut count, mut cov) = empty();
    for (k, part) in parts {
        count += k;
        for (dst, src) in cov.iter_mut().zip(part) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d |= s;
            }
        }
    }
    Ok((count, cov))
}

/// Possible sections that extend to no consistent global assignment, per
/// context (in context-index order, empty lists included).
pub fn non_extendable_sections(support: &SupportTable) -> Result<Vec<Vec<usize>>> {
    let (_, cov) = coverage(support)?;
    Ok(missing_sections(support, &cov))
}

pub(crate) fn missing_sections(support: &SupportTable, cov: &[Vec<u64>]) -> Vec<Vec<usize>> {
    (0..support.n_contexts()).map(|c| support.outcomes(c).filter(|&o| !get(&cov[c], o)).collect()).collect()
}

/// Human-readable list of sections, e.g. `YYZ: +-- -+-`.
pub fn describe_sections(scenario: &Scenario, sections: &[Vec<usize>]) -> Vec<String> {
    let n = scenario.n_parties();
    scenario
        .display_order()
        .into_iter()
        .filter(|&c| !sections[c].is_empty())
        .map(|c| {
            let outs: Vec<String> = sections[c].iter().map(|&o| outcome_label(o, n)).collect();
            format!("{}: {}", scenario.context_label(c), outs.join(" "))
        })
        .collect()
}
