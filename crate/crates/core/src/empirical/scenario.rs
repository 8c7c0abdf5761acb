use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qcore::Observable;

/// Two settings for one party.
#[derive(Clone, Debug, PartialEq)]
pub struct PartySettings {
    pub labels: [String; 2],
    pub observables: Option<[Observable; 2]>,
}

/// An `(n, 2, 2)` Bell scenario: `n` parties, two dichotomic settings each.
///
/// Contexts are numbered by a bit per party, party 1 most significant, bit set
/// for the second setting. Joint outcomes are numbered the same way with the
/// bit set for `-`.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    parties: Vec<PartySettings>,
}

pub const MAX_PARTIES: usize = 16;

impl Scenario {
    pub fn new(parties: Vec<PartySettings>) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::invalid("scenario needs at least one party"));
        }
        if parties.len() > MAX_PARTIES {
            return Err(Error::SizeBound { what: "parties", value: parties.len(), limit: MAX_PARTIES });
        }
        for (p, party) in parties.iter().enumerate() {
            if party.labels[0] == party.labels[1] {
                return Err(Error::invalid(format!("party {} has two settings labelled '{}'", p + 1, party.labels[0])));
            }
        }
        Ok(Self { parties })
    }

    /// Per-party observable pairs, labelled by their display form. When a
    /// party's two observables render identically they become `label` and `label'`.
    pub fn from_observables(pairs: Vec<[Observable; 2]>) -> Result<Self> {
        let parties = pairs
            .into_iter()
            .map(|[a, b]| {
                let (la, mut lb) = (a.to_string(), b.to_string());
                if la == lb {
                    lb.push('\'');
                }
                PartySettings { labels: [la, lb], observables: Some([a, b]) }
            })
            .collect();
        Self::new(parties)
    }

    /// Observable pairs with explicit labels, e.g. `A`/`B` for Bloch settings.
    pub fn from_labelled(pairs: Vec<([Observable; 2], [&str; 2])>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(obs, [la, lb])| PartySettings { labels: [la.to_string(), lb.to_string()], observables: Some(obs) })
                .collect(),
        )
    }

    /// Every party measures the same pair.
    pub fn uniform(n: usize, a: Observable, b: Observable) -> Result<Self> {
        Self::from_observables(vec![[a, b]; n])
    }

    pub fn uniform_labelled(n: usize, a: Observable, b: Observable, labels: [&str; 2]) -> Result<Self> {
        Self::from_labelled(vec![([a, b], labels); n])
    }

    pub fn labels_only(labels: Vec<[String; 2]>) -> Result<Self> {
        Self::new(labels.into_iter().map(|labels| PartySettings { labels, observables: None }).collect())
    }

    pub fn n_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn n_contexts(&self) -> usize {
        1 << self.parties.len()
    }

    pub fn parties(&self) -> &[PartySettings] {
        &self.parties
    }

    /// Setting (0/1) of party `p` (0-based) in `context`.
    pub fn setting(&self, context: usize, p: usize) -> usize {
        (context >> (self.n_parties() - 1 - p)) & 1
    }

    pub fn observable(&self, context: usize, p: usize) -> Option<&Observable> {
        self.parties[p].observables.as_ref().map(|o| &o[self.setting(context, p)])
    }

    pub fn has_observables(&self) -> bool {
        self.parties.iter().all(|p| p.observables.is_some())
    }

    fn compact_labels(&self) -> bool {
        self.parties.iter().all(|p| p.labels.iter().all(|l| l.chars().count() == 1))
    }

    /// `YYZ` when every label is one character, `U(..) U(..) Z` otherwise.
    pub fn context_label(&self, context: usize) -> String {
        let parts: Vec<&str> = (0..self.n_parties()).map(|p| self.parties[p].labels[self.setting(context, p)].as_str()).collect();
        if self.compact_labels() {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    pub fn context_from_label(&self, label: &str) -> Option<usize> {
        (0..self.n_contexts()).find(|&c| self.context_label(c) == label)
    }

    /// Contexts with the all-first-setting row first: by number of second
    /// settings, then by index (`YYY, YYZ, YZY, ZYY, YZZ, ZYZ, ZZY, ZZZ`).
    pub fn display_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n_contexts()).collect();
        order.sort_by_key(|&c| (c.count_ones(), c));
        order
    }
}

/// `+-+` for outcome index `o` of `n` parties.
pub fn outcome_label(o: usize, n: usize) -> String {
    (0..n).map(|p| if (o >> (n - 1 - p)) & 1 == 1 { '-' } else { '+' }).collect()
}

pub fn parse_outcome_label(s: &str) -> Option<usize> {
    s.chars().try_fold(0usize, |acc, c| match c {
        '+' => Some(acc << 1),
        '-' | '−' => Some((acc << 1) | 1),
        _ => None,
    })
}

/// Parses an angle: a float, or `pi`-fractions like `pi/8`, `5pi/8`, `-pi/2`, `0.5*pi`.
pub fn parse_angle(s: &str) -> Option<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('π', "pi");
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.to_string(), b.parse::<f64>().ok()?),
        None => (t.clone(), 1.0),
    };
    let coeff = num.strip_suffix("pi")?.trim_end_matches('*');
    let c = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().ok()?,
    };
    Some(c * PI / den)
}

/// `X`, `Y`, `Z` or `U(θ,φ)` with angles in radians (π-fractions accepted).
pub fn parse_observable(s: &str) -> Result<Observable> {
    let t = s.trim();
    match t {
        "X" | "x" => return Ok(Observable::x()),
        "Y" | "y" => return Ok(Observable::y()),
        "Z" | "z" => return Ok(Observable::z()),
        _ => {}
    }
    let inner = t
        .strip_prefix("U(")
        .or_else(|| t.strip_prefix("u("))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::parse(0, format!("unknown observable '{t}', expected X, Y, Z or U(theta,phi)")))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| Error::parse(2, "U needs two angles"))?;
    let theta = parse_angle(a).ok_or_else(|| Error::parse(2, format!("bad angle '{a}'")))?;
    let phi = parse_angle(b).ok_or_else(|| Error::parse(3 + a.len(), format!("bad angle '{b}'")))?;
    Ok(Observable::bloch(theta, phi))
}

/// Splits at commas that are not inside parentheses.
fn split_top_level(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

/// Splits `first/second` at the first `/` outside parentheses.
fn split_pair(entry: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in entry.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => return Some((&entry[..i], &entry[i + 1..])),
            _ => {}
        }
    }
    None
}

/// `Y/Z,Y/Z,Y/Z`: one `first/second` pair per party. A single pair is used
/// for every party.
pub fn parse_scenario(s: &str, n_parties: usize) -> Result<Scenario> {
    let entries = split_top_level(s.trim());
    let mut pairs = Vec::with_capacity(entries.len());
    for (off, entry) in &entries {
        let (a, b) = split_pair(entry)
            .ok_or_else(|| Error::parse(*off, format!("party entry '{entry}' must be <first>/<second>")))?;
        let shift = |e: Error, extra: usize| match e {
            Error::Parse { position, message } => Error::Parse { position: position + off + extra, message },
            other => other,
        };
        let oa = parse_observable(a).map_err(|e| shift(e, 0))?;
        let ob = parse_observable(b).map_err(|e| shift(e, a.len() + 1))?;
        pairs.push([oa, ob]);
    }
    if pairs.len() == 1 && n_parties > 1 {
        pairs = vec![pairs[0].clone(); n_parties];
    }
    if pairs.len() != n_parties {
        return Err(Error::DimensionMismatch { expected: n_parties, got: pairs.len() });
    }
    Scenario::from_observables(pairs)
}
