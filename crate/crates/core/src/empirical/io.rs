//! JSON model files and text/CSV tables.
//!
//! ```json
//! { "scenario": { "parties": [ { "labels": ["Y", "Z"], "observables": ["Y", "Z"] } ] },
//!   "mode": "exact",
//!   "rows": [ { "context": "Y", "settings": [0], "probs": ["1/2", "1/2"] } ] }
//! ```
//! Exact probabilities are `p/q` strings; float ones carry 17 significant digits.

use serde::{Deserialize, Serialize};

use super::model::EmpiricalModel;
use super::scenario::{outcome_label, parse_observable, PartySettings, Scenario};
use crate::error::{Error, Result};
use crate::qcore::{parse_rational, ObservableKind, Probability};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub scenario: ScenarioFile,
    pub mode: String,
    pub rows: Vec<RowFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub parties: Vec<PartyFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartyFile {
    pub labels: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observables: Option<[String; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowFile {
    pub context: String,
    pub settings: Vec<u8>,
    pub probs: Vec<String>,
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_probability(p: &Probability) -> String {
    match p {
        Probability::Exact(r) => r.to_string(),
        Probability::Float(x) => format_float(*x),
    }
}

pub fn scenario_to_file(s: &Scenario) -> ScenarioFile {
    ScenarioFile {
        parties: s
            .parties()
            .iter()
            .map(|p| PartyFile {
                labels: p.labels.clone(),
                observables: p
                    .observables
                    .as_ref()
                    .filter(|o| o.iter().all(|x| *x.kind() != ObservableKind::Custom))
                    .map(|o| [o[0].to_string(), o[1].to_string()]),
            })
            .collect(),
    }
}

pub fn scenario_from_file(f: &ScenarioFile) -> Result<Scenario> {
    let mut parties = Vec::with_capacity(f.parties.len());
    for (i, p) in f.parties.iter().enumerate() {
        let observables = match &p.observables {
            None => None,
            Some([a, b]) => {
                let parse = |s: &str| {
                    parse_observable(s).map_err(|e| Error::validation(format!("scenario.parties[{i}].observables"), e.to_string()))
                };
                Some([parse(a)?, parse(b)?])
            }
        };
        parties.push(PartySettings { labels: p.labels.clone(), observables });
    }
    Scenario::new(parties).map_err(|e| match e {
        Error::InvalidArgument(m) => Error::validation("scenario", m),
        other => other,
    })
}

pub fn to_file(model: &EmpiricalModel) -> ModelFile {
    let sc = model.scenario();
    let n = sc.n_parties();
    ModelFile {
        scenario: scenario_to_file(sc),
        mode: if model.is_exact() { "exact" } else { "float" }.into(),
        rows: sc
            .display_order()
            .into_iter()
            .map(|c| RowFile {
                context: sc.context_label(c),
                settings: (0..n).map(|p| sc.setting(c, p) as u8).collect(),
                probs: model.rows()[c].iter().map(format_probability).collect(),
            })
            .collect(),
    }
}

pub fn serialize(model: &EmpiricalModel) -> String {
    serde_json::to_string_pretty(&to_file(model)).expect("model serialises")
}

pub fn deserialize(text: &str) -> Result<EmpiricalModel> {
    let file: ModelFile = serde_json::from_str(text)
        .map_err(|e| Error::validation(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    from_file(&file)
}

pub fn from_file(file: &ModelFile) -> Result<EmpiricalModel> {
    let scenario = scenario_from_file(&file.scenario)?;
    let n = scenario.n_parties();
    let exact = match file.mode.as_str() {
        "exact" => true,
        "float" => false,
        other => return Err(Error::validation("mode", format!("expected \"exact\" or \"float\", got \"{other}\""))),
    };
    if file.rows.len() != scenario.n_contexts() {
        return Err(Error::validation("rows", format!("expected {} rows, found {}", scenario.n_contexts(), file.rows.len())));
    }
    let mut rows: Vec<Option<Vec<Probability>>> = vec![None; scenario.n_contexts()];
    for (i, row) in file.rows.iter().enumerate() {
        let loc = |what: &str| format!("rows[{i}]{what}");
        if row.settings.len() != n || row.settings.iter().any(|&s| s > 1) {
            return Err(Error::validation(loc(".settings"), format!("expected {n} settings, each 0 or 1")));
        }
        let c = row.settings.iter().fold(0usize, |acc, &s| (acc << 1) | s as usize);
        let expected = scenario.context_label(c);
        if row.context != expected {
            return Err(Error::validation(loc(".context"), format!("label '{}' does not match settings (expected '{expected}')", row.context)));
        }
        if rows[c].is_some() {
            return Err(Error::validation(loc(""), format!("context {expected} appears twice")));
        }
        if row.probs.len() != 1 << n {
            return Err(Error::validation(loc(".probs"), format!("expected {} entries, found {}", 1 << n, row.probs.len())));
        }
        let mut probs = Vec::with_capacity(row.probs.len());
        for (o, s) in row.probs.iter().enumerate() {
            let at = || loc(&format!(".probs[{o}] ({})", outcome_label(o, n)));
            let p = if exact {
                Probability::Exact(parse_rational(s).ok_or_else(|| Error::validation(at(), format!("'{s}' is not a rational")))?)
            } else {
                let v: f64 = s.trim().parse().map_err(|_| Error::validation(at(), format!("'{s}' is not a number")))?;
                if !v.is_finite() {
                    return Err(Error::validation(at(), "non-finite probability"));
                }
                Probability::Float(v)
            };
            probs.push(p);
        }
        rows[c] = Some(probs);
    }
    let rows = rows.into_iter().map(|r| r.expect("every context seen once")).collect();
    EmpiricalModel::new(scenario, rows)
}

/// How probabilities are printed in text tables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TableStyle {
    /// Print the 0/1 support instead of probabilities.
    pub support: bool,
    /// Fixed decimal places for every entry (exact entries are converted).
    pub decimals: Option<usize>,
}

fn cell(p: &Probability, style: TableStyle) -> String {
    if style.support {
        return if p.is_zero() { "0" } else { "1" }.into();
    }
    match (style.decimals, p) {
        (Some(dp), _) => format!("{:.*}", dp, p.to_f64()),
        (None, Probability::Exact(r)) => r.to_string(),
        (None, Probability::Float(x)) => format!("{x}"),
    }
}

fn grid(model: &EmpiricalModel, style: TableStyle) -> (Vec<String>, Vec<(String, Vec<String>)>) {
    let sc = model.scenario();
    let n = sc.n_parties();
    let header = (0..1usize << n).map(|o| outcome_label(o, n)).collect();
    let rows = sc
        .display_order()
        .into_iter()
        .map(|c| (sc.context_label(c), model.rows()[c].iter().map(|p| cell(p, style)).collect()))
        .collect();
    (header, rows)
}

/// Aligned text table with context labels down the side and outcomes across.
pub fn render_text(model: &EmpiricalModel, style: TableStyle) -> String {
    let (header, rows) = grid(model, style);
    let label_w = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
    let cell_w = rows
        .iter()
        .flat_map(|(_, cells)| cells.iter().map(|c| c.len()))
        .chain(header.iter().map(|h| h.len()))
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    out.push_str(&format!("{:label_w$} |", ""));
    for h in &header {
        out.push_str(&format!(" {h:>cell_w$}"));
    }
    out.push('\n');
    out.push_str(&format!("{}-+{}\n", "-".repeat(label_w), "-".repeat((cell_w + 1) * header.len())));
    for (label, cells) in rows {
        let pad = label_w - label.chars().count();
        out.push_str(&format!("{label}{} |", " ".repeat(pad)));
        for c in cells {
            out.push_str(&format!(" {c:>cell_w$}"));
        }
        out.push('\n');
    }
    out
}

pub fn render_csv(model: &EmpiricalModel, style: TableStyle) -> String {
    let (header, rows) = grid(model, style);
    let mut w = csv::Writer::from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>, first: &str, rest: &[String]| {
        w.write_record(std::iter::once(first).chain(rest.iter().map(String::as_str))).expect("in-memory csv")
    };
    write(&mut w, "context", &header);
    for (label, cells) in &rows {
        write(&mut w, label, cells);
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}
