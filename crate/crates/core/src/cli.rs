//! Command-line front end. `run` takes the argument list and output sinks so
//! it can be driven from tests.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::contextuality::{classify, dicke_certificate};
use crate::empirical::io::{deserialize, render_csv, render_text, serialize, TableStyle};
use crate::empirical::{build_model, parse_scenario, EmpiricalModel};
use crate::error::{Error, Result};
use crate::states::StateSpec;
use crate::witness::{
    bell_basis_logical_search, family_sweep, grid_search, preset_witness, sweep_csv, GridMode, Objective, Preset,
};

#[derive(Parser, Debug)]
#[command(name = "qcontext", version, about = "Contextuality of multi-qubit states under local dichotomic measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the probability (or support) table of a state.
    Table {
        #[arg(long)]
        state: String,
        /// Per-party `first/second` observables, comma separated; one pair applies to all.
        /// Defaults to the state family's preset.
        #[arg(long)]
        obs: Option<String>,
        #[arg(long)]
        support: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Decimal places for probabilities in text/csv output.
        #[arg(long)]
        dp: Option<usize>,
    },
    /// Place a model in the contextuality hierarchy.
    Classify {
        #[arg(long, conflicts_with = "model")]
        state: Option<String>,
        #[arg(long, requires = "state")]
        obs: Option<String>,
        /// JSON model file.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Find observables witnessing a state's contextuality.
    Witness {
        #[arg(long)]
        state: String,
        #[arg(long, conflicts_with = "grid")]
        preset: bool,
        /// Grid resolution: θ and φ step by π/res.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Strong)]
        objective: ObjectiveArg,
        /// Let each party choose its own pair of grid observables.
        #[arg(long, requires = "grid")]
        per_party: bool,
    },
    /// Classify every functionally dependent state on k variables.
    Sweep {
        #[arg(long)]
        nvars: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the logical non-locality argument for a Dicke state.
    Certificate {
        /// `n,k`
        #[arg(long)]
        dicke: String,
        #[arg(long)]
        json: bool,
    },
    /// Check that no Bell-basis model is logically contextual.
    Bellcheck {
        /// Generic samples per free parameter.
        #[arg(long, default_value_t = 8)]
        res: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Strong,
    Logical,
    Any,
}

/// Runs the CLI and returns the process exit code: 0 on success, 1 on
/// validation errors, 2 when a size bound is exceeded.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn model_for(state: &str, obs: Option<&str>) -> Result<EmpiricalModel> {
    let spec: StateSpec = state.parse()?;
    let sv = spec.build()?;
    let n = sv.n_qubits();
    let scenario = match obs {
        Some(o) => parse_scenario(o, n)?,
        None => Preset::for_spec(&spec)?.scenario(n)?,
    };
    build_model(&sv, &scenario)
}

fn dispatch(cmd: Command) -> Result<String> {
    match cmd {
        Command::Table { state, obs, support, format, dp } => {
            let model = model_for(&state, obs.as_deref())?;
            let style = TableStyle { support, decimals: dp };
            Ok(match format {
                Format::Text => render_text(&model, style),
                Format::Csv => render_csv(&model, style),
                Format::Json => serialize(&model) + "\n",
            })
        }
        Command::Classify { state, obs, model, json } => {
            let model = match (state, model) {
                (Some(s), None) => model_for(&s, obs.as_deref())?,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::validation(path.display().to_string(), e.to_string()))?;
                    deserialize(&text)?
                }
                _ => return Err(Error::invalid("classify needs --state or --model")),
            };
            let class = classify(&model)?;
            Ok(if json {
                serde_json::to_string_pretty(&class.to_json(&model)).expect("json") + "\n"
            } else {
                class.report(&model)
            })
        }
        Command::Witness { state, preset: _, grid, objective, per_party } => {
            let spec: StateSpec = state.parse()?;
            match grid {
                None => Ok(preset_witness(&spec)?.render()),
                Some(res) => {
                    let objective = match objective {
                        ObjectiveArg::Strong => Objective::Strong,
                        ObjectiveArg::Logical => Objective::Logical,
                        ObjectiveArg::Any => Objective::AnyContextual,
                    };
                    let mode = if per_party { GridMode::PerParty } else { GridMode::Symmetric };
                    match grid_search(&spec.build()?, res, objective, mode)? {
                        Some(r) => Ok(crate::witness::WitnessReport { state: spec.to_string(), ..r }.render()),
                        None => Ok(format!(
                            "state: {spec}\nmethod: grid r={res}\nresult: no witness for {objective:?} on this grid (not a proof of absence)\n"
                        )),
                    }
                }
            }
        }
        Command::Sweep { nvars, out } => {
            let rows = family_sweep(nvars)?;
            let csv = sweep_csv(&rows);
            let disagree = rows.iter().filter(|r| !r.agrees).count();
            match out {
                Some(path) => {
                    std::fs::write(&path, &csv).map_err(|e| Error::validation(path.display().to_string(), e.to_string()))?;
                    Ok(format!("{} polynomials, {} disagreements; wrote {}\n", rows.len(), disagree, path.display()))
                }
                None => Ok(csv),
            }
        }
        Command::Certificate { dicke, json } => {
            let (n, k) = dicke
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| Error::parse(0, format!("expected n,k, got '{dicke}'")))?;
            let cert = dicke_certificate(n, k)?;
            if json {
                return Ok(serde_json::to_string_pretty(&cert).expect("json") + "\n");
            }
            let mut text = format!("logical; violation {}\n", cert.violation);
            text.push_str(&format!("state: dicke:{n},{k} under X/Z\n"));
            text.push_str(&format!("X_iX_j implications verified: {}\n", cert.implications.len()));
            text.push_str(&format!("all-Z support: {}\n", cert.z_disjuncts.join(" ")));
            text.push_str(&format!("closure links every X outcome: {}\n", cert.closure_merges_all));
            text.push_str(&format!("all-X all-equal mass: {}\n", cert.all_equal_mass));
            Ok(text)
        }
        Command::Bellcheck { res } => Ok(bell_basis_logical_search(res).render()),
    }
}
