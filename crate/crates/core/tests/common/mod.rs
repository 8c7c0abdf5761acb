//! Oracles and fixtures shared by the integration tests and the acceptance run.
//! The oracles (Born rule, marginals, CHSH) do not call the library's own
//! probability or LP code.
#![allow(dead_code)]

use num::complex::Complex64;
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qcontext::contextuality::{check_hierarchy, classify_full, ContextualityClass};
use qcontext::empirical::{pr_box, EmpiricalModel, Scenario};
use qcontext::qcore::{AmplitudeScalar, Matrix2, Observable, Probability, StateVector};

/// Y/Z support grids as printed, rows in the order YYY, YYZ, YZY, ZYY, YZZ, ZYZ, ZZY, ZZZ;
/// columns +++, ++-, ..., ---.
pub const PRINTED_GRIDS: [(&str, [&str; 8]); 4] = [
    (
        "XOR",
        [
            "1 1 1 1 1 1 1 1",
            "0 1 1 0 1 0 0 1",
            "0 1 1 0 1 0 0 1",
            "0 1 1 0 1 0 0 1",
            "1 1 1 1 1 1 1 1",
            "1 1 1 1 1 1 1 1",
            "1 1 1 1 1 1 1 1",
            "1 0 0 1 0 1 1 0",
        ],
    ),
    (
        "NXOR",
        [
            "1 1 1 1 1 1 1 1",
            "1 0 0 1 0 1 1 0",
            "1 0 0 1 0 1 1 0",
            "1 0 0 1 0 1 1 0",
            "1 1 1 1 1 1 1 1",
            "1 1 1 1 1 1 1 1",
            "1 1 1 1 1 1 1 1",
            "0 1 1 0 1 0 0 1",
        ],
    ),
    (
        "AND",
        [
            "1 1 1 1 1 1 1 1",
            "1 1 1 1 1 1 1 1",
            "1 1 0 1 1 1 1 0",
            "1 1 1 1 0 1 1 0",
            "1 0 1 1 1 0 1 1",
            "1 0 1 0 1 1 1 1",
            "1 1 1 1 1 1 1 1",
            "1 0 1 0 1 0 0 1",
        ],
    ),
    (
        "NAND",
        [
            "1 1 1 1 1 1 1 1",
            "1 1 1 1 1 1 1 1",
            "1 1 1 0 1 1 0 1",
            "1 1 1 1 1 0 0 1",
            "0 1 1 1 0 1 1 1",
            "0 1 0 1 1 1 1 1",
            "1 1 1 1 1 1 1 1",
            "0 1 0 1 0 1 1 0",
        ],
    ),
];

pub const PRINTED_ROW_LABELS: [&str; 8] = ["YYY", "YYZ", "YZY", "ZYY", "YZZ", "ZYZ", "ZZY", "ZZZ"];

/// `+++ ↦ target` relabelings taking the AND support onto each named support.
pub const RELABELINGS: [(&str, &str); 7] = [
    ("NAND", "++-"),
    ("OR", "---"),
    ("NOR", "--+"),
    ("L1", "+--"),
    ("NL1", "+-+"),
    ("L2", "-+-"),
    ("NL2", "-++"),
];

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Classifies with the LP always run and asserts the hierarchy implications.
pub fn classified(model: &EmpiricalModel) -> ContextualityClass {
    let class = classify_full(model).expect("classification");
    if let Err(e) = check_hierarchy(&class, model) {
        panic!("hierarchy violated: {e}");
    }
    class
}

/// Bloch vector of `(θ, φ)`.
pub fn bloch_vector(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// `(I + s n·σ)/2` applied to qubit `q` (qubit 0 is the most significant bit).
fn project(amps: &mut [Complex64], n: usize, q: usize, dir: [f64; 3], minus: bool) {
    let s = if minus { -1.0 } else { 1.0 };
    let half = 0.5;
    let p00 = Complex64::new(half * (1.0 + s * dir[2]), 0.0);
    let p11 = Complex64::new(half * (1.0 - s * dir[2]), 0.0);
    let p01 = Complex64::new(half * s * dir[0], -half * s * dir[1]);
    let p10 = p01.conj();
    let bit = 1usize << (n - 1 - q);
    for i in 0..amps.len() {
        if i & bit == 0 {
            let (a0, a1) = (amps[i], amps[i | bit]);
            amps[i] = p00 * a0 + p01 * a1;
            amps[i | bit] = p10 * a0 + p11 * a1;
        }
    }
}

/// `⟨ψ| ⊗_q P_q |ψ⟩` with projectors built straight from Bloch vectors.
pub fn born_oracle(state: &[Complex64], dirs: &[[f64; 3]], outcome: usize) -> f64 {
    let n = dirs.len();
    let mut v = state.to_vec();
    for (q, d) in dirs.iter().enumerate() {
        project(&mut v, n, q, *d, (outcome >> (n - 1 - q)) & 1 == 1);
    }
    state.iter().zip(&v).map(|(a, b)| (a.conj() * b).re).sum()
}

pub fn amplitudes(state: &StateVector) -> Vec<Complex64> {
    (0..1usize << state.n_qubits()).map(|i| state.amplitude(i)).collect()
}

/// Largest change in any marginal when one party's setting changes.
pub fn no_signalling_gap(model: &EmpiricalModel) -> f64 {
    let n = model.n_parties();
    let mut worst = 0.0f64;
    for c in 0..1usize << n {
        for p in 0..n {
            let pbit = 1usize << (n - 1 - p);
            if c & pbit != 0 {
                continue;
            }
            let other = c | pbit;
            for rest in 0..1usize << n {
                if rest & pbit != 0 {
                    continue;
                }
                let m = |ctx: usize| model.prob(ctx, rest).to_f64() + model.prob(ctx, rest | pbit).to_f64();
                worst = worst.max((m(c) - m(other)).abs());
            }
        }
    }
    worst
}

/// Fine's theorem: a two-party binary no-signalling box is local iff all
/// eight CHSH expressions are at most 2.
pub fn chsh_local(model: &EmpiricalModel) -> bool {
    assert_eq!(model.n_parties(), 2);
    let corr = |ctx: usize| -> BigRational {
        (0..4usize).fold(BigRational::zero(), |acc, o| {
            let p = match model.prob(ctx, o) {
                Probability::Exact(r) => r.clone(),
                Probability::Float(_) => panic!("exact model expected"),
            };
            if (o >> 1) ^ (o & 1) == 0 {
                acc + p
            } else {
                acc - p
            }
        })
    };
    let e: Vec<BigRational> = (0..4).map(corr).collect();
    let two = rational(2, 1);
    (0..4).all(|odd| {
        let s = (0..4).fold(BigRational::zero(), |acc, c| if c == odd { acc - &e[c] } else { acc + &e[c] });
        s.clone() <= two && -s <= two
    })
}

/// Deterministic local box: outcome `a_s` for Alice's setting `s`, `b_t` for Bob's.
fn deterministic_box(a: [usize; 2], b: [usize; 2]) -> Vec<Vec<BigRational>> {
    (0..4usize)
        .map(|c| {
            let (s, t) = (c >> 1, c & 1);
            (0..4usize).map(|o| if o == (a[s] << 1 | b[t]) { BigRational::one() } else { BigRational::zero() }).collect()
        })
        .collect()
}

fn pr_rows(flip: usize) -> Vec<Vec<BigRational>> {
    (0..4usize)
        .map(|c| {
            let (s, t) = (c >> 1, c & 1);
            (0..4usize)
                .map(|o| if ((o >> 1) ^ (o & 1)) == ((s & t) ^ flip) { rational(1, 2) } else { BigRational::zero() })
                .collect()
        })
        .collect()
}

/// Two-party exact models `λ·PR + μ·D + (1-λ-μ)·uniform` for `λ, μ` on a
/// grid of eighths, over both PR orientations and several local vertices `D`.
pub fn rational_two_party_grid() -> Vec<EmpiricalModel> {
    let scenario: Scenario = pr_box().scenario().clone();
    let uniform = vec![vec![rational(1, 4); 4]; 4];
    let vertices = [deterministic_box([0, 0], [0, 0]), deterministic_box([0, 1], [1, 1]), deterministic_box([1, 0], [0, 1])];
    let mut out = Vec::new();
    for flip in 0..2 {
        let pr = pr_rows(flip);
        for (vi, d) in vertices.iter().enumerate() {
            for l in 0..=8i64 {
                for m in 0..=(8 - l) {
                    if vi > 0 && m == 0 {
                        continue;
                    }
                    let (lw, mw, uw) = (rational(l, 8), rational(m, 8), rational(8 - l - m, 8));
                    let rows: Vec<Vec<Probability>> = (0..4)
                        .map(|c| {
                            (0..4)
                                .map(|o| Probability::Exact(&lw * &pr[c][o] + &mw * &d[c][o] + &uw * &uniform[c][o]))
                                .collect()
                        })
                        .collect();
                    out.push(EmpiricalModel::new(scenario.clone(), rows).expect("valid box"));
                }
            }
        }
    }
    out
}

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let raw: Vec<Complex64> = (0..1usize << n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::new(raw.iter().map(|a| AmplitudeScalar::Float(a / norm)).collect()).expect("normalised")
}

pub fn random_angles(rng: &mut ChaCha8Rng) -> (f64, f64) {
    (rng.gen_range(0.0..std::f64::consts::PI), rng.gen_range(0.0..2.0 * std::f64::consts::PI))
}

/// Random `n`-party scenario with Bloch observables; returns it with the
/// Bloch vectors of each party's two settings.
pub fn random_scenario(rng: &mut ChaCha8Rng, n: usize) -> (Scenario, Vec<[[f64; 3]; 2]>) {
    let mut pairs = Vec::new();
    let mut dirs = Vec::new();
    for _ in 0..n {
        let (a, b) = (random_angles(rng), random_angles(rng));
        pairs.push([Observable::bloch(a.0, a.1), Observable::bloch(b.0, b.1)]);
        dirs.push([bloch_vector(a.0, a.1), bloch_vector(b.0, b.1)]);
    }
    (Scenario::from_observables(pairs).expect("scenario"), dirs)
}

/// Haar-ish random SU(2) element times a phase.
pub fn random_unitary(rng: &mut ChaCha8Rng) -> Matrix2 {
    let (a, b, c, g) = (rng.gen_range(0.0..6.3f64), rng.gen_range(0.0..6.3f64), rng.gen_range(0.0..1.6f64), rng.gen_range(0.0..6.3f64));
    let phase = Complex64::from_polar(1.0, g);
    let u = Complex64::from_polar(c.cos(), a);
    let v = Complex64::from_polar(c.sin(), b);
    Matrix2::from_complex([[phase * u, -phase * v.conj()], [phase * v, phase * u.conj()]])
}

pub fn yz_model(formula: &str) -> EmpiricalModel {
    use qcontext::empirical::build_model;
    use qcontext::witness::Preset;
    let state = qcontext::states::func_dep_state(&qcontext::boolfn::parse_poly(formula).expect("formula")).expect("state");
    build_model(&state, &Preset::YZ.scenario(state.n_qubits()).expect("scenario")).expect("model")
}

/// Compares the computed Y/Z support grids with the printed ones cell by cell.
pub fn check_printed_grids() -> Result<(), String> {
    for (name, rows) in PRINTED_GRIDS {
        let model = yz_model(name);
        if !model.is_exact() {
            return Err(format!("{name}: model is not exact"));
        }
        let lines = model.support().grid_lines();
        for (i, (label, cells)) in lines.iter().enumerate() {
            if label != PRINTED_ROW_LABELS[i] || cells != rows[i] {
                return Err(format!("{name} row {label}: got {cells}, printed {} {}", PRINTED_ROW_LABELS[i], rows[i]));
            }
        }
    }
    Ok(())
}

/// Checks every `+++ ↦ target` relabeling of the AND support.
pub fn check_relabelings() -> Result<(), String> {
    use qcontext::empirical::Relabeling;
    let and = yz_model("AND").support();
    for (name, target) in RELABELINGS {
        let moved = and.relabel(&Relabeling::from_target(target).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let want = yz_model(name).support();
        if moved.grid_lines() != want.grid_lines() {
            return Err(format!("AND relabelled by +++ -> {target} differs from {name}"));
        }
    }
    Ok(())
}
