//! Generators for the state families: Dicke, GHZ, Bell pairs, balanced
//! functionally dependent states and dictatorships.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::boolfn::{parse_poly_min_vars, BooleanPolynomial};
use crate::error::{Error, Result};
use crate::qcore::{tensor, AmplitudeScalar, ExactAmplitude, Sign, StateVector};

/// Largest qubit count the generators will build.
pub const MAX_QUBITS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Dicke { n: usize, k: usize },
    Ghz { n: usize },
    Bell { sign: Sign },
    FuncDep { poly: BooleanPolynomial },
    Dictatorship { n_parties: usize, dictator: usize, sign: Sign },
    ProductZero { n: usize },
    Explicit { amps: Vec<AmplitudeScalar> },
}

impl StateSpec {
    pub fn build(&self) -> Result<StateVector> {
        match self {
            StateSpec::Dicke { n, k } => dicke(*n, *k),
            StateSpec::Ghz { n } => ghz(*n),
            StateSpec::Bell { sign } => Ok(bell(*sign)),
            StateSpec::FuncDep { poly } => func_dep_state(poly),
            StateSpec::Dictatorship { n_parties, dictator, sign } => dictatorship(*n_parties, *dictator, *sign),
            StateSpec::ProductZero { n } => {
                check_qubits(*n)?;
                Ok(StateVector::basis(*n, 0))
            }
            StateSpec::Explicit { amps } => StateVector::new(amps.clone()),
        }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            StateSpec::Dicke { n, .. } | StateSpec::Ghz { n } | StateSpec::ProductZero { n } => *n,
            StateSpec::Bell { .. } => 2,
            StateSpec::FuncDep { poly } => poly.n_vars() + 1,
            StateSpec::Dictatorship { n_parties, .. } => *n_parties,
            StateSpec::Explicit { amps } => amps.len().trailing_zeros() as usize,
        }
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::SizeBound { what: "qubits", value: n, limit: MAX_QUBITS });
    }
    if n == 0 {
        return Err(Error::invalid("a state needs at least one qubit"));
    }
    Ok(())
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `S(n,k)`: uniform superposition of the kets with `k` zeros and `n-k` ones.
pub fn dicke(n: usize, k: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::invalid(format!("Dicke state needs n >= 2, got {n}")));
    }
    if k == 0 || k >= n {
        return Err(Error::invalid(format!("Dicke state needs 0 < k < n, got k={k}, n={n} (endpoints are product states)")));
    }
    check_qubits(n)?;
    let amps = (0..1usize << n)
        .map(|i| if i.count_ones() as usize == n - k { AmplitudeScalar::one() } else { AmplitudeScalar::zero() })
        .collect();
    StateVector::with_scale(amps, BigRational::new(BigInt::one(), binomial(n, k)))
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::invalid(format!("GHZ state needs n >= 2, got {n}")));
    }
    check_qubits(n)?;
    let mut amps = vec![AmplitudeScalar::zero(); 1 << n];
    amps[0] = AmplitudeScalar::dyadic(1, 0, 1);
    amps[(1 << n) - 1] = AmplitudeScalar::dyadic(1, 0, 1);
    StateVector::new(amps)
}

/// `Φ± = (|00⟩ ± |11⟩)/√2`.
pub fn bell(sign: Sign) -> StateVector {
    let h = AmplitudeScalar::dyadic(1, 0, 1);
    let last = match sign {
        Sign::Plus => h.clone(),
        Sign::Minus => AmplitudeScalar::dyadic(-1, 0, 1),
    };
    StateVector::new(vec![h, AmplitudeScalar::zero(), AmplitudeScalar::zero(), last]).expect("normalised")
}

/// `Ψ_F = 2^(-n/2) Σ_q |q, F(q)⟩`; the function qubit is last.
pub fn func_dep_state(poly: &BooleanPolynomial) -> Result<StateVector> {
    let n = poly.n_vars();
    if n == 0 {
        return Err(Error::invalid("functional dependency needs at least one variable"));
    }
    check_qubits(n + 1)?;
    let amp = AmplitudeScalar::dyadic(1, 0, n as u32);
    let mut amps = vec![AmplitudeScalar::zero(); 1 << (n + 1)];
    for (q, f) in poly.truth_table().into_iter().enumerate() {
        amps[(q << 1) | usize::from(f)] = amp.clone();
    }
    StateVector::new(amps)
}

/// `Δ±_i`: Bell pair `(|0_i x_last⟩ + |1_i x̄_last⟩)/√2` on parties `i` and
/// `n_parties`, every other party in `(|0⟩+|1⟩)/√2`.
pub fn dictatorship(n_parties: usize, dictator: usize, sign: Sign) -> Result<StateVector> {
    if n_parties < 2 {
        return Err(Error::invalid(format!("dictatorship needs at least 2 parties, got {n_parties}")));
    }
    if dictator == 0 || dictator >= n_parties {
        return Err(Error::invalid(format!("dictator index {dictator} out of range 1..={}", n_parties - 1)));
    }
    func_dep_state(&dictatorship_poly(n_parties - 1, dictator, sign))
}

pub fn dictatorship_poly(n_vars: usize, dictator: usize, sign: Sign) -> BooleanPolynomial {
    let q = BooleanPolynomial::var(n_vars, dictator);
    match sign {
        Sign::Plus => q,
        Sign::Minus => q.add(&BooleanPolynomial::constant(n_vars, true)),
    }
}

/// `((|0⟩+|1⟩)/√2)^{⊗m}`.
pub fn uniform_product(m: usize) -> StateVector {
    let h = AmplitudeScalar::dyadic(1, 0, 1);
    let plus = StateVector::new(vec![h.clone(), h]).expect("normalised");
    (1..m).fold(plus.clone(), |acc, _| tensor(&acc, &plus))
}

fn parse_sign(s: &str, pos: usize) -> Result<Sign> {
    match s.trim() {
        "+" | "plus" => Ok(Sign::Plus),
        "-" | "minus" => Ok(Sign::Minus),
        other => Err(Error::parse(pos, format!("expected '+' or '-', got '{other}'"))),
    }
}

fn parse_usize(s: &str, pos: usize) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::parse(pos, format!("expected a non-negative integer, got '{}'", s.trim())))
}

impl FromStr for StateSpec {
    type Err = Error;

    /// `dicke:3,2`, `ghz:3`, `bell:+`, `fd:q1+q2`, `fd:AND`, `fd:q1@3`,
    /// `dict:3,2,+`, `zero:3`, `amps:1/sqrt2,0,0,1/sqrt2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (family, body) = s.split_once(':').ok_or_else(|| Error::parse(0, "state spec must look like <family>:<args>"))?;
        let off = family.len() + 1;
        let args: Vec<&str> = body.split(',').collect();
        let want = |count: usize| -> Result<()> {
            if args.len() == count {
                Ok(())
            } else {
                Err(Error::parse(off, format!("{family} takes {count} argument(s), got {}", args.len())))
            }
        };
        match family.trim() {
            "dicke" => {
                want(2)?;
                Ok(StateSpec::Dicke { n: parse_usize(args[0], off)?, k: parse_usize(args[1], off)? })
            }
            "ghz" => {
                want(1)?;
                Ok(StateSpec::Ghz { n: parse_usize(args[0], off)? })
            }
            "zero" => {
                want(1)?;
                Ok(StateSpec::ProductZero { n: parse_usize(args[0], off)? })
            }
            "bell" => {
                want(1)?;
                Ok(StateSpec::Bell { sign: parse_sign(args[0], off)? })
            }
            "dict" => {
                want(3)?;
                Ok(StateSpec::Dictatorship {
                    n_parties: parse_usize(args[0], off)?,
                    dictator: parse_usize(args[1], off)?,
                    sign: parse_sign(args[2], off)?,
                })
            }
            "fd" => {
                let (text, n_vars) = match body.rsplit_once('@') {
                    Some((t, n)) => (t, Some(parse_usize(n, off + t.len() + 1)?)),
                    None => (body, None),
                };
                let poly = parse_poly_min_vars(text, n_vars.unwrap_or(2)).map_err(|e| match e {
                    Error::Parse { position, message } => Error::Parse { position: position + off, message },
                    other => other,
                })?;
                if let Some(n) = n_vars {
                    if poly.n_vars() > n {
                        return Err(Error::parse(off, format!("polynomial uses q{} but only {n} variables were requested", poly.n_vars())));
                    }
                }
                Ok(StateSpec::FuncDep { poly })
            }
            "amps" => {
                let mut amps = Vec::with_capacity(args.len());
                let mut p = off;
                for a in &args {
                    amps.push(parse_amplitude(a).map_err(|m| Error::parse(p, m))?);
                    p += a.len() + 1;
                }
                Ok(StateSpec::Explicit { amps })
            }
            other => Err(Error::parse(0, format!("unknown state family '{other}'"))),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Dicke { n, k } => write!(f, "dicke:{n},{k}"),
            StateSpec::Ghz { n } => write!(f, "ghz:{n}"),
            StateSpec::ProductZero { n } => write!(f, "zero:{n}"),
            StateSpec::Bell { sign } => write!(f, "bell:{}", sign.symbol()),
            StateSpec::Dictatorship { n_parties, dictator, sign } => write!(f, "dict:{n_parties},{dictator},{}", sign.symbol()),
            StateSpec::FuncDep { poly } => {
                let used = poly.monomials().fold(0u32, |a, m| a | m);
                let max_used = 32 - used.leading_zeros() as usize;
                if poly.n_vars() > max_used.max(2) {
                    write!(f, "fd:{}@{}", poly, poly.n_vars())
                } else {
                    write!(f, "fd:{poly}")
                }
            }
            StateSpec::Explicit { amps } => {
                let parts: Vec<String> = amps.iter().map(format_amplitude).collect();
                write!(f, "amps:{}", parts.join(","))
            }
        }
    }
}

/// One amplitude: `re`, `im i`, `re±im i`, or `i`/`-i`. Reals are decimals,
/// `p/q` with `q` a power of two, or `p/sqrt2`, `p/(q)sqrt2` (exact).
pub fn parse_amplitude(token: &str) -> std::result::Result<AmplitudeScalar, String> {
    let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty amplitude".into());
    }
    // split into real and imaginary parts at a sign that is not leading or after 'e'
    let bytes = t.as_bytes();
    let mut split = None;
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
        }
    }
    let (re_s, im_s) = match (split, t.ends_with('i')) {
        (Some(i), true) => (&t[..i], Some(&t[i..t.len() - 1])),
        (None, true) => ("", Some(&t[..t.len() - 1])),
        (_, false) => (t.as_str(), None),
    };
    let re = if re_s.is_empty() { Real::Exact(0, 0) } else { parse_real(re_s)? };
    let im = match im_s {
        None => Real::Exact(0, 0),
        Some("") | Some("+") => Real::Exact(1, 0),
        Some("-") => Real::Exact(-1, 0),
        Some(s) => parse_real(s)?,
    };
    Ok(match (re, im) {
        (Real::Exact(a, ma), Real::Exact(b, mb)) => {
            let ea = ExactAmplitude::dyadic(a, 0, ma);
            let eb = ExactAmplitude::dyadic(0, b, mb);
            AmplitudeScalar::Exact(&ea + &eb)
        }
        (re, im) => AmplitudeScalar::float(re.value(), im.value()),
    })
}

enum Real {
    /// `v · 2^(-m/2)`
    Exact(i64, u32),
    Float(f64),
}

impl Real {
    fn value(&self) -> f64 {
        match *self {
            Real::Exact(v, m) => v as f64 * 2f64.powf(-(m as f64) / 2.0),
            Real::Float(f) => f,
        }
    }
}

fn parse_real(s: &str) -> std::result::Result<Real, String> {
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.parse().map_err(|_| format!("bad numerator '{num}'"))?;
        let (den_int, sqrt2) = match den.strip_suffix("sqrt2") {
            Some(rest) => (if rest.is_empty() { "1" } else { rest.trim_end_matches('*') }, true),
            None => (den, false),
        };
        let d: u64 = den_int.parse().map_err(|_| format!("bad denominator '{den}'"))?;
        if d == 0 || !d.is_power_of_two() {
            return Err(format!("exact denominators must be powers of two (optionally times sqrt2), got '{den}'"));
        }
        let m = 2 * d.trailing_zeros() + u32::from(sqrt2);
        Ok(Real::Exact(num, m))
    } else if let Ok(v) = s.parse::<i64>() {
        Ok(Real::Exact(v, 0))
    } else {
        s.parse::<f64>().map(Real::Float).map_err(|_| format!("bad number '{s}'"))
    }
}

fn format_amplitude(a: &AmplitudeScalar) -> String {
    let z = a.to_complex();
    if let AmplitudeScalar::Exact(_) = a {
        // exact values that are plain dyadic rationals print losslessly
        for m in 0..64u32 {
            let s = 2f64.powf(m as f64 / 2.0);
            let (re, im) = (z.re * s, z.im * s);
            if (re - re.round()).abs() < 1e-9 && (im - im.round()).abs() < 1e-9 {
                let cand = AmplitudeScalar::Exact(&ExactAmplitude::dyadic(re.round() as i64, 0, m) + &ExactAmplitude::dyadic(0, im.round() as i64, m));
                if &cand == a {
                    let den = |m: u32| {
                        let p = 1u64 << (m / 2);
                        match (m % 2, p) {
                            (0, 1) => String::new(),
                            (0, p) => format!("/{p}"),
                            (_, 1) => "/sqrt2".into(),
                            (_, p) => format!("/{p}sqrt2"),
                        }
                    };
                    let (r, i) = (re.round() as i64, im.round() as i64);
                    return match (r, i) {
                        (_, 0) => format!("{r}{}", den(m)),
                        (0, _) => format!("{i}{}i", den(m)),
                        _ => format!("{r}{}{:+}{}i", den(m), i, den(m)),
                    };
                }
            }
        }
    }
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{}{}i", z.re, if z.im.is_negative() { "-" } else { "+" }, z.im.abs())
    }
}
