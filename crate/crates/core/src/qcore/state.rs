use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Zero};
use rayon::prelude::*;

use super::scalar::{rational_to_f64, AmplitudeScalar, Probability};
use crate::error::{Error, Result};

/// Tolerance on the norm of float-mode states.
const NORM_TOL: f64 = 1e-9;
/// Tolerance on `U†U = I` for local unitaries.
const UNITARY_TOL: f64 = 1e-9;

/// Pure state of `n` qubits, indexed by ket literal `|q_1 … q_n⟩` with qubit 1
/// as the most significant bit.
///
/// Amplitudes are `amps[i] · √scale`. The scale is a positive rational and is
/// `1` for every float-mode state; it lets exact states such as Dicke states
/// (normalisation `C(n,k)^(-1/2)`) keep rational Born probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<AmplitudeScalar>,
    scale: BigRational,
}

impl StateVector {
    pub fn new(amps: Vec<AmplitudeScalar>) -> Result<Self> {
        Self::with_scale(amps, BigRational::one())
    }

    pub fn with_scale(amps: Vec<AmplitudeScalar>, scale: BigRational) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(format!("amplitude count {len} is not 2^n with n >= 1")));
        }
        if scale <= BigRational::zero() {
            return Err(Error::invalid("state scale must be positive"));
        }
        let mut state = Self { n: len.trailing_zeros() as usize, amps, scale };
        if !state.is_exact() {
            let s = rational_to_f64(&state.scale).sqrt();
            state.amps = state
                .amps
                .iter()
                .map(|a| AmplitudeScalar::Float(a.to_complex() * s))
                .collect();
            state.scale = BigRational::one();
        }
        match state.norm_sqr() {
            Probability::Exact(r) if r.is_one() => Ok(state),
            Probability::Float(f) if (f - 1.0).abs() <= NORM_TOL => Ok(state),
            other => Err(Error::invalid(format!("state is not normalised (norm² = {other})"))),
        }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![AmplitudeScalar::zero(); 1 << n];
        amps[index] = AmplitudeScalar::one();
        Self { n, amps, scale: BigRational::one() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[AmplitudeScalar] {
        &self.amps
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn is_exact(&self) -> bool {
        self.amps.iter().all(AmplitudeScalar::is_exact)
    }

    /// Amplitude `i` as a float, including the scale.
    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amps[i].to_complex() * rational_to_f64(&self.scale).sqrt()
    }

    pub fn norm_sqr(&self) -> Probability {
        let sum = self
            .amps
            .iter()
            .map(AmplitudeScalar::norm_sqr)
            .fold(Probability::zero(), |acc, p| acc.add(&p));
        sum.scaled(&self.scale)
    }

    pub fn to_float(&self) -> Self {
        let s = rational_to_f64(&self.scale).sqrt();
        Self {
            n: self.n,
            amps: self.amps.iter().map(|a| AmplitudeScalar::Float(a.to_complex() * s)).collect(),
            scale: BigRational::one(),
        }
    }

    /// Exchange qubits `a` and `b` (1-based).
    pub fn swap_qubits(&self, a: usize, b: usize) -> Result<Self> {
        for q in [a, b] {
            if q == 0 || q > self.n {
                return Err(Error::invalid(format!("qubit index {q} out of range 1..={}", self.n)));
            }
        }
        let (ma, mb) = (self.bit_mask(a), self.bit_mask(b));
        let mut amps = self.amps.clone();
        for (i, amp) in self.amps.iter().enumerate() {
            let (ba, bb) = (i & ma != 0, i & mb != 0);
            let mut j = i & !ma & !mb;
            if ba {
                j |= mb;
            }
            if bb {
                j |= ma;
            }
            amps[j] = amp.clone();
        }
        Ok(Self { n: self.n, amps, scale: self.scale.clone() })
    }

    /// Bit of qubit `q` (1-based) inside a basis index.
    pub fn bit_mask(&self, q: usize) -> usize {
        1 << (self.n - q)
    }

    /// Largest entrywise distance to `other`, both taken as float vectors.
    pub fn distance(&self, other: &StateVector) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        (0..self.amps.len())
            .map(|i| (self.amplitude(i) - other.amplitude(i)).norm())
            .fold(0.0, f64::max)
    }

    /// `(M_1 ⊗ … ⊗ M_n) ψ` without unitarity checks; the scale is carried over.
    pub(crate) fn contract_local(&self, maps: &[Matrix2]) -> Vec<AmplitudeScalar> {
        let mut v = self.amps.clone();
        for (q, m) in maps.iter().enumerate() {
            let mask = 1usize << (self.n - 1 - q);
            let mut out = v.clone();
            for i0 in 0..v.len() {
                if i0 & mask != 0 {
                    continue;
                }
                let i1 = i0 | mask;
                let (a0, a1) = (&v[i0], &v[i1]);
                if a0.is_zero() && a1.is_zero() {
                    continue;
                }
                out[i0] = &(&m.0[0][0] * a0) + &(&m.0[0][1] * a1);
                out[i1] = &(&m.0[1][0] * a0) + &(&m.0[1][1] * a1);
            }
            v = out;
        }
        v
    }
}

/// A 2×2 complex matrix acting on one qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix2(pub [[AmplitudeScalar; 2]; 2]);

impl Matrix2 {
    pub fn identity() -> Self {
        use AmplitudeScalar as A;
        Self([[A::one(), A::zero()], [A::zero(), A::one()]])
    }

    pub fn hadamard() -> Self {
        let h = AmplitudeScalar::dyadic(1, 0, 1);
        let mh = AmplitudeScalar::dyadic(-1, 0, 1);
        Self([[h.clone(), h.clone()], [h, mh]])
    }

    pub fn from_complex(m: [[Complex64; 2]; 2]) -> Self {
        Self(m.map(|row| row.map(AmplitudeScalar::Float)))
    }

    /// Matrix whose columns are `c0` and `c1`.
    pub fn from_columns(c0: &[AmplitudeScalar; 2], c1: &[AmplitudeScalar; 2]) -> Self {
        Self([[c0[0].clone(), c1[0].clone()], [c0[1].clone(), c1[1].clone()]])
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn mul_vec(&self, v: &[AmplitudeScalar; 2]) -> [AmplitudeScalar; 2] {
        let m = &self.0;
        [&(&m[0][0] * &v[0]) + &(&m[0][1] * &v[1]), &(&m[1][0] * &v[0]) + &(&m[1][1] * &v[1])]
    }

    pub fn to_complex(&self) -> [[Complex64; 2]; 2] {
        self.0.clone().map(|row| row.map(|a| a.to_complex()))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let m = self.to_complex();
        for i in 0..2 {
            for j in 0..2 {
                let dot: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - Complex64::new(target, 0.0)).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// `a ⊗ b`, with the qubits of `a` first.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let amps = a
        .amps
        .par_iter()
        .flat_map_iter(|x| b.amps.iter().map(move |y| x * y))
        .collect();
    StateVector { n: a.n + b.n, amps, scale: &a.scale * &b.scale }
}

/// `(U_1 ⊗ … ⊗ U_n) |ψ⟩`; every `U_i` must be unitary to `1e-9`.
pub fn apply_local_unitaries(state: &StateVector, unitaries: &[Matrix2]) -> Result<StateVector> {
    if unitaries.len() != state.n {
        return Err(Error::DimensionMismatch { expected: state.n, got: unitaries.len() });
    }
    if let Some(q) = unitaries.iter().position(|u| !u.is_unitary(UNITARY_TOL)) {
        return Err(Error::NotUnitary { qubit: q + 1 });
    }
    let amps = state.contract_local(unitaries);
    Ok(StateVector { n: state.n, amps, scale: state.scale.clone() })
}
