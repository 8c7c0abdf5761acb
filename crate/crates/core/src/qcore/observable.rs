use std::f64::consts::PI;
use std::fmt;

use num::complex::Complex64;

use super::scalar::{AmplitudeScalar, Probability};
use super::state::{Matrix2, StateVector};
use crate::error::{Error, Result};

/// Outcome of a dichotomic measurement: `+` for eigenvalue `+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ObservableKind {
    X,
    Y,
    Z,
    /// `U(θ, φ) = [[cos θ, e^{-iφ} sin θ], [e^{iφ} sin θ, -cos θ]]`, angles in radians.
    Bloch { theta: f64, phi: f64 },
    /// An observable given directly by its eigenbasis.
    Custom,
}

/// A dichotomic single-qubit observable with its `±1` eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    kind: ObservableKind,
    plus: [AmplitudeScalar; 2],
    minus: [AmplitudeScalar; 2],
}

impl Observable {
    pub fn x() -> Self {
        let h = AmplitudeScalar::dyadic(1, 0, 1);
        let mh = AmplitudeScalar::dyadic(-1, 0, 1);
        Self { kind: ObservableKind::X, plus: [h.clone(), h.clone()], minus: [h, mh] }
    }

    pub fn y() -> Self {
        let h = AmplitudeScalar::dyadic(1, 0, 1);
        let ih = AmplitudeScalar::dyadic(0, 1, 1);
        let mih = AmplitudeScalar::dyadic(0, -1, 1);
        Self { kind: ObservableKind::Y, plus: [h.clone(), ih], minus: [h, mih] }
    }

    pub fn z() -> Self {
        use AmplitudeScalar as A;
        Self { kind: ObservableKind::Z, plus: [A::one(), A::zero()], minus: [A::zero(), A::one()] }
    }

    pub fn bloch(theta: f64, phi: f64) -> Self {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let e = Complex64::from_polar(1.0, phi);
        Self {
            kind: ObservableKind::Bloch { theta, phi },
            plus: [AmplitudeScalar::float(c, 0.0), AmplitudeScalar::Float(e * s)],
            minus: [AmplitudeScalar::float(s, 0.0), AmplitudeScalar::Float(-e * c)],
        }
    }

    /// Observable whose `+`/`-` eigenvectors are the given orthonormal columns.
    pub fn from_eigenbasis(plus: [AmplitudeScalar; 2], minus: [AmplitudeScalar; 2]) -> Result<Self> {
        let m = Matrix2::from_columns(&plus, &minus);
        if !m.is_unitary(1e-9) {
            return Err(Error::invalid("eigenvectors are not orthonormal"));
        }
        Ok(Self { kind: ObservableKind::Custom, plus, minus })
    }

    pub fn kind(&self) -> &ObservableKind {
        &self.kind
    }

    pub fn eigenvector(&self, sign: Sign) -> &[AmplitudeScalar; 2] {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.plus.iter().chain(&self.minus).all(AmplitudeScalar::is_exact)
    }

    /// Eigenbasis after the local unitary `u`: eigenvectors `u·η±`.
    pub fn transformed(&self, u: &Matrix2) -> Self {
        Self { kind: ObservableKind::Custom, plus: u.mul_vec(&self.plus), minus: u.mul_vec(&self.minus) }
    }

    /// The operator `|η+⟩⟨η+| - |η-⟩⟨η-|`.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let p = [self.plus[0].to_complex(), self.plus[1].to_complex()];
        let m = [self.minus[0].to_complex(), self.minus[1].to_complex()];
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = p[i] * p[j].conj() - m[i] * m[j].conj();
            }
        }
        out
    }

    /// Rows `η+†` and `η-†`: maps a qubit onto its outcome amplitudes.
    pub(crate) fn outcome_map(&self) -> Matrix2 {
        Matrix2([
            [self.plus[0].conj(), self.plus[1].conj()],
            [self.minus[0].conj(), self.minus[1].conj()],
        ])
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ObservableKind::X => f.write_str("X"),
            ObservableKind::Y => f.write_str("Y"),
            ObservableKind::Z => f.write_str("Z"),
            ObservableKind::Bloch { theta, phi } => {
                write!(f, "U({},{})", format_angle(*theta), format_angle(*phi))
            }
            ObservableKind::Custom => {
                let c = |a: &AmplitudeScalar| {
                    let z = a.to_complex();
                    format!("{}{:+}i", z.re, z.im)
                };
                write!(f, "B[{};{}|{};{}]", c(&self.plus[0]), c(&self.plus[1]), c(&self.minus[0]), c(&self.minus[1]))
            }
        }
    }
}

/// Renders multiples of π/16 symbolically (`5pi/8`), anything else as a plain float.
pub fn format_angle(x: f64) -> String {
    let units = x / PI * 16.0;
    let r = units.round();
    if r.abs() > 1e6 || (r * PI / 16.0 - x).abs() > 1e-15 * x.abs().max(1.0) {
        return format!("{x}");
    }
    let (mut num, mut den) = (r as i64, 16i64);
    let g = gcd(num.unsigned_abs(), den as u64) as i64;
    if num == 0 {
        return "0".into();
    }
    num /= g;
    den /= g;
    let coeff = match num {
        1 => String::new(),
        -1 => "-".into(),
        _ => num.to_string(),
    };
    if den == 1 {
        format!("{coeff}pi")
    } else {
        format!("{coeff}pi/{den}")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(plus, minus)` unit eigenvectors of the observable.
pub fn eigenbasis(obs: &Observable) -> ([AmplitudeScalar; 2], [AmplitudeScalar; 2]) {
    (obs.plus.clone(), obs.minus.clone())
}

/// `|⟨η_1^{s_1} ⊗ … ⊗ η_n^{s_n} | ψ⟩|²`, exact when state and eigenbases are exact.
pub fn born_probability(state: &StateVector, locals: &[(Observable, Sign)]) -> Result<Probability> {
    let n = state.n_qubits();
    if locals.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: locals.len() });
    }
    let mut acc = AmplitudeScalar::zero();
    for (idx, amp) in state.amps().iter().enumerate() {
        if amp.is_zero() {
            continue;
        }
        let mut term = amp.clone();
        for (q, (obs, sign)) in locals.iter().enumerate() {
            let bit = (idx >> (n - 1 - q)) & 1;
            term = &obs.eigenvector(*sign)[bit].conj() * &term;
        }
        acc = &acc + &term;
    }
    Ok(acc.norm_sqr().scaled(state.scale()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    fn u_matrix(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
        let e = Complex64::from_polar(1.0, phi);
        [
            [Complex64::new(theta.cos(), 0.0), e.conj() * theta.sin()],
            [e * theta.sin(), Complex64::new(-theta.cos(), 0.0)],
        ]
    }

    fn apply(m: &[[Complex64; 2]; 2], v: &[AmplitudeScalar; 2]) -> [Complex64; 2] {
        let (a, b) = (v[0].to_complex(), v[1].to_complex());
        [m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b]
    }

    #[test]
    fn z_and_y_eigenbases() {
        let (p, m) = eigenbasis(&Observable::z());
        assert_eq!(p, [AmplitudeScalar::one(), AmplitudeScalar::zero()]);
        assert_eq!(m, [AmplitudeScalar::zero(), AmplitudeScalar::one()]);
        let (p, m) = eigenbasis(&Observable::y());
        assert_eq!(p[1], AmplitudeScalar::dyadic(0, 1, 1));
        assert_eq!(m[1], AmplitudeScalar::dyadic(0, -1, 1));
        assert_eq!(p[0], AmplitudeScalar::dyadic(1, 0, 1));
    }

    #[test]
    fn bloch_eigenvectors_match_u_matrix() {
        for &(t, f) in &[(PI / 2.0, PI / 8.0), (PI / 8.0, PI / 2.0), (1.1, -0.3), (0.0, 2.0), (PI, 0.7)] {
            let obs = Observable::bloch(t, f);
            let u = u_matrix(t, f);
            let (p, m) = eigenbasis(&obs);
            let up = apply(&u, &p);
            let um = apply(&u, &m);
            assert!(close(up[0], p[0].to_complex()) && close(up[1], p[1].to_complex()));
            assert!(close(um[0], -m[0].to_complex()) && close(um[1], -m[1].to_complex()));
            let mat = obs.matrix();
            for i in 0..2 {
                for j in 0..2 {
                    assert!(close(mat[i][j], u[i][j]));
                }
            }
        }
    }

    #[test]
    fn equatorial_bloch_reproduces_x_and_y() {
        let x = Observable::x().matrix();
        let bx = Observable::bloch(PI / 2.0, 0.0).matrix();
        let y = Observable::y().matrix();
        let by = Observable::bloch(PI / 2.0, PI / 2.0).matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(x[i][j], bx[i][j]));
                assert!(close(y[i][j], by[i][j]));
            }
        }
    }

    #[test]
    fn xyz_orthonormal_exactly() {
        for obs in [Observable::x(), Observable::y(), Observable::z()] {
            let m = Matrix2::from_columns(&obs.plus, &obs.minus);
            let prod = |a: &[AmplitudeScalar; 2], b: &[AmplitudeScalar; 2]| {
                &(&a[0].conj() * &b[0]) + &(&a[1].conj() * &b[1])
            };
            assert_eq!(prod(&obs.plus, &obs.plus), AmplitudeScalar::one());
            assert_eq!(prod(&obs.minus, &obs.minus), AmplitudeScalar::one());
            assert!(prod(&obs.plus, &obs.minus).is_zero());
            assert!(m.is_unitary(1e-15));
        }
    }

    #[test]
    fn angle_formatting() {
        assert_eq!(format_angle(PI / 2.0), "pi/2");
        assert_eq!(format_angle(5.0 * PI / 8.0), "5pi/8");
        assert_eq!(format_angle(PI), "pi");
        assert_eq!(format_angle(0.0), "0");
        assert_eq!(format_angle(1.0), "1");
        assert_eq!(format!("{}", Observable::bloch(PI / 2.0, PI / 8.0)), "U(pi/2,pi/8)");
    }

    #[test]
    fn born_on_basis_state() {
        let s = StateVector::basis(2, 0b01);
        let p = born_probability(&s, &[(Observable::z(), Sign::Plus), (Observable::z(), Sign::Minus)]).unwrap();
        assert_eq!(p, Probability::Exact(BigRational::from_integer(1.into())));
        let p = born_probability(&s, &[(Observable::x(), Sign::Plus), (Observable::z(), Sign::Minus)]).unwrap();
        assert_eq!(p, Probability::Exact(BigRational::new(1.into(), 2.into())));
        assert!(born_probability(&s, &[(Observable::z(), Sign::Plus)]).is_err());
    }
}
