//! Complex scalars in two arithmetic modes.
//!
//! Exact mode works in the ring `Z[i][1/√2]`: every value is stored as
//! `(x + y·√2) / 2^k` with Gaussian integers `x`, `y`. This contains every
//! `(a + bi)·2^(-m/2)` and is closed under addition, multiplication and
//! conjugation. Float mode is a plain `Complex64`. Mixing the two yields float.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{Complex, Integer, One, Signed, ToPrimitive, Zero};

type GaussInt = Complex<BigInt>;

/// A real number `rational + sqrt2 · √2` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticReal {
    pub rational: BigRational,
    pub sqrt2: BigRational,
}

impl QuadraticReal {
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rational) + rational_to_f64(&self.sqrt2) * std::f64::consts::SQRT_2
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt2.is_zero()
    }
}

/// Element of `Z[i][1/√2]`, kept in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactAmplitude {
    x: GaussInt,
    y: GaussInt,
    k: u32,
}

impl ExactAmplitude {
    pub fn zero() -> Self {
        Self { x: gauss(0, 0), y: gauss(0, 0), k: 0 }
    }

    pub fn one() -> Self {
        Self { x: gauss(1, 0), y: gauss(0, 0), k: 0 }
    }

    pub fn i() -> Self {
        Self { x: gauss(0, 1), y: gauss(0, 0), k: 0 }
    }

    /// `(re + im·i) · 2^(-m/2)`.
    pub fn dyadic(re: i64, im: i64, m: u32) -> Self {
        let g = gauss(re, im);
        let v = if m.is_multiple_of(2) {
            Self { x: g, y: gauss(0, 0), k: m / 2 }
        } else {
            // 2^(-(2j+1)/2) = √2 / 2^(j+1)
            Self { x: gauss(0, 0), y: g, k: m / 2 + 1 }
        };
        v.normalized()
    }

    /// `1/√2`.
    pub fn frac_1_sqrt2() -> Self {
        Self::dyadic(1, 0, 1)
    }

    /// `(x + y√2) / 2^k` from raw parts.
    pub fn from_parts(x: (BigInt, BigInt), y: (BigInt, BigInt), k: u32) -> Self {
        Self { x: Complex::new(x.0, x.1), y: Complex::new(y.0, y.1), k }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.x.is_zero() && self.y.is_zero() {
            return Self::zero();
        }
        let two = BigInt::from(2);
        while self.k > 0
            && self.x.re.is_even()
            && self.x.im.is_even()
            && self.y.re.is_even()
            && self.y.im.is_even()
        {
            self.x.re /= &two;
            self.x.im /= &two;
            self.y.re /= &two;
            self.y.im /= &two;
            self.k -= 1;
        }
        self
    }

    fn lift(&self, k: u32) -> (GaussInt, GaussInt) {
        let f = BigInt::one() << (k - self.k) as usize;
        (scale_gauss(&self.x, &f), scale_gauss(&self.y, &f))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { x: self.x.conj(), y: self.y.conj(), k: self.k }
    }

    /// `|z|²` as an element of `Q(√2)`.
    pub fn norm_sqr(&self) -> QuadraticReal {
        let xx = &self.x.re * &self.x.re + &self.x.im * &self.x.im;
        let yy = &self.y.re * &self.y.re + &self.y.im * &self.y.im;
        // x·conj(y) + conj(x)·y = 2 Re(x conj(y))
        let cross = (&self.x.re * &self.y.re + &self.x.im * &self.y.im) * BigInt::from(2);
        let den = BigInt::one() << (2 * self.k) as usize;
        QuadraticReal {
            rational: BigRational::new(xx + yy * BigInt::from(2), den.clone()),
            sqrt2: BigRational::new(cross, den),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let d = 2f64.powi(self.k as i32);
        let r2 = std::f64::consts::SQRT_2;
        Complex64::new(
            (big_to_f64(&self.x.re) + r2 * big_to_f64(&self.y.re)) / d,
            (big_to_f64(&self.x.im) + r2 * big_to_f64(&self.y.im)) / d,
        )
    }
}

impl fmt::Debug for ExactAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}·√2)/2^{}", self.x, self.y, self.k)
    }
}

impl Add for &ExactAmplitude {
    type Output = ExactAmplitude;
    fn add(self, rhs: &ExactAmplitude) -> ExactAmplitude {
        let k = self.k.max(rhs.k);
        let (ax, ay) = self.lift(k);
        let (bx, by) = rhs.lift(k);
        ExactAmplitude { x: ax + bx, y: ay + by, k }.normalized()
    }
}

impl Mul for &ExactAmplitude {
    type Output = ExactAmplitude;
    fn mul(self, rhs: &ExactAmplitude) -> ExactAmplitude {
        // (x1 + y1√2)(x2 + y2√2) = (x1x2 + 2y1y2) + (x1y2 + y1x2)√2
        let two = BigInt::from(2);
        let x = &self.x * &rhs.x + scale_gauss(&(&self.y * &rhs.y), &two);
        let y = &self.x * &rhs.y + &self.y * &rhs.x;
        ExactAmplitude { x, y, k: self.k + rhs.k }.normalized()
    }
}

impl Neg for &ExactAmplitude {
    type Output = ExactAmplitude;
    fn neg(self) -> ExactAmplitude {
        ExactAmplitude { x: -self.x.clone(), y: -self.y.clone(), k: self.k }
    }
}

/// A state or eigenvector entry.
#[derive(Clone, Debug, PartialEq)]
pub enum AmplitudeScalar {
    Exact(ExactAmplitude),
    Float(Complex64),
}

impl AmplitudeScalar {
    pub fn zero() -> Self {
        Self::Exact(ExactAmplitude::zero())
    }

    pub fn one() -> Self {
        Self::Exact(ExactAmplitude::one())
    }

    pub fn i() -> Self {
        Self::Exact(ExactAmplitude::i())
    }

    pub fn dyadic(re: i64, im: i64, m: u32) -> Self {
        Self::Exact(ExactAmplitude::dyadic(re, im, m))
    }

    pub fn float(re: f64, im: f64) -> Self {
        Self::Float(Complex64::new(re, im))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Self::Exact(e) => e.to_complex(),
            Self::Float(c) => *c,
        }
    }

    pub fn to_float(&self) -> Self {
        Self::Float(self.to_complex())
    }

    pub fn conj(&self) -> Self {
        match self {
            Self::Exact(e) => Self::Exact(e.conj()),
            Self::Float(c) => Self::Float(c.conj()),
        }
    }

    /// Exactly zero in exact mode; bit-for-bit zero in float mode.
    pub fn is_zero(&self) -> bool {
        match self {
            Self::Exact(e) => e.is_zero(),
            Self::Float(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    pub fn norm_sqr(&self) -> Probability {
        match self {
            Self::Exact(e) => {
                let q = e.norm_sqr();
                if q.is_rational() {
                    Probability::Exact(q.rational)
                } else {
                    Probability::Float(q.to_f64())
                }
            }
            Self::Float(c) => Probability::Float(c.norm_sqr()),
        }
    }
}

impl From<Complex64> for AmplitudeScalar {
    fn from(c: Complex64) -> Self {
        Self::Float(c)
    }
}

impl From<ExactAmplitude> for AmplitudeScalar {
    fn from(e: ExactAmplitude) -> Self {
        Self::Exact(e)
    }
}

impl Add for &AmplitudeScalar {
    type Output = AmplitudeScalar;
    fn add(self, rhs: &AmplitudeScalar) -> AmplitudeScalar {
        match (self, rhs) {
            (AmplitudeScalar::Exact(a), AmplitudeScalar::Exact(b)) => AmplitudeScalar::Exact(a + b),
            _ => AmplitudeScalar::Float(self.to_complex() + rhs.to_complex()),
        }
    }
}

impl Sub for &AmplitudeScalar {
    type Output = AmplitudeScalar;
    fn sub(self, rhs: &AmplitudeScalar) -> AmplitudeScalar {
        self + &(-rhs)
    }
}

impl Mul for &AmplitudeScalar {
    type Output = AmplitudeScalar;
    fn mul(self, rhs: &AmplitudeScalar) -> AmplitudeScalar {
        match (self, rhs) {
            (AmplitudeScalar::Exact(a), AmplitudeScalar::Exact(b)) => AmplitudeScalar::Exact(a * b),
            _ => AmplitudeScalar::Float(self.to_complex() * rhs.to_complex()),
        }
    }
}

impl Neg for &AmplitudeScalar {
    type Output = AmplitudeScalar;
    fn neg(self) -> AmplitudeScalar {
        match self {
            AmplitudeScalar::Exact(a) => AmplitudeScalar::Exact(-a),
            AmplitudeScalar::Float(c) => AmplitudeScalar::Float(-c),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for AmplitudeScalar {
            type Output = AmplitudeScalar;
            fn $m(self, rhs: AmplitudeScalar) -> AmplitudeScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A probability: exact rational or double.
#[derive(Clone, Debug, PartialEq)]
pub enum Probability {
    Exact(BigRational),
    Float(f64),
}

/// Float probabilities below this count as zero when extracting supports.
pub const ZERO_THRESHOLD: f64 = 1e-10;

impl Probability {
    pub fn zero() -> Self {
        Self::Exact(BigRational::zero())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Exact(r) => rational_to_f64(r),
            Self::Float(f) => *f,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    /// Zero test used for supports.
    pub fn is_zero(&self) -> bool {
        match self {
            Self::Exact(r) => r.is_zero(),
            Self::Float(f) => f.abs() < ZERO_THRESHOLD,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Self::Exact(r) => Some(r),
            Self::Float(_) => None,
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        match self {
            Self::Exact(r) => Self::Exact(r * factor),
            Self::Float(f) => Self::Float(f * rational_to_f64(factor)),
        }
    }

    pub fn add(&self, other: &Probability) -> Probability {
        match (self, other) {
            (Self::Exact(a), Self::Exact(b)) => Self::Exact(a + b),
            _ => Self::Float(self.to_f64() + other.to_f64()),
        }
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact(r) => write!(f, "{}", r),
            Self::Float(x) => write!(f, "{}", x),
        }
    }
}

fn gauss(re: i64, im: i64) -> GaussInt {
    Complex::new(BigInt::from(re), BigInt::from(im))
}

fn scale_gauss(g: &GaussInt, f: &BigInt) -> GaussInt {
    Complex::new(&g.re * f, &g.im * f)
}

fn big_to_f64(b: &BigInt) -> f64 {
    b.to_f64().unwrap_or(if b.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| big_to_f64(r.numer()) / big_to_f64(r.denom()))
}

/// Parse `p/q` or `p` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn half_power_scales() {
        let h = ExactAmplitude::frac_1_sqrt2();
        let sq = &h * &h;
        assert_eq!(sq, ExactAmplitude::dyadic(1, 0, 2));
        assert_eq!(h.norm_sqr().rational, r(1, 2));
        assert!(h.norm_sqr().is_rational());
    }

    #[test]
    fn mixed_parity_addition_is_closed() {
        // 1/2 + 1/√2 stays exact; its square norm picks up a √2 part.
        let a = ExactAmplitude::dyadic(1, 0, 2);
        let b = ExactAmplitude::frac_1_sqrt2();
        let s = &a + &b;
        let n = s.norm_sqr();
        assert_eq!(n.rational, r(3, 4));
        assert_eq!(n.sqrt2, r(1, 2));
        assert!((s.to_complex().re - (0.5 + std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-15);
    }

    #[test]
    fn cancellation_to_zero() {
        let a = ExactAmplitude::dyadic(3, -1, 3);
        let z = &a + &(-&a);
        assert!(z.is_zero());
        assert_eq!(z, ExactAmplitude::zero());
    }

    #[test]
    fn conj_and_i() {
        let i = AmplitudeScalar::i();
        let p = &i * &i.conj();
        assert_eq!(p, AmplitudeScalar::one());
        assert_eq!(&i * &i, -&AmplitudeScalar::one());
    }

    #[test]
    fn float_and_exact_agree() {
        let a = AmplitudeScalar::dyadic(3, 5, 3);
        let b = AmplitudeScalar::dyadic(-1, 2, 4);
        let e = &(&a * &b) + &a.conj();
        let fa = a.to_float();
        let fb = b.to_float();
        let f = &(&fa * &fb) + &fa.conj();
        assert!(!f.is_exact());
        assert!((e.to_complex() - f.to_complex()).norm() < 1e-12);
        assert!((e.norm_sqr().to_f64() - f.norm_sqr().to_f64()).abs() < 1e-12);
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("3/12"), Some(r(1, 4)));
        assert_eq!(parse_rational("-2"), Some(r(-2, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
