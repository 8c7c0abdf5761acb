//! Complex arithmetic, state vectors, local observables and the Born rule.

mod observable;
mod scalar;
mod state;

pub use observable::{born_probability, eigenbasis, Observable, ObservableKind, Sign};
pub use scalar::{
    parse_rational, rational_to_f64, AmplitudeScalar, ExactAmplitude, Probability, QuadraticReal,
    ZERO_THRESHOLD,
};
pub use state::{apply_local_unitaries, tensor, Matrix2, StateVector};
