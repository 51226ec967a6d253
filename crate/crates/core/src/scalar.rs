//! Scalar abstraction shared by every numeric routine in the crate.

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::ToPrimitive;

/// Real floating point type the library is generic over (`f32` or `f64`).
///
/// Tolerances that only make sense relative to machine precision are
/// exposed here so the same algorithms work at either width.
pub trait Real: RealField + Copy + ToPrimitive + Default {
    /// Default bound on `‖M·M⁺ − I‖_F` accepted as "unitary".
    const UNITARITY_TOL: f64;
    /// Default relative singular-value cutoff for rank decisions.
    const RANK_TOL: f64;
    /// Acceptance bound for structural checks on computed results
    /// (hermiticity, orthogonality, realness, table consistency).
    const CHECK_TOL: f64;

    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const UNITARITY_TOL: f64 = 1e-4;
    const RANK_TOL: f64 = 1e-6;
    const CHECK_TOL: f64 = 1e-3;
}

impl Real for f64 {
    const UNITARITY_TOL: f64 = 1e-10;
    const RANK_TOL: f64 = 1e-12;
    const CHECK_TOL: f64 = 1e-8;
}

pub type C<T> = Complex<T>;
/// Dense complex square matrix, column-major.
pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;
