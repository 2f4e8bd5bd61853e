use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type used for spectra and fingerprints.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Absolute tolerance when comparing eigenvalues of the same order.
    fn spectral_tolerance() -> Self;

    fn of_u64(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).expect("u64 converts to a float")
    }
}

impl Real for f64 {
    fn spectral_tolerance() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn spectral_tolerance() -> Self {
        1e-4
    }
}

/// Elementwise comparison of two sorted spectra within `T::spectral_tolerance()`.
pub fn spectra_match<T: Real>(a: &[T], b: &[T]) -> bool {
    let tol = T::spectral_tolerance();
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (*x - *y).abs() <= tol)
}
