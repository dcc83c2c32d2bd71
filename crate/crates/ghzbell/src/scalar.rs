//! Floating-point scalar abstraction underlying all amplitudes.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Real scalar type for state amplitudes and probabilities.
///
/// Implemented for `f32` and `f64`. The two tolerance constants scale the
/// crate's numerical checks to the precision of the type: `TOL_ALGEBRA`
/// bounds algebraic identities (norms, orthonormality, fidelity), while the
/// looser `TOL_SUPPORT` bounds measurement support completeness.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Tolerance for algebraic identities.
    const TOL_ALGEBRA: Self;
    /// Tolerance for measurement support completeness.
    const TOL_SUPPORT: Self;

    /// Draws one standard normal deviate.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Draws one uniform deviate in `[0, 1)`.
    fn uniform_01<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Lossy conversion for diagnostics and reports.
    fn to_f64_lossy(self) -> f64;
}

macro_rules! impl_scalar {
    ($t:ty, $algebra:expr, $support:expr) => {
        impl Scalar for $t {
            const TOL_ALGEBRA: Self = $algebra;
            const TOL_SUPPORT: Self = $support;

            fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardNormal.sample(rng)
            }

            fn uniform_01<R: Rng + ?Sized>(rng: &mut R) -> Self {
                rng.gen::<$t>()
            }

            fn to_f64_lossy(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_scalar!(f32, 1e-4, 1e-3);
impl_scalar!(f64, 1e-10, 1e-8);
