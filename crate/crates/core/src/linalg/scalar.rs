use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::sparse::SparseMatrix;
use super::{RankResult, TolPolicy};
use crate::error::Result;

pub type C64 = Complex<f64>;

/// Complex number with arbitrary-precision rational parts.
pub type GaussianRational = Complex<BigRational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Rational,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Float => f.write_str("float"),
            Mode::Rational => f.write_str("rational"),
        }
    }
}

/// Field arithmetic shared by the two modes. Everything in the hierarchy is
/// generic over this trait, so a computation never mixes modes.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn conj(&self) -> Self;

    /// |z|, as a double. Used for pivoting and reporting only.
    fn magnitude(&self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_c64(z: C64) -> Option<Self>;

    fn to_c64(&self) -> C64;

    /// Whether `self` should be dropped as a structural zero next to entries of
    /// size `scale`.
    fn negligible(&self, scale: f64) -> bool;

    /// Rank of `m` with this mode's backend. `data_scale` bounds the size of
    /// the inputs `m` was computed from; only float mode uses it.
    fn rank(m: &SparseMatrix<Self>, tol: TolPolicy, data_scale: f64) -> Result<RankResult>;
}

impl Scalar for C64 {
    const MODE: Mode = Mode::Float;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        C64::new(num as f64 / den as f64, 0.0)
    }

    fn from_c64(z: C64) -> Option<Self> {
        Some(z)
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn negligible(&self, scale: f64) -> bool {
        self.norm() < super::STRUCTURAL_ZERO * scale || self.is_zero()
    }

    fn rank(m: &SparseMatrix<Self>, tol: TolPolicy, data_scale: f64) -> Result<RankResult> {
        super::numerical_rank_scaled(m, tol, data_scale)
    }
}

impl Scalar for GaussianRational {
    const MODE: Mode = Mode::Rational;

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.re).hypot(rational_to_f64(&self.im))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(BigRational::new(BigInt::from(num), BigInt::from(den)), BigRational::zero())
    }

    /// Exact conversion of the binary values; `None` for non-finite input.
    fn from_c64(z: C64) -> Option<Self> {
        Some(Complex::new(BigRational::from_float(z.re)?, BigRational::from_float(z.im)?))
    }

    fn to_c64(&self) -> C64 {
        C64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn rank(m: &SparseMatrix<Self>, _tol: TolPolicy, _data_scale: f64) -> Result<RankResult> {
        super::exact_rank(m)
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // numerator and denominator too large for f64 on their own
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
    let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
    if d == 0.0 {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        n / d
    }
}

/// Convenience constructor for Gaussian rationals from integer parts.
pub fn gaussian(re: i64, im: i64) -> GaussianRational {
    Complex::new(BigRational::from_integer(BigInt::from(re)), BigRational::from_integer(BigInt::from(im)))
}
