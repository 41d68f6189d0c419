//! Finite-dimensional quasi *-algebras with two involutions and two norms.
//!
//! The crate certifies the normed-algebra axioms of strict CQ*- and
//! HCQ*-algebras on coordinate spaces, computes the modular data of the
//! underlying left Hilbert algebra (`S = J Δ^{1/2}`), decides standardness,
//! and runs the GNS quotient for positive sesquilinear forms.
//!
//! All numerical code is generic over a real scalar [`Real`] (`f32` or `f64`);
//! the `*64` aliases below fix the scalar to `f64`, which is what the file
//! formats and the command-line tool use.

pub mod algebra;
pub mod gallery;
pub mod gns;
pub mod hcq;
pub mod io;
pub mod linalg;
pub mod modular;
pub mod report;
mod sample;
pub mod vn;

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

pub use algebra::AlgebraSpec;
pub use gns::{FormSpec, GnsResult};
pub use linalg::{AntilinearMap, CMatrix, CVector, GramMatrix};
pub use modular::ModularData;
pub use report::Check;
pub use vn::VNAlgebra;

/// Real scalar the library is generic over.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {}

impl<T> Real for T where T: RealField + Copy + FromPrimitive + ToPrimitive {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

/// Lossy conversion to `f64` for reports.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub type Complex64 = num_complex::Complex<f64>;
pub type CMatrix64 = linalg::CMatrix<f64>;
pub type CVector64 = linalg::CVector<f64>;
pub type GramMatrix64 = linalg::GramMatrix<f64>;
pub type AntilinearMap64 = linalg::AntilinearMap<f64>;
pub type AlgebraSpec64 = algebra::AlgebraSpec<f64>;
pub type ModularData64 = modular::ModularData<f64>;
pub type VNAlgebra64 = vn::VNAlgebra<f64>;
pub type FormSpec64 = gns::FormSpec<f64>;
pub type GnsResult64 = gns::GnsResult<f64>;
pub type Settings64 = Settings<f64>;
pub type Tolerances64 = Tolerances<f64>;

/// Numerical thresholds shared by every check.
///
/// `eq` bounds operator-identity residuals (relative to operand norms),
/// `herm` the Hermitian defect of Gram and form matrices, `pd` the smallest
/// admissible eigenvalue relative to the largest, `rank` the relative
/// singular-value cutoff for rank and nullspace decisions, and `ineq` the
/// additive slack of norm inequalities (scaled by the operands).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    pub eq: T,
    pub herm: T,
    pub pd: T,
    pub rank: T,
    pub ineq: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            eq: lit(1e-9),
            herm: lit(1e-10),
            pd: lit(1e-12),
            rank: lit(1e-10),
            ineq: lit(1e-9),
        }
    }
}

/// Tolerances plus the sampling schedule of randomized checks.
///
/// Sampled checks draw from a ChaCha stream seeded with `seed`, so reports
/// are reproducible for fixed settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings<T> {
    pub tol: Tolerances<T>,
    pub samples: usize,
    pub seed: u64,
}

impl<T: Real> Default for Settings<T> {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            samples: 64,
            seed: 0x5eed_c0de,
        }
    }
}
