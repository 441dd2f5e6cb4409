//! The bound-state Coulomb (1/r) problem in `d` spatial dimensions.
//!
//! The crate is `no_std` and only needs an allocator. It covers four pieces
//! that cross-check each other:
//!
//! - [`spectrum`]: closed-form energies, Casimir eigenvalues of the hidden
//!   SO(d+1) symmetry and exact degeneracy counts.
//! - [`specialfn`]: Gegenbauer polynomials, associated Gegenbauer functions
//!   and the Kummer function `M(a, c, x)`.
//! - [`hypersphere`]: the hyperspherical chart, normalized hyperspherical
//!   harmonics and their orthonormality/eigenvalue checks.
//! - [`radial`]: analytic radial states and an independent finite-difference
//!   eigensolver for the radial equation.
//!
//! [`quadrature`] and [`tridiag`] hold the numerical plumbing shared by them.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod hypersphere;
pub mod quadrature;
pub mod radial;
pub mod specialfn;
pub mod spectrum;
pub mod tridiag;

pub use error::{Error, Result};
pub use hypersphere::{AngularChain, AzimuthalSign, Harmonic, HypersphericalPoint};
pub use quadrature::{QuadratureRule, WeightFunction};
pub use radial::{RadialGrid, RadialState};
pub use specialfn::GegenbauerParam;
pub use spectrum::{LevelIndex, PhysicalParams};

/// Value of a differential-equation residual together with the magnitude of
/// the terms that produced it, so callers can judge it relative to the
/// local size of the equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    /// `|value| / scale`, or `|value|` when every term vanished.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            libm::fabs(self.value) / self.scale
        } else {
            libm::fabs(self.value)
        }
    }
}
