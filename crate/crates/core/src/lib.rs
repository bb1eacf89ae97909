//! Numerical core for an electron confined to a plane a distance `D` above a
//! magnetic monopole.
//!
//! Everything here works in the natural units of the problem: lengths in `D`,
//! energies in `E0 = ħ²/(2 m* D²)` and times in `t0 = ħ/E0`. The crate is
//! `no_std` (it needs `alloc`) and every function is a pure function of its
//! arguments, so results are reproducible bit-for-bit and safe to compute on
//! any number of threads.
//!
//! Module map:
//!
//! - [`model`]: problem parameters, potentials, turning points, units.
//! - [`classical`]: orbit integration and classification, circular orbits,
//!   harmonic bound-state estimate.
//! - [`semiclassical`]: Bohr–Sommerfeld / WKB levels, wavefunctions and
//!   tunnelling half-lives.
//! - [`fdm`]: finite-difference spectrum, quasi-bound selection, counts,
//!   threshold strength and survival-probability lifetimes.
//! - [`scattering`]: variable phase method, resonance scan and width fit.
//! - [`tridiag`]: symmetric tridiagonal eigensolver used by [`fdm`].

#![no_std]
// `!(x > 0.0)` guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classical;
pub mod error;
pub mod fdm;
pub(crate) mod math;
pub mod model;
pub mod numeric;
pub mod scattering;
pub mod semiclassical;
pub mod tridiag;

pub use error::{Error, Result};
pub use model::{MonopoleConfig, PhysicalScales, PotentialKind};
