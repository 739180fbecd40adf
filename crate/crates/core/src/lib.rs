//! Origin analysis for the radial Schrödinger equation in two and three
//! dimensions.
//!
//! The crate classifies the two independent solutions of the radial equation
//! near `r = 0`, computes exactly the Dirac-delta terms that the singular
//! branch injects into the full Schrödinger equation, and checks those terms
//! numerically by pairing against smooth probes. A shooting solver and the
//! circular-well worked example round out the toolkit.
//!
//! Everything here is `no_std` with `alloc`; file formats, the command line
//! and threading live in the `radial-gate` companion crate.
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`special_fn`] | integer-order `J_m`, `Y_m`, derivatives, zeros |
//! | [`origin`] | potentials, problems, Frobenius exponents, `u`-transform |
//! | [`anomaly`] | exact delta sums, Laplacian anomalies, `Q` terms, pairings |
//! | [`weak`] | probes, ε-excised weak residuals, coefficient recovery |
//! | [`radial`] | radial ODE, shooting spectra, circular well, `Y₀` pseudo-state |

#![no_std]
// `!(x > 0.0)` is how NaN gets rejected along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod anomaly;
mod error;
pub mod extrapolate;
pub(crate) mod math;
pub mod ode;
pub mod origin;
pub mod quadrature;
pub mod radial;
pub mod special_fn;
pub mod weak;

pub use error::{Error, Result};
pub use num_complex::Complex64;
