//! Simulator for Grover's fixed-point (π/3) quantum search.
//!
//! The crate is layered bottom-up:
//!
//! * [`quantum`]: dense complex states, unitaries and density matrices.
//! * [`search`]: phase oracles, the recursive search operator, closed forms
//!   and query counts.
//! * [`pulse`]: lowering of gate lists onto a two-spin (¹H/¹³C) Ising system,
//!   coherent error models and BB1 composite pulses.
//! * [`readout`]: crush gradient, doublet spectra and the mapping between
//!   spectral intensity and success probability.

pub mod error;
pub mod numfmt;
pub mod pulse;
pub mod quantum;
pub mod readout;
pub mod search;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
