//! Exact numerics for sparse Majorana Hamiltonians.
//!
//! The crate covers the full analysis pipeline used to compare learned
//! few-term Majorana Hamiltonians against the SYK model:
//!
//! - [`pauli_algebra`]: bit-mask Majorana strings and their Jordan–Wigner
//!   realization as dense matrices.
//! - [`models`]: the learned Models 1–3, SYK samples, randomized variants and
//!   all-to-all Ising models.
//! - [`spectra`]: thermal states, Heisenberg evolution, two- and four-point
//!   correlators.
//! - [`teleport`]: the two-sided teleportation protocol on a thermofield
//!   double and its mutual-information signal.
//! - [`sizewinding`]: operator coefficient extraction and the size-winding
//!   metrics (phase alignment, linear slope).
//! - [`experiments`]: the figure-level experiment runner behind the
//!   `wormhole-lab` binary.
//!
//! All Majorana operators are normalized so that `{ψ^i, ψ^j} = δ_ij`, i.e.
//! `(ψ^i)^2 = 1/2`. Majorana indices are 1-based throughout the public API.

pub mod error;
pub mod experiments;
pub mod models;
pub mod output;
pub mod pauli_algebra;
pub mod sizewinding;
pub mod spectra;
pub mod teleport;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
