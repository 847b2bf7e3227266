//! Exact verification of BGG-type resolutions for rational transfer matrices
//! and Q-operators of the classical Lie algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`coeff`] — exact rationals, Laurent polynomials and a float oracle;
//! * [`oscillator`] — normal-ordered oscillator algebra, Fock module and twisted traces;
//! * [`weyl`] — root data, Weyl groups, coset representatives and characters;
//! * [`lax`] — R-matrices, oscillator Lax matrices and their structural checks;
//! * [`transfer`] — monodromies, transfer matrices, Q-operators and the identities among them;
//! * [`cli`] — the suite runner behind the `qbgg` binary.
//!
//! All acceptance-grade checks run over [`coeff::ExactScalar`] with zero tolerance.

pub mod cli;
pub mod coeff;
pub mod error;
pub mod lax;
pub mod oscillator;
pub mod report;
pub mod transfer;
pub mod weyl;

pub use error::{QbggError, Result};
