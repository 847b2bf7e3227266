//! Oscillator (Heisenberg–Weyl) algebra in normal-ordered canonical form,
//! its Fock module, generator substitutions and twisted Fock traces.
//!
//! The algebra has pairs `(a_p, ā_p)` with `[a_p, ā_q] = δ_pq` and all other
//! brackets zero. A normal-ordered monomial keeps every creation operator
//! `ā` to the left of every annihilation operator `a`.

mod fock;
pub mod oracle;
mod poly;
mod subst;

pub use fock::{
    apply_to_fock, fock_trace, fock_trace_partial, truncated_matrix, FockVector, TwistWeights,
};
pub(crate) use poly::binomial;
pub use poly::{normal_mul, NormalMonomial, NormalPoly, OscSpace};
pub use subst::{substitute_generators, Substitution, SubstitutionBuilder};
