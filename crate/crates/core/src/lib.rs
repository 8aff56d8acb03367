//! Trace-rule probabilities for perception sets.
//!
//! A deterministic classical cycle spends a fraction `f_i` of its period in
//! state `i`. Writing perception sets as diagonal projectors `P(S)` and the
//! fractions as a diagonal density matrix `ρ` turns the probability of a set
//! into `tr(P(S) ρ)`. Replacing the diagonal matrices by Hermitian projectors
//! and densities gives the quantum rule; relaxing projectors to positive
//! operators gives additive (possibly unnormalized) measures.
//!
//! Modules:
//! - [`matcore`]: dense complex matrices, Hermitian eigensolver, class checks
//! - [`classical`]: cycles, characteristic vectors, diagonal embedding
//! - [`quantum`]: validated projectors/densities, trace rule, unitary invariance
//! - [`superselect`]: Hamiltonian evolution, dephasing, superselection blocks
//! - [`measure`]: positive-operator measures over finite perception algebras
//! - [`sampler`]: seeded Monte Carlo realization of the probabilities
//! - [`cli`]: batch front-end over JSON system specs

pub mod classical;
pub mod cli;
pub mod error;
pub mod matcore;
pub mod measure;
pub mod quantum;
pub mod sampler;
pub mod superselect;

pub use error::{Error, Result};
