//! Two-qubit entanglement measures built around the modified relative
//! entropy of entanglement (MRE).
//!
//! A pure state `psi` is assigned a separable relative state `R(psi)` (the
//! product mixture along its reduced polarization axes), for which
//! `S(psi || R(psi))` equals the entanglement of formation. A mixed state is
//! measured by minimizing `S(rho || sum_i p_i R(psi_i))` over its pure-state
//! ensembles `{p_i, psi_i}`.
//!
//! Modules, bottom up:
//!
//! - [`qmat`]: dense 2x2 / 4x4 complex kernel (Kronecker products,
//!   deterministic Hermitian eigensystems, partial trace and transpose)
//! - [`states`]: validated density matrices and the Werner, extended Werner
//!   and lambda families
//! - [`measures`]: Pauli coefficients, entropies, relative states, Wootters
//!   EF, PPT test
//! - [`decomp`]: ensembles, MRE/EF objectives and the ensemble search
//! - [`closedform`]: closed forms for the Werner families
//! - [`report`]: measure reports, sweeps and serialization used by the `mre` binary

pub mod closedform;
pub mod decomp;
pub mod error;
pub mod measures;
pub mod qmat;
pub mod report;
pub mod statefile;
pub mod states;

pub use error::{Error, Result};
