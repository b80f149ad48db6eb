//! Exact simulation of entanglement purification driven by the free
//! dynamics of spin-1/2 chains.
//!
//! Alice and Bob share `n` entangled pairs laid out as two open chains
//! (Alice holds the odd sites, Bob the even ones). The chains evolve under
//! an exchange Hamiltonian, a subset of spins is measured in the `S_z`
//! basis and the surviving pair is kept when the outcomes match an accepted
//! pattern. Everything here is computed with dense state vectors or
//! density operators, so the crate is limited to a handful of spins.
//!
//! The crate is `no_std` and only needs `alloc`; file formats and the
//! command-line front end live in the `spinpurify-cli` crate.
//!
//! Conventions used throughout:
//!
//! * sites are numbered from 1 and site 1 is the most significant bit of a
//!   computational basis index;
//! * `|0⟩ = |↓⟩` and `|1⟩ = |↑⟩`, so `S_z|1⟩ = +½|1⟩`;
//! * `ħ = 1` and times are dimensionless (`Jt`).

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod dynamics;
mod error;
pub mod hamiltonian;
pub mod numerics;
pub mod protocols;
pub mod spin;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use dynamics::{bell_dephase, evolve, measure_sz, postselect, MeasurementRecord};
pub use hamiltonian::{
    bilateral_hamiltonian, chain_hamiltonian, invariant_subspace_check, ChainLayout, CouplingSpec,
};
pub use numerics::{
    hermitian_eig, kron, partial_trace, propagator, DenseOperator, QuantumState, Spectrum,
};
pub use protocols::{ProtocolOutcome, PureFilterSpec, SiteSet};
pub use spin::{bell_state, werner_state, BellLabel, SpinOperatorSet};
