//! Exact one-particle reduced density matrix functionals for bosons.
//!
//! The crate covers two model systems:
//!
//! * the N-boson Hubbard dimer: exact diagonalization in the
//!   configuration basis, the pure interaction functional by constrained
//!   search over the 1RDM disc, its lower convex envelope, the complete
//!   v-representability classification, the boundary expansion of the
//!   functional and the diverging condensation force, and ground-state
//!   recovery by direct minimization of the total energy functional;
//! * homogeneous dilute Bose gases in the Bogoliubov regime: the
//!   closed-form per-mode functional and its Legendre-Fenchel duality
//!   with the mode energies.
//!
//! The crate is `no_std` (with `alloc`); all IO and file formats live in
//! the companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bogoliubov;
pub mod boundary;
pub mod dimer;
pub mod energy;
pub mod envelope;
pub mod error;
pub mod functional;
pub mod hull;
pub mod linalg;
pub mod optim;
pub mod search;
pub mod vrep;

pub use dimer::{ConfigurationVector, DimerParams, GroundStateResult, OneParticleRdm};
pub use error::{
    BogoliubovError, BoundaryError, DimerError, EnergyError, EnvelopeError, FunctionalError,
};
pub use functional::{FunctionalGrid, FunctionalKind, FunctionalValue, GridSample};
