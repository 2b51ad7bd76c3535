//! Verification toolkit for the periodic Benjamin–Ono equation: classical
//! multi-phase solutions, the spectral theory of their Lax operators, the
//! quantum hierarchy on Fock space, and the correspondence between the quantum
//! spectrum and renormalized Bohr–Sommerfeld energies.

pub mod correspondence;
pub mod error;
pub mod fock;
pub mod multiphase;
pub mod partition;
pub mod profiles;
pub mod report;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use partition::Partition;
pub use profiles::{Anisotropy, Profile};
