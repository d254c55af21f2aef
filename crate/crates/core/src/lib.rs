//! Exact computations in free vertex algebras and lattice vertex algebras.

pub mod basis;
pub mod cli;
pub mod derivations;
pub mod fock;
pub mod freeva;
pub mod rewrite;
pub mod signature;
