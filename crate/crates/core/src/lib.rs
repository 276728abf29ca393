//! Continuous-variable optical teleportation in the Heisenberg picture.
//!
//! Field modes are exact linear combinations of independent vacuum
//! annihilation and creation operators ([`mode`]). Optical elements and the
//! teleporter circuits built from them ([`circuit`]) transform those
//! coefficients; [`metrics`] turns the results into added noise, fidelity and
//! transfer figures. Circuits can be written in a small text language
//! ([`dsl`]), and every number can be cross-checked against a truncated
//! number-basis simulation ([`fock`]).

pub mod circuit;
pub mod cli;
pub mod dsl;
pub mod fock;
pub mod metrics;
pub mod mode;

pub use circuit::{Circuit, CircuitBuilder, CircuitError, RunResult, Step};
pub use mode::{BogoliubovMode, Coeff, VacuumBasis};
