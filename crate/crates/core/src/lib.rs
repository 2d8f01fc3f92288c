//! Quartic nonlinear Schrödinger model of surface waves on superfluid ⁴He films.

pub mod config;
pub mod diff;
pub mod dispersion;
pub mod elliptic;
pub mod grid;
pub mod io;
pub mod params;
pub mod profile;
pub mod scenario;
pub mod solutions;
pub mod spectral;
pub mod suite;
pub mod verify;
