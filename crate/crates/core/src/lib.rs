//! Exact verification and search for the finite objects behind spectral
//! sets and tilings of the real line: spectral pairs of finite rational
//! sets, tilings of the integers by periodic complements, universal tiling
//! complements for families of spectra, and rational interval unions built
//! from such families.

pub mod cli;
pub mod error;
pub mod exactmath;
pub mod intervals;
pub mod spectra;
pub mod tilings;
pub mod utc;

pub use error::{Error, Result};
