//! Voice transforms, reproducing kernels and coorbit norms for three
//! reproducing representations: translations on the line (band-limited
//! signals), the affine group (wavelets) and the affine group times the
//! circle (Schrödingerlets).
//!
//! Groups and Haar quadrature live in [`group`] and [`grid`]; sampled signals
//! and spectral atoms in [`signal`] and [`atom`]; group convolution in
//! [`convolution`]; the representations in [`voice`]; reproducing-space
//! membership and coorbit norms in [`coorbit`].

pub mod acceptance;
pub mod atom;
pub mod cli;
pub mod config;
pub mod convolution;
pub mod coorbit;
pub mod error;
pub mod grid;
pub mod group;
pub mod numeric;
pub mod reference;
pub mod signal;
pub mod testkit;
pub mod voice;

pub use error::{Error, Result};
pub use num_complex::Complex64;
