//! Boundary-integral spectral solver for two-dimensional Dirac operators with
//! δ-shell interactions `(ησ0 + τσ3)δ_Σ` supported on smooth closed curves.
//!
//! Discrete eigenvalues in the gap `(−|m|, |m|)` are located as the points
//! where the Birman–Schwinger operator `B(z) = I + (ησ0 + τσ3)C_z` loses
//! injectivity. `C_z` is discretized by a Nyström scheme with spectrally
//! accurate quadrature for its logarithmic and Cauchy singularities.

pub mod bem;
pub mod cli;
pub mod fourier;
pub mod geometry;
pub mod kernel;
pub mod spectral;
pub mod validation;
