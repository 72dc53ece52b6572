//! Numerical laboratory for the ground-state energy of a polaron in a strong
//! magnetic field.
//!
//! The crate is layered bottom-up: [`grid`], [`special`] and [`quad`] provide
//! the substrate; [`oned`] solves the effective one-dimensional problem;
//! [`landau`] holds the transverse (Landau-level) reductions; [`coulomb`]
//! evaluates the longitudinal Coulomb energy and its decomposition; [`pekar`]
//! minimizes the product-ansatz Pekar functional; [`certificate`] assembles
//! the lower-bound constant chain.

pub mod error;
pub mod grid;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
pub use grid::{density_fourier, kinetic, mass, quartic, DensityProfile, DensitySpectrum, Field1D, Grid1D};

mod flow;
pub mod oned;
pub mod landau;
pub mod coulomb;
pub mod pekar;
pub mod certificate;
