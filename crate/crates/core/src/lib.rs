//! Random convolution operators on finite groups.
//!
//! A function `X: G -> C` on a finite group defines the convolution operator
//! `P_X = [X(h g^{-1})]_{h,g}`, a `|G| x |G|` matrix built from only `|G|`
//! random inputs. This crate constructs concrete groups (cyclic, dihedral,
//! symmetric, direct products), their complete sets of irreducible unitary
//! representations, and the group Fourier transform that block-diagonalizes
//! `P_X`. On top of that it samples eigenvalue/singular-value spectra of
//! `P_X / sqrt(|G|)`, evaluates the limiting Ginibre mixture laws driven by
//! the Plancherel measure, estimates *-moments of independent convolution
//! families against a non-crossing-pairing oracle, and runs central limit
//! experiments for linear eigenvalue statistics.

pub mod clt;
pub mod error;
pub mod experiment;
pub mod fourier;
pub mod freeness;
pub mod group;
pub mod linalg;
pub mod noise;
mod par;
pub mod rep;
pub mod rng;
pub mod spectral;
pub mod theory;
mod young;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupKind};
pub use noise::{NoiseDistribution, NoiseSpec, NoiseVector};
pub use rep::{Dim, DimensionMeasure, Irrep};
pub use spectral::{SpectralKind, SpectralSample};
pub use theory::TheoreticalLaw;
