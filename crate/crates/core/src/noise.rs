//! Noise vectors: i.i.d. complex draws indexed by group elements.
//!
//! All three distributions satisfy `E xi = E xi^2 = 0`, `E|xi|^2 = 1`, the
//! moment conditions under which the singular-value limit law holds.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, substream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseDistribution {
    /// Re and Im independent N(0, 1/2).
    ComplexGaussian,
    /// Uniform on {1, i, -1, -i}.
    FourthRoots,
    /// e^{i theta}, theta uniform.
    UniformCircle,
}

impl fmt::Display for NoiseDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NoiseDistribution::ComplexGaussian => "complex-gaussian",
            NoiseDistribution::FourthRoots => "fourth-roots",
            NoiseDistribution::UniformCircle => "uniform-circle",
        };
        f.write_str(s)
    }
}

impl FromStr for NoiseDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex-gaussian" | "gaussian" => Ok(NoiseDistribution::ComplexGaussian),
            "fourth-roots" => Ok(NoiseDistribution::FourthRoots),
            "uniform-circle" => Ok(NoiseDistribution::UniformCircle),
            other => Err(Error::InvalidParameter(format!(
                "unknown noise distribution `{other}` (expected complex-gaussian, fourth-roots or uniform-circle)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub distribution: NoiseDistribution,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(distribution: NoiseDistribution, seed: u64) -> Self {
        NoiseSpec { distribution, seed }
    }

    pub fn gaussian(seed: u64) -> Self {
        NoiseSpec::new(NoiseDistribution::ComplexGaussian, seed)
    }
}

/// One realization of `X = (X_g)_{g in G}`.
#[derive(Debug, Clone)]
pub struct NoiseVector {
    pub values: Vec<Complex64>,
    pub distribution: NoiseDistribution,
    pub seed: u64,
}

impl NoiseVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn draw(distribution: NoiseDistribution, rng: &mut impl rand_core::RngCore) -> Complex64 {
    match distribution {
        NoiseDistribution::ComplexGaussian => {
            // |z|^2 ~ Exp(1), phase uniform: standard complex Gaussian.
            let r = (-rng::uniform_pos(rng).ln()).sqrt();
            let theta = TAU * rng::uniform(rng);
            Complex64::from_polar(r, theta)
        }
        NoiseDistribution::FourthRoots => match rng.next_u64() & 3 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        },
        NoiseDistribution::UniformCircle => Complex64::from_polar(1.0, TAU * rng::uniform(rng)),
    }
}

/// `n` i.i.d. draws for trial `trial`, deterministic given `(spec.seed, trial)`.
pub fn sample_noise(spec: &NoiseSpec, n: usize, trial: u64) -> NoiseVector {
    sample_noise_labeled(spec, n, trial, "noise")
}

/// Substream variant for experiments that need several independent vectors
/// per trial (label them "noise-1", "noise-2", ...).
pub fn sample_noise_labeled(spec: &NoiseSpec, n: usize, trial: u64, label: &str) -> NoiseVector {
    let mut rng = substream(spec.seed, trial, label);
    let values = (0..n).map(|_| draw(spec.distribution, &mut rng)).collect();
    NoiseVector {
        values,
        distribution: spec.distribution,
        seed: spec.seed,
    }
}
