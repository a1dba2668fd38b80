//! Empirical spectra of `P_X / sqrt(|G|)`.
//!
//! The Fourier path scales each block `x_hat(Lambda) / sqrt(|G|)` and takes
//! its eigenvalues or singular values, each entering with weight
//! `dim(Lambda) / |G|` (a block eigenvalue of the convolution operator has
//! algebraic multiplicity dim). The dense path decomposes the full
//! convolution matrix and serves as the oracle.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::fourier_all;
use crate::group::FiniteGroup;
use crate::linalg;
use crate::noise::{sample_noise, NoiseSpec, NoiseVector};
use crate::par::par_map;
use crate::rep::Irrep;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralKind {
    Eigen,
    Singular,
}

impl fmt::Display for SpectralKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectralKind::Eigen => "eigen",
            SpectralKind::Singular => "singular",
        })
    }
}

impl FromStr for SpectralKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eigen" | "eigenvalues" => Ok(SpectralKind::Eigen),
            "singular" | "singular-values" => Ok(SpectralKind::Singular),
            other => Err(Error::InvalidParameter(format!(
                "unknown spectrum kind `{other}` (expected eigen or singular)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub enum SpectralPoints {
    /// (eigenvalue, weight)
    Eigen(Vec<(Complex64, f64)>),
    /// (singular value, weight)
    Singular(Vec<(f64, f64)>),
}

/// Weighted multiset of spectrum points; weights sum to one.
#[derive(Debug, Clone)]
pub struct SpectralSample {
    pub points: SpectralPoints,
    /// The scale factor applied to the operator (1/sqrt(|G|)).
    pub normalization: f64,
}

impl SpectralSample {
    pub fn kind(&self) -> SpectralKind {
        match self.points {
            SpectralPoints::Eigen(_) => SpectralKind::Eigen,
            SpectralPoints::Singular(_) => SpectralKind::Singular,
        }
    }

    pub fn len(&self) -> usize {
        match &self.points {
            SpectralPoints::Eigen(v) => v.len(),
            SpectralPoints::Singular(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total_weight(&self) -> f64 {
        match &self.points {
            SpectralPoints::Eigen(v) => v.iter().map(|(_, w)| w).sum(),
            SpectralPoints::Singular(v) => v.iter().map(|(_, w)| w).sum(),
        }
    }

    /// Real projection used for CDF comparisons: singular values as-is,
    /// eigenvalues through their modulus (radial projection).
    pub fn radial(&self) -> Vec<(f64, f64)> {
        match &self.points {
            SpectralPoints::Eigen(v) => v.iter().map(|&(z, w)| (z.norm(), w)).collect(),
            SpectralPoints::Singular(v) => v.clone(),
        }
    }

    pub fn eigen_values(&self) -> Option<Vec<Complex64>> {
        match &self.points {
            SpectralPoints::Eigen(v) => Some(v.iter().map(|&(z, _)| z).collect()),
            SpectralPoints::Singular(_) => None,
        }
    }

    /// Expands the weighted points into the operator's spectrum multiset:
    /// a point of weight w repeats w * |G| times (the algebraic multiplicity).
    /// Only meaningful on single-draw samples where the weights are exact
    /// multiples of 1/|G|.
    pub fn eigen_multiset(&self) -> Option<Vec<Complex64>> {
        let order = (1.0 / self.normalization).powi(2);
        match &self.points {
            SpectralPoints::Eigen(v) => {
                let mut out = Vec::new();
                for &(z, w) in v {
                    let m = w * order;
                    debug_assert!((m - m.round()).abs() < 1e-6, "non-integer multiplicity");
                    out.extend(std::iter::repeat_n(z, m.round() as usize));
                }
                Some(out)
            }
            SpectralPoints::Singular(_) => None,
        }
    }

    pub fn singular_multiset(&self) -> Option<Vec<f64>> {
        let order = (1.0 / self.normalization).powi(2);
        match &self.points {
            SpectralPoints::Singular(v) => {
                let mut out = Vec::new();
                for &(x, w) in v {
                    let m = w * order;
                    debug_assert!((m - m.round()).abs() < 1e-6, "non-integer multiplicity");
                    out.extend(std::iter::repeat_n(x, m.round() as usize));
                }
                Some(out)
            }
            SpectralPoints::Eigen(_) => None,
        }
    }

    /// Pools samples of the same kind, dividing weights by the sample count.
    pub fn pool(samples: Vec<SpectralSample>) -> Result<SpectralSample> {
        let Some(first) = samples.first() else {
            return Err(Error::InvalidParameter("cannot pool zero samples".into()));
        };
        let kind = first.kind();
        let normalization = first.normalization;
        let scale = 1.0 / samples.len() as f64;
        let points = match kind {
            SpectralKind::Eigen => {
                let mut all = Vec::new();
                for s in &samples {
                    match &s.points {
                        SpectralPoints::Eigen(v) => {
                            all.extend(v.iter().map(|&(z, w)| (z, w * scale)))
                        }
                        _ => return Err(Error::InvalidParameter("mixed sample kinds".into())),
                    }
                }
                SpectralPoints::Eigen(all)
            }
            SpectralKind::Singular => {
                let mut all = Vec::new();
                for s in &samples {
                    match &s.points {
                        SpectralPoints::Singular(v) => {
                            all.extend(v.iter().map(|&(x, w)| (x, w * scale)))
                        }
                        _ => return Err(Error::InvalidParameter("mixed sample kinds".into())),
                    }
                }
                SpectralPoints::Singular(all)
            }
        };
        Ok(SpectralSample {
            points,
            normalization,
        })
    }
}

/// Spectrum through the block decomposition.
pub fn spectrum_via_fourier(
    group: &FiniteGroup,
    irreps: &[Irrep],
    x: &NoiseVector,
    kind: SpectralKind,
) -> Result<SpectralSample> {
    let order = group.order() as f64;
    let scale = Complex64::new(1.0 / order.sqrt(), 0.0);
    let blocks = fourier_all(&x.values, irreps, group)?;
    let mut eigen = Vec::new();
    let mut singular = Vec::new();
    for b in &blocks {
        let weight = b.dim as f64 / order;
        let scaled = b.matrix.map(|z| z * scale);
        match kind {
            SpectralKind::Eigen => {
                for ev in linalg::eigenvalues(&scaled)? {
                    eigen.push((ev, weight));
                }
            }
            SpectralKind::Singular => {
                for sv in linalg::singular_values(&scaled)? {
                    singular.push((sv, weight));
                }
            }
        }
    }
    Ok(SpectralSample {
        points: match kind {
            SpectralKind::Eigen => SpectralPoints::Eigen(eigen),
            SpectralKind::Singular => SpectralPoints::Singular(singular),
        },
        normalization: 1.0 / order.sqrt(),
    })
}

/// Spectrum of the dense `P_x / sqrt(|G|)` (oracle path, |G| <= 2000).
pub fn spectrum_direct(
    group: &FiniteGroup,
    x: &NoiseVector,
    kind: SpectralKind,
) -> Result<SpectralSample> {
    let order = group.order() as f64;
    let p = group.convolution_matrix(&x.values)?;
    let scaled = p.map(|z| z / order.sqrt());
    let weight = 1.0 / order;
    let points = match kind {
        SpectralKind::Eigen => SpectralPoints::Eigen(
            linalg::eigenvalues(&scaled)?
                .into_iter()
                .map(|z| (z, weight))
                .collect(),
        ),
        SpectralKind::Singular => SpectralPoints::Singular(
            linalg::singular_values(&scaled)?
                .into_iter()
                .map(|s| (s, weight))
                .collect(),
        ),
    };
    Ok(SpectralSample {
        points,
        normalization: 1.0 / order.sqrt(),
    })
}

/// Pools `trials` independent Fourier-path spectra (trials run in parallel,
/// reduced in trial order).
pub fn pooled_spectrum(
    group: &FiniteGroup,
    irreps: &[Irrep],
    kind: SpectralKind,
    spec: &NoiseSpec,
    trials: usize,
) -> Result<SpectralSample> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let results = par_map(trials, |t| {
        let x = sample_noise(spec, group.order(), t as u64);
        spectrum_via_fourier(group, irreps, &x, kind)
    });
    SpectralSample::pool(results.into_iter().collect::<Result<Vec<_>>>()?)
}

/// Empirical covariance structure of the Fourier block entries.
#[derive(Debug, Clone)]
pub struct CovarianceReport {
    pub trials: usize,
    /// max |correlation| over distinct (Re/Im, entry) coordinate pairs
    pub max_offdiag_corr: f64,
    /// max relative deviation of coordinate variances from |G| / (2 dim)
    pub max_diag_rel_dev: f64,
}

/// Estimates the covariance of all (Re, Im) entries of all blocks across
/// trials and compares with the prediction: pairwise uncorrelated
/// coordinates, each of variance |G| / (2 dim Lambda).
pub fn fourier_covariance_check(
    group: &FiniteGroup,
    irreps: &[Irrep],
    spec: &NoiseSpec,
    trials: usize,
) -> Result<CovarianceReport> {
    if trials < 1000 {
        return Err(Error::InvalidParameter(
            "covariance check needs at least 1000 trials".into(),
        ));
    }
    let dims: Vec<usize> = irreps.iter().map(|r| r.dim).collect();
    let n_coords = 2 * dims.iter().map(|d| d * d).sum::<usize>();

    let coords_per_trial = par_map(trials, |t| -> Result<Vec<f64>> {
        let x = sample_noise(spec, group.order(), t as u64);
        let blocks = fourier_all(&x.values, irreps, group)?;
        let mut coords = Vec::with_capacity(n_coords);
        for b in &blocks {
            for z in b.matrix.iter() {
                coords.push(z.re);
                coords.push(z.im);
            }
        }
        Ok(coords)
    });

    let mut sum = vec![0.0f64; n_coords];
    let mut cross = vec![0.0f64; n_coords * n_coords];
    let mut count = 0usize;
    for coords in coords_per_trial {
        let coords = coords?;
        for (i, &a) in coords.iter().enumerate() {
            sum[i] += a;
            let row = &mut cross[i * n_coords..(i + 1) * n_coords];
            for (r, &b) in row.iter_mut().zip(&coords) {
                *r += a * b;
            }
        }
        count += 1;
    }
    let nf = count as f64;
    let cov = |i: usize, j: usize| cross[i * n_coords + j] / nf - sum[i] / nf * sum[j] / nf;

    // expected variance per coordinate
    let mut expected = Vec::with_capacity(n_coords);
    for &d in &dims {
        let v = group.order() as f64 / (2.0 * d as f64);
        expected.extend(std::iter::repeat_n(v, 2 * d * d));
    }

    let mut max_diag_rel: f64 = 0.0;
    for (i, &e) in expected.iter().enumerate() {
        max_diag_rel = max_diag_rel.max((cov(i, i) - e).abs() / e);
    }
    let mut max_corr: f64 = 0.0;
    for i in 0..n_coords {
        for j in i + 1..n_coords {
            let c = cov(i, j) / (cov(i, i) * cov(j, j)).sqrt();
            max_corr = max_corr.max(c.abs());
        }
    }
    Ok(CovarianceReport {
        trials: count,
        max_offdiag_corr: max_corr,
        max_diag_rel_dev: max_diag_rel,
    })
}

/// One row of a block-moment estimate: mean of (1/d) tr (x_hat x_hat^* / |G|)^k.
#[derive(Debug, Clone)]
pub struct BlockMomentRow {
    pub label: String,
    pub dim: usize,
    pub k: usize,
    pub mean: f64,
    pub stderr: f64,
}

/// Monte Carlo normalized trace moments of selected Fourier blocks; used to
/// compare noise distributions against each other (moment universality).
pub fn block_moments(
    group: &FiniteGroup,
    irreps: &[Irrep],
    labels: &[&str],
    k_max: usize,
    spec: &NoiseSpec,
    trials: usize,
) -> Result<Vec<BlockMomentRow>> {
    let selected: Vec<&Irrep> = irreps
        .iter()
        .filter(|r| labels.contains(&r.label.as_str()))
        .collect();
    if selected.is_empty() {
        return Err(Error::InvalidParameter("no irreps match the labels".into()));
    }
    let order = group.order() as f64;
    let per_trial = par_map(trials, |t| -> Result<Vec<f64>> {
        let x = sample_noise(spec, group.order(), t as u64);
        let mut vals = Vec::with_capacity(selected.len() * k_max);
        for r in &selected {
            let b = crate::fourier::fourier_transform(&x.values, r, group)?;
            let m = (&b.matrix * b.matrix.adjoint()).map(|z| z / order);
            let mut power = DMatrix::<Complex64>::identity(r.dim, r.dim);
            for _ in 0..k_max {
                power = &power * &m;
                let tr: Complex64 = power.diagonal().iter().sum();
                vals.push(tr.re / r.dim as f64);
            }
        }
        Ok(vals)
    });
    let per_trial = per_trial.into_iter().collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for (si, r) in selected.iter().enumerate() {
        for k in 1..=k_max {
            let idx = si * k_max + (k - 1);
            let xs: Vec<f64> = per_trial.iter().map(|v| v[idx]).collect();
            let (mean, _) = linalg::mean_var(&xs);
            rows.push(BlockMomentRow {
                label: r.label.clone(),
                dim: r.dim,
                k,
                mean,
                stderr: linalg::stderr_of_mean(&xs),
            });
        }
    }
    Ok(rows)
}
