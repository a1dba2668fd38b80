//! Dense decompositions and multiset spectrum matching.
//!
//! Blocks are small (dimension up to ~100) and the dense oracle tops out at
//! order 2000, so everything runs through dense complex Schur / SVD.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const SCHUR_EPS: f64 = 1.0e-13;
const SCHUR_MAX_ITER: usize = 100_000;

/// Eigenvalues of a general complex matrix, unordered.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = m
        .clone()
        .try_schur(SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::NumericalFailure("Schur iteration did not converge".into()))?;
    let eig = schur
        .eigenvalues()
        .ok_or_else(|| Error::NumericalFailure("Schur form not triangular".into()))?;
    Ok(eig.iter().copied().collect())
}

/// Singular values, descending, clamped to be nonnegative.
pub fn singular_values(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let svd = m
        .clone()
        .try_svd(false, false, SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
    Ok(svd.singular_values.iter().map(|&s| s.max(0.0)).collect())
}

/// Max |entry| deviation from the identity.
pub fn identity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            };
            dev = dev.max((m[(i, j)] - target).norm());
        }
    }
    dev
}

fn lex_sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
    v.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("NaN in spectrum")
    });
    v
}

/// Maximum displacement when the two multisets are matched point-to-point.
///
/// Strategy: lexicographic sort and index-wise pairing first, then greedy
/// nearest-neighbour, then a Hungarian assignment if the greedy residual
/// still exceeds `tol`. The returned value is the max matched distance of
/// the best strategy tried.
pub fn match_displacement(a: &[Complex64], b: &[Complex64], tol: f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidParameter(format!(
            "multiset sizes differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let sa = lex_sorted(a.to_vec());
    let sb = lex_sorted(b.to_vec());
    let lex: f64 = sa
        .iter()
        .zip(&sb)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    if lex <= tol {
        return Ok(lex);
    }
    let greedy = greedy_displacement(&sa, &sb);
    if greedy <= tol {
        return Ok(greedy);
    }
    let hungarian = hungarian_displacement(&sa, &sb);
    Ok(lex.min(greedy).min(hungarian))
}

fn greedy_displacement(a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = a.len();
    let mut used = vec![false; n];
    let mut worst: f64 = 0.0;
    for x in a {
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        for (j, y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).norm();
                if d < best {
                    best = d;
                    best_j = j;
                }
            }
        }
        used[best_j] = true;
        worst = worst.max(best);
    }
    worst
}

/// Hungarian algorithm (shortest augmenting paths with potentials) on the
/// pairwise distance matrix; minimizes the total displacement and reports the
/// largest matched edge.
#[allow(clippy::needless_range_loop)] // 1-based index arrays, classic formulation
fn hungarian_displacement(a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = a.len();
    let cost = |i: usize, j: usize| (a[i] - b[j]).norm();
    const INF: f64 = f64::INFINITY;
    // 1-based arrays in the classic formulation
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut matched_col_to_row = vec![0usize; n + 1];
    for i in 1..=n {
        matched_col_to_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; n + 1];
        let mut usedc = vec![false; n + 1];
        loop {
            usedc[j0] = true;
            let i0 = matched_col_to_row[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !usedc[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if usedc[j] {
                    u[matched_col_to_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_col_to_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_col_to_row[j0] = matched_col_to_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for j in 1..=n {
        let i = matched_col_to_row[j];
        if i > 0 {
            worst = worst.max(cost(i - 1, j - 1));
        }
    }
    worst
}

/// Sample mean and unbiased variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var)
}

/// Standard error of the mean.
pub fn stderr_of_mean(xs: &[f64]) -> f64 {
    let (_, var) = mean_var(xs);
    (var / xs.len() as f64).sqrt()
}

/// Fourth central sample moment.
pub fn central_moment4(xs: &[f64]) -> f64 {
    let (mean, _) = mean_var(xs);
    xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / xs.len() as f64
}
