//! Group Fourier transform `x_hat(Lambda) = sum_g x_g Lambda(g)`.
//!
//! The sum is accumulated along a breadth-first walk of the Cayley graph:
//! a node's matrix is its parent's matrix times one generator image, and only
//! the previous level's matrices are kept alive. Peak memory is therefore
//! max-level-width x dim^2 rather than |G| x dim^2, which is what makes the
//! large symmetric groups workable. Irreps with real orthogonal images
//! (Young's orthogonal form) take an all-real walk and split the complex
//! weights into two real accumulators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::rep::Irrep;

/// One Fourier block `x_hat(Lambda)`.
#[derive(Debug, Clone)]
pub struct FourierBlock {
    pub label: String,
    pub dim: usize,
    pub matrix: DMatrix<Complex64>,
}

/// Computes `x_hat(Lambda)` for one irrep.
pub fn fourier_transform(
    x: &[Complex64],
    irrep: &Irrep,
    group: &FiniteGroup,
) -> Result<FourierBlock> {
    if x.len() != group.order() {
        return Err(Error::InvalidParameter(format!(
            "noise length {} != group order {}",
            x.len(),
            group.order()
        )));
    }
    let matrix = match &irrep.real_images {
        Some(images) => real_walk(x, images, irrep.dim, group),
        None => complex_walk(x, &irrep.generator_images, irrep.dim, group),
    };
    Ok(FourierBlock {
        label: irrep.label.clone(),
        dim: irrep.dim,
        matrix,
    })
}

/// All blocks of a complete irrep list.
pub fn fourier_all(
    x: &[Complex64],
    irreps: &[Irrep],
    group: &FiniteGroup,
) -> Result<Vec<FourierBlock>> {
    irreps
        .iter()
        .map(|r| fourier_transform(x, r, group))
        .collect()
}

fn complex_walk(
    x: &[Complex64],
    images: &[DMatrix<Complex64>],
    dim: usize,
    group: &FiniteGroup,
) -> DMatrix<Complex64> {
    let bfs = group.bfs();
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    let mut prev: Vec<DMatrix<Complex64>> = Vec::new();
    for (li, level) in bfs.levels.iter().enumerate() {
        let mut cur = Vec::with_capacity(level.len());
        for node in level {
            let m = if li == 0 {
                DMatrix::identity(dim, dim)
            } else {
                &prev[node.parent_slot] * &images[node.generator]
            };
            let w = x[node.element];
            acc.zip_apply(&m, |a, b| *a += w * b);
            cur.push(m);
        }
        prev = cur;
    }
    acc
}

fn real_walk(
    x: &[Complex64],
    images: &[DMatrix<f64>],
    dim: usize,
    group: &FiniteGroup,
) -> DMatrix<Complex64> {
    let bfs = group.bfs();
    let mut acc_re = DMatrix::<f64>::zeros(dim, dim);
    let mut acc_im = DMatrix::<f64>::zeros(dim, dim);
    let mut prev: Vec<DMatrix<f64>> = Vec::new();
    for (li, level) in bfs.levels.iter().enumerate() {
        let mut cur = Vec::with_capacity(level.len());
        for node in level {
            let m = if li == 0 {
                DMatrix::identity(dim, dim)
            } else {
                &prev[node.parent_slot] * &images[node.generator]
            };
            let w = x[node.element];
            acc_re.zip_apply(&m, |a, b| *a += w.re * b);
            acc_im.zip_apply(&m, |a, b| *a += w.im * b);
            cur.push(m);
        }
        prev = cur;
    }
    DMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(acc_re[(i, j)], acc_im[(i, j)])
    })
}

/// Fourier inversion: `x_g = (1/|G|) sum_Lambda dim tr(Lambda(g^{-1}) x_hat)`.
/// Used as an oracle for the transform.
pub fn fourier_inverse(
    blocks: &[FourierBlock],
    irreps: &[Irrep],
    group: &FiniteGroup,
) -> Result<Vec<Complex64>> {
    let order = group.order();
    let mut out = vec![Complex64::default(); order];
    let bfs = group.bfs();
    for (r, block) in irreps.iter().zip(blocks) {
        if r.dim != block.dim {
            return Err(Error::InvalidParameter(
                "block/irrep dimension mismatch".into(),
            ));
        }
        let dim_f = r.dim as f64;
        // walk once, using Lambda(g^{-1}) = Lambda(g)^* for unitary irreps
        let mut prev: Vec<DMatrix<Complex64>> = Vec::new();
        for (li, level) in bfs.levels.iter().enumerate() {
            let mut cur = Vec::with_capacity(level.len());
            for node in level {
                let m = if li == 0 {
                    DMatrix::identity(r.dim, r.dim)
                } else {
                    &prev[node.parent_slot] * &r.generator_images[node.generator]
                };
                // tr(Lambda(g)^* x_hat) = sum_{ij} conj(Lambda(g)_{ji}) ... = <x_hat, Lambda(g)>
                let mut tr = Complex64::default();
                for i in 0..r.dim {
                    for j in 0..r.dim {
                        tr += m[(j, i)].conj() * block.matrix[(j, i)];
                    }
                }
                out[node.element] += tr * dim_f;
                cur.push(m);
            }
            prev = cur;
        }
    }
    let scale = 1.0 / order as f64;
    for v in &mut out {
        *v *= scale;
    }
    Ok(out)
}
