//! Young's orthogonal form for symmetric groups.
//!
//! One irreducible representation per partition of n, with basis indexed by
//! standard Young tableaux. The image of the adjacent transposition (k, k+1)
//! mixes a tableau with the tableau obtained by swapping k and k+1, with
//! coefficients determined by the axial distance between the two entries.
//! The resulting generator images are real orthogonal, hence already unitary.

use std::collections::HashMap;

use nalgebra::DMatrix;

/// Partitions of `n` in descending-lexicographic order: [n] first, [1,..,1] last.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(remaining: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        let hi = max_part.min(remaining);
        for part in (1..=hi).rev() {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

/// A standard Young tableau stored as the (row, col) of each entry 1..=n.
type Tableau = Vec<(u8, u8)>;

/// All standard Young tableaux of the given shape, in the deterministic order
/// produced by placing 1..=n into the lowest admissible row first.
pub fn standard_tableaux(shape: &[usize]) -> Vec<Tableau> {
    let n: usize = shape.iter().sum();
    let rows = shape.len();
    let mut filled = vec![0usize; rows]; // cells filled per row
    let mut cur: Tableau = Vec::with_capacity(n);
    let mut out = Vec::new();
    fn rec(
        k: usize,
        n: usize,
        shape: &[usize],
        filled: &mut [usize],
        cur: &mut Tableau,
        out: &mut Vec<Tableau>,
    ) {
        if k == n {
            out.push(cur.clone());
            return;
        }
        for r in 0..shape.len() {
            let c = filled[r];
            if c < shape[r] && (r == 0 || filled[r - 1] > c) {
                filled[r] += 1;
                cur.push((r as u8, c as u8));
                rec(k + 1, n, shape, filled, cur, out);
                cur.pop();
                filled[r] -= 1;
            }
        }
    }
    rec(0, n, shape, &mut filled, &mut cur, &mut out);
    out
}

/// Dimension by the hook length formula (independent of the enumeration).
#[cfg(test)]
pub fn hook_length_dimension(shape: &[usize]) -> usize {
    let n: usize = shape.iter().sum();
    let cols: Vec<usize> = (0..shape.first().copied().unwrap_or(0))
        .map(|c| shape.iter().filter(|&&len| len > c).count())
        .collect();
    let mut numerator = 1u128;
    for k in 2..=n {
        numerator *= k as u128;
    }
    let mut denom = 1u128;
    for (r, &len) in shape.iter().enumerate() {
        for (c, &col_len) in cols.iter().enumerate().take(len) {
            let hook = (len - c) + (col_len - r) - 1;
            denom *= hook as u128;
        }
    }
    (numerator / denom) as usize
}

/// Generator images for the adjacent transpositions s_1..s_{n-1} of the irrep
/// labelled by `shape`. For n = 1 factories return a single identity image so
/// the list stays aligned with the trivial group's generator list.
pub fn orthogonal_images(shape: &[usize]) -> Vec<DMatrix<f64>> {
    let n: usize = shape.iter().sum();
    let tableaux = standard_tableaux(shape);
    let dim = tableaux.len();
    if n == 1 {
        return vec![DMatrix::identity(1, 1)];
    }
    let index: HashMap<&Tableau, usize> = tableaux.iter().zip(0..).collect();
    let mut images = Vec::with_capacity(n - 1);
    for k in 0..n - 1 {
        // s_k swaps entries k+1 and k+2 (1-based)
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for (t, tab) in tableaux.iter().enumerate() {
            let (r1, c1) = tab[k];
            let (r2, c2) = tab[k + 1];
            let d = (c2 as i64 - r2 as i64) - (c1 as i64 - r1 as i64);
            let inv_d = 1.0 / d as f64;
            m[(t, t)] = inv_d;
            if d.abs() >= 2 {
                let mut swapped = tab.clone();
                swapped.swap(k, k + 1);
                let t2 = index[&swapped];
                let off = (1.0 - inv_d * inv_d).sqrt();
                m[(t, t2)] = off;
            }
        }
        images.push(m);
    }
    images
}
