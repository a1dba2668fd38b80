//! Complete sets of irreducible unitary representations and the Plancherel
//! measure.
//!
//! Irreps are stored as generator images only; an arbitrary element is
//! evaluated by multiplying images along its BFS word. Labels are ordered
//! lexicographically by (dimension, construction parameter) so that output is
//! reproducible; spectra do not depend on this choice.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupKind};
use crate::rng::substream;
use crate::young;

/// One irreducible unitary representation, given by its images on the
/// group's generator list.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    pub generator_images: Vec<DMatrix<Complex64>>,
    /// Real orthogonal images (Young's orthogonal form and the like) admit a
    /// cheaper all-real Fourier walk.
    pub(crate) real_images: Option<Vec<DMatrix<f64>>>,
}

impl Irrep {
    fn from_complex(label: String, generator_images: Vec<DMatrix<Complex64>>) -> Self {
        let dim = generator_images.first().map_or(1, |m| m.nrows());
        let all_real = generator_images
            .iter()
            .all(|m| m.iter().all(|z| z.im == 0.0));
        let real_images =
            all_real.then(|| generator_images.iter().map(|m| m.map(|z| z.re)).collect());
        Irrep {
            label,
            dim,
            generator_images,
            real_images,
        }
    }

    fn from_real(label: String, images: Vec<DMatrix<f64>>) -> Self {
        let dim = images.first().map_or(1, |m| m.nrows());
        let generator_images = images
            .iter()
            .map(|m| m.map(|x| Complex64::new(x, 0.0)))
            .collect();
        Irrep {
            label,
            dim,
            generator_images,
            real_images: Some(images),
        }
    }

    /// Evaluates the representation on an arbitrary element by walking the
    /// element's generator word.
    pub fn evaluate(&self, g: usize, group: &FiniteGroup) -> DMatrix<Complex64> {
        let mut m = DMatrix::identity(self.dim, self.dim);
        for gi in group.word(g) {
            m *= &self.generator_images[gi];
        }
        m
    }
}

/// Dimension support point: finite n or the compactification point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(n) => write!(f, "{n}"),
            Dim::Infinite => f.write_str("inf"),
        }
    }
}

/// Probability mass on dimensions {1, 2, ...} plus an atom at infinity.
/// For a concrete group this is the projected Plancherel measure: dimension n
/// carries mass n^2 * #{irreps of dim n} / |G|.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionMeasure {
    atoms: BTreeMap<Dim, f64>,
    exact: Option<BTreeMap<Dim, (u64, u64)>>,
}

impl DimensionMeasure {
    pub fn from_masses(masses: impl IntoIterator<Item = (Dim, f64)>) -> Result<Self> {
        let mut atoms = BTreeMap::new();
        for (d, m) in masses {
            if m < 0.0 {
                return Err(Error::InvalidParameter("negative mass".into()));
            }
            if m > 0.0 {
                *atoms.entry(d).or_insert(0.0) += m;
            }
        }
        let total: f64 = atoms.values().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "masses sum to {total}, expected 1"
            )));
        }
        Ok(DimensionMeasure { atoms, exact: None })
    }

    pub fn dirac(d: Dim) -> Self {
        DimensionMeasure {
            atoms: BTreeMap::from([(d, 1.0)]),
            exact: Some(BTreeMap::from([(d, (1, 1))])),
        }
    }

    /// Builds the measure from (dimension, multiplicity) counts of a group of
    /// the given order, keeping the exact rationals n^2 * count / order.
    pub fn from_counts(order: u64, counts: impl IntoIterator<Item = (usize, u64)>) -> Result<Self> {
        let mut grouped: BTreeMap<usize, u64> = BTreeMap::new();
        for (dim, count) in counts {
            *grouped.entry(dim).or_insert(0) += count;
        }
        let total: u64 = grouped.iter().map(|(&d, &c)| (d * d) as u64 * c).sum();
        if total != order {
            return Err(Error::InvalidParameter(format!(
                "sum of dim^2 ({total}) != group order ({order})"
            )));
        }
        let mut atoms = BTreeMap::new();
        let mut exact = BTreeMap::new();
        for (&dim, &count) in &grouped {
            let num = (dim * dim) as u64 * count;
            atoms.insert(Dim::Finite(dim), num as f64 / order as f64);
            exact.insert(Dim::Finite(dim), (num, order));
        }
        Ok(DimensionMeasure {
            atoms,
            exact: Some(exact),
        })
    }

    pub fn mass(&self, d: Dim) -> f64 {
        self.atoms.get(&d).copied().unwrap_or(0.0)
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Dim, f64)> + '_ {
        self.atoms.iter().map(|(&d, &m)| (d, m))
    }

    pub fn exact_atoms(&self) -> Option<impl Iterator<Item = (Dim, (u64, u64))> + '_> {
        self.exact.as_ref().map(|e| e.iter().map(|(&d, &r)| (d, r)))
    }

    pub fn total(&self) -> f64 {
        self.atoms.values().sum()
    }

    /// Moves the mass of all finite dimensions above `threshold` to the atom
    /// at infinity.
    pub fn pool_tail(&self, threshold: usize) -> DimensionMeasure {
        let mut atoms = BTreeMap::new();
        for (&d, &m) in &self.atoms {
            let key = match d {
                Dim::Finite(n) if n > threshold => Dim::Infinite,
                other => other,
            };
            *atoms.entry(key).or_insert(0.0) += m;
        }
        DimensionMeasure { atoms, exact: None }
    }
}

fn scalar(z: Complex64) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(1, 1, &[z])
}

/// The complete list of irreducible unitary representations, sorted by
/// (dimension, construction order). The total of dim^2 equals |G|.
pub fn irreducibles(group: &FiniteGroup) -> Result<Vec<Irrep>> {
    let mut irreps = match group.kind() {
        GroupKind::Cyclic { n } => cyclic_irreps(*n),
        GroupKind::Dihedral { n } => dihedral_irreps(*n),
        GroupKind::Symmetric { n } => symmetric_irreps(*n),
        GroupKind::Product { left, right } => {
            let a = irreducibles(left)?;
            let b = irreducibles(right)?;
            product_irreps(&a, &b)
        }
    };
    irreps.sort_by_key(|r| r.dim);
    let total: usize = irreps.iter().map(|r| r.dim * r.dim).sum();
    debug_assert_eq!(total, group.order());
    Ok(irreps)
}

fn cyclic_irreps(n: usize) -> Vec<Irrep> {
    (0..n)
        .map(|j| {
            let phase = if n == 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, TAU * j as f64 / n as f64)
            };
            Irrep::from_complex(format!("chi{j}"), vec![scalar(phase)])
        })
        .collect()
}

fn dihedral_irreps(n: usize) -> Vec<Irrep> {
    let mut out = Vec::new();
    let one = scalar(Complex64::new(1.0, 0.0));
    let neg = scalar(Complex64::new(-1.0, 0.0));
    // images aligned with generators [rotation-by-1, flip]
    out.push(Irrep::from_complex(
        "triv".into(),
        vec![one.clone(), one.clone()],
    ));
    out.push(Irrep::from_complex(
        "sgn".into(),
        vec![one.clone(), neg.clone()],
    ));
    let two_dim_range = if n % 2 == 1 {
        1..=(n - 1) / 2
    } else {
        out.push(Irrep::from_complex("sgn_r".into(), vec![neg.clone(), one]));
        out.push(Irrep::from_complex("sgn_rf".into(), vec![neg.clone(), neg]));
        1..=(n / 2 - 1)
    };
    for h in two_dim_range {
        let w = Complex64::from_polar(1.0, TAU * h as f64 / n as f64);
        let rot = DMatrix::from_row_slice(
            2,
            2,
            &[w, Complex64::default(), Complex64::default(), w.conj()],
        );
        let flip = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::default(),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::default(),
            ],
        );
        out.push(Irrep::from_complex(format!("rho{h}"), vec![rot, flip]));
    }
    out
}

fn symmetric_irreps(n: usize) -> Vec<Irrep> {
    young::partitions(n)
        .into_iter()
        .map(|shape| {
            let images = young::orthogonal_images(&shape);
            let label = format!(
                "({})",
                shape
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            );
            Irrep::from_real(label, images)
        })
        .collect()
}

fn product_irreps(a: &[Irrep], b: &[Irrep]) -> Vec<Irrep> {
    let mut out = Vec::new();
    for ra in a {
        for rb in b {
            let ib = DMatrix::<Complex64>::identity(rb.dim, rb.dim);
            let ia = DMatrix::<Complex64>::identity(ra.dim, ra.dim);
            let mut images: Vec<DMatrix<Complex64>> = ra
                .generator_images
                .iter()
                .map(|m| m.kronecker(&ib))
                .collect();
            images.extend(rb.generator_images.iter().map(|m| ia.kronecker(m)));
            out.push(Irrep::from_complex(
                format!("{}x{}", ra.label, rb.label),
                images,
            ));
        }
    }
    out
}

/// Projected Plancherel measure of the group (exact rationals kept).
pub fn plancherel(group: &FiniteGroup) -> Result<DimensionMeasure> {
    let irreps = irreducibles(group)?;
    plancherel_from(&irreps, group.order())
}

pub fn plancherel_from(irreps: &[Irrep], order: usize) -> Result<DimensionMeasure> {
    DimensionMeasure::from_counts(order as u64, irreps.iter().map(|r| (r.dim, 1u64)))
}

/// Census-based Plancherel measure of GL_2(F_q): q-1 irreps of dimension 1,
/// q(q-1)/2 of dimension q-1, q-1 of dimension q, (q-1)(q-2)/2 of dimension
/// q+1; no matrices are constructed.
pub fn plancherel_gl2(q: u64) -> Result<DimensionMeasure> {
    if !is_prime_power(q) {
        return Err(Error::InvalidParameter(format!(
            "q = {q} is not a prime power"
        )));
    }
    let order = (q * q - 1) * (q * q - q);
    let counts = [
        (1usize, q - 1),
        ((q - 1) as usize, q * (q - 1) / 2),
        (q as usize, q - 1),
        ((q + 1) as usize, (q - 1) * (q - 2) / 2),
    ];
    DimensionMeasure::from_counts(order, counts.into_iter().filter(|&(_, c)| c > 0))
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 0;
    let mut m = q;
    for d in 2..=q {
        if d * d > q {
            break;
        }
        if m.is_multiple_of(d) {
            p = d;
            while m.is_multiple_of(d) {
                m /= d;
            }
            break;
        }
    }
    if p == 0 {
        return true; // q itself prime
    }
    m == 1
}

/// Numerical health report for a set of representations.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub order: usize,
    pub sum_dim_sq: usize,
    pub completeness_ok: bool,
    pub max_unitarity_dev: f64,
    pub max_homomorphism_dev: f64,
    pub max_orthogonality_dev: f64,
    pub orthogonality_pairs: usize,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self, tol: f64) -> bool {
        self.completeness_ok
            && self.max_unitarity_dev <= tol
            && self.max_homomorphism_dev <= tol
            && self.max_orthogonality_dev <= tol
            && self.failures.is_empty()
    }
}

const ORTH_PAIR_BUDGET: usize = 1_000_000;

/// Checks completeness (sum of dim^2 = |G|), unitarity of generator images,
/// the homomorphism property on sampled pairs, and Schur orthogonality of
/// matrix coefficients. Orthogonality runs over all basis-entry pairs when
/// their count is within budget and over a sampled subset otherwise.
pub fn validate_representations(group: &FiniteGroup, irreps: &[Irrep]) -> ValidationReport {
    let order = group.order();
    let sum_dim_sq: usize = irreps.iter().map(|r| r.dim * r.dim).sum();
    let completeness_ok = sum_dim_sq == order;
    let mut failures = Vec::new();
    if !completeness_ok {
        failures.push(format!("sum dim^2 = {sum_dim_sq} but |G| = {order}"));
    }

    // unitarity of generator images
    let mut max_unitarity: f64 = 0.0;
    for r in irreps {
        for img in &r.generator_images {
            let dev = (img * img.adjoint() - DMatrix::identity(r.dim, r.dim)).camax();
            max_unitarity = max_unitarity.max(dev);
            if dev > 1e-10 {
                failures.push(format!(
                    "irrep {} generator not unitary (dev {dev:.2e})",
                    r.label
                ));
            }
        }
    }

    // homomorphism spot checks: Lambda(g h) = Lambda(g) Lambda(h)
    let mut max_hom: f64 = 0.0;
    let mut rng = substream(0x9d5f_c661, 0, "validate-hom");
    let samples = 24usize.min(order * order);
    for r in irreps {
        for _ in 0..samples {
            let g = (rng.next_u64() % order as u64) as usize;
            let h = (rng.next_u64() % order as u64) as usize;
            let lhs = r.evaluate(group.mul(g, h), group);
            let rhs = r.evaluate(g, group) * r.evaluate(h, group);
            max_hom = max_hom.max((lhs - rhs).camax());
        }
    }
    if max_hom > 1e-8 {
        failures.push(format!("homomorphism deviation {max_hom:.2e}"));
    }

    let (max_orth, pairs) = schur_orthogonality(group, irreps, &mut rng);

    ValidationReport {
        order,
        sum_dim_sq,
        completeness_ok,
        max_unitarity_dev: max_unitarity,
        max_homomorphism_dev: max_hom,
        max_orthogonality_dev: max_orth,
        orthogonality_pairs: pairs,
        failures,
    }
}

/// Schur orthogonality: sum_g Lambda(g)_{ij} conj(Delta(g)_{kl}) equals
/// |G| / dim(Lambda) when (Lambda,i,j) = (Delta,k,l) and 0 otherwise.
fn schur_orthogonality(
    group: &FiniteGroup,
    irreps: &[Irrep],
    rng: &mut impl rand_core::RngCore,
) -> (f64, usize) {
    let order = group.order();
    let total_entries: usize = irreps.iter().map(|r| r.dim * r.dim).sum();

    // pick which basis entries participate
    let all = total_entries * total_entries <= ORTH_PAIR_BUDGET;
    let selected: Vec<usize> = if all {
        (0..total_entries).collect()
    } else {
        // one entry per irrep plus a uniform sample up to the pair budget
        let per_irrep: Vec<usize> = {
            let mut offsets = Vec::new();
            let mut off = 0;
            for r in irreps {
                offsets.push(off);
                off += r.dim * r.dim;
            }
            offsets
        };
        let k = (ORTH_PAIR_BUDGET as f64).sqrt() as usize;
        let mut sel: Vec<usize> = per_irrep;
        while sel.len() < k {
            sel.push((rng.next_u64() % total_entries as u64) as usize);
        }
        sel.sort_unstable();
        sel.dedup();
        sel
    };
    let k = selected.len();

    // walk the whole group once, accumulating the Gram matrix of the selected
    // matrix coefficients
    let mut gram = vec![Complex64::default(); k * k];
    let bfs = group.bfs();
    let mut prev: Vec<Vec<DMatrix<Complex64>>> = Vec::new();
    let mut entry_buf = vec![Complex64::default(); k];
    for (li, level) in bfs.levels.iter().enumerate() {
        let mut cur: Vec<Vec<DMatrix<Complex64>>> = Vec::with_capacity(level.len());
        for node in level {
            let mats: Vec<DMatrix<Complex64>> = if li == 0 {
                irreps
                    .iter()
                    .map(|r| DMatrix::identity(r.dim, r.dim))
                    .collect()
            } else {
                let parent = &prev[node.parent_slot];
                irreps
                    .iter()
                    .zip(parent)
                    .map(|(r, pm)| pm * &r.generator_images[node.generator])
                    .collect()
            };
            // flatten selected entries of this element's images
            for (slot, &entry) in selected.iter().enumerate() {
                let mut e = entry;
                let mut val = Complex64::default();
                for (ri, r) in irreps.iter().enumerate() {
                    let sz = r.dim * r.dim;
                    if e < sz {
                        val = mats[ri][(e / r.dim, e % r.dim)];
                        break;
                    }
                    e -= sz;
                }
                entry_buf[slot] = val;
            }
            for p in 0..k {
                let a = entry_buf[p];
                for q in 0..k {
                    gram[p * k + q] += a * entry_buf[q].conj();
                }
            }
            cur.push(mats);
        }
        prev = cur;
    }

    // compare against |G|/dim * delta
    let dim_of_entry: Vec<usize> = {
        let mut v = Vec::with_capacity(total_entries);
        for r in irreps {
            v.extend(std::iter::repeat_n(r.dim, r.dim * r.dim));
        }
        v
    };
    let mut max_dev: f64 = 0.0;
    for (p, &ep) in selected.iter().enumerate() {
        for (q, &eq) in selected.iter().enumerate() {
            let target = if ep == eq {
                order as f64 / dim_of_entry[ep] as f64
            } else {
                0.0
            };
            let dev = (gram[p * k + q] - Complex64::new(target, 0.0)).norm();
            max_dev = max_dev.max(dev);
        }
    }
    (max_dev, k * k)
}
