//! Property tests for the structural invariants: group axioms across the
//! supported families, the convolution homomorphism, Fourier inversion /
//! Parseval, block-vs-dense spectral equivalence, and law CDF shape.

use num_complex::Complex64;
use proptest::prelude::*;

use gcirc::fourier::{fourier_all, fourier_inverse};
use gcirc::linalg::match_displacement;
use gcirc::noise::{sample_noise, NoiseDistribution, NoiseSpec};
use gcirc::rep::{irreducibles, plancherel_from, Dim, DimensionMeasure};
use gcirc::rng::seed_derive;
use gcirc::spectral::{spectrum_direct, spectrum_via_fourier, SpectralKind};
use gcirc::theory::TheoreticalLaw;
use gcirc::FiniteGroup;

/// Strategy over small groups of every supported kind.
fn small_group() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        (1usize..=40).prop_map(|n| FiniteGroup::cyclic(n).unwrap()),
        (3usize..=20).prop_map(|n| FiniteGroup::dihedral(n).unwrap()),
        (1usize..=5).prop_map(|n| FiniteGroup::symmetric(n).unwrap()),
        ((3usize..=8), (2usize..=6)).prop_map(|(n, m)| {
            FiniteGroup::product(
                FiniteGroup::dihedral(n).unwrap(),
                FiniteGroup::cyclic(m).unwrap(),
            )
            .unwrap()
        }),
        ((3usize..=4), (2usize..=5)).prop_map(|(n, m)| {
            FiniteGroup::product(
                FiniteGroup::symmetric(n).unwrap(),
                FiniteGroup::cyclic(m).unwrap(),
            )
            .unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_axioms_hold(group in small_group(), picks in proptest::collection::vec(0usize..10_000, 32)) {
        let n = group.order();
        let e = group.identity();
        prop_assert!(group.generates_whole_group());
        for w in picks.chunks_exact(3) {
            let (a, b, c) = (w[0] % n, w[1] % n, w[2] % n);
            prop_assert_eq!(group.mul(a, e), a);
            prop_assert_eq!(group.mul(e, a), a);
            prop_assert_eq!(group.mul(a, group.inv(a)), e);
            prop_assert_eq!(group.mul(group.mul(a, b), c), group.mul(a, group.mul(b, c)));
            prop_assert_eq!(group.mul(group.inv(b), group.inv(a)), group.inv(group.mul(a, b)));
        }
    }

    #[test]
    fn convolution_rows_are_noise_permutations(group in small_group(), seed in 0u64..1000) {
        prop_assume!(group.order() <= 200);
        let n = group.order();
        let x = sample_noise(&NoiseSpec::gaussian(seed), n, 0);
        let m = group.convolution_matrix(&x.values).unwrap();
        // row 0 and column 0 each contain every entry of x exactly once
        let key = |z: &Complex64| (z.re.to_bits(), z.im.to_bits());
        let mut want: Vec<_> = x.values.iter().map(key).collect();
        want.sort_unstable();
        let mut row: Vec<_> = (0..n).map(|g| key(&m[(0, g)])).collect();
        row.sort_unstable();
        prop_assert_eq!(&row, &want);
        let mut col: Vec<_> = (0..n).map(|h| key(&m[(h, 0)])).collect();
        col.sort_unstable();
        prop_assert_eq!(&col, &want);
    }

    #[test]
    fn fourier_inversion_recovers_noise(group in small_group(), seed in 0u64..1000) {
        let irreps = irreducibles(&group).unwrap();
        let x = sample_noise(&NoiseSpec::gaussian(seed), group.order(), 1);
        let blocks = fourier_all(&x.values, &irreps, &group).unwrap();
        let rec = fourier_inverse(&blocks, &irreps, &group).unwrap();
        let err = x.values.iter().zip(&rec).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-8, "inversion error {} on {}", err, group);
    }

    #[test]
    fn block_and_dense_spectra_agree(group in small_group(), seed in 0u64..1000) {
        prop_assume!(group.order() <= 240);
        let irreps = irreducibles(&group).unwrap();
        let x = sample_noise(&NoiseSpec::gaussian(seed), group.order(), 2);
        let a = spectrum_via_fourier(&group, &irreps, &x, SpectralKind::Eigen)
            .unwrap()
            .eigen_multiset()
            .unwrap();
        let b = spectrum_direct(&group, &x, SpectralKind::Eigen)
            .unwrap()
            .eigen_multiset()
            .unwrap();
        let disp = match_displacement(&a, &b, 1e-7).unwrap();
        prop_assert!(disp <= 1e-7, "displacement {} on {}", disp, group);
    }

    #[test]
    fn singular_values_square_to_gram_spectrum(group in small_group(), seed in 0u64..500) {
        prop_assume!(group.order() <= 120);
        let x = sample_noise(&NoiseSpec::gaussian(seed), group.order(), 3);
        // eigenvalues of P_{x * y}, y(g) = conj(x(g^{-1})), are the squared
        // singular values of P_x
        let y: Vec<Complex64> = (0..group.order()).map(|e| x.values[group.inv(e)].conj()).collect();
        let conv = group.convolve(&x.values, &y).unwrap();
        let gram = group.convolution_matrix(&conv).unwrap();
        let mut gram_eigs: Vec<f64> = gcirc::linalg::eigenvalues(&gram)
            .unwrap()
            .into_iter()
            .map(|z| z.re)
            .collect();
        gram_eigs.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let p = group.convolution_matrix(&x.values).unwrap();
        let mut sq: Vec<f64> = gcirc::linalg::singular_values(&p)
            .unwrap()
            .into_iter()
            .map(|s| s * s)
            .collect();
        sq.sort_by(|p, q| p.partial_cmp(q).unwrap());
        for (a, b) in gram_eigs.iter().zip(&sq) {
            prop_assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn spectral_weights_sum_to_one(group in small_group(), seed in 0u64..500,
                                   kind in prop_oneof![Just(SpectralKind::Eigen), Just(SpectralKind::Singular)]) {
        let irreps = irreducibles(&group).unwrap();
        let x = sample_noise(&NoiseSpec::gaussian(seed), group.order(), 4);
        let s = spectrum_via_fourier(&group, &irreps, &x, kind).unwrap();
        prop_assert!((s.total_weight() - 1.0).abs() < 1e-12);
        prop_assert!(s.radial().iter().all(|&(v, w)| v >= 0.0 && w >= 0.0));
    }

    #[test]
    fn plancherel_is_a_probability_measure(group in small_group()) {
        let mu = plancherel_from(&irreducibles(&group).unwrap(), group.order()).unwrap();
        prop_assert!((mu.total() - 1.0).abs() < 1e-12);
        prop_assert!(mu.atoms().all(|(_, m)| m > 0.0));
    }

    #[test]
    fn mixture_cdfs_are_monotone(w1 in 0.05f64..0.95, n1 in 1usize..30, n2 in 1usize..30) {
        let mu = DimensionMeasure::from_masses([
            (Dim::Finite(n1), w1),
            (Dim::Finite(n2.max(n1) + 1), 1.0 - w1),
        ]).unwrap();
        let law = TheoreticalLaw::rho_mixture(&mu);
        let mut prev = 0.0;
        for i in 0..=400 {
            let x = law.x_max() * i as f64 / 400.0;
            let v = law.cdf(x);
            prop_assert!(v + 1e-12 >= prev);
            prop_assert!((-1e-12..=1.0 + 1e-9).contains(&v));
            prev = v;
        }
        prop_assert!((law.cdf(law.x_max()) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn seed_derivation_separates_streams(master in any::<u64>(), t1 in 0u64..1_000_000, t2 in 0u64..1_000_000) {
        prop_assume!(t1 != t2);
        prop_assert_eq!(seed_derive(master, t1, "noise"), seed_derive(master, t1, "noise"));
        prop_assert_ne!(seed_derive(master, t1, "noise"), seed_derive(master, t2, "noise"));
        prop_assert_ne!(seed_derive(master, t1, "noise-1"), seed_derive(master, t1, "noise-2"));
    }

    #[test]
    fn noise_moments_match_contract(dist in prop_oneof![
        Just(NoiseDistribution::ComplexGaussian),
        Just(NoiseDistribution::FourthRoots),
        Just(NoiseDistribution::UniformCircle),
    ], seed in 0u64..100) {
        let x = sample_noise(&NoiseSpec::new(dist, seed), 40_000, 0);
        let n = x.values.len() as f64;
        let mean = x.values.iter().sum::<Complex64>() / n;
        let sq = x.values.iter().map(|z| z * z).sum::<Complex64>() / n;
        let abs2 = x.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
        prop_assert!(mean.norm() < 0.03);
        prop_assert!(sq.norm() < 0.03);
        prop_assert!((abs2 - 1.0).abs() < 0.03);
    }
}

/// Plancherel inversion across one representative of each family at the
/// largest test sizes (S(6) is the 720-element stress case).
#[test]
fn fourier_inversion_large_groups() {
    for spec in ["Z(64)", "D(50)", "S(6)", "P(S(3),Z(100))"] {
        let group = FiniteGroup::parse(spec).unwrap();
        let irreps = irreducibles(&group).unwrap();
        let x = sample_noise(&NoiseSpec::gaussian(7), group.order(), 0);
        let blocks = fourier_all(&x.values, &irreps, &group).unwrap();
        let rec = fourier_inverse(&blocks, &irreps, &group).unwrap();
        let err = x
            .values
            .iter()
            .zip(&rec)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "{spec}: {err}");
    }
}

/// Stress variant of the block/dense equivalence at the top of the stated
/// range (|G| = 720, dense 720x720 complex Schur); slow, so opt-in.
#[test]
#[ignore = "stress test, run with --ignored"]
fn block_and_dense_spectra_agree_on_s6() {
    let group = FiniteGroup::symmetric(6).unwrap();
    let irreps = irreducibles(&group).unwrap();
    let x = sample_noise(&NoiseSpec::gaussian(99), group.order(), 0);
    let a = spectrum_via_fourier(&group, &irreps, &x, SpectralKind::Eigen)
        .unwrap()
        .eigen_multiset()
        .unwrap();
    let b = spectrum_direct(&group, &x, SpectralKind::Eigen)
        .unwrap()
        .eigen_multiset()
        .unwrap();
    let disp = match_displacement(&a, &b, 1e-7).unwrap();
    assert!(disp <= 1e-7, "displacement {disp}");
}

/// Stress variant of Fourier inversion at the top of the stated range
/// (S(7), |G| = 5040); slow, so opt-in.
#[test]
#[ignore = "stress test, run with --ignored"]
fn fourier_inversion_s7() {
    let group = FiniteGroup::symmetric(7).unwrap();
    let irreps = irreducibles(&group).unwrap();
    let x = sample_noise(&NoiseSpec::gaussian(41), group.order(), 0);
    let blocks = fourier_all(&x.values, &irreps, &group).unwrap();
    let rec = fourier_inverse(&blocks, &irreps, &group).unwrap();
    let err = x
        .values
        .iter()
        .zip(&rec)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-8, "inversion error {err}");
}

/// The convolution identity P_x P_y = P_{x*y} at tolerance 1e-10 on groups
/// up to order 120.
#[test]
fn convolution_identity_across_kinds() {
    for spec in ["Z(17)", "D(13)", "S(4)", "P(S(3),Z(4))", "P(Z(2),Z(2))"] {
        let group = FiniteGroup::parse(spec).unwrap();
        let n = group.order();
        assert!(n <= 120);
        let x = sample_noise(&NoiseSpec::gaussian(1), n, 0).values;
        let y = sample_noise(&NoiseSpec::gaussian(1), n, 1).values;
        let lhs = group.convolution_matrix(&x).unwrap() * group.convolution_matrix(&y).unwrap();
        let rhs = group
            .convolution_matrix(&group.convolve(&x, &y).unwrap())
            .unwrap();
        let dev = (lhs - rhs).camax();
        assert!(dev < 1e-10, "{spec}: {dev}");
    }
}
