//! Central limit experiments for linear eigenvalue statistics of
//! `P_X P_X^* / |G|`.
//!
//! The statistic `S = (1/sqrt(|G|)) tr f(P_X P_X^* / |G|)` is computed block
//! by block: `sum_Lambda dim tr f(B B^*) / sqrt(|G|)` with
//! `B = x_hat(Lambda)/sqrt(|G|)`. Its centered version converges (Gaussian
//! noise) to a normal law whose variance is the Plancherel mixture of the
//! per-block variances V_n, with V_infinity given by an explicit double
//! integral over the Marchenko-Pastur support.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::fourier_all;
use crate::group::FiniteGroup;
use crate::linalg::{self, mean_var};
use crate::noise::{sample_noise, NoiseSpec};
use crate::par::par_map;
use crate::rep::{Dim, DimensionMeasure, Irrep};
use crate::rng::{substream, uniform, uniform_pos};
use crate::theory::{gauss_legendre, normal_cdf};

/// Block sizes above this are pooled into the V_infinity bucket (consistent
/// with the rho_n fallback threshold).
pub const V_INFINITY_POOL: usize = 500;

/// A C^1 Lipschitz test function with an evaluable derivative.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// c_0 + c_1 x + c_2 x^2 + ...
    Poly(Vec<f64>),
    /// exp(1 - 1/(1 - t^2)) on |t| < 1 with t = (x - center)/width, else 0
    SmoothBump { center: f64, width: f64 },
    /// x^2 below the cap, continued linearly (C^1) above it
    ClippedQuadratic { cap: f64 },
}

impl TestFunction {
    pub fn identity() -> Self {
        TestFunction::Poly(vec![0.0, 1.0])
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Poly(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
            TestFunction::SmoothBump { center, width } => {
                let t = (x - center) / width;
                if t.abs() < 1.0 {
                    (1.0 - 1.0 / (1.0 - t * t)).exp()
                } else {
                    0.0
                }
            }
            TestFunction::ClippedQuadratic { cap } => {
                if x <= *cap {
                    x * x
                } else {
                    cap * (2.0 * x - cap)
                }
            }
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match self {
            TestFunction::Poly(c) => {
                let mut acc = 0.0;
                for (k, &ck) in c.iter().enumerate().skip(1).rev() {
                    acc = acc * x + k as f64 * ck;
                }
                acc
            }
            TestFunction::SmoothBump { center, width } => {
                let t = (x - center) / width;
                if t.abs() < 1.0 {
                    let u = 1.0 - t * t;
                    (1.0 - 1.0 / u).exp() * (-2.0 * t / (u * u)) / width
                } else {
                    0.0
                }
            }
            TestFunction::ClippedQuadratic { cap } => 2.0 * x.min(*cap),
        }
    }

    /// sup |f'| over [0, hi], by scanning (the working support is [0, 8]).
    pub fn sup_deriv(&self, hi: f64) -> f64 {
        (0..=4000)
            .map(|i| self.deriv(hi * i as f64 / 4000.0).abs())
            .fold(0.0, f64::max)
    }

    /// tr f(B B^*) for a block; polynomial f goes through traces of powers,
    /// anything else through singular values.
    pub fn trace_of_gram(&self, block: &DMatrix<Complex64>) -> Result<f64> {
        match self {
            TestFunction::Poly(coeffs) => {
                let gram = block * block.adjoint();
                let d = gram.nrows();
                let mut total = coeffs.first().copied().unwrap_or(0.0) * d as f64;
                let mut power = DMatrix::<Complex64>::identity(d, d);
                for &c in coeffs.iter().skip(1) {
                    power = &power * &gram;
                    if c != 0.0 {
                        let tr: Complex64 = power.diagonal().iter().sum();
                        total += c * tr.re;
                    }
                }
                Ok(total)
            }
            _ => {
                let svs = linalg::singular_values(block)?;
                Ok(svs.iter().map(|&s| self.eval(s * s)).sum())
            }
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|x| format!("{x}")).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            TestFunction::SmoothBump { center, width } => write!(f, "bump:{center},{width}"),
            TestFunction::ClippedQuadratic { cap } => write!(f, "clipped-quadratic:{cap}"),
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidParameter(format!("bad test function `{s}`: {m}"));
        if let Some(rest) = s.strip_prefix("poly:") {
            let coeffs = rest
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| bad("coefficients")))
                .collect::<Result<Vec<f64>>>()?;
            if coeffs.is_empty() {
                return Err(bad("no coefficients"));
            }
            return Ok(TestFunction::Poly(coeffs));
        }
        if s == "x" || s == "identity" {
            return Ok(TestFunction::identity());
        }
        if let Some(rest) = s.strip_prefix("bump:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 2 {
                return Err(bad("expected bump:center,width"));
            }
            let center = parts[0].trim().parse().map_err(|_| bad("center"))?;
            let width: f64 = parts[1].trim().parse().map_err(|_| bad("width"))?;
            if width <= 0.0 {
                return Err(bad("width must be positive"));
            }
            return Ok(TestFunction::SmoothBump { center, width });
        }
        if let Some(rest) = s.strip_prefix("clipped-quadratic:") {
            let cap = rest.trim().parse().map_err(|_| bad("cap"))?;
            return Ok(TestFunction::ClippedQuadratic { cap });
        }
        Err(bad(
            "expected poly:c0,c1,..., bump:center,width or clipped-quadratic:cap",
        ))
    }
}

/// One draw of `S = (1/sqrt(|G|)) tr f(P_X P_X^*/|G|)`, block-wise.
pub fn linear_statistic(
    group: &FiniteGroup,
    irreps: &[Irrep],
    f: &TestFunction,
    spec: &NoiseSpec,
    trial: u64,
) -> Result<f64> {
    let x = sample_noise(spec, group.order(), trial);
    let order = group.order() as f64;
    let scale = Complex64::new(1.0 / order.sqrt(), 0.0);
    let mut total = 0.0;
    for b in fourier_all(&x.values, irreps, group)? {
        let scaled = b.matrix.map(|z| z * scale);
        total += b.dim as f64 * f.trace_of_gram(&scaled)?;
    }
    Ok(total / order.sqrt())
}

/// Dense-path linear statistic (oracle, |G| <= 2000).
pub fn linear_statistic_dense(
    group: &FiniteGroup,
    f: &TestFunction,
    spec: &NoiseSpec,
    trial: u64,
) -> Result<f64> {
    let x = sample_noise(spec, group.order(), trial);
    let order = group.order() as f64;
    let p = group.convolution_matrix(&x.values)?;
    let scaled = p.map(|z| z / order.sqrt());
    Ok(f.trace_of_gram(&scaled)? / order.sqrt())
}

/// Draws an n x n Ginibre matrix (entries i.i.d. complex Gaussian of
/// variance 1/n).
fn ginibre(n: usize, rng: &mut impl rand_core::RngCore) -> DMatrix<Complex64> {
    let scale = 1.0 / (n as f64).sqrt();
    DMatrix::from_fn(n, n, |_, _| {
        let r = (-uniform_pos(rng).ln()).sqrt() * scale;
        Complex64::from_polar(r, std::f64::consts::TAU * uniform(rng))
    })
}

/// Monte Carlo estimate of V_n = Var(tr f(Gamma_n Gamma_n^*)); returns the
/// variance and the standard error of the variance estimator.
pub fn v_n_estimate(n: usize, f: &TestFunction, trials: usize, seed: u64) -> Result<(f64, f64)> {
    if trials < 500 {
        return Err(Error::InvalidParameter(
            "v_n_estimate needs >= 500 trials".into(),
        ));
    }
    let samples = par_map(trials, |t| -> Result<f64> {
        let mut rng = substream(seed, t as u64, "ginibre");
        let g = ginibre(n, &mut rng);
        f.trace_of_gram(&g)
    });
    let samples = samples.into_iter().collect::<Result<Vec<_>>>()?;
    let (_, var) = mean_var(&samples);
    let m4 = linalg::central_moment4(&samples);
    let se = ((m4 - var * var).max(0.0) / trials as f64).sqrt();
    Ok((var, se))
}

/// V_infinity for the Laguerre-ensemble CLT:
/// `(1/4pi^2) int int D(l1,l2)^2 (4 - (l1-2)(l2-2)) / (sqrt(4-(l1-2)^2) sqrt(4-(l2-2)^2))`
/// with D the difference quotient of f (replaced by f' near the diagonal).
/// The substitution `l = 2 - 2 cos(phi)` makes the integrand smooth on
/// [0, pi]^2 for Gauss-Legendre tensor quadrature.
pub fn v_infinity(f: &TestFunction, quad_nodes: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(quad_nodes);
    // map [-1,1] -> [0,pi]
    let phis: Vec<f64> = nodes.iter().map(|&t| 0.5 * PI * (t + 1.0)).collect();
    let ws: Vec<f64> = weights.iter().map(|&w| w * 0.5 * PI).collect();
    let lambdas: Vec<f64> = phis.iter().map(|&p| 2.0 - 2.0 * p.cos()).collect();
    let fvals: Vec<f64> = lambdas.iter().map(|&l| f.eval(l)).collect();
    let mut total = 0.0;
    for i in 0..phis.len() {
        for j in 0..phis.len() {
            let (l1, l2) = (lambdas[i], lambdas[j]);
            let quotient = if (l1 - l2).abs() < 1e-6 {
                f.deriv(0.5 * (l1 + l2))
            } else {
                (fvals[i] - fvals[j]) / (l1 - l2)
            };
            // 4 - (l1-2)(l2-2) = 4 - 4 cos(phi1) cos(phi2)
            let kernel = 4.0 - 4.0 * phis[i].cos() * phis[j].cos();
            total += ws[i] * ws[j] * quotient * quotient * kernel;
        }
    }
    total / (4.0 * PI * PI)
}

/// sigma^2 = sum_n mu(n) V_n + mu(inf) V_inf; finite dims above the pooling
/// threshold count as infinity.
pub fn sigma_squared(mu: &DimensionMeasure, f: &TestFunction, trials: usize) -> Result<f64> {
    let pooled = mu.pool_tail(V_INFINITY_POOL);
    let mut total = 0.0;
    for (d, w) in pooled.atoms() {
        match d {
            Dim::Finite(n) => {
                let (vn, _) = v_n_estimate(n, f, trials, 0xC17_5EED ^ n as u64)?;
                total += w * vn;
            }
            Dim::Infinite => total += w * v_infinity(f, 128),
        }
    }
    Ok(total)
}

/// Result of a CLT experiment.
#[derive(Debug, Clone)]
pub struct CltResult {
    /// centered statistics, one per trial
    pub samples: Vec<f64>,
    pub variance: f64,
    pub sigma_squared: f64,
    /// KS distance of samples/sigma against the standard normal CDF
    pub ks_normal: f64,
    pub trials: usize,
}

/// Runs `trials` draws of the linear statistic, centers them by the trial
/// mean, and compares the spread against the Plancherel-mixture target.
///
/// The theorem is for Gaussian noise; other noise runs too but is flagged by
/// callers as exploratory. Centering by the trial mean (rather than the true
/// mean) perturbs the variance by O(1/trials), far below the comparison
/// tolerances used here.
pub fn clt_experiment(
    group: &FiniteGroup,
    irreps: &[Irrep],
    f: &TestFunction,
    spec: &NoiseSpec,
    trials: usize,
) -> Result<CltResult> {
    if trials < 2 {
        return Err(Error::InvalidParameter(
            "clt_experiment needs >= 2 trials".into(),
        ));
    }
    let raw = par_map(trials, |t| {
        linear_statistic(group, irreps, f, spec, t as u64)
    });
    let raw = raw.into_iter().collect::<Result<Vec<_>>>()?;
    let (mean, variance) = mean_var(&raw);
    let samples: Vec<f64> = raw.iter().map(|s| s - mean).collect();

    let mu = crate::rep::plancherel_from(irreps, group.order())?;
    let sigma2 = sigma_squared(&mu, f, trials.max(1000))?;

    let sigma = sigma2.sqrt();
    let ks_normal = if sigma > 0.0 {
        let pts: Vec<(f64, f64)> = samples.iter().map(|&s| (s / sigma, 1.0)).collect();
        crate::theory::ks_statistic(&pts, normal_cdf)?
    } else {
        0.0
    };
    Ok(CltResult {
        samples,
        variance,
        sigma_squared: sigma2,
        ks_normal,
        trials,
    })
}

/// One row of the 4th-moment boundedness table.
#[derive(Debug, Clone)]
pub struct FourthMomentRow {
    pub n: usize,
    pub e4: f64,
    /// E|Z_n|^4 / sup|f'|^4
    pub ratio: f64,
}

/// Empirical E|Z_n|^4 for Z_n = tr f(Gamma_n Gamma_n^*) - mean, across block
/// sizes; the ratio against sup|f'|^4 should stay bounded in n.
pub fn fourth_moment_check(
    ns: &[usize],
    f: &TestFunction,
    trials: usize,
    seed: u64,
) -> Result<Vec<FourthMomentRow>> {
    let sup = f.sup_deriv(8.0);
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let samples = par_map(trials, |t| -> Result<f64> {
            let mut rng = substream(seed ^ (n as u64) << 32, t as u64, "ginibre4");
            f.trace_of_gram(&ginibre(n, &mut rng))
        });
        let samples = samples.into_iter().collect::<Result<Vec<_>>>()?;
        let e4 = linalg::central_moment4(&samples);
        let ratio = if sup > 0.0 { e4 / sup.powi(4) } else { 0.0 };
        rows.push(FourthMomentRow { n, e4, ratio });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseDistribution;
    use crate::rep::irreducibles;
    use approx::assert_relative_eq;

    #[test]
    fn test_function_parsing_and_eval() {
        let f: TestFunction = "poly:0,1".parse().unwrap();
        assert_eq!(f, TestFunction::identity());
        assert_relative_eq!(f.eval(3.5), 3.5);
        assert_relative_eq!(f.deriv(3.5), 1.0);

        let q: TestFunction = "poly:1,-2,3".parse().unwrap();
        assert_relative_eq!(q.eval(2.0), 1.0 - 4.0 + 12.0);
        assert_relative_eq!(q.deriv(2.0), -2.0 + 12.0);

        let b: TestFunction = "bump:2,1".parse().unwrap();
        assert_relative_eq!(b.eval(2.0), 1.0);
        assert_eq!(b.eval(3.2), 0.0);
        // C^1: derivative vanishes at the edge and the center
        assert_relative_eq!(b.deriv(2.0), 0.0);
        assert!(b.deriv(2.999).abs() < 1e-3);

        let c: TestFunction = "clipped-quadratic:2".parse().unwrap();
        assert_relative_eq!(c.eval(1.5), 2.25);
        assert_relative_eq!(c.eval(3.0), 2.0 * (6.0 - 2.0));
        assert_relative_eq!(c.deriv(1.99), 3.98);
        assert_relative_eq!(c.deriv(5.0), 4.0);

        assert!("sin".parse::<TestFunction>().is_err());
        assert!("poly:".parse::<TestFunction>().is_err());
    }

    #[test]
    fn linear_statistic_identity_is_noise_energy() {
        // f(x) = x: S = (1/sqrt|G|) sum |x_g|^2 exactly
        let g = FiniteGroup::dihedral(6).unwrap();
        let irreps = irreducibles(&g).unwrap();
        let spec = NoiseSpec::gaussian(5);
        let f = TestFunction::identity();
        for trial in 0..5 {
            let s = linear_statistic(&g, &irreps, &f, &spec, trial).unwrap();
            let x = sample_noise(&spec, g.order(), trial);
            let want =
                x.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / (g.order() as f64).sqrt();
            assert_relative_eq!(s, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_noise_gives_constant_statistic() {
        // x = 0 => S = f(0) |G| / sqrt(|G|)
        let g = FiniteGroup::cyclic(16).unwrap();
        let irreps = irreducibles(&g).unwrap();
        let f: TestFunction = "poly:2,1".parse().unwrap();
        // fabricate a zero noise vector through the dense path
        let p = g
            .convolution_matrix(&vec![Complex64::default(); 16])
            .unwrap();
        let s = f.trace_of_gram(&p).unwrap();
        assert_relative_eq!(s, 2.0 * 16.0, epsilon = 1e-12);
        let _ = irreps;
    }

    #[test]
    fn block_path_matches_dense_path() {
        let g = FiniteGroup::dihedral(6).unwrap();
        let irreps = irreducibles(&g).unwrap();
        let spec = NoiseSpec::gaussian(9);
        for f in [
            TestFunction::identity(),
            "poly:0,0,1".parse().unwrap(),
            "bump:1,1".parse().unwrap(),
        ] {
            for trial in 0..3 {
                let a = linear_statistic(&g, &irreps, &f, &spec, trial).unwrap();
                let b = linear_statistic_dense(&g, &f, &spec, trial).unwrap();
                assert!((a - b).abs() < 1e-8, "{f}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn v_n_for_identity_is_one() {
        // tr Gamma Gamma^* is a sum of n^2 independent |entry|^2 of variance 1/n^2
        let f = TestFunction::identity();
        for n in [1usize, 4, 16] {
            let (v, se) = v_n_estimate(n, &f, 4000, 3).unwrap();
            assert!((v - 1.0).abs() <= 3.0 * se + 0.02, "n={n}: V={v} se={se}");
        }
        let (v0, _) = v_n_estimate(3, &TestFunction::Poly(vec![5.0]), 500, 1).unwrap();
        assert_eq!(v0, 0.0);
        assert!(v_n_estimate(2, &f, 100, 0).is_err());
    }

    #[test]
    fn v_infinity_identity_is_exactly_one() {
        let v = v_infinity(&TestFunction::identity(), 64);
        assert!((v - 1.0).abs() < 1e-8, "V_inf(x) = {v}");
        let v0 = v_infinity(&TestFunction::Poly(vec![7.0]), 64);
        assert!(v0.abs() < 1e-12);
    }

    #[test]
    fn v_infinity_x_squared_node_stability() {
        let f: TestFunction = "poly:0,0,1".parse().unwrap();
        let v64 = v_infinity(&f, 64);
        let v128 = v_infinity(&f, 128);
        assert!((v64 - v128).abs() < 1e-6, "{v64} vs {v128}");
        // closed form: 18 (expand (l1 + l2)^2 against the kernel)
        assert!((v128 - 18.0).abs() < 1e-8, "V_inf(x^2) = {v128}");
    }

    #[test]
    fn v_n_scales_quadratically() {
        let f = TestFunction::identity();
        let f2 = TestFunction::Poly(vec![0.0, 2.0]);
        let (v1, se1) = v_n_estimate(4, &f, 3000, 7).unwrap();
        let (v2, se2) = v_n_estimate(4, &f2, 3000, 7).unwrap();
        assert!(
            (v2 - 4.0 * v1).abs() <= 3.0 * (4.0 * se1 + se2),
            "{v1} vs {v2}"
        );
    }

    #[test]
    fn sigma_squared_composition() {
        let f = TestFunction::identity();
        // dirac at infinity: sigma^2 = V_inf = 1
        let mu = DimensionMeasure::dirac(Dim::Infinite);
        let s = sigma_squared(&mu, &f, 600).unwrap();
        assert!((s - 1.0).abs() < 1e-8);
        // S_3-type mixture with f = x: still 1 (V_n = 1 for every n)
        let mu = DimensionMeasure::from_masses([
            (Dim::Finite(1), 1.0 / 3.0),
            (Dim::Finite(2), 2.0 / 3.0),
        ])
        .unwrap();
        let s = sigma_squared(&mu, &f, 2000).unwrap();
        assert!((s - 1.0).abs() < 0.05, "sigma^2 = {s}");
        // dims beyond the pool threshold go to the V_inf bucket
        let mu = DimensionMeasure::from_masses([(Dim::Finite(V_INFINITY_POOL + 7), 1.0)]).unwrap();
        let s = sigma_squared(&mu, &f, 600).unwrap();
        assert!((s - 1.0).abs() < 1e-8);
    }

    #[test]
    fn v1_matches_gaussian_fourth_moment() {
        // 1x1 Ginibre: tr f(GG*) = f(|z|^2) with |z|^2 ~ Exp(1);
        // for f = x^2, Var = E X^4 - (E X^2)^2 = 24 - 4 = 20
        let f: TestFunction = "poly:0,0,1".parse().unwrap();
        let (v, se) = v_n_estimate(1, &f, 60_000, 5).unwrap();
        assert!((v - 20.0).abs() <= 4.0 * se, "V_1(x^2) = {v} (se {se})");
    }

    #[test]
    fn identity_statistic_mean_is_sqrt_order() {
        // E S = sqrt(|G|) and Var = 1 exactly for f = x with Gaussian noise
        let g = FiniteGroup::dihedral(8).unwrap();
        let irreps = irreducibles(&g).unwrap();
        let spec = NoiseSpec::gaussian(21);
        let trials = 3000;
        let raw: Vec<f64> = (0..trials)
            .map(|t| linear_statistic(&g, &irreps, &TestFunction::identity(), &spec, t).unwrap())
            .collect();
        let (mean, var) = crate::linalg::mean_var(&raw);
        let want = (g.order() as f64).sqrt();
        let se = (var / trials as f64).sqrt();
        assert!(
            (mean - want).abs() <= 3.0 * se,
            "mean {mean} vs {want} (se {se})"
        );
        let m4 = crate::linalg::central_moment4(&raw);
        let var_se = ((m4 - var * var) / trials as f64).sqrt();
        assert!((var - 1.0).abs() <= 3.0 * var_se, "var {var} (se {var_se})");
    }

    #[test]
    fn clt_trivial_function_gives_zeros() {
        let g = FiniteGroup::dihedral(4).unwrap();
        let irreps = irreducibles(&g).unwrap();
        let f = TestFunction::Poly(vec![3.0]);
        let r = clt_experiment(&g, &irreps, &f, &NoiseSpec::gaussian(2), 50).unwrap();
        assert!(r.samples.iter().all(|s| s.abs() < 1e-12));
        assert!(r.variance < 1e-20);
    }

    #[test]
    fn fourth_moment_stays_bounded_for_identity() {
        let f = TestFunction::identity();
        let rows = fourth_moment_check(&[2, 8, 32], &f, 4000, 11).unwrap();
        // for f = x the limit of E|Z|^4 is 3 (Gaussian); allow factor 2
        for row in &rows {
            assert!(row.e4 < 6.0, "n={}: E4={}", row.n, row.e4);
            assert!(row.e4 > 1.0, "n={}: E4={}", row.n, row.e4);
        }
        // no growth trend across n
        assert!(rows.last().unwrap().ratio <= rows[0].ratio * 2.0);

        let zero = fourth_moment_check(&[2, 4], &TestFunction::Poly(vec![1.0]), 600, 1).unwrap();
        assert!(zero.iter().all(|r| r.e4 == 0.0));
    }

    #[test]
    fn noise_flagging_is_explicit() {
        // non-Gaussian noise is allowed through the same entry point
        let g = FiniteGroup::dihedral(4).unwrap();
        let irreps = irreducibles(&g).unwrap();
        let spec = NoiseSpec::new(NoiseDistribution::FourthRoots, 1);
        let r = clt_experiment(&g, &irreps, &TestFunction::identity(), &spec, 100).unwrap();
        assert_eq!(r.trials, 100);
    }
}
