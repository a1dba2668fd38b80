//! Limiting laws: the Ginibre mean singular-value laws rho_n, the mean
//! eigenvalue laws theta_n (kept as radial laws of |z|), their n -> infinity
//! limits (quarter circle, circular), and Plancherel-driven mixtures of all
//! of these. Densities, CDFs and moments are evaluable; Kolmogorov-Smirnov
//! and Levy distances compare empirical samples against them.

use crate::error::{Error, Result};
use crate::rep::{Dim, DimensionMeasure};

/// Above this block size rho_n is evaluated as rho_infinity; the sup-norm gap
/// of the CDFs is below 1e-3 there.
pub const RHO_INFINITY_FALLBACK: usize = 500;

const GRID_CELLS: usize = 4096;
/// Finite-n laws have Gaussian-envelope tails: mass beyond x = 5 is < 1e-10
/// for every n >= 1.
const FINITE_X_MAX: f64 = 5.0;

/// L_l(x), the l-th Laguerre polynomial, by the three-term recurrence
/// (l+1) L_{l+1} = (2l+1-x) L_l - l L_{l-1}.
pub fn laguerre(l: usize, x: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    for m in 1..l {
        let next = ((2 * m + 1) as f64 - x) * cur - m as f64 * prev;
        let next = next / (m + 1) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// sum_{l=0}^{n-1} (L_l(y) e^{-y/2})^2, evaluated stably.
///
/// |L_l(y) e^{-y/2}| <= 1 classically, so once the scaled seeds are
/// representable the recurrence stays in range. When e^{-y/2} underflows the
/// recurrence runs unscaled with power-of-two renormalization and each term
/// is re-assembled in log space.
fn laguerre_sq_sum(n: usize, y: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if y / 2.0 < 650.0 {
        let seed = (-y / 2.0).exp();
        let mut prev = seed;
        let mut cur = (1.0 - y) * seed;
        let mut sum = prev * prev;
        if n > 1 {
            sum += cur * cur;
        }
        for m in 1..n.saturating_sub(1) {
            let next = (((2 * m + 1) as f64 - y) * cur - m as f64 * prev) / (m + 1) as f64;
            prev = cur;
            cur = next;
            sum += cur * cur;
        }
        sum
    } else {
        const RESCALE: f64 = 9.332636185032189e-302; // 2^{-1000}
        const LOG_RESCALE: f64 = 1000.0 * std::f64::consts::LN_2;
        let mut prev = 1.0f64;
        let mut cur = 1.0 - y;
        let mut shifts = 0.0f64;
        let mut sum = 0.0f64;
        let mut add_term = |u: f64, shifts: f64| {
            if u != 0.0 {
                let ln_term = 2.0 * (u.abs().ln() + shifts * LOG_RESCALE) - y;
                if ln_term > -745.0 {
                    sum += ln_term.exp();
                }
            }
        };
        add_term(prev, shifts);
        if n > 1 {
            add_term(cur, shifts);
        }
        for m in 1..n.saturating_sub(1) {
            let next = (((2 * m + 1) as f64 - y) * cur - m as f64 * prev) / (m + 1) as f64;
            prev = cur;
            cur = next;
            if cur.abs() > 1e300 || prev.abs() > 1e300 {
                prev *= RESCALE;
                cur *= RESCALE;
                shifts += 1.0;
            }
            add_term(cur, shifts);
        }
        sum
    }
}

/// Density of rho_n at x: `2 x e^{-n x^2} sum_{l<n} L_l(n x^2)^2`, the
/// quarter-circle density for n = infinity.
pub fn rho_density(n: Dim, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    match effective_rho_param(n) {
        Dim::Infinite => {
            if x >= 2.0 {
                0.0
            } else {
                (4.0 - x * x).sqrt() / std::f64::consts::PI
            }
        }
        Dim::Finite(n) => {
            let y = n as f64 * x * x;
            2.0 * x * laguerre_sq_sum(n, y)
        }
    }
}

fn effective_rho_param(n: Dim) -> Dim {
    match n {
        Dim::Finite(k) if k > RHO_INFINITY_FALLBACK => Dim::Infinite,
        other => other,
    }
}

/// Radial density of theta_n (density of |z| for the planar law):
/// `2 r e^{-n r^2} sum_{l<n} (n r^2)^l / l!`; for n = infinity it is 2r on `[0,1]`.
pub fn theta_radial_density(n: Dim, r: f64) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::InvalidParameter("radius must be nonnegative".into()));
    }
    Ok(match n {
        Dim::Infinite => {
            if r > 1.0 {
                0.0
            } else {
                2.0 * r
            }
        }
        Dim::Finite(n) => {
            let y = n as f64 * r * r;
            2.0 * r * poisson_partial_sum(n, y)
        }
    })
}

/// sum_{l=0}^{n-1} e^{-y} y^l / l! (the Poisson head probability).
fn poisson_partial_sum(n: usize, y: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if y < 700.0 {
        let mut term = (-y).exp();
        let mut sum = term;
        for l in 1..n {
            term *= y / l as f64;
            sum += term;
        }
        sum
    } else {
        let mut ln_term = -y;
        let mut sum = if ln_term > -745.0 { ln_term.exp() } else { 0.0 };
        for l in 1..n {
            ln_term += y.ln() - (l as f64).ln();
            if ln_term > -745.0 {
                sum += ln_term.exp();
            }
        }
        sum
    }
}

/// Radial CDF of theta_n at r via the regularized lower incomplete gamma
/// recurrence P(l+1, y) = P(l, y) - e^{-y} y^l / l!:
/// `F_n(r) = (1/n) sum_{l=1}^{n} P(l, n r^2)`.
///
/// For large y the Poisson terms run in log space; the recurrence itself is
/// unchanged.
fn theta_radial_cdf(n: usize, r: f64) -> f64 {
    if n == 0 || r <= 0.0 {
        return 0.0;
    }
    let y = n as f64 * r * r;
    let mut p;
    let mut sum;
    if y < 700.0 {
        let mut pmf = (-y).exp(); // e^{-y} y^0 / 0!
        p = 1.0 - pmf; // P(1, y)
        sum = p;
        for l in 1..n {
            pmf *= y / l as f64;
            p -= pmf;
            sum += p.clamp(0.0, 1.0);
        }
    } else {
        let mut ln_pmf = -y;
        p = 1.0;
        sum = p;
        for l in 1..n {
            ln_pmf += y.ln() - (l as f64).ln();
            if ln_pmf > -745.0 {
                p -= ln_pmf.exp();
            }
            sum += p.clamp(0.0, 1.0);
        }
    }
    (sum / n as f64).clamp(0.0, 1.0)
}

fn quarter_circle_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 2.0 {
        1.0
    } else {
        (x * (4.0 - x * x).sqrt() / 2.0 + 2.0 * (x / 2.0).asin()) / std::f64::consts::PI
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Applies a Gauss-Legendre rule (given on [-1,1]) over [a, b].
fn gl_panel(f: impl Fn(f64) -> f64, a: f64, b: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (&x, &w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawKind {
    /// singular-value laws rho_n
    Rho,
    /// radial eigenvalue laws theta_n
    Theta,
}

#[derive(Debug, Clone)]
struct Component {
    weight: f64,
    kind: LawKind,
    param: Dim,
    /// cumulative integrals of the density on the fixed grid (rho with finite
    /// n only; everything else has a closed-form CDF)
    grid: Option<GridCdf>,
}

#[derive(Debug, Clone)]
struct GridCdf {
    x_max: f64,
    step: f64,
    cum: Vec<f64>,
    gl_nodes: Vec<f64>,
    gl_weights: Vec<f64>,
}

impl Component {
    fn new(kind: LawKind, param: Dim, weight: f64) -> Self {
        let param = match kind {
            LawKind::Rho => effective_rho_param(param),
            LawKind::Theta => param,
        };
        let grid = match (kind, param) {
            (LawKind::Rho, Dim::Finite(n)) => {
                let (gl_nodes, gl_weights) = gauss_legendre(8);
                let step = FINITE_X_MAX / GRID_CELLS as f64;
                let mut cum = Vec::with_capacity(GRID_CELLS + 1);
                cum.push(0.0);
                let mut acc = 0.0;
                for cell in 0..GRID_CELLS {
                    let a = cell as f64 * step;
                    let b = a + step;
                    acc += gl_panel(
                        |x| rho_density(Dim::Finite(n), x),
                        a,
                        b,
                        &gl_nodes,
                        &gl_weights,
                    );
                    cum.push(acc);
                }
                Some(GridCdf {
                    x_max: FINITE_X_MAX,
                    step,
                    cum,
                    gl_nodes,
                    gl_weights,
                })
            }
            _ => None,
        };
        Component {
            weight,
            kind,
            param,
            grid,
        }
    }

    fn density(&self, x: f64) -> f64 {
        match self.kind {
            LawKind::Rho => rho_density(self.param, x),
            LawKind::Theta => theta_radial_density(self.param, x.max(0.0)).unwrap_or(0.0),
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match (self.kind, self.param) {
            (LawKind::Rho, Dim::Infinite) => quarter_circle_cdf(x),
            (LawKind::Theta, Dim::Infinite) => (x * x).min(1.0),
            (LawKind::Theta, Dim::Finite(n)) => theta_radial_cdf(n, x),
            (LawKind::Rho, Dim::Finite(n)) => {
                let g = self.grid.as_ref().expect("finite rho component has a grid");
                if x >= g.x_max {
                    return g.cum[GRID_CELLS].min(1.0);
                }
                let cell = (x / g.step) as usize;
                let base = g.cum[cell];
                let a = cell as f64 * g.step;
                let partial = gl_panel(
                    |t| rho_density(Dim::Finite(n), t),
                    a,
                    x,
                    &g.gl_nodes,
                    &g.gl_weights,
                );
                (base + partial).clamp(0.0, 1.0)
            }
        }
    }

    fn x_max(&self) -> f64 {
        match self.param {
            Dim::Infinite => match self.kind {
                LawKind::Rho => 2.0,
                LawKind::Theta => 1.0,
            },
            Dim::Finite(_) => FINITE_X_MAX,
        }
    }

    /// integral of x^k against the component density
    fn moment(&self, k: u32) -> f64 {
        if let (LawKind::Rho, Dim::Infinite) = (self.kind, self.param) {
            return quarter_circle_raw_moment(k);
        }
        let (nodes, weights) = gauss_legendre(8);
        let step = self.x_max() / GRID_CELLS as f64;
        let mut acc = 0.0;
        for cell in 0..GRID_CELLS {
            let a = cell as f64 * step;
            acc += gl_panel(
                |x| x.powi(k as i32) * self.density(x),
                a,
                a + step,
                &nodes,
                &weights,
            );
        }
        acc
    }
}

/// An evaluable limiting law: a single rho_n / theta_n or a Plancherel-driven
/// mixture of them. Theta laws are kept as radial laws (distribution of |z|).
#[derive(Debug, Clone)]
pub struct TheoreticalLaw {
    kind: LawKind,
    components: Vec<Component>,
    label: String,
}

impl TheoreticalLaw {
    pub fn rho(param: Dim) -> Self {
        TheoreticalLaw {
            kind: LawKind::Rho,
            components: vec![Component::new(LawKind::Rho, param, 1.0)],
            label: format!("rho_{param}"),
        }
    }

    pub fn theta(param: Dim) -> Self {
        TheoreticalLaw {
            kind: LawKind::Theta,
            components: vec![Component::new(LawKind::Theta, param, 1.0)],
            label: format!("theta_{param}"),
        }
    }

    pub fn rho_mixture(mu: &DimensionMeasure) -> Self {
        Self::mixture(LawKind::Rho, mu)
    }

    pub fn theta_mixture(mu: &DimensionMeasure) -> Self {
        Self::mixture(LawKind::Theta, mu)
    }

    fn mixture(kind: LawKind, mu: &DimensionMeasure) -> Self {
        let components = mu
            .atoms()
            .map(|(d, w)| Component::new(kind, d, w))
            .collect();
        let name = match kind {
            LawKind::Rho => "rho",
            LawKind::Theta => "theta",
        };
        TheoreticalLaw {
            kind,
            components,
            label: format!("{name}-mixture"),
        }
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn density(&self, x: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * c.density(x))
            .sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.components.iter().map(|c| c.weight * c.cdf(x)).sum()
    }

    pub fn moment(&self, k: u32) -> f64 {
        self.components.iter().map(|c| c.weight * c.moment(k)).sum()
    }

    pub fn x_max(&self) -> f64 {
        self.components
            .iter()
            .map(Component::x_max)
            .fold(0.0, f64::max)
    }
}

/// `int x^{2k} d rho_infinity` by quadrature (substituting x = 2 sin(phi)
/// removes the edge singularity); equals the k-th Catalan number.
pub fn quarter_circle_moment(k: u32) -> f64 {
    quarter_circle_raw_moment(2 * k)
}

fn quarter_circle_raw_moment(p: u32) -> f64 {
    // int_0^2 x^p (1/pi) sqrt(4-x^2) dx with x = 2 sin(phi)
    let (nodes, weights) = gauss_legendre(64);
    let f = |phi: f64| {
        let x = 2.0 * phi.sin();
        let c = phi.cos();
        x.powi(p as i32) * (2.0 * c) * (2.0 * c) / std::f64::consts::PI
    };
    gl_panel(f, 0.0, std::f64::consts::FRAC_PI_2, &nodes, &weights)
}

/// Kolmogorov-Smirnov distance between a weighted sample and a CDF,
/// evaluated on both sides of every jump point. The left side evaluates the
/// CDF just below the jump so that a sample compared against its own step
/// law comes out at zero.
pub fn ks_statistic(points: &[(f64, f64)], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidParameter(
            "empty sample in ks_statistic".into(),
        ));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("NaN sample point"));
    let total: f64 = pts.iter().map(|(_, w)| w).sum();
    let mut cum = 0.0;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < pts.len() {
        let x = pts[i].0;
        let before = cum / total;
        // absorb ties so the jump is taken in one step
        while i < pts.len() && pts[i].0 == x {
            cum += pts[i].1;
            i += 1;
        }
        let after = cum / total;
        let delta = 1e-9 * (1.0 + x.abs());
        d = d
            .max((cdf(x) - after).abs())
            .max((cdf(x - delta) - before).abs());
    }
    Ok(d)
}

/// KS distance between a (radialized) spectral sample and a law.
pub fn ks_distance(sample: &[(f64, f64)], law: &TheoreticalLaw) -> Result<f64> {
    ks_statistic(sample, |x| law.cdf(x))
}

/// Two-sample KS distance for weighted samples.
pub fn ks_two_sample(a: &[(f64, f64)], b: &[(f64, f64)]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter(
            "empty sample in ks_two_sample".into(),
        ));
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    sb.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    let ta: f64 = sa.iter().map(|(_, w)| w).sum();
    let tb: f64 = sb.iter().map(|(_, w)| w).sum();
    let mut ia = 0;
    let mut ib = 0;
    let mut ca = 0.0;
    let mut cb = 0.0;
    let mut d: f64 = 0.0;
    while ia < sa.len() || ib < sb.len() {
        let xa = sa.get(ia).map(|p| p.0).unwrap_or(f64::INFINITY);
        let xb = sb.get(ib).map(|p| p.0).unwrap_or(f64::INFINITY);
        let x = xa.min(xb);
        while ia < sa.len() && sa[ia].0 == x {
            ca += sa[ia].1;
            ia += 1;
        }
        while ib < sb.len() && sb[ib].0 == x {
            cb += sb[ib].1;
            ib += 1;
        }
        d = d.max((ca / ta - cb / tb).abs());
    }
    Ok(d)
}

/// Levy distance between two CDFs, approximated on a uniform grid over
/// [lo, hi] (10^4 points) with bisection on epsilon. The approximation error
/// is bounded by the grid spacing.
pub fn levy_distance(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const GRID: usize = 10_000;
    let span = hi - lo;
    let xs: Vec<f64> = (0..=GRID)
        .map(|i| lo + span * i as f64 / GRID as f64)
        .collect();
    let feasible = |eps: f64| {
        xs.iter().all(|&x| {
            let gv = g(x);
            f(x - eps) - eps <= gv && gv <= f(x + eps) + eps
        })
    };
    let mut lo_eps = 0.0;
    let mut hi_eps = 1.0;
    if feasible(0.0) {
        return 0.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo_eps + hi_eps);
        if feasible(mid) {
            hi_eps = mid;
        } else {
            lo_eps = mid;
        }
    }
    hi_eps
}

/// Standard normal CDF (via a Chebyshev erfc approximation, |rel err| < 1.2e-7).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let ans = t
        * (-z * z - 1.26551223
            + t * (1.00002368
                + t * (0.37409196
                    + t * (0.09678418
                        + t * (-0.18628806
                            + t * (0.27886807
                                + t * (-1.13520398
                                    + t * (1.48851587 + t * (-0.82215223 + t * 0.17087277)))))))))
            .exp();
    if x >= 0.0 {
        ans
    } else {
        2.0 - ans
    }
}

/// Inverse of a law's CDF by bisection (test utility for inverse-transform
/// sampling).
pub fn law_quantile(law: &TheoreticalLaw, p: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = law.x_max();
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if law.cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Max CDF difference between two laws on a dense grid.
pub fn law_sup_distance(a: &TheoreticalLaw, b: &TheoreticalLaw) -> f64 {
    let hi = a.x_max().max(b.x_max());
    (0..=4000)
        .map(|i| hi * i as f64 / 4000.0)
        .map(|x| (a.cdf(x) - b.cdf(x)).abs())
        .fold(0.0, f64::max)
}
