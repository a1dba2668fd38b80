//! Browser bindings: three interactive entry points returning JSON strings.
//!
//! `group_info` describes a group and its Plancherel masses, `spectrum`
//! samples pooled eigen/singular spectra of P_X / sqrt(|G|), and `law_curve`
//! evaluates the matching limit law on a grid. The static page in `www/`
//! renders these on canvases. The `*_impl` functions hold the logic and are
//! unit-tested natively; the `#[wasm_bindgen]` wrappers only translate errors.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use gcirc::experiment::parse_law;
use gcirc::noise::NoiseSpec;
use gcirc::rep::{irreducibles, plancherel_from};
use gcirc::spectral::{pooled_spectrum, SpectralKind, SpectralPoints};
use gcirc::{Error, FiniteGroup, Result};

/// Browser-side guards: keep a click responsive.
const MAX_ORDER: usize = 2048;
const MAX_TRIALS: usize = 500;

fn to_js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Config(e.to_string()))
}

#[derive(Serialize)]
struct IrrepInfo {
    label: String,
    dim: usize,
}

#[derive(Serialize)]
struct MassInfo {
    dim: usize,
    numerator: u64,
    denominator: u64,
    value: f64,
}

#[derive(Serialize)]
struct GroupInfo {
    spec: String,
    order: usize,
    irreps: Vec<IrrepInfo>,
    masses: Vec<MassInfo>,
}

fn group_info_impl(spec: &str) -> Result<String> {
    let group = FiniteGroup::parse_with_cap(spec, MAX_ORDER)?;
    let irreps = irreducibles(&group)?;
    let mu = plancherel_from(&irreps, group.order())?;
    let masses = mu
        .exact_atoms()
        .map(|it| {
            it.filter_map(|(d, (num, den))| match d {
                gcirc::Dim::Finite(n) => Some(MassInfo {
                    dim: n,
                    numerator: num,
                    denominator: den,
                    value: num as f64 / den as f64,
                }),
                gcirc::Dim::Infinite => None,
            })
            .collect()
        })
        .unwrap_or_default();
    json(&GroupInfo {
        spec: group.to_string(),
        order: group.order(),
        irreps: irreps
            .iter()
            .map(|r| IrrepInfo {
                label: r.label.clone(),
                dim: r.dim,
            })
            .collect(),
        masses,
    })
}

#[derive(Serialize)]
struct SpectrumOut {
    kind: String,
    order: usize,
    trials: usize,
    /// eigen: [re, im, weight]; singular: [sigma, weight]
    points: Vec<Vec<f64>>,
}

fn spectrum_impl(spec: &str, kind: &str, noise: &str, trials: u32, seed: u32) -> Result<String> {
    let group = FiniteGroup::parse_with_cap(spec, MAX_ORDER)?;
    let kind: SpectralKind = kind.parse()?;
    let noise = noise.parse()?;
    let trials = (trials as usize).clamp(1, MAX_TRIALS);
    let irreps = irreducibles(&group)?;
    let noise_spec = NoiseSpec::new(noise, seed as u64);
    let sample = pooled_spectrum(&group, &irreps, kind, &noise_spec, trials)?;
    let points = match &sample.points {
        SpectralPoints::Eigen(pts) => pts.iter().map(|&(z, w)| vec![z.re, z.im, w]).collect(),
        SpectralPoints::Singular(pts) => pts.iter().map(|&(x, w)| vec![x, w]).collect(),
    };
    json(&SpectrumOut {
        kind: kind.to_string(),
        order: group.order(),
        trials,
        points,
    })
}

#[derive(Serialize)]
struct CurveOut {
    label: String,
    x: Vec<f64>,
    density: Vec<f64>,
    cdf: Vec<f64>,
}

fn law_curve_impl(spec: &str, law: &str, kind: &str, points: u32) -> Result<String> {
    let kind: SpectralKind = kind.parse()?;
    let group = if law == "mixture" || law == "auto" {
        Some(FiniteGroup::parse_with_cap(spec, MAX_ORDER)?)
    } else {
        None
    };
    let law = parse_law(law, group.as_ref(), kind)?;
    let n = points.clamp(16, 4096) as usize;
    let x_max = law.x_max();
    let xs: Vec<f64> = (0..=n).map(|i| x_max * i as f64 / n as f64).collect();
    let density = xs.iter().map(|&x| law.density(x)).collect();
    let cdf = xs.iter().map(|&x| law.cdf(x)).collect();
    json(&CurveOut {
        label: law.label().to_string(),
        x: xs,
        density,
        cdf,
    })
}

/// Group order, irrep dimensions and Plancherel masses as JSON.
#[wasm_bindgen]
pub fn group_info(spec: &str) -> std::result::Result<String, JsError> {
    group_info_impl(spec).map_err(to_js)
}

/// Pooled spectrum sample of P_X / sqrt(|G|) as JSON.
#[wasm_bindgen]
pub fn spectrum(
    spec: &str,
    kind: &str,
    noise: &str,
    trials: u32,
    seed: u32,
) -> std::result::Result<String, JsError> {
    spectrum_impl(spec, kind, noise, trials, seed).map_err(to_js)
}

/// Density + CDF of a law on a grid as JSON. `law` is `mixture` (Plancherel
/// mixture for `spec`, radial for eigen), `rho:<n|inf>` or `theta:<n|inf>`;
/// `kind` picks the mixture family.
#[wasm_bindgen]
pub fn law_curve(
    spec: &str,
    law: &str,
    kind: &str,
    points: u32,
) -> std::result::Result<String, JsError> {
    law_curve_impl(spec, law, kind, points).map_err(to_js)
}
