//! Reproducible experiment runner: config in, metrics + CSV files + manifest
//! out.
//!
//! Configs round-trip losslessly through TOML and reject unknown keys. All
//! emitted CSVs use `.` decimals with 17 significant digits, so reruns with
//! the same config are byte-identical (trials are reduced in trial order, so
//! this holds at any thread count).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::clt::{clt_experiment, TestFunction};
use crate::error::{Error, Result};
use crate::freeness::{freeness_report, StarWord};
use crate::group::FiniteGroup;
use crate::noise::{NoiseDistribution, NoiseSpec};
use crate::rep::{irreducibles, plancherel_from, validate_representations, Dim};
use crate::spectral::{pooled_spectrum, SpectralKind, SpectralPoints};
use crate::theory::{ks_statistic, levy_distance, TheoreticalLaw};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Info,
    Density,
    Spectrum,
    Compare,
    Freeness,
    Clt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SpectrumParams {
    /// eigen or singular
    #[serde(default)]
    pub kind: Option<SpectralKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DensityParams {
    /// rho | theta | rho-mixture | theta-mixture
    #[serde(default)]
    pub family: Option<String>,
    /// a positive integer or "inf" (single laws only)
    #[serde(default)]
    pub n: Option<String>,
    #[serde(default)]
    pub grid: Option<usize>,
    #[serde(default)]
    pub x_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FreenessParams {
    /// semicolon-separated star words, e.g. "a a* ; a b a* b*"
    #[serde(default)]
    pub words: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CltParams {
    /// test function, e.g. "poly:0,1"
    #[serde(default)]
    pub f: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub group: String,
    #[serde(default = "default_noise")]
    pub noise: NoiseDistribution,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub spectrum: SpectrumParams,
    #[serde(default)]
    pub density: DensityParams,
    #[serde(default)]
    pub freeness: FreenessParams,
    #[serde(default)]
    pub clt: CltParams,
}

fn default_noise() -> NoiseDistribution {
    NoiseDistribution::ComplexGaussian
}

fn default_trials() -> usize {
    20
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, group: &str) -> Self {
        ExperimentConfig {
            kind,
            group: group.to_string(),
            noise: default_noise(),
            seed: 0,
            trials: default_trials(),
            out_dir: None,
            threads: None,
            spectrum: SpectrumParams::default(),
            density: DensityParams::default(),
            freeness: FreenessParams::default(),
            clt: CltParams::default(),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("serialize config: {e}")))
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(format!("parse config: {e}")))
    }
}

/// Outcome of a run: metrics, human-readable lines, and the files written.
#[derive(Debug, Clone, Serialize)]
pub struct ResultSet {
    pub config: ExperimentConfig,
    pub metrics: BTreeMap<String, f64>,
    pub lines: Vec<String>,
    /// file names relative to the output directory
    pub files: Vec<String>,
    pub wall_ms: u128,
    pub seed: u64,
}

impl ResultSet {
    fn new(config: &ExperimentConfig) -> Self {
        ResultSet {
            config: config.clone(),
            metrics: BTreeMap::new(),
            lines: Vec::new(),
            files: Vec::new(),
            wall_ms: 0,
            seed: config.seed,
        }
    }
}

/// 17-significant-digit float formatting: locale-free and byte-stable.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(out_dir: &Path, name: &str, contents: &str, result: &mut ResultSet) -> Result<()> {
    fs::write(out_dir.join(name), contents)?;
    result.files.push(name.to_string());
    Ok(())
}

fn parse_law_param(s: &str) -> Result<Dim> {
    if s == "inf" || s == "infinity" {
        return Ok(Dim::Infinite);
    }
    let n: usize = s
        .parse()
        .map_err(|_| Error::Config(format!("bad law parameter `{s}`")))?;
    if n == 0 {
        return Err(Error::Config("law parameter must be >= 1".into()));
    }
    Ok(Dim::Finite(n))
}

/// Builds a law from a textual spec: `mixture` (Plancherel mixture of the
/// configured group), `rho:<n|inf>`, or `theta:<n|inf>`.
pub fn parse_law(
    spec: &str,
    group: Option<&FiniteGroup>,
    kind: SpectralKind,
) -> Result<TheoreticalLaw> {
    match spec {
        "mixture" | "auto" => {
            let g = group.ok_or_else(|| Error::Config("mixture law needs a group".into()))?;
            let irreps = irreducibles(g)?;
            let mu = plancherel_from(&irreps, g.order())?;
            Ok(match kind {
                SpectralKind::Singular => TheoreticalLaw::rho_mixture(&mu),
                SpectralKind::Eigen => TheoreticalLaw::theta_mixture(&mu),
            })
        }
        other => {
            let (family, param) = other
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("bad law spec `{other}`")))?;
            let p = parse_law_param(param)?;
            match family {
                "rho" => Ok(TheoreticalLaw::rho(p)),
                "theta" => Ok(TheoreticalLaw::theta(p)),
                _ => Err(Error::Config(format!("unknown law family `{family}`"))),
            }
        }
    }
}

/// Runs one experiment. Writes CSVs and a manifest when `out_dir` is set;
/// every file named in the returned set exists on success.
pub fn run(config: &ExperimentConfig) -> Result<ResultSet> {
    let started = Instant::now();
    let mut result = ResultSet::new(config);

    #[cfg(feature = "parallel")]
    {
        if let Some(n) = config.threads {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| run_inner(config, &mut result))?;
        } else {
            run_inner(config, &mut result)?;
        }
    }
    #[cfg(not(feature = "parallel"))]
    run_inner(config, &mut result)?;

    result.wall_ms = started.elapsed().as_millis();
    if let Some(dir) = &config.out_dir {
        let manifest = serde_json::to_string_pretty(&result)
            .map_err(|e| Error::Config(format!("manifest: {e}")))?;
        fs::write(dir.join("manifest.json"), manifest)?;
    }
    Ok(result)
}

fn run_inner(config: &ExperimentConfig, result: &mut ResultSet) -> Result<()> {
    if let Some(dir) = &config.out_dir {
        fs::create_dir_all(dir)?;
    }
    match config.kind {
        ExperimentKind::Info => run_info(config, result),
        ExperimentKind::Density => run_density(config, result),
        ExperimentKind::Spectrum => run_spectrum(config, result, false),
        ExperimentKind::Compare => run_spectrum(config, result, true),
        ExperimentKind::Freeness => run_freeness(config, result),
        ExperimentKind::Clt => run_clt(config, result),
    }
}

fn run_info(config: &ExperimentConfig, result: &mut ResultSet) -> Result<()> {
    let group = FiniteGroup::parse(&config.group)?;
    let irreps = irreducibles(&group)?;
    let mu = plancherel_from(&irreps, group.order())?;
    let report = validate_representations(&group, &irreps);

    result.metrics.insert("order".into(), group.order() as f64);
    result.metrics.insert("irreps".into(), irreps.len() as f64);
    result
        .metrics
        .insert("orthogonality_dev".into(), report.max_orthogonality_dev);

    result
        .lines
        .push(format!("group {}   order {}", group, group.order()));
    result.lines.push(format!(
        "irreps ({}): sum dim^2 = {}",
        irreps.len(),
        report.sum_dim_sq
    ));
    for r in &irreps {
        result
            .lines
            .push(format!("  {:<12} dim {}", r.label, r.dim));
    }
    result.lines.push("plancherel masses:".into());
    if let Some(exact) = mu.exact_atoms() {
        for (d, (num, den)) in exact {
            result.lines.push(format!(
                "  dim {:<4} {}/{} = {:.6}",
                d.to_string(),
                num,
                den,
                num as f64 / den as f64
            ));
        }
    }
    result.lines.push(format!(
        "validation: unitarity {:.2e}, homomorphism {:.2e}, orthogonality {:.2e} ({} pairs)",
        report.max_unitarity_dev,
        report.max_homomorphism_dev,
        report.max_orthogonality_dev,
        report.orthogonality_pairs
    ));
    Ok(())
}

fn density_csv(law: &TheoreticalLaw, grid: usize, x_max: f64) -> String {
    let mut csv = String::from("x,density,cdf\n");
    for i in 0..=grid {
        let x = x_max * i as f64 / grid as f64;
        let _ = writeln!(
            csv,
            "{},{},{}",
            format_float(x),
            format_float(law.density(x)),
            format_float(law.cdf(x))
        );
    }
    csv
}

fn run_density(config: &ExperimentConfig, result: &mut ResultSet) -> Result<()> {
    let family = config.density.family.as_deref().unwrap_or("rho");
    let group = if family.ends_with("mixture") {
        Some(FiniteGroup::parse(&config.group)?)
    } else {
        None
    };
    let law = match family {
        "rho-mixture" => parse_law("mixture", group.as_ref(), SpectralKind::Singular)?,
        "theta-mixture" => parse_law("mixture", group.as_ref(), SpectralKind::Eigen)?,
        "rho" | "theta" => {
            let n = config.density.n.as_deref().unwrap_or("inf");
            parse_law(&format!("{family}:{n}"), None, SpectralKind::Singular)?
        }
        other => return Err(Error::Config(format!("unknown density family `{other}`"))),
    };
    let grid = config.density.grid.unwrap_or(512);
    let x_max = config.density.x_max.unwrap_or_else(|| law.x_max());
    let csv = density_csv(&law, grid, x_max);
    result.metrics.insert("grid".into(), grid as f64);
    result
        .metrics
        .insert("mass_at_x_max".into(), law.cdf(x_max));
    match &config.out_dir {
        Some(dir) => write_file(dir, "law.csv", &csv, result)?,
        None => result.lines.extend(csv.lines().map(String::from)),
    }
    Ok(())
}

fn spectral_kind(config: &ExperimentConfig) -> SpectralKind {
    config.spectrum.kind.unwrap_or(SpectralKind::Singular)
}

fn run_spectrum(config: &ExperimentConfig, result: &mut ResultSet, compare: bool) -> Result<()> {
    let group = FiniteGroup::parse(&config.group)?;
    let irreps = irreducibles(&group)?;
    let kind = spectral_kind(config);
    let spec = NoiseSpec::new(config.noise, config.seed);
    let sample = pooled_spectrum(&group, &irreps, kind, &spec, config.trials)?;
    let mu = plancherel_from(&irreps, group.order())?;
    let law = match kind {
        SpectralKind::Singular => TheoreticalLaw::rho_mixture(&mu),
        SpectralKind::Eigen => TheoreticalLaw::theta_mixture(&mu),
    };

    result.metrics.insert("order".into(), group.order() as f64);
    result.metrics.insert("points".into(), sample.len() as f64);
    result
        .metrics
        .insert("total_weight".into(), sample.total_weight());

    let radial = sample.radial();
    if compare {
        let ks = ks_statistic(&radial, |x| law.cdf(x))?;
        result.metrics.insert("ks".into(), ks);
        // empirical CDF closure for the Levy comparison
        let mut sorted = radial.clone();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let total: f64 = sorted.iter().map(|(_, w)| w).sum();
        let ecdf = |x: f64| {
            let mut c = 0.0;
            for &(v, w) in &sorted {
                if v > x {
                    break;
                }
                c += w;
            }
            c / total
        };
        let levy = levy_distance(|x| law.cdf(x), ecdf, 0.0, law.x_max().max(1.0) * 1.5);
        result.metrics.insert("levy".into(), levy);
        result.lines.push(format!(
            "{} {} vs {}: ks = {:.4}, levy = {:.4} ({} points, {} trials)",
            group,
            kind,
            law.label(),
            ks,
            levy,
            sample.len(),
            config.trials
        ));
    } else {
        result.lines.push(format!(
            "{} {}: {} points over {} trials",
            group,
            kind,
            sample.len(),
            config.trials
        ));
    }

    if let Some(dir) = config.out_dir.clone() {
        let dir = dir.as_path();
        // sample CSV
        let mut csv = String::new();
        match &sample.points {
            SpectralPoints::Eigen(pts) => {
                csv.push_str("re,im,weight\n");
                for &(z, w) in pts {
                    let _ = writeln!(
                        csv,
                        "{},{},{}",
                        format_float(z.re),
                        format_float(z.im),
                        format_float(w)
                    );
                }
            }
            SpectralPoints::Singular(pts) => {
                csv.push_str("sigma,weight\n");
                for &(x, w) in pts {
                    let _ = writeln!(csv, "{},{}", format_float(x), format_float(w));
                }
            }
        }
        write_file(dir, "sample.csv", &csv, result)?;

        // radial projection (same as sample for singular; |z| for eigen)
        if kind == SpectralKind::Eigen {
            let mut rcsv = String::from("r,weight\n");
            for &(r, w) in &radial {
                let _ = writeln!(rcsv, "{},{}", format_float(r), format_float(w));
            }
            write_file(dir, "radial.csv", &rcsv, result)?;
        }

        // theoretical curve for the overlay
        let csv = density_csv(&law, 512, law.x_max());
        write_file(dir, "law.csv", &csv, result)?;

        let script = plot_script_contents(result)?;
        write_file(dir, "plot.gp", &script, result)?;
    }
    Ok(())
}

/// Builds a gnuplot script overlaying the empirical histogram with the
/// theoretical density; fails when the result has no density/CDF CSV.
pub fn plot_script_contents(result: &ResultSet) -> Result<String> {
    if !result.files.iter().any(|f| f == "law.csv") {
        return Err(Error::Config(
            "no density CSV in result, nothing to plot".into(),
        ));
    }
    let empirical = if result.files.iter().any(|f| f == "radial.csv") {
        "radial.csv"
    } else if result.files.iter().any(|f| f == "sample.csv") {
        "sample.csv"
    } else {
        return Err(Error::Config("no sample CSV in result".into()));
    };
    let mut s = String::new();
    s.push_str("# gnuplot script: empirical histogram vs theoretical density\n");
    s.push_str("set datafile separator comma\n");
    s.push_str("set key top right\n");
    s.push_str("binwidth = 0.05\n");
    s.push_str("bin(x) = binwidth*(floor(x/binwidth)+0.5)\n");
    let _ = writeln!(
        s,
        "plot '{empirical}' using (bin($1)):($2/binwidth) smooth freq with boxes title 'empirical', \\"
    );
    s.push_str("     'law.csv' using 1:2 with lines lw 2 title 'theory'\n");
    Ok(s)
}

/// Writes the plot script next to the result's CSVs.
pub fn emit_plot_script(result: &mut ResultSet) -> Result<PathBuf> {
    let dir = result
        .config
        .out_dir
        .clone()
        .ok_or_else(|| Error::Config("no output directory".into()))?;
    let contents = plot_script_contents(result)?;
    let path = dir.join("plot.gp");
    fs::write(&path, &contents)?;
    if !result.files.iter().any(|f| f == "plot.gp") {
        result.files.push("plot.gp".into());
    }
    Ok(path)
}

/// The default word set: the sixteen length-4 star words
/// `c_{i1} c_{i2}* c_{i3} c_{i4}*` over two families.
pub fn default_star_words() -> Vec<StarWord> {
    let mut words = Vec::with_capacity(16);
    for bits in 0..16usize {
        let fams = [(bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1];
        let letters = vec![
            (fams[0], false),
            (fams[1], true),
            (fams[2], false),
            (fams[3], true),
        ];
        words.push(StarWord::new(letters).expect("nonempty"));
    }
    words
}

fn run_freeness(config: &ExperimentConfig, result: &mut ResultSet) -> Result<()> {
    let group = FiniteGroup::parse(&config.group)?;
    let irreps = irreducibles(&group)?;
    let words = match config.freeness.words.as_deref() {
        Some(s) => s
            .split(';')
            .map(|w| w.trim().parse::<StarWord>())
            .collect::<Result<Vec<_>>>()?,
        None => default_star_words(),
    };
    let spec = NoiseSpec::new(config.noise, config.seed);
    let rows = freeness_report(&group, &irreps, &words, &spec, config.trials)?;

    let mut csv = String::from("word,oracle,estimate_re,estimate_im,stderr,z\n");
    let mut max_z: f64 = 0.0;
    result.lines.push(format!(
        "{:<16} {:>8} {:>12} {:>12} {:>10} {:>8}",
        "word", "oracle", "est_re", "est_im", "stderr", "z"
    ));
    for row in &rows {
        max_z = max_z.max(row.z_score);
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            row.word,
            format_float(row.oracle),
            format_float(row.estimate.re),
            format_float(row.estimate.im),
            format_float(row.stderr),
            format_float(row.z_score)
        );
        result.lines.push(format!(
            "{:<16} {:>8} {:>12.5} {:>12.5} {:>10.5} {:>8.2}",
            row.word, row.oracle, row.estimate.re, row.estimate.im, row.stderr, row.z_score
        ));
    }
    result.metrics.insert("max_z".into(), max_z);
    result.metrics.insert("words".into(), rows.len() as f64);
    if let Some(dir) = &config.out_dir {
        write_file(dir, "words.csv", &csv, result)?;
    }
    Ok(())
}

fn run_clt(config: &ExperimentConfig, result: &mut ResultSet) -> Result<()> {
    let group = FiniteGroup::parse(&config.group)?;
    let irreps = irreducibles(&group)?;
    let f: TestFunction = config.clt.f.as_deref().unwrap_or("poly:0,1").parse()?;
    let spec = NoiseSpec::new(config.noise, config.seed);
    if config.noise != NoiseDistribution::ComplexGaussian {
        result.lines.push(format!(
            "note: {} noise is exploratory here; the CLT result assumes Gaussian entries",
            config.noise
        ));
    }
    let outcome = clt_experiment(&group, &irreps, &f, &spec, config.trials)?;

    result.metrics.insert("variance".into(), outcome.variance);
    result
        .metrics
        .insert("sigma2".into(), outcome.sigma_squared);
    result.metrics.insert("ks".into(), outcome.ks_normal);
    result
        .metrics
        .insert("trials".into(), outcome.trials as f64);
    result.lines.push(format!(
        "clt on {} with f = {}: variance {:.5} (target {:.5}), ks vs normal {:.4}",
        group, f, outcome.variance, outcome.sigma_squared, outcome.ks_normal
    ));
    // the JSON summary asked of the clt subcommand
    result.lines.push(format!(
        "{{\"variance\": {}, \"sigma2\": {}, \"ks\": {}, \"trials\": {}}}",
        format_float(outcome.variance),
        format_float(outcome.sigma_squared),
        format_float(outcome.ks_normal),
        outcome.trials
    ));
    if let Some(dir) = &config.out_dir {
        let mut csv = String::from("trial,s_centered\n");
        for (t, s) in outcome.samples.iter().enumerate() {
            let _ = writeln!(csv, "{},{}", t, format_float(*s));
        }
        write_file(dir, "trials.csv", &csv, result)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("gcirc-test-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn config_round_trips_through_toml() {
        let mut configs = vec![
            ExperimentConfig::new(ExperimentKind::Info, "S(4)"),
            ExperimentConfig::new(ExperimentKind::Compare, "D(40)"),
        ];
        configs[1].trials = 50;
        configs[1].seed = 99;
        configs[1].spectrum.kind = Some(SpectralKind::Eigen);
        configs[1].noise = NoiseDistribution::FourthRoots;
        let mut clt = ExperimentConfig::new(ExperimentKind::Clt, "D(50)");
        clt.clt.f = Some("poly:0,1".into());
        clt.threads = Some(2);
        configs.push(clt);
        for c in configs {
            let text = c.to_toml().unwrap();
            let back = ExperimentConfig::from_toml(&text).unwrap();
            assert_eq!(c, back, "round trip failed for {text}");
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = "kind = \"info\"\ngroup = \"Z(4)\"\nbogus = 3\n";
        assert!(ExperimentConfig::from_toml(text).is_err());
    }

    #[test]
    fn info_s4() {
        let config = ExperimentConfig::new(ExperimentKind::Info, "S(4)");
        let r = run(&config).unwrap();
        assert_eq!(r.metrics["order"], 24.0);
        assert_eq!(r.metrics["irreps"], 5.0);
        // dims 1,1,2,3,3 and masses 2/24, 4/24, 18/24
        let joined = r.lines.join("\n");
        assert!(joined.contains("2/24"), "{joined}");
        assert!(joined.contains("4/24"), "{joined}");
        assert!(joined.contains("18/24"), "{joined}");
    }

    #[test]
    fn malformed_group_is_config_error() {
        let config = ExperimentConfig::new(ExperimentKind::Info, "Q(3)");
        let err = run(&config).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("unknown group kind"));
    }

    #[test]
    fn compare_writes_manifest_and_files() {
        let dir = temp_dir("compare");
        let mut config = ExperimentConfig::new(ExperimentKind::Compare, "D(8)");
        config.trials = 3;
        config.out_dir = Some(dir.clone());
        let r = run(&config).unwrap();
        assert!(r.metrics.contains_key("ks"));
        assert!(r.metrics.contains_key("levy"));
        for f in &r.files {
            assert!(dir.join(f).exists(), "missing {f}");
        }
        assert!(dir.join("manifest.json").exists());
        // plot script references only manifest files
        let script = fs::read_to_string(dir.join("plot.gp")).unwrap();
        for token in ["sample.csv", "law.csv"] {
            if script.contains(token) {
                assert!(r.files.iter().any(|f| f == token));
            }
        }
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn reruns_are_byte_identical() {
        let dir1 = temp_dir("rerun1");
        let dir2 = temp_dir("rerun2");
        for (dir, _) in [(dir1.clone(), 0), (dir2.clone(), 1)] {
            let mut config = ExperimentConfig::new(ExperimentKind::Spectrum, "D(6)");
            config.trials = 4;
            config.seed = 12;
            config.spectrum.kind = Some(SpectralKind::Eigen);
            config.out_dir = Some(dir);
            run(&config).unwrap();
        }
        for name in ["sample.csv", "radial.csv", "law.csv"] {
            let a = fs::read(dir1.join(name)).unwrap();
            let b = fs::read(dir2.join(name)).unwrap();
            assert_eq!(a, b, "{name} differs between reruns");
        }
        let _ = fs::remove_dir_all(&dir1);
        let _ = fs::remove_dir_all(&dir2);
    }

    #[test]
    fn plot_script_requires_density_csv() {
        let config = ExperimentConfig::new(ExperimentKind::Spectrum, "D(6)");
        let empty = ResultSet::new(&config);
        assert!(plot_script_contents(&empty).is_err());
    }

    #[test]
    fn density_to_stdout_lines() {
        let mut config = ExperimentConfig::new(ExperimentKind::Density, "");
        config.density.family = Some("rho".into());
        config.density.n = Some("2".into());
        config.density.grid = Some(16);
        let r = run(&config).unwrap();
        assert_eq!(r.lines.len(), 18); // header + 17 rows
        assert!(r.lines[0] == "x,density,cdf");
        assert!((r.metrics["mass_at_x_max"] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn default_word_set_is_sixteen() {
        let words = default_star_words();
        assert_eq!(words.len(), 16);
        assert!(words.iter().any(|w| w.to_string() == "a a* a a*"));
        assert!(words.iter().any(|w| w.to_string() == "a b* b a*"));
    }
}
