//! *-moments of independent convolution families against the free circular
//! oracle.
//!
//! The oracle counts non-crossing pair partitions in which every pair joins a
//! starred and an unstarred letter of the same family: that is the free
//! cumulant expansion of a family of free circular elements (kappa_2(c, c*) =
//! kappa_2(c*, c) = 1, everything else zero). The Monte Carlo side estimates
//! the same word through the Fourier blocks, summing
//! mu_G(Lambda)/dim tr of the word in the scaled blocks; starred letters use
//! the conjugate transpose block since P_X^* is again a convolution operator.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::fourier_all;
use crate::group::FiniteGroup;
use crate::linalg::mean_var;
use crate::noise::{sample_noise_labeled, NoiseSpec};
use crate::par::par_map;
use crate::rep::Irrep;

/// A word in the letters c_1, c_1^*, ..., c_m, c_m^*.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarWord {
    /// (family index, starred), family indices 0-based
    pub letters: Vec<(usize, bool)>,
}

impl StarWord {
    pub fn new(letters: Vec<(usize, bool)>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidParameter("empty star word".into()));
        }
        Ok(StarWord { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn families(&self) -> usize {
        self.letters.iter().map(|&(f, _)| f + 1).max().unwrap_or(0)
    }

    /// Reverses the word and flips every star (the adjoint word).
    pub fn star_reversed(&self) -> StarWord {
        StarWord {
            letters: self.letters.iter().rev().map(|&(f, s)| (f, !s)).collect(),
        }
    }
}

impl fmt::Display for StarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = "abcdefgh";
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(fam, starred)| {
                let ch = names.as_bytes().get(fam).copied().unwrap_or(b'?') as char;
                if starred {
                    format!("{ch}*")
                } else {
                    ch.to_string()
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for StarWord {
    type Err = Error;

    /// Grammar: space-separated tokens `a`, `a*`, `b`, `b*`, ... mapping
    /// letters to family indices.
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (name, starred) = match tok.strip_suffix('*') {
                Some(base) => (base, true),
                None => (tok, false),
            };
            let mut chars = name.chars();
            let (Some(ch), None) = (chars.next(), chars.next()) else {
                return Err(Error::InvalidParameter(format!("bad word token `{tok}`")));
            };
            if !ch.is_ascii_lowercase() {
                return Err(Error::InvalidParameter(format!("bad word token `{tok}`")));
            }
            letters.push((ch as usize - 'a' as usize, starred));
        }
        StarWord::new(letters)
    }
}

/// phi(word) for a free circular family: the number of non-crossing pair
/// partitions of the positions in which every pair joins a starred and an
/// unstarred letter of the same family. Zero for odd length.
pub fn circular_word_moment(word: &StarWord) -> u64 {
    let letters = &word.letters;
    if letters.len() % 2 == 1 {
        return 0;
    }
    fn count(letters: &[(usize, bool)]) -> u64 {
        if letters.is_empty() {
            return 1;
        }
        let (fam0, star0) = letters[0];
        let mut total = 0;
        // match position 0 with an odd position j; the pair must be
        // star-opposite and same-family, and both sides must pair out
        for j in (1..letters.len()).step_by(2) {
            let (famj, starj) = letters[j];
            if famj == fam0 && starj != star0 {
                total += count(&letters[1..j]) * count(&letters[j + 1..]);
            }
        }
        total
    }
    count(letters)
}

/// One row of a freeness comparison.
#[derive(Debug, Clone)]
pub struct FreenessRow {
    pub word: String,
    pub oracle: f64,
    pub estimate: Complex64,
    pub stderr: f64,
    pub z_score: f64,
}

/// Monte Carlo estimate of one word moment; returns (estimate, stderr).
pub fn mc_word_moment(
    group: &FiniteGroup,
    irreps: &[Irrep],
    word: &StarWord,
    spec: &NoiseSpec,
    trials: usize,
) -> Result<(Complex64, f64)> {
    if trials < 100 {
        return Err(Error::InvalidParameter(
            "mc_word_moment needs >= 100 trials".into(),
        ));
    }
    let rows = freeness_report(group, irreps, std::slice::from_ref(word), spec, trials)?;
    Ok((rows[0].estimate, rows[0].stderr))
}

/// Per-word comparison table: oracle vs Monte Carlo over shared trials.
pub fn freeness_report(
    group: &FiniteGroup,
    irreps: &[Irrep],
    words: &[StarWord],
    spec: &NoiseSpec,
    trials: usize,
) -> Result<Vec<FreenessRow>> {
    if words.is_empty() {
        return Err(Error::InvalidParameter("no words given".into()));
    }
    let m = words.iter().map(StarWord::families).max().unwrap();
    let order = group.order() as f64;
    let scale = 1.0 / order.sqrt();

    let per_trial = par_map(trials, |t| -> Result<Vec<Complex64>> {
        // one independent noise vector per family, Fourier-transformed once
        let mut family_blocks = Vec::with_capacity(m);
        for fam in 0..m {
            let x = sample_noise_labeled(spec, group.order(), t as u64, &format!("noise-{fam}"));
            let blocks = fourier_all(&x.values, irreps, group)?;
            family_blocks.push(
                blocks
                    .into_iter()
                    .map(|b| b.matrix.map(|z| z * scale))
                    .collect::<Vec<_>>(),
            );
        }
        let adjoints: Vec<Vec<DMatrix<Complex64>>> = family_blocks
            .iter()
            .map(|bs| bs.iter().map(DMatrix::adjoint).collect())
            .collect();

        let values = words
            .iter()
            .map(|w| {
                let mut acc = Complex64::default();
                for (ri, r) in irreps.iter().enumerate() {
                    let mut prod = DMatrix::<Complex64>::identity(r.dim, r.dim);
                    for &(fam, starred) in &w.letters {
                        let b = if starred {
                            &adjoints[fam][ri]
                        } else {
                            &family_blocks[fam][ri]
                        };
                        prod = &prod * b;
                    }
                    let tr: Complex64 = prod.diagonal().iter().sum();
                    // mu_G(Lambda) / dim = dim / |G|
                    acc += tr * (r.dim as f64 / order);
                }
                acc
            })
            .collect();
        Ok(values)
    });
    let per_trial = per_trial.into_iter().collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(words.len());
    for (wi, w) in words.iter().enumerate() {
        let re: Vec<f64> = per_trial.iter().map(|v| v[wi].re).collect();
        let im: Vec<f64> = per_trial.iter().map(|v| v[wi].im).collect();
        let (mre, vre) = mean_var(&re);
        let (mim, vim) = mean_var(&im);
        let stderr = ((vre + vim) / trials as f64).sqrt();
        let oracle = circular_word_moment(w) as f64;
        let estimate = Complex64::new(mre, mim);
        let z_score = if stderr > 0.0 {
            (estimate - Complex64::new(oracle, 0.0)).norm() / stderr
        } else {
            0.0
        };
        rows.push(FreenessRow {
            word: w.to_string(),
            oracle,
            estimate,
            stderr,
            z_score,
        });
    }
    Ok(rows)
}
