//! GUE eigenvalue sampling and semicircle unfolding.
//!
//! Conventions (the literature has several): diagonal entries are real
//! `N(0, 1)`, off-diagonal entries complex with real and imaginary parts
//! each `N(0, 1/2)`. The eigenvalue density is then the semicircle on
//! `[-2√n, 2√n]`.
//!
//! Randomness comes from ChaCha8 (`rand_chacha` 0.3), seeded with
//! `seed_from_u64(seed)`; sample `i` reads stream `i`, so every matrix is an
//! independent, platform-stable stream and samples may be drawn in parallel.
//! Gaussian variates use the Marsaglia polar method.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier echoed into run metadata.
pub const RNG_ALGORITHM: &str =
    "chacha8(rand_chacha-0.3,seed_from_u64,stream=sample_index)+marsaglia-polar";

/// Semicircle values beyond the edge by more than this relative margin are
/// treated as a normalisation error rather than a fluctuation.
const EDGE_ERROR_MARGIN: f64 = 0.25;
const EDGE_CLAMP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GueConfig {
    pub matrix_size: usize,
    pub sample_count: usize,
    pub seed: u64,
}

impl GueConfig {
    pub fn new(matrix_size: usize, sample_count: usize, seed: u64) -> Result<Self> {
        if matrix_size < 2 {
            return Err(Error::Domain(format!(
                "GUE matrix size must be >= 2, got {matrix_size}"
            )));
        }
        if sample_count < 1 {
            return Err(Error::Domain("GUE sample count must be >= 1".into()));
        }
        Ok(Self {
            matrix_size,
            sample_count,
            seed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceSource {
    Gue,
    Zeta,
    Synthetic,
}

/// Unit-mean-density point sequence, strictly ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedSequence {
    values: Vec<f64>,
    source: SequenceSource,
    flagged: usize,
}

impl UnfoldedSequence {
    pub fn new(values: Vec<f64>, source: SequenceSource) -> Result<Self> {
        Self::with_flags(values, source, 0)
    }

    pub(crate) fn with_flags(
        values: Vec<f64>,
        source: SequenceSource,
        flagged: usize,
    ) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite value at index {i}")));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::Ordering {
                index: i + 1,
                previous: values[i],
                value: values[i + 1],
            });
        }
        Ok(Self {
            values,
            source,
            flagged,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn source(&self) -> SequenceSource {
        self.source
    }

    /// Points that needed special handling while unfolding (clamped to the
    /// semicircle edge, or zeta heights below the monotone range).
    pub fn flagged(&self) -> usize {
        self.flagged
    }

    pub fn mean_spacing(&self) -> Option<f64> {
        if self.values.len() < 2 {
            return None;
        }
        Some((self.values[self.values.len() - 1] - self.values[0]) / (self.values.len() - 1) as f64)
    }
}

/// Polar-method standard normal generator that keeps the spare variate.
struct PolarGaussian {
    spare: Option<f64>,
}

impl PolarGaussian {
    fn new() -> Self {
        Self { spare: None }
    }

    fn sample<R: Rng>(&mut self, rng: &mut R) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        loop {
            let u = 2.0 * rng.gen::<f64>() - 1.0;
            let v = 2.0 * rng.gen::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }
}

fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Draws the `index`-th GUE matrix of a run.
pub fn gue_matrix(config: &GueConfig, index: usize) -> DMatrix<Complex<f64>> {
    let n = config.matrix_size;
    let mut rng = sample_rng(config.seed, index);
    let mut gauss = PolarGaussian::new();
    let off_sd = 0.5_f64.sqrt();
    let mut m = DMatrix::from_element(n, n, Complex::new(0.0, 0.0));
    for i in 0..n {
        m[(i, i)] = Complex::new(gauss.sample(&mut rng), 0.0);
        for j in (i + 1)..n {
            let re = off_sd * gauss.sample(&mut rng);
            let im = off_sd * gauss.sample(&mut rng);
            m[(i, j)] = Complex::new(re, im);
            m[(j, i)] = Complex::new(re, -im);
        }
    }
    m
}

/// Ascending eigenvalues of one Hermitian matrix.
pub fn hermitian_eigenvalues(m: DMatrix<Complex<f64>>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `M` independent GUE spectra, each ascending. Bit-identical for a fixed
/// config regardless of thread count.
pub fn sample_gue_spectrum(config: &GueConfig) -> Vec<Vec<f64>> {
    (0..config.sample_count)
        .into_par_iter()
        .map(|i| hermitian_eigenvalues(gue_matrix(config, i)))
        .collect()
}

/// Expected number of eigenvalues below `lambda`,
/// `n ∫_{-2√n}^{λ} √(4n − x²) / (2πn) dx`.
pub fn semicircle_counting(lambda: f64, n: usize) -> f64 {
    let x = (lambda / (2.0 * (n as f64).sqrt())).clamp(-1.0, 1.0);
    n as f64 * (0.5 + (x * (1.0 - x * x).sqrt() + x.asin()) / PI)
}

/// Maps a GUE spectrum through the semicircle counting function and keeps
/// the central `bulk_fraction` of the points.
///
/// Eigenvalues past the edge `2√n` are clamped to it and flagged; beyond
/// 25% past the edge the spectrum cannot come from this ensemble's
/// normalisation and is rejected.
pub fn unfold_semicircle(spectrum: &[f64], bulk_fraction: f64) -> Result<UnfoldedSequence> {
    if !(bulk_fraction > 0.0 && bulk_fraction <= 1.0) {
        return Err(Error::Domain(format!(
            "bulk fraction must lie in (0, 1], got {bulk_fraction}"
        )));
    }
    let n = spectrum.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "spectrum has {n} eigenvalues"
        )));
    }
    let edge = 2.0 * (n as f64).sqrt();
    let mut flagged = 0;
    for &l in spectrum {
        if l.abs() > edge * (1.0 + EDGE_ERROR_MARGIN) {
            return Err(Error::Domain(format!(
                "eigenvalue {l} lies far outside the semicircle support [-{edge}, {edge}]"
            )));
        }
        if l.abs() > edge * (1.0 + EDGE_CLAMP_TOL) {
            flagged += 1;
        }
    }
    let keep = ((n as f64 * bulk_fraction).round() as usize).clamp(1, n);
    let start = (n - keep) / 2;
    let values = spectrum[start..start + keep]
        .iter()
        .map(|&l| semicircle_counting(l, n))
        .collect();
    UnfoldedSequence::with_flags(values, SequenceSource::Gue, flagged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(GueConfig::new(1, 5, 0).is_err());
        assert!(GueConfig::new(2, 0, 0).is_err());
        assert!(GueConfig::new(2, 1, 0).is_ok());
    }

    #[test]
    fn counting_function_landmarks() {
        let n = 50;
        let edge = 2.0 * (n as f64).sqrt();
        assert!((semicircle_counting(0.0, n) - 25.0).abs() < 1e-12);
        assert!((semicircle_counting(edge, n) - 50.0).abs() < 1e-12);
        assert_eq!(semicircle_counting(-edge, n), 0.0);
        assert_eq!(semicircle_counting(10.0 * edge, n), 50.0);
    }

    #[test]
    fn matrix_is_hermitian_and_seeded() {
        let cfg = GueConfig::new(6, 2, 42).unwrap();
        let m = gue_matrix(&cfg, 1);
        for i in 0..6 {
            assert_eq!(m[(i, i)].im, 0.0);
            for j in 0..6 {
                assert_eq!(m[(i, j)], m[(j, i)].conj());
            }
        }
        assert_eq!(m, gue_matrix(&cfg, 1));
        assert_ne!(m, gue_matrix(&cfg, 0));
    }

    #[test]
    fn unfold_rejects_bad_input() {
        assert!(unfold_semicircle(&[0.0, 1.0], 0.0).is_err());
        assert!(unfold_semicircle(&[0.0], 1.0).is_err());
        // n = 4: edge 4, 25% margin puts the hard limit at 5
        assert!(unfold_semicircle(&[-1.0, 0.0, 1.0, 6.0], 1.0).is_err());
        let seq = unfold_semicircle(&[-1.0, 0.0, 1.0, 4.5], 1.0).unwrap();
        assert_eq!(seq.flagged(), 1);
        assert_eq!(seq.values()[3], 4.0);
    }

    #[test]
    fn unfold_keeps_central_bulk() {
        let spectrum: Vec<f64> = (0..10).map(|i| -4.5 + i as f64).collect();
        let seq = unfold_semicircle(&spectrum, 0.5).unwrap();
        assert_eq!(seq.len(), 5);
        assert!(seq.values().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(seq.source(), SequenceSource::Gue);
    }

    #[test]
    fn unfolded_sequence_must_ascend() {
        assert!(matches!(
            UnfoldedSequence::new(vec![0.0, 1.0, 1.0], SequenceSource::Synthetic),
            Err(Error::Ordering { index: 2, .. })
        ));
    }
}
