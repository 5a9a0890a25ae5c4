//! Binned pair-correlation estimates of unfolded sequences.
//!
//! For each unordered pair `i < j` with `w_j − w_i ≤ w_max` the gap is
//! binned. Only left endpoints with `w_i + w_max ≤ max(w)` contribute, so
//! every contributing point sees its full window; their number is `M_eff`
//! and the estimate per bin is `count / (M_eff · bin_width)`. Partial
//! estimates (counts and `M_eff`) add, which is how several independent
//! sequences are pooled without ever pairing points across sequences.

use serde::Serialize;

use crate::ensembles::UnfoldedSequence;
use crate::error::{Error, Result};
use crate::specfun::QuadratureRule;

/// Sequences shorter than this are rejected.
pub const MIN_POINTS: usize = 50;

/// Default bin width: 0.05 for sequences of at least 10⁴ points, else 0.25.
pub fn default_bin_width(n_points: usize) -> f64 {
    if n_points >= 10_000 {
        0.05
    } else {
        0.25
    }
}

pub const DEFAULT_W_MAX: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCorrelationEstimate {
    pub bin_edges: Vec<f64>,
    pub values: Vec<f64>,
    pub pair_counts: Vec<u64>,
    /// `M_eff`, the number of left endpoints that contributed.
    pub n_points_used: u64,
    pub w_max: f64,
}

impl PairCorrelationEstimate {
    pub fn bin_width(&self) -> f64 {
        self.bin_edges[1] - self.bin_edges[0]
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|e| 0.5 * (e[0] + e[1]))
            .collect()
    }
}

/// Running pair counts for one binning; merge partial results with
/// [`PairCounter::merge`].
#[derive(Debug, Clone, PartialEq)]
pub struct PairCounter {
    w_max: f64,
    bin_width: f64,
    counts: Vec<u64>,
    left_points: u64,
}

impl PairCounter {
    pub fn new(w_max: f64, bin_width: f64) -> Result<Self> {
        if !(bin_width > 0.0 && bin_width <= w_max) || !w_max.is_finite() {
            return Err(Error::BinningMismatch(format!(
                "need 0 < bin_width <= w_max, got bin_width={bin_width}, w_max={w_max}"
            )));
        }
        let bins = w_max / bin_width;
        let n_bins = bins.round();
        if (bins - n_bins).abs() > 1e-9 * bins {
            return Err(Error::BinningMismatch(format!(
                "w_max {w_max} is not a whole number of bins of width {bin_width}"
            )));
        }
        Ok(Self {
            w_max,
            bin_width,
            counts: vec![0; n_bins as usize],
            left_points: 0,
        })
    }

    /// Adds the pairs of one ascending sequence.
    pub fn add_sequence(&mut self, values: &[f64]) -> Result<()> {
        if values.len() < MIN_POINTS {
            return Err(Error::InsufficientData(format!(
                "pair correlation needs at least {MIN_POINTS} points, got {}",
                values.len()
            )));
        }
        let last = values[values.len() - 1];
        let n_bins = self.counts.len();
        for (i, &w) in values.iter().enumerate() {
            if w + self.w_max > last {
                break;
            }
            self.left_points += 1;
            for &v in &values[i + 1..] {
                let gap = v - w;
                if gap > self.w_max {
                    break;
                }
                let bin = ((gap / self.bin_width) as usize).min(n_bins - 1);
                self.counts[bin] += 1;
            }
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &PairCounter) -> Result<()> {
        if other.counts.len() != self.counts.len() || other.bin_width != self.bin_width {
            return Err(Error::BinningMismatch(
                "cannot merge counters with different bins".into(),
            ));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.left_points += other.left_points;
        Ok(())
    }

    pub fn finish(&self) -> Result<PairCorrelationEstimate> {
        if self.left_points == 0 {
            return Err(Error::InsufficientData(format!(
                "no point has a full window of width {}",
                self.w_max
            )));
        }
        let norm = self.left_points as f64 * self.bin_width;
        Ok(PairCorrelationEstimate {
            bin_edges: (0..=self.counts.len())
                .map(|k| k as f64 * self.bin_width)
                .collect(),
            values: self.counts.iter().map(|&c| c as f64 / norm).collect(),
            pair_counts: self.counts.clone(),
            n_points_used: self.left_points,
            w_max: self.w_max,
        })
    }
}

pub fn estimate_pair_correlation(
    seq: &UnfoldedSequence,
    w_max: f64,
    bin_width: f64,
) -> Result<PairCorrelationEstimate> {
    let mut counter = PairCounter::new(w_max, bin_width)?;
    counter.add_sequence(seq.values())?;
    counter.finish()
}

/// Pools several independent sequences; pairs never straddle sequences.
pub fn estimate_pooled(
    sequences: &[UnfoldedSequence],
    w_max: f64,
    bin_width: f64,
) -> Result<PairCorrelationEstimate> {
    let mut total = PairCounter::new(w_max, bin_width)?;
    for seq in sequences {
        let mut part = PairCounter::new(w_max, bin_width)?;
        part.add_sequence(seq.values())?;
        total.merge(&part)?;
    }
    total.finish()
}

/// Bin averages `(1/Δ) ∫_bin f` of a theory curve.
pub fn theory_on_bins<F: Fn(f64) -> f64>(bin_edges: &[f64], f: F) -> Vec<f64> {
    let rule = QuadratureRule::gauss_legendre(16);
    bin_edges
        .windows(2)
        .map(|e| rule.integrate(e[0], e[1], &f) / (e[1] - e[0]))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveDistance {
    pub l_inf: f64,
    /// Root-mean-square difference over the compared bins.
    pub l2: f64,
    pub bins_compared: usize,
}

/// Distances between an estimate and a theory curve given on the same bins,
/// restricted to bins whose centre lies in `[w_low, w_high]`.
pub fn curve_distance(
    estimate: &PairCorrelationEstimate,
    theory: &[f64],
    w_low: f64,
    w_high: f64,
) -> Result<CurveDistance> {
    if theory.len() != estimate.values.len() {
        return Err(Error::BinningMismatch(format!(
            "estimate has {} bins, theory {}",
            estimate.values.len(),
            theory.len()
        )));
    }
    let mut l_inf: f64 = 0.0;
    let mut sum_sq = 0.0;
    let mut bins = 0;
    for ((center, est), th) in estimate
        .bin_centers()
        .into_iter()
        .zip(&estimate.values)
        .zip(theory)
    {
        if center < w_low || center > w_high {
            continue;
        }
        let d = (est - th).abs();
        l_inf = l_inf.max(d);
        sum_sq += d * d;
        bins += 1;
    }
    if bins == 0 {
        return Err(Error::BinningMismatch(format!(
            "no bin centre lies in [{w_low}, {w_high}]"
        )));
    }
    Ok(CurveDistance {
        l_inf,
        l2: (sum_sq / bins as f64).sqrt(),
        bins_compared: bins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::SequenceSource;

    fn seq(values: Vec<f64>) -> UnfoldedSequence {
        UnfoldedSequence::new(values, SequenceSource::Synthetic).unwrap()
    }

    #[test]
    fn integer_lattice() {
        // gaps of exactly 1, 2, 3 sit on bin edges; shift them to bin middles
        let lattice = seq((1..=100).map(|k| k as f64).collect());
        let est = estimate_pair_correlation(&lattice, 3.5, 0.5).unwrap();
        assert_eq!(est.n_points_used, 96);
        for (k, v) in est.values.iter().enumerate() {
            let expected = if [2, 4, 6].contains(&k) { 2.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-12, "bin {k}: {v}");
        }

        let est = estimate_pair_correlation(&lattice, 3.0, 1.0).unwrap();
        // gap 1 lands in [1, 2), gap 2 in [2, 3), gap 3 at w_max in the last bin
        assert_eq!(est.pair_counts, vec![0, 97, 194]);
        assert!((est.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sparse_sequence_has_empty_bins() {
        let sparse = seq((0..60).map(|k| 10.0 * k as f64).collect());
        let est = estimate_pair_correlation(&sparse, 3.0, 0.25).unwrap();
        assert!(est.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn too_few_points() {
        let short = seq((0..49).map(|k| k as f64).collect());
        assert!(matches!(
            estimate_pair_correlation(&short, 3.0, 0.25),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn binning_validation() {
        assert!(PairCounter::new(3.0, 0.0).is_err());
        assert!(PairCounter::new(3.0, 4.0).is_err());
        assert!(PairCounter::new(3.0, 0.7).is_err());
        assert_eq!(PairCounter::new(3.0, 0.05).unwrap().counts.len(), 60);
    }

    #[test]
    fn distance_examples() {
        let lattice = seq((1..=100).map(|k| k as f64 * 0.5).collect());
        let est = estimate_pair_correlation(&lattice, 3.0, 0.25).unwrap();
        let d = curve_distance(&est, &est.values, 0.0, f64::INFINITY).unwrap();
        assert_eq!((d.l_inf, d.l2), (0.0, 0.0));

        let ones = PairCorrelationEstimate {
            values: vec![1.0; est.values.len()],
            ..est.clone()
        };
        let zeros = vec![0.0; est.values.len()];
        let d = curve_distance(&ones, &zeros, 0.5, 2.0).unwrap();
        assert_eq!((d.l_inf, d.l2), (1.0, 1.0));
        assert_eq!(d.bins_compared, 6);
        assert!(curve_distance(&ones, &zeros[1..], 0.5, 2.0).is_err());
        assert!(curve_distance(&ones, &zeros, 5.0, 6.0).is_err());
    }

    #[test]
    fn theory_bin_average_of_linear_function() {
        let avg = theory_on_bins(&[0.0, 1.0, 3.0], |w| 2.0 * w);
        assert!((avg[0] - 1.0).abs() < 1e-14);
        assert!((avg[1] - 4.0).abs() < 1e-14);
    }
}
