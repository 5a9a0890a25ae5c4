//! Riemann zeta on the critical line and its zeros.
//!
//! `ζ(1/2 + it)` is evaluated by Euler–Maclaurin summation, the Hardy
//! function `Z(t) = e^{iθ(t)} ζ(1/2 + it)` turns it into a real function
//! whose sign changes bracket zeros, and zeros are refined by bisection.

use std::f64::consts::PI;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use nalgebra::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensembles::{SequenceSource, UnfoldedSequence};
use crate::error::{Error, Result};

type Complex64 = Complex<f64>;

/// Largest height the evaluator is accurate for.
pub const MAX_HEIGHT: f64 = 1000.0;

// B_2, B_4, …, B_10
const BERNOULLI: [f64; 5] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];

/// Euler–Maclaurin cut-off `m = max(50, ⌈|t|⌉ + 20)`; keeps the truncation
/// error near 1e-11 for `|t| ≤ 1000`.
pub fn default_terms(t: f64) -> usize {
    50.max(t.abs().ceil() as usize + 20)
}

/// `ζ(s)` for `Re s > 0`, `s ≠ 1`, with `m` summed terms.
fn euler_maclaurin(s: Complex64, m: usize) -> Complex64 {
    let power = |n: f64| (-s * n.ln()).exp();
    let mut sum = Complex::new(0.0, 0.0);
    for n in 1..m {
        sum += power(n as f64);
    }
    let mf = m as f64;
    let m_pow = power(mf);
    sum += m_pow * mf / (s - 1.0) + 0.5 * m_pow;
    // B_{2k}/(2k)! · s(s+1)…(s+2k−2) · m^{−s−2k+1}
    let mut rising = s;
    let mut m_factor = m_pow / mf;
    let mut factorial = 2.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        sum += rising * m_factor * (b / factorial);
        let j = 2.0 * (k + 1) as f64;
        rising *= (s + (j - 1.0)) * (s + j);
        m_factor /= mf * mf;
        factorial *= (j + 1.0) * (j + 2.0);
    }
    sum
}

/// `ζ(1/2 + it)`; `terms = None` picks [`default_terms`].
///
/// Negative `t` is accepted (giving the conjugate of the positive-`t` value).
pub fn zeta_critical_line(t: f64, terms: Option<usize>) -> Result<Complex64> {
    if !t.is_finite() || t.abs() > MAX_HEIGHT {
        return Err(Error::Envelope(t));
    }
    let m = terms.unwrap_or_else(|| default_terms(t)).max(2);
    Ok(euler_maclaurin(Complex::new(0.5, t), m))
}

/// Riemann–Siegel theta by its asymptotic series through `t^{-7}`; the
/// remainder is below 1e-12 for `t ≥ 10`.
pub fn riemann_siegel_theta(t: f64) -> Result<f64> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::Domain(format!("theta needs t >= 1, got {t}")));
    }
    Ok(theta_series(t))
}

fn theta_series(t: f64) -> f64 {
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0
        + inv
            * (1.0 / 48.0
                + inv2 * (7.0 / 5760.0 + inv2 * (31.0 / 80_640.0 + inv2 * 127.0 / 430_080.0)))
}

/// Smooth zero count `θ(t)/π + 1`.
pub fn counting_estimate(t: f64) -> Result<f64> {
    Ok(riemann_siegel_theta(t)? / PI + 1.0)
}

/// `e^{iθ(t)} ζ(1/2 + it)` before discarding the (rounding-level)
/// imaginary part.
pub fn hardy_z_complex(t: f64) -> Result<Complex64> {
    if t > MAX_HEIGHT {
        return Err(Error::Envelope(t));
    }
    let theta = riemann_siegel_theta(t)?;
    Ok(Complex::from_polar(1.0, theta) * zeta_critical_line(t, None)?)
}

/// Hardy's `Z(t)`, real on the critical line.
///
/// Below `t = 10` the truncated theta series leaves a small phase error, so
/// the discarded imaginary part grows (to about 0.016 at `t = 1`); the sign of
/// `Z` is unaffected there.
pub fn hardy_z(t: f64) -> Result<f64> {
    let z = hardy_z_complex(t)?;
    debug_assert!(
        t < 10.0 || z.im.abs() <= 1e-7 * (1.0 + z.re.abs()),
        "Z({t}) has imaginary part {}",
        z.im
    );
    Ok(z.re)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Computed {
        t_min: f64,
        t_max: f64,
        grid_step: f64,
        refine_tol: f64,
    },
    File {
        path: PathBuf,
    },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Computed {
                t_min,
                t_max,
                grid_step,
                refine_tol,
            } => write!(
                f,
                "computed t_min={t_min} t_max={t_max} grid_step={grid_step} refine_tol={refine_tol}"
            ),
            Provenance::File { path } => write!(f, "file {}", path.display()),
        }
    }
}

/// Ascending zero heights `t_j > 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSequence {
    heights: Vec<f64>,
    provenance: Provenance,
}

impl ZeroSequence {
    pub fn new(heights: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if let Some(i) = heights.iter().position(|&t| !(t > 1.0) || !t.is_finite()) {
            return Err(Error::Domain(format!(
                "zero height at index {i} must be finite and > 1, got {}",
                heights[i]
            )));
        }
        if let Some(i) = heights.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::Ordering {
                index: i + 1,
                previous: heights[i],
                value: heights[i + 1],
            });
        }
        Ok(Self {
            heights,
            provenance,
        })
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Zeros with `lo ≤ t ≤ hi`, keeping the provenance.
    pub fn window(&self, lo: f64, hi: f64) -> ZeroSequence {
        ZeroSequence {
            heights: self
                .heights
                .iter()
                .copied()
                .filter(|t| (lo..=hi).contains(t))
                .collect(),
            provenance: self.provenance.clone(),
        }
    }
}

/// Parameters of a sign-change scan of `Z(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroScan {
    pub t_min: f64,
    pub t_max: f64,
    pub grid_step: f64,
    pub refine_tol: f64,
}

impl ZeroScan {
    pub const DEFAULT_GRID_STEP: f64 = 0.05;
    pub const DEFAULT_REFINE_TOL: f64 = 1e-8;

    pub fn new(t_min: f64, t_max: f64) -> Self {
        Self {
            t_min,
            t_max,
            grid_step: Self::DEFAULT_GRID_STEP,
            refine_tol: Self::DEFAULT_REFINE_TOL,
        }
    }

    pub fn grid_step(mut self, step: f64) -> Self {
        self.grid_step = step;
        self
    }

    pub fn refine_tol(mut self, tol: f64) -> Self {
        self.refine_tol = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_min >= 1.0 && self.t_min < self.t_max && self.t_max <= MAX_HEIGHT) {
            return Err(Error::Domain(format!(
                "scan range must satisfy 1 <= t_min < t_max <= {MAX_HEIGHT}, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if !(self.grid_step > 0.0) || !(self.refine_tol > 0.0) {
            return Err(Error::Domain(
                "grid step and tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Zeros found by [`find_zeros`] plus the counting cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroScanReport {
    pub zeros: ZeroSequence,
    /// `N̄(t_max) − N̄(t_min)` with `N̄(t) = θ(t)/π + 1`.
    pub expected_count: f64,
    /// Set when the found count differs from the estimate by more than 1,
    /// which usually means a close pair slipped between grid points.
    pub warning: Option<String>,
}

/// Scans `Z` on a uniform grid and bisects every sign change.
///
/// Grid values are computed in parallel; sign changes are then read off the
/// full, ordered grid so none can be lost at a partition boundary.
pub fn find_zeros(scan: &ZeroScan) -> Result<ZeroScanReport> {
    scan.validate()?;
    let steps = ((scan.t_max - scan.t_min) / scan.grid_step).ceil() as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|k| (scan.t_min + k as f64 * scan.grid_step).min(scan.t_max))
        .collect();
    let values = grid
        .par_iter()
        .map(|&t| hardy_z(t))
        .collect::<Result<Vec<f64>>>()?;

    let mut brackets = Vec::new();
    let mut exact = Vec::new();
    for k in 0..grid.len() {
        if values[k] == 0.0 {
            exact.push(grid[k]);
        } else if k + 1 < grid.len() && values[k] * values[k + 1] < 0.0 {
            brackets.push((grid[k], grid[k + 1], values[k]));
        }
    }
    let mut heights = brackets
        .par_iter()
        .map(|&(lo, hi, f_lo)| bisect(lo, hi, f_lo, scan.refine_tol))
        .collect::<Result<Vec<f64>>>()?;
    heights.extend(exact);
    heights.sort_by(f64::total_cmp);
    heights.dedup();

    let expected_count = counting_estimate(scan.t_max)? - counting_estimate(scan.t_min)?;
    let found = heights.len() as f64;
    let warning = ((found - expected_count).abs() > 1.0).then(|| {
        format!(
            "found {} zeros in [{}, {}] but the counting estimate is {:.2}; \
             rerun with a smaller grid step",
            heights.len(),
            scan.t_min,
            scan.t_max,
            expected_count
        )
    });
    let zeros = ZeroSequence::new(
        heights,
        Provenance::Computed {
            t_min: scan.t_min,
            t_max: scan.t_max,
            grid_step: scan.grid_step,
            refine_tol: scan.refine_tol,
        },
    )?;
    Ok(ZeroScanReport {
        zeros,
        expected_count,
        warning,
    })
}

fn bisect(mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> Result<f64> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = hardy_z(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// How zero heights are mapped to unit mean density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroUnfolding {
    /// `w = (t/2π) log(t/2π)`, the leading term of the zero count.
    #[default]
    Leading,
    /// `w = θ(t)/π + 1`, the full smooth Riemann–von Mangoldt count. Its
    /// derivative equals the local zero density `(1/2π) log(t/2π)`.
    Smooth,
}

/// Heights at or below this are flagged: `(t/2π) log(t/2π)` is far from the
/// zero count there.
pub const SMALL_HEIGHT: f64 = 2.0 * PI * std::f64::consts::E;

/// `w_j = (t_j/2π) log(t_j/2π)` for every zero.
pub fn unfold_zeros(zeros: &ZeroSequence) -> Result<UnfoldedSequence> {
    unfold_zeros_with(zeros, ZeroUnfolding::Leading)
}

pub fn unfold_zeros_with(zeros: &ZeroSequence, map: ZeroUnfolding) -> Result<UnfoldedSequence> {
    let flagged = zeros.heights.iter().filter(|&&t| t <= SMALL_HEIGHT).count();
    let values = zeros
        .heights
        .iter()
        .map(|&t| match map {
            ZeroUnfolding::Leading => leading_unfold(t),
            ZeroUnfolding::Smooth => theta_series(t) / PI + 1.0,
        })
        .collect();
    UnfoldedSequence::with_flags(values, SequenceSource::Zeta, flagged)
}

fn leading_unfold(t: f64) -> f64 {
    let x = t / (2.0 * PI);
    x * x.ln()
}

/// Reads a zero table: one decimal height per line, `#` comments and blank
/// lines ignored, ascending order required.
pub fn load_zeros_file(path: impl AsRef<Path>) -> Result<ZeroSequence> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let mut heights = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let t: f64 = trimmed.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            content: trimmed.to_string(),
        })?;
        heights.push(t);
    }
    ZeroSequence::new(
        heights,
        Provenance::File {
            path: path.to_path_buf(),
        },
    )
}

/// Writes `zeros` in the zero-table format, preceded by `#` comment lines.
pub fn write_zero_table<W: Write>(
    zeros: &ZeroSequence,
    header: &[String],
    mut out: W,
) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    for t in &zeros.heights {
        writeln!(out, "{t}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_at_one_half() {
        // ζ(1/2), mpmath at 30 digits
        let z = zeta_critical_line(0.0, None).unwrap();
        assert!((z.re + 1.460_354_508_809_586_8).abs() < 1e-12);
        assert!(z.im.abs() < 1e-15);
    }

    #[test]
    fn envelope_enforced() {
        assert!(matches!(
            zeta_critical_line(1000.5, None),
            Err(Error::Envelope(_))
        ));
        assert!(hardy_z(1001.0).is_err());
        assert!(riemann_siegel_theta(0.5).is_err());
    }

    #[test]
    fn theta_at_two_pi() {
        let t = 2.0 * PI;
        let leading = -(PI + PI / 8.0) + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t.powi(3));
        let got = riemann_siegel_theta(t).unwrap();
        assert!((got - leading).abs() < 1e-7);
        assert!((got + 3.5310).abs() < 1e-4);
    }

    #[test]
    fn theta_derivative() {
        let (t, h) = (100.0, 1e-3);
        let fd = (riemann_siegel_theta(t + h).unwrap() - riemann_siegel_theta(t - h).unwrap())
            / (2.0 * h);
        // θ'(t) = ½ log(t/2π) − 1/(48t²) − 7/(1920t⁴) − …; the bare logarithm
        // alone is off by 2.1e-6 at t = 100
        let analytic =
            0.5 * (t / (2.0 * PI)).ln() - 1.0 / (48.0 * t * t) - 7.0 / (1920.0 * t.powi(4));
        assert!((fd - analytic).abs() < 1e-9);
        assert!((fd - 0.5 * (t / (2.0 * PI)).ln()).abs() < 3e-6);
        assert!(riemann_siegel_theta(100.0).unwrap() > riemann_siegel_theta(50.0).unwrap());
    }

    #[test]
    fn first_zero_is_bracketed() {
        assert!(hardy_z(14.0).unwrap() * hardy_z(14.2).unwrap() < 0.0);
    }

    #[test]
    fn zero_sequence_validation() {
        let p = || Provenance::File { path: "x".into() };
        assert!(ZeroSequence::new(vec![14.0, 21.0], p()).is_ok());
        assert!(ZeroSequence::new(vec![0.5], p()).is_err());
        assert!(matches!(
            ZeroSequence::new(vec![14.0, 25.0, 21.0], p()),
            Err(Error::Ordering { index: 2, .. })
        ));
    }

    #[test]
    fn leading_unfold_landmarks() {
        let p = Provenance::File { path: "x".into() };
        let seq = ZeroSequence::new(vec![2.0 * PI, SMALL_HEIGHT, 100.0], p).unwrap();
        let w = unfold_zeros(&seq).unwrap();
        assert!(w.values()[0].abs() < 1e-15);
        assert!((w.values()[1] - std::f64::consts::E).abs() < 1e-12);
        assert_eq!(w.flagged(), 2);
    }

    #[test]
    fn unfolded_spacing_by_map() {
        let zeros = find_zeros(&ZeroScan::new(100.0, 500.0)).unwrap().zeros;
        let smooth = unfold_zeros_with(&zeros, ZeroUnfolding::Smooth)
            .unwrap()
            .mean_spacing()
            .unwrap();
        assert!((0.9..=1.1).contains(&smooth), "{smooth}");
        // d/dt of the leading term is (log(t/2π) + 1)/2π, one 1/2π above the zero density
        let leading = unfold_zeros(&zeros).unwrap().mean_spacing().unwrap();
        assert!((1.2..1.35).contains(&leading), "{leading}");
    }

    #[test]
    fn scan_validation() {
        assert!(find_zeros(&ZeroScan::new(0.5, 10.0)).is_err());
        assert!(find_zeros(&ZeroScan::new(20.0, 10.0)).is_err());
        assert!(find_zeros(&ZeroScan::new(10.0, 1200.0)).is_err());
        assert!(find_zeros(&ZeroScan::new(10.0, 20.0).grid_step(0.0)).is_err());
    }
}
