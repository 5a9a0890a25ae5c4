//! Free-Fermi-gas correlation kernel.
//!
//! Two forms live here: the thermodynamic-limit kernel
//! `K(r; ν) = Γ(ν+1) (2 / k_F r)^ν J_ν(k_F r)` and the finite-N kernel on
//! the unit torus, `K(Δr) = (1/N) Σ_k exp(i k·Δr)` over the occupied modes.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};

use crate::correlations::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::specfun::{bessel_j_unchecked, gamma_fn};

pub type Complex64 = Complex<f64>;

/// Order `ν` and Fermi wavenumber `k_F` of the asymptotic kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    nu: f64,
    k_f: f64,
}

impl KernelParams {
    /// `ν` may be any real in `[1/2, 10]`; physical dimension `d` maps to `ν = d/2`.
    pub fn new(nu: f64, k_f: f64) -> Result<Self> {
        if !(0.5..=crate::specfun::BESSEL_MAX_ORDER).contains(&nu) {
            return Err(Error::Domain(format!(
                "kernel order must lie in [0.5, 10], got {nu}"
            )));
        }
        if !(k_f > 0.0) || !k_f.is_finite() {
            return Err(Error::Domain(format!(
                "Fermi wavenumber must be positive, got {k_f}"
            )));
        }
        Ok(Self { nu, k_f })
    }

    /// Kernel of the `d`-dimensional gas with `n_particles` in unit volume.
    pub fn for_dimension(d: usize, n_particles: f64) -> Result<Self> {
        Self::new(0.5 * d as f64, fermi_wavenumber(d, n_particles)?)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn k_f(&self) -> f64 {
        self.k_f
    }

    pub fn value(&self, r: f64) -> f64 {
        kernel_value(self, r)
    }
}

/// Volume coefficient of the unit ball, `C_d = π^{d/2} / Γ(d/2 + 1)`.
/// `C_0 = 1`.
pub fn ball_volume_coefficient(d: usize) -> f64 {
    let half = 0.5 * d as f64;
    PI.powf(half) / gamma_fn(half + 1.0).expect("d/2 + 1 is positive")
}

/// `k_F = 2√π [Γ(d/2 + 1) N]^{1/d}` for `N` particles in unit volume.
pub fn fermi_wavenumber(d: usize, n_particles: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(n_particles > 0.0) || !n_particles.is_finite() {
        return Err(Error::Domain(format!(
            "particle count must be positive, got {n_particles}"
        )));
    }
    let g = gamma_fn(0.5 * d as f64 + 1.0)?;
    Ok(2.0 * PI.sqrt() * (g * n_particles).powf(1.0 / d as f64))
}

/// `K(r; ν)`. Exactly 1 at the origin; the magnitude never exceeds 1.
pub fn kernel_value(params: &KernelParams, r: f64) -> f64 {
    let x = params.k_f * r.abs();
    if x < 1e-12 {
        return 1.0;
    }
    let nu = params.nu;
    let g = gamma_fn(nu + 1.0).expect("nu + 1 is positive");
    let value = g * (2.0 / x).powf(nu) * bessel_j_unchecked(nu, x);
    value.clamp(-1.0, 1.0)
}

/// Elementary closed forms for `ν = 1/2` (`sin x / x`) and `ν = 3/2`
/// (`3 (sin x − x cos x) / x³`), with `x = k_F r`.
pub fn kernel_closed_form(params: &KernelParams, r: f64) -> Result<f64> {
    let x = params.k_f * r.abs();
    if params.nu == 0.5 {
        if x < 1e-4 {
            return Ok(1.0 - x * x / 6.0);
        }
        Ok(x.sin() / x)
    } else if params.nu == 1.5 {
        if x < 0.05 {
            let x2 = x * x;
            return Ok(1.0 - x2 / 10.0 + x2 * x2 / 280.0 - x2 * x2 * x2 / 15_120.0);
        }
        let (s, c) = x.sin_cos();
        Ok(3.0 * (s - x * c) / (x * x * x))
    } else {
        Err(Error::UnsupportedOrder(params.nu))
    }
}

/// `N` plane-wave modes on the unit torus.
///
/// Wavevectors are `2π n` for integer vectors `n`. [`FiniteSystem::fermi_sea`]
/// fills the `N` shortest, breaking norm ties by lexicographic order of the
/// integer components.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSystem {
    dimension: usize,
    modes: Vec<Vec<i64>>,
    partial_shell: bool,
}

impl FiniteSystem {
    pub fn fermi_sea(dimension: usize, n_particles: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        if n_particles == 0 {
            return Err(Error::Domain("particle count must be positive".into()));
        }
        // Grow the enumeration cube until the (N+1)-th shortest vector lies
        // strictly inside it; then no shorter vector can be missing.
        let mut radius = ((n_particles as f64).powf(1.0 / dimension as f64)).ceil() as i64 + 1;
        loop {
            let mut lattice = cube_points(dimension, radius);
            lattice.sort_by(|a, b| norm_sq(a).cmp(&norm_sq(b)).then_with(|| a.cmp(b)));
            let boundary = norm_sq(&lattice[n_particles]);
            if boundary < radius * radius {
                let partial_shell = norm_sq(&lattice[n_particles - 1]) == boundary;
                lattice.truncate(n_particles);
                return Ok(Self {
                    dimension,
                    modes: lattice,
                    partial_shell,
                });
            }
            radius *= 2;
        }
    }

    /// Explicit occupied set of integer mode vectors (wavevector `2π n`).
    pub fn with_modes(dimension: usize, modes: Vec<Vec<i64>>) -> Result<Self> {
        if dimension == 0 || modes.is_empty() {
            return Err(Error::Domain(
                "need a positive dimension and at least one mode".into(),
            ));
        }
        for m in &modes {
            if m.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: m.len(),
                });
            }
        }
        let mut sorted = modes.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("occupied modes must be distinct".into()));
        }
        Ok(Self {
            dimension,
            modes,
            partial_shell: false,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn n_particles(&self) -> usize {
        self.modes.len()
    }

    pub fn modes(&self) -> &[Vec<i64>] {
        &self.modes
    }

    /// True when the outermost occupied shell is only partly filled, in
    /// which case the finite kernel is not rotation-symmetric.
    pub fn has_partial_shell(&self) -> bool {
        self.partial_shell
    }

    pub fn wavevectors(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.modes
            .iter()
            .map(|m| m.iter().map(|&c| 2.0 * PI * c as f64).collect())
    }

    /// `(1/N) Σ_k exp(i k·Δr)`; the caller guarantees matching dimension.
    fn kernel_unchecked(&self, displacement: &[f64]) -> Complex64 {
        let sum: Complex64 = self
            .modes
            .iter()
            .map(|m| {
                let phase: f64 = m
                    .iter()
                    .zip(displacement)
                    .map(|(&c, &x)| c as f64 * x)
                    .sum::<f64>()
                    * 2.0
                    * PI;
                Complex::from_polar(1.0, phase)
            })
            .sum();
        sum / self.modes.len() as f64
    }
}

fn norm_sq(v: &[i64]) -> i64 {
    v.iter().map(|c| c * c).sum()
}

fn cube_points(dimension: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(dimension)];
    for _ in 0..dimension {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-radius..=radius).map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}

/// Finite-N kernel at a displacement `Δr`.
pub fn finite_kernel_value(system: &FiniteSystem, displacement: &[f64]) -> Result<Complex64> {
    if displacement.len() != system.dimension {
        return Err(Error::DimensionMismatch {
            expected: system.dimension,
            found: displacement.len(),
        });
    }
    Ok(system.kernel_unchecked(displacement))
}

/// Anything that can fill the entries `K(r_i, r_j)` of a correlation matrix.
pub trait CorrelationKernel {
    /// Required coordinate dimension, if the kernel fixes one.
    fn dimension(&self) -> Option<usize>;

    fn entry(&self, a: &[f64], b: &[f64]) -> Complex64;
}

impl CorrelationKernel for KernelParams {
    fn dimension(&self) -> Option<usize> {
        None
    }

    /// Isotropic: depends on `|a − b|` only.
    fn entry(&self, a: &[f64], b: &[f64]) -> Complex64 {
        let r = a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        Complex::new(kernel_value(self, r), 0.0)
    }
}

impl CorrelationKernel for FiniteSystem {
    fn dimension(&self) -> Option<usize> {
        Some(self.dimension)
    }

    fn entry(&self, a: &[f64], b: &[f64]) -> Complex64 {
        let delta: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.kernel_unchecked(&delta)
    }
}

/// `K^{(n)}_{ij} = K(r_i, r_j)` over the given points.
pub fn build_correlation_matrix<K, P>(points: &[P], kernel: &K) -> Result<CorrelationMatrix>
where
    K: CorrelationKernel + ?Sized,
    P: AsRef<[f64]>,
{
    if points.is_empty() {
        return Err(Error::Domain(
            "correlation matrix needs at least one point".into(),
        ));
    }
    let dim = kernel.dimension().unwrap_or(points[0].as_ref().len());
    for p in points {
        if p.as_ref().len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.as_ref().len(),
            });
        }
    }
    let n = points.len();
    let mut m = DMatrix::from_element(n, n, Complex::new(1.0, 0.0));
    for i in 0..n {
        for j in (i + 1)..n {
            let k = kernel.entry(points[i].as_ref(), points[j].as_ref());
            m[(i, j)] = k;
            m[(j, i)] = k.conj();
        }
    }
    Ok(CorrelationMatrix::from_matrix(m))
}
