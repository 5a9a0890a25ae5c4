//! Determinantal n-point correlation functions of the free Fermi gas.
//!
//! For `N` particles on the unit torus the `n`-body density is
//! `ρ^{(n)} = [(N − n)! N^n / N!] · det K^{(n)}`; in the thermodynamic limit
//! the prefactor is 1 and the entries come from the asymptotic kernel.

mod metropolis;

pub use metropolis::{sample_slater_metropolis, MetropolisChain, MetropolisConfig};

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kernel::{build_correlation_matrix, Complex64, FiniteSystem, KernelParams};
use crate::specfun::QuadratureRule;

/// Densities in `[-DENSITY_CLIP, 0)` are rounding noise of a PSD determinant.
pub const DENSITY_CLIP: f64 = 1e-9;

/// Hermitian kernel matrix `K^{(n)}` with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    entries: DMatrix<Complex64>,
}

impl CorrelationMatrix {
    pub(crate) fn from_matrix(entries: DMatrix<Complex64>) -> Self {
        Self { entries }
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Determinant by LU factorisation with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        self.entries.clone().lu().determinant()
    }

    /// Ascending eigenvalues of the Hermitian matrix.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..n).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }
}

/// Points `r_1 … r_n` in `d` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    dimension: usize,
    points: Vec<Vec<f64>>,
}

impl PointConfiguration {
    /// Points on the unit torus; every coordinate is folded into `[0, 1)`.
    pub fn on_torus(dimension: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        let mut cfg = Self::free(dimension, points)?;
        for p in &mut cfg.points {
            for x in p.iter_mut() {
                *x = fold_unit(*x);
            }
        }
        Ok(cfg)
    }

    /// Points in unbounded space, for the thermodynamic-limit kernel.
    pub fn free(dimension: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        for p in &points {
            if p.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::Domain("coordinates must be finite".into()));
            }
        }
        Ok(Self { dimension, points })
    }

    /// One-dimensional torus configuration from scalar positions.
    pub fn on_circle(positions: &[f64]) -> Self {
        Self {
            dimension: 1,
            points: positions.iter().map(|&x| vec![fold_unit(x)]).collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}

/// Folds a coordinate into [0, 1).
pub fn fold_unit(x: f64) -> f64 {
    let f = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// `(N − n)! N^n / N!`, evaluated as a product to avoid factorial overflow.
pub fn finite_prefactor(n_particles: usize, n: usize) -> f64 {
    let big_n = n_particles as f64;
    (0..n).map(|j| big_n / (big_n - j as f64)).product()
}

fn clip_density(value: f64) -> f64 {
    if (-DENSITY_CLIP..0.0).contains(&value) {
        0.0
    } else {
        value
    }
}

/// `ρ^{(n)}` of the finite system at the given torus points.
pub fn n_body_density_finite(system: &FiniteSystem, config: &PointConfiguration) -> Result<f64> {
    let n = config.len();
    if n > system.n_particles() {
        return Err(Error::TooManyPoints {
            requested: n,
            particles: system.n_particles(),
        });
    }
    if n == 0 {
        return Ok(1.0);
    }
    if config.dimension() != system.dimension() {
        return Err(Error::DimensionMismatch {
            expected: system.dimension(),
            found: config.dimension(),
        });
    }
    let matrix = build_correlation_matrix(config.points(), system)?;
    let det = matrix.determinant().re;
    Ok(clip_density(
        finite_prefactor(system.n_particles(), n) * det,
    ))
}

/// Thermodynamic-limit `ρ^{(n)} = det K^{(n)}` (prefactor exactly 1).
pub fn n_body_density_asymptotic(params: &KernelParams, config: &PointConfiguration) -> f64 {
    if config.is_empty() {
        return 1.0;
    }
    let matrix = build_correlation_matrix(config.points(), params)
        .expect("configuration points share one dimension");
    clip_density(matrix.determinant().re)
}

/// Theoretical pair correlation `1 − K(w; ν)²` at unit-rescaled separation
/// `w`, i.e. with `k_F r ≡ π w`.
///
/// For `ν = 1/2` this is `1 − (sin πw / πw)²`. For other orders the same
/// rescaling is a labelled convention, not a unit-density normalisation of a
/// physical process.
pub fn pair_correlation_theory(nu: f64, w: f64) -> Result<f64> {
    let params = KernelParams::new(nu, PI)?;
    let k = params.value(w);
    Ok((1.0 - k * k).clamp(0.0, 1.0))
}

/// Outcome of [`normalization_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationCheck {
    pub integral: f64,
    pub target: f64,
    pub residual: f64,
    /// Per-axis quadrature order at which the integral stabilised.
    pub order: usize,
}

const NORMALIZATION_STABLE: f64 = 1e-8;
const NORMALIZATION_MAX_NODES: usize = 1 << 24;

/// `|∫_{[0,1)^n} ρ^{(n)} − 1|` for a one-dimensional finite system.
///
/// `ρ^{(n)}` is the marginal of `ρ^{(N)}`, which integrates to one over the
/// torus, so every marginal integrates to one as well: the target is 1 for
/// all `n ≤ N`. The tensor Gauss–Legendre order starts at
/// `max(32, start_order)` and doubles until two successive integrals agree
/// to 1e-8.
pub fn normalization_residual(
    system: &FiniteSystem,
    n: usize,
    start_order: usize,
) -> Result<NormalizationCheck> {
    if system.dimension() != 1 {
        return Err(Error::Domain(
            "normalization check supports d = 1 only".into(),
        ));
    }
    if n == 0 || n > system.n_particles() {
        return Err(Error::TooManyPoints {
            requested: n,
            particles: system.n_particles(),
        });
    }
    let mut order = start_order.max(32);
    let mut previous = tensor_integral(system, n, order)?;
    loop {
        let next_order = order * 2;
        if next_order.pow(n as u32) > NORMALIZATION_MAX_NODES {
            break;
        }
        let current = tensor_integral(system, n, next_order)?;
        let settled = (current - previous).abs() <= NORMALIZATION_STABLE;
        previous = current;
        order = next_order;
        if settled {
            break;
        }
    }
    let target = 1.0;
    Ok(NormalizationCheck {
        integral: previous,
        target,
        residual: (previous - target).abs(),
        order,
    })
}

fn tensor_integral(system: &FiniteSystem, n: usize, order: usize) -> Result<f64> {
    let rule = QuadratureRule::gauss_legendre(order);
    let nodes: Vec<f64> = rule.nodes().iter().map(|x| 0.5 * (x + 1.0)).collect();
    let weights: Vec<f64> = rule.weights().iter().map(|w| 0.5 * w).collect();
    let mut index = vec![0usize; n];
    let mut total = 0.0;
    loop {
        let points: Vec<f64> = index.iter().map(|&i| nodes[i]).collect();
        let weight: f64 = index.iter().map(|&i| weights[i]).product();
        let density = n_body_density_finite(system, &PointConfiguration::on_circle(&points))?;
        total += weight * density;
        // odometer increment over the tensor grid
        let mut axis = 0;
        loop {
            if axis == n {
                return Ok(total);
            }
            index[axis] += 1;
            if index[axis] < order {
                break;
            }
            index[axis] = 0;
            axis += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefactor_values() {
        assert_eq!(finite_prefactor(5, 1), 1.0);
        assert!((finite_prefactor(2, 2) - 2.0).abs() < 1e-15);
        // N^N / N! for N = 3
        assert!((finite_prefactor(3, 3) - 27.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn one_point_density_is_one() {
        let sys = FiniteSystem::fermi_sea(1, 4).unwrap();
        let cfg = PointConfiguration::on_circle(&[0.37]);
        assert!((n_body_density_finite(&sys, &cfg).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coincident_points_have_zero_density() {
        let sys = FiniteSystem::fermi_sea(1, 4).unwrap();
        let cfg = PointConfiguration::on_circle(&[0.2, 0.2]);
        assert_eq!(n_body_density_finite(&sys, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn two_particle_hand_value() {
        let sys = FiniteSystem::with_modes(1, vec![vec![0], vec![1]]).unwrap();
        let cfg = PointConfiguration::on_circle(&[0.0, 0.5]);
        assert!((n_body_density_finite(&sys, &cfg).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn too_many_points_is_an_error() {
        let sys = FiniteSystem::fermi_sea(1, 2).unwrap();
        let cfg = PointConfiguration::on_circle(&[0.1, 0.2, 0.3]);
        assert!(matches!(
            n_body_density_finite(&sys, &cfg),
            Err(Error::TooManyPoints {
                requested: 3,
                particles: 2
            })
        ));
    }

    #[test]
    fn asymptotic_examples() {
        let sine = KernelParams::new(0.5, PI).unwrap();
        let single = PointConfiguration::free(1, vec![vec![3.0]]).unwrap();
        assert_eq!(n_body_density_asymptotic(&sine, &single), 1.0);
        let pair = PointConfiguration::free(1, vec![vec![0.0], vec![0.5]]).unwrap();
        let expected = 1.0 - (2.0 / PI).powi(2);
        assert!((n_body_density_asymptotic(&sine, &pair) - expected).abs() < 1e-12);
        // k_F r ∈ {π, 2π} puts every off-diagonal entry on a zero of sin x / x
        let wide = KernelParams::new(0.5, 4.0 * PI).unwrap();
        let triple = PointConfiguration::free(1, vec![vec![0.0], vec![0.25], vec![0.5]]).unwrap();
        assert!((n_body_density_asymptotic(&wide, &triple) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn theory_curve_examples() {
        assert_eq!(pair_correlation_theory(0.5, 0.0).unwrap(), 0.0);
        assert!((pair_correlation_theory(0.5, 0.5).unwrap() - 0.594_715_3).abs() < 1e-7);
        assert!((pair_correlation_theory(0.5, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(pair_correlation_theory(0.3, 1.0).is_err());
    }

    #[test]
    fn folding_into_unit_interval() {
        let cfg = PointConfiguration::on_torus(2, vec![vec![-0.25, 1.5]]).unwrap();
        assert_eq!(cfg.points()[0], vec![0.75, 0.5]);
        assert_eq!(fold_unit(-1e-18), 0.0);
        assert!(PointConfiguration::on_torus(2, vec![vec![0.1]]).is_err());
    }

    #[test]
    fn normalization_small_cases() {
        let two = FiniteSystem::fermi_sea(1, 2).unwrap();
        assert!(normalization_residual(&two, 1, 32).unwrap().residual < 1e-10);
        assert!(normalization_residual(&two, 2, 32).unwrap().residual < 1e-8);
        assert!(normalization_residual(&two, 3, 32).is_err());
        let plane = FiniteSystem::fermi_sea(2, 2).unwrap();
        assert!(normalization_residual(&plane, 1, 32).is_err());
    }
}
