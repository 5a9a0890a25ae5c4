//! Runtime invariant suites behind `fermikernel verify`.
//!
//! Every check draws its inputs from a fixed-seed generator, compares the
//! worst observed value with a pinned threshold and reports pass/fail. The
//! oracles used here (recurrences, direct quadrature, explicit permutation
//! sums, brute-force pair counts) are independent of the code paths they
//! check.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::correlations::{
    n_body_density_asymptotic, n_body_density_finite, normalization_residual,
    pair_correlation_theory, MetropolisChain, MetropolisConfig, PointConfiguration,
};
use crate::ensembles::{
    gue_matrix, sample_gue_spectrum, semicircle_counting, unfold_semicircle, GueConfig,
    SequenceSource, UnfoldedSequence,
};
use crate::error::Error;
use crate::kernel::{
    ball_volume_coefficient, build_correlation_matrix, finite_kernel_value, kernel_closed_form,
    kernel_value, FiniteSystem, KernelParams,
};
use crate::specfun::{
    bessel_j, bessel_j_unchecked, gamma_fn, poisson_integral, spherical_j, QuadratureRule,
};
use crate::stats::{
    curve_distance, estimate_pair_correlation, estimate_pooled, theory_on_bins, PairCounter,
};
use crate::zeta::{
    counting_estimate, find_zeros, hardy_z, hardy_z_complex, unfold_zeros_with, zeta_critical_line,
    ZeroScan, ZeroUnfolding,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Specfun,
    Kernel,
    Correlations,
    Ensembles,
    Zeta,
    Stats,
    Cli,
    All,
}

impl Suite {
    pub const MODULES: [Suite; 7] = [
        Suite::Specfun,
        Suite::Kernel,
        Suite::Correlations,
        Suite::Ensembles,
        Suite::Zeta,
        Suite::Stats,
        Suite::Cli,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Kernel => "kernel",
            Suite::Correlations => "correlations",
            Suite::Ensembles => "ensembles",
            Suite::Zeta => "zeta",
            Suite::Stats => "stats",
            Suite::Cli => "cli",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::MODULES
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|suite| suite.name() == s)
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}")))
    }
}

/// Outcome of a single invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    fn at_most(
        suite: Suite,
        name: &str,
        value: f64,
        threshold: f64,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            suite: suite.name(),
            name: name.to_string(),
            passed: value <= threshold,
            value,
            threshold,
            detail: detail.into(),
        }
    }

    fn at_least(
        suite: Suite,
        name: &str,
        value: f64,
        threshold: f64,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            passed: value >= threshold,
            ..Self::at_most(suite, name, value, threshold, detail)
        }
    }

    fn holds(suite: Suite, name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            suite: suite.name(),
            name: name.to_string(),
            passed: ok,
            value: if ok { 1.0 } else { 0.0 },
            threshold: 1.0,
            detail: detail.into(),
        }
    }

    pub(crate) fn holds_pub(suite: Suite, name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self::holds(suite, name, ok, detail)
    }

    fn failed(suite: Suite, name: &str, err: impl fmt::Display) -> Self {
        Self::holds(suite, name, false, format!("error: {err}"))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}/{}: value {:.3e} vs threshold {:.3e}{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.value,
            self.threshold,
            if self.detail.is_empty() {
                String::new()
            } else {
                format!(" ({})", self.detail)
            }
        )
    }
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Specfun => specfun_checks(),
        Suite::Kernel => kernel_checks(),
        Suite::Correlations => correlation_checks(),
        Suite::Ensembles => ensemble_checks(),
        Suite::Zeta => zeta_checks(),
        Suite::Stats => stats_checks(),
        Suite::Cli => crate::cli::self_checks(),
        Suite::All => Suite::MODULES.iter().flat_map(|&s| run_suite(s)).collect(),
    }
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(
        0.0,
        |acc: f64, v| if v.is_nan() { f64::NAN } else { acc.max(v) },
    )
}

// ---------------------------------------------------------------- specfun

fn specfun_checks() -> Vec<Check> {
    let s = Suite::Specfun;
    let mut out = Vec::new();

    let mut r = rng(1);
    let residual = max_of((0..200).map(|_| {
        let nu = r.gen_range(0.5..=4.0);
        let z = r.gen_range(0.5..=50.0);
        (bessel_j_unchecked(nu - 1.0, z) + bessel_j_unchecked(nu + 1.0, z)
            - 2.0 * nu / z * bessel_j_unchecked(nu, z))
        .abs()
    }));
    out.push(Check::at_most(
        s,
        "bessel_recurrence",
        residual,
        1e-8,
        "200 draws, nu in [0.5,4], z in [0.5,50]",
    ));

    let rule = QuadratureRule::gauss_legendre(128);
    let mut r = rng(2);
    let gap = max_of((0..100).map(|_| {
        let nu = r.gen_range(0.5..=3.0);
        let z: f64 = r.gen_range(1e-3..=50.0);
        let closed =
            PI.sqrt() * gamma_fn(nu + 0.5).unwrap() / (0.5 * z).powf(nu) * bessel_j(nu, z).unwrap();
        (poisson_integral(nu, z, &rule) - closed).abs()
    }));
    out.push(Check::at_most(
        s,
        "poisson_formula_oracle",
        gap,
        1e-8,
        "100 draws, nu in [0.5,3], z in (0,50]",
    ));

    let mut r = rng(3);
    let mut positive = true;
    let ratio = max_of((0..500).map(|_| {
        let x = r.gen_range(1e-6..=59.0);
        let g = gamma_fn(x).unwrap();
        let g1 = gamma_fn(x + 1.0).unwrap();
        positive &= g > 0.0 && g1 > 0.0;
        (g1 / (x * g) - 1.0).abs()
    }));
    out.push(Check::at_most(
        s,
        "gamma_recurrence",
        ratio,
        1e-10,
        "relative, 500 draws in (0,59]",
    ));
    out.push(Check::holds(
        s,
        "gamma_positive",
        positive,
        "500 draws in (0,60]",
    ));

    let coarse = QuadratureRule::gauss_legendre(128);
    let fine = QuadratureRule::gauss_legendre(256);
    let mut r = rng(4);
    let change = max_of((0..50).map(|_| {
        let nu = r.gen_range(0.5..=5.0);
        let z = r.gen_range(0.0..=50.0);
        (poisson_integral(nu, z, &coarse) - poisson_integral(nu, z, &fine)).abs()
    }));
    out.push(Check::at_most(
        s,
        "quadrature_convergence",
        change,
        1e-10,
        "order 128 vs 256, z <= 50",
    ));

    let rule_dev = max_of([64, 128, 256].into_iter().map(|order| {
        let rule = QuadratureRule::gauss_legendre(order);
        let sum: f64 = rule.weights().iter().sum();
        let asym =
            max_of((0..order).map(|i| (rule.nodes()[i] + rule.nodes()[order - 1 - i]).abs()));
        let ascending = rule.nodes().windows(2).all(|w| w[0] < w[1]);
        (sum - 2.0).abs().max(asym) + if ascending { 0.0 } else { 1.0 }
    }));
    out.push(Check::at_most(
        s,
        "quadrature_rule_shape",
        rule_dev,
        1e-12,
        "weights sum to 2, symmetric nodes",
    ));

    let mut r = rng(5);
    let sph = max_of((0..300).map(|_| {
        let z: f64 = r.gen_range(1.0..=100.0);
        let (sn, cs) = z.sin_cos();
        let forms = [
            sn / z,
            sn / (z * z) - cs / z,
            (3.0 / (z * z) - 1.0) * sn / z - 3.0 * cs / (z * z),
        ];
        max_of((0..3).map(|n| (spherical_j(n as u32, z).unwrap() - forms[n]).abs()))
    }));
    out.push(Check::at_most(
        s,
        "spherical_elementary_forms",
        sph,
        1e-10,
        "n in {0,1,2}, z in [1,100]",
    ));
    out
}

// ---------------------------------------------------------------- kernel

fn kernel_checks() -> Vec<Check> {
    let s = Suite::Kernel;
    let mut out = Vec::new();

    let mut r = rng(10);
    let closed = max_of((0..1000).map(|i| {
        let nu = if i % 2 == 0 { 0.5 } else { 1.5 };
        let k_f = r.gen_range(0.5..=10.0);
        let p = KernelParams::new(nu, k_f).unwrap();
        let radius = r.gen_range(0.0..=50.0 / k_f);
        (kernel_value(&p, radius) - kernel_closed_form(&p, radius).unwrap()).abs()
    }));
    out.push(Check::at_most(
        s,
        "closed_form_equivalence",
        closed,
        1e-10,
        "1000 draws, nu in {1/2, 3/2}",
    ));

    let rule = QuadratureRule::gauss_legendre(128);
    for d in 1..=4usize {
        let mut r = rng(11 + d as u64);
        let gap = max_of((0..50).map(|_| {
            let n = r.gen_range(1.0..=100.0);
            let p = KernelParams::for_dimension(d, n).unwrap();
            let k_f = p.k_f();
            let x = r.gen_range(0.0..=100.0);
            let prefactor = ball_volume_coefficient(d - 1) * k_f.powi(d as i32)
                / (n * (2.0 * PI).powi(d as i32));
            (kernel_value(&p, x / k_f) - prefactor * poisson_integral(p.nu(), x, &rule)).abs()
        }));
        out.push(Check::at_most(
            s,
            &format!("quadrature_oracle_d{d}"),
            gap,
            1e-8,
            "direct angular integral of the mode sum, k_F r <= 100",
        ));
    }

    let mut r = rng(20);
    let asym_bound = max_of((0..2000).map(|_| {
        let p = KernelParams::new(r.gen_range(0.5..=10.0), 1.0).unwrap();
        kernel_value(&p, r.gen_range(0.0..=1.0e4)).abs()
    }));
    let mut finite_bound: f64 = 0.0;
    for (d, n) in [(1, 5), (2, 9), (3, 12)] {
        let sys = FiniteSystem::fermi_sea(d, n).unwrap();
        for _ in 0..300 {
            let delta: Vec<f64> = (0..d).map(|_| r.gen_range(-2.0..=2.0)).collect();
            finite_bound = finite_bound.max(finite_kernel_value(&sys, &delta).unwrap().norm());
        }
    }
    out.push(Check::at_most(
        s,
        "bounded_asymptotic",
        asym_bound,
        1.0,
        "|K| <= 1",
    ));
    out.push(Check::at_most(
        s,
        "bounded_finite",
        finite_bound,
        1.0 + 1e-12,
        "|K_N| <= 1",
    ));

    let sym = FiniteSystem::fermi_sea(1, 7).unwrap();
    let even = max_of((0..300).map(|_| {
        let x = r.gen_range(-1.0..=1.0);
        let a = finite_kernel_value(&sym, &[x]).unwrap();
        let b = finite_kernel_value(&sym, &[-x]).unwrap();
        a.im.abs().max((a - b).norm())
    }));
    out.push(Check::at_most(
        s,
        "finite_even_symmetric_sea",
        even,
        1e-12,
        "N = 7, d = 1",
    ));

    let skew = FiniteSystem::fermi_sea(2, 3).unwrap();
    let herm = max_of((0..300).map(|_| {
        let delta = [r.gen_range(-1.0..=1.0), r.gen_range(-1.0..=1.0)];
        let back = [-delta[0], -delta[1]];
        (finite_kernel_value(&skew, &delta).unwrap()
            - finite_kernel_value(&skew, &back).unwrap().conj())
        .norm()
    }));
    out.push(Check::at_most(
        s,
        "finite_hermitian_symmetry",
        herm,
        1e-12,
        "partially filled d = 2 sea",
    ));

    let sine = KernelParams::new(0.5, 1.0).unwrap();
    let decay = max_of((0..2000).map(|_| {
        let x = r.gen_range(1.0..=1000.0);
        kernel_value(&sine, x).abs() * x
    }));
    out.push(Check::at_most(
        s,
        "sine_kernel_decay",
        decay,
        1.0 + 1e-12,
        "|K| k_F r <= 1 for k_F r >= 1",
    ));

    let mut worst_eig: f64 = f64::INFINITY;
    let mut worst_det_excess: f64 = 0.0;
    let mut worst_shape: f64 = 0.0;
    for _ in 0..200 {
        let d = r.gen_range(1..=3);
        let n_particles = r.gen_range(1..=20);
        let sys = FiniteSystem::fermi_sea(d, n_particles).unwrap();
        let n = r.gen_range(1..=6);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| r.gen::<f64>()).collect())
            .collect();
        let m = build_correlation_matrix(&points, &sys).unwrap();
        worst_eig = worst_eig.min(m.eigenvalues()[0]);
        let det = m.determinant().re;
        worst_det_excess = worst_det_excess.max((-det).max(det - 1.0));
        let diag = max_of((0..n).map(|i| (m.get(i, i).re - 1.0).abs() + m.get(i, i).im.abs()));
        let herm = if m.is_hermitian(1e-12) { 0.0 } else { 1.0 };
        worst_shape = worst_shape.max(diag + herm);
    }
    out.push(Check::at_least(
        s,
        "psd_min_eigenvalue",
        worst_eig,
        -1e-10,
        "200 random finite-kernel matrices",
    ));
    out.push(Check::at_most(
        s,
        "psd_determinant_range",
        worst_det_excess,
        1e-10,
        "det in [0, 1]",
    ));
    out.push(Check::at_most(
        s,
        "matrix_shape",
        worst_shape,
        1e-12,
        "Hermitian with unit diagonal",
    ));
    out
}

// ---------------------------------------------------------------- correlations

/// `ρ^{(N)}` from the explicit double permutation sum over plane waves.
pub(crate) fn permutation_sum_density(system: &FiniteSystem, points: &[Vec<f64>]) -> f64 {
    let n = system.n_particles();
    let k: Vec<Vec<f64>> = system.wavevectors().collect();
    let perms = permutations(n);
    let mut amplitude = crate::kernel::Complex64::new(0.0, 0.0);
    for (perm, sign) in &perms {
        let phase: f64 = (0..n)
            .map(|a| {
                k[perm[a]]
                    .iter()
                    .zip(&points[a])
                    .map(|(kc, rc)| kc * rc)
                    .sum::<f64>()
            })
            .sum();
        amplitude += crate::kernel::Complex64::from_polar(*sign, phase);
    }
    let mut conjugate = crate::kernel::Complex64::new(0.0, 0.0);
    for (perm, sign) in &perms {
        let phase: f64 = (0..n)
            .map(|a| {
                k[perm[a]]
                    .iter()
                    .zip(&points[a])
                    .map(|(kc, rc)| kc * rc)
                    .sum::<f64>()
            })
            .sum();
        conjugate += crate::kernel::Complex64::from_polar(*sign, -phase);
    }
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    (amplitude * conjugate).re / factorial
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    if n == 0 {
        return vec![(Vec::new(), 1.0)];
    }
    let mut out = Vec::new();
    for (perm, sign) in permutations(n - 1) {
        // inserting n-1 at position p from the right adds (n-1-p) inversions
        for p in 0..n {
            let mut next = perm.clone();
            next.insert(p, n - 1);
            let inversions = n - 1 - p;
            out.push((next, if inversions.is_multiple_of(2) { sign } else { -sign }));
        }
    }
    out
}

fn correlation_checks() -> Vec<Check> {
    let s = Suite::Correlations;
    let mut out = Vec::new();
    let mut r = rng(30);

    let mut min_density = f64::INFINITY;
    for _ in 0..10_000 {
        let d = r.gen_range(1..=2);
        let n_particles = r.gen_range(1..=8);
        let sys = FiniteSystem::fermi_sea(d, n_particles).unwrap();
        let n = r.gen_range(1..=n_particles);
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| r.gen::<f64>()).collect())
            .collect();
        let cfg = PointConfiguration::on_torus(d, pts).unwrap();
        min_density = min_density.min(n_body_density_finite(&sys, &cfg).unwrap());
    }
    out.push(Check::at_least(
        s,
        "density_nonnegative",
        min_density,
        -1e-9,
        "10^4 random configurations",
    ));

    let exch = max_of((0..300).map(|_| {
        let n_particles = r.gen_range(2..=6);
        let sys = FiniteSystem::fermi_sea(1, n_particles).unwrap();
        let n = r.gen_range(2..=n_particles);
        let mut pts: Vec<Vec<f64>> = (0..n).map(|_| vec![r.gen::<f64>()]).collect();
        let cfg = PointConfiguration::on_torus(1, pts.clone()).unwrap();
        let params = KernelParams::new(r.gen_range(0.5..=2.5), r.gen_range(1.0..=20.0)).unwrap();
        let before = (
            n_body_density_finite(&sys, &cfg).unwrap(),
            n_body_density_asymptotic(&params, &cfg),
        );
        pts.shuffle(&mut r);
        let cfg = PointConfiguration::on_torus(1, pts).unwrap();
        let after = (
            n_body_density_finite(&sys, &cfg).unwrap(),
            n_body_density_asymptotic(&params, &cfg),
        );
        (before.0 - after.0).abs().max((before.1 - after.1).abs())
    }));
    out.push(Check::at_most(
        s,
        "exchange_symmetry",
        exch,
        1e-12,
        "random permutations of the points",
    ));

    let sine = KernelParams::new(0.5, PI).unwrap();
    let x: f64 = 1e-3;
    let pair = PointConfiguration::free(1, vec![vec![0.0], vec![x / PI]]).unwrap();
    let rel = (n_body_density_asymptotic(&sine, &pair) / (x * x / 3.0) - 1.0).abs();
    out.push(Check::at_most(
        s,
        "coincidence_law",
        rel,
        0.01,
        "rho2 vs (k_F r)^2/3 at k_F r = 1e-3",
    ));

    let gaps: Vec<f64> = [2usize, 5, 10, 25]
        .iter()
        .map(|&m| {
            let n = 2 * m + 1;
            let sys = FiniteSystem::fermi_sea(1, n).unwrap();
            let params = KernelParams::for_dimension(1, n as f64).unwrap();
            let cfg = PointConfiguration::on_circle(&[0.0, 0.2]);
            (n_body_density_finite(&sys, &cfg).unwrap() - n_body_density_asymptotic(&params, &cfg))
                .abs()
        })
        .collect();
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    out.push(Check::holds(
        s,
        "finite_n_convergence",
        monotone,
        format!("|finite - asymptotic| at r = 0.2: {gaps:.4?}"),
    ));

    let perm = max_of((0..100).map(|i| {
        let n = 1 + i % 3;
        let d = 1 + (i / 3) % 2;
        let sys = FiniteSystem::fermi_sea(d, n).unwrap();
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| r.gen::<f64>()).collect())
            .collect();
        let cfg = PointConfiguration::on_torus(d, pts.clone()).unwrap();
        (n_body_density_finite(&sys, &cfg).unwrap() - permutation_sum_density(&sys, cfg.points()))
            .abs()
    }));
    out.push(Check::at_most(
        s,
        "permutation_sum_oracle",
        perm,
        1e-10,
        "N <= 3, 100 configurations",
    ));

    for (n_particles, n, tol) in [
        (2, 1, 1e-10),
        (2, 2, 1e-8),
        (3, 1, 1e-10),
        (3, 2, 1e-8),
        (3, 3, 1e-6),
    ] {
        let sys = FiniteSystem::fermi_sea(1, n_particles).unwrap();
        let name = format!("normalization_N{n_particles}_n{n}");
        out.push(match normalization_residual(&sys, n, 32) {
            Ok(c) => Check::at_most(
                s,
                &name,
                c.residual,
                tol,
                format!("integral {} at order {}", c.integral, c.order),
            ),
            Err(e) => Check::failed(s, &name, e),
        });
    }

    let single = FiniteSystem::fermi_sea(1, 1).unwrap();
    let chain =
        MetropolisChain::new(single.clone(), MetropolisConfig::for_system(&single, 31)).unwrap();
    let mut xs: Vec<f64> = chain.take(100_000).map(|c| c.points()[0][0]).collect();
    xs.sort_by(f64::total_cmp);
    let ks = max_of(xs.iter().enumerate().map(|(i, &x)| {
        let lo = i as f64 / xs.len() as f64;
        let hi = (i + 1) as f64 / xs.len() as f64;
        (x - lo).abs().max((hi - x).abs())
    }));
    out.push(Check::at_most(
        s,
        "metropolis_single_particle_uniform",
        ks,
        0.02,
        "KS vs uniform, 10^5 steps",
    ));

    let three = FiniteSystem::fermi_sea(1, 3).unwrap();
    let steps = 100_000;
    let chain =
        MetropolisChain::new(three.clone(), MetropolisConfig::for_system(&three, 32)).unwrap();
    let close = |pos: &[f64]| -> bool {
        (0..pos.len()).any(|a| {
            (a + 1..pos.len()).any(|b| {
                let d = (pos[a] - pos[b]).abs();
                d.min(1.0 - d) < 0.01
            })
        })
    };
    let mc_close = chain
        .take(steps)
        .filter(|c| close(&c.points().iter().map(|p| p[0]).collect::<Vec<_>>()))
        .count();
    let uniform_close = (0..steps)
        .filter(|_| close(&[r.gen::<f64>(), r.gen::<f64>(), r.gen::<f64>()]))
        .count();
    out.push(Check::holds(
        s,
        "metropolis_pauli_suppression",
        mc_close < uniform_close,
        format!(
            "min separation < 0.01: Metropolis {mc_close} vs uniform {uniform_close} of {steps}"
        ),
    ));

    let (linf, rate) = metropolis_pair_histogram(1_000_000, 40, 7);
    out.push(Check::at_most(
        s,
        "metropolis_pair_histogram",
        linf,
        0.05,
        format!("N = 2, 40 bins, 10^6 steps, acceptance {rate:.2}"),
    ));
    out
}

/// Step half-width used for the two-particle histogram check; with it the
/// acceptance rate sits inside the 30–60% target band.
pub const PAIR_HISTOGRAM_STEP: f64 = 0.5;

/// L∞ distance between the Metropolis pair-separation histogram of the
/// N = 2 sea and the analytic two-body density, plus the acceptance rate.
pub fn metropolis_pair_histogram(steps: usize, bins: usize, seed: u64) -> (f64, f64) {
    let sys = FiniteSystem::fermi_sea(1, 2).unwrap();
    let config = MetropolisConfig {
        step_size: PAIR_HISTOGRAM_STEP,
        ..MetropolisConfig::for_system(&sys, seed)
    };
    let mut chain = MetropolisChain::new(sys.clone(), config).unwrap();
    let mut counts = vec![0u64; bins];
    for _ in 0..steps {
        chain.step();
        let p = chain.positions();
        let sep = crate::correlations::fold_unit(p[1] - p[0]);
        counts[((sep * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let edges: Vec<f64> = (0..=bins).map(|b| b as f64 / bins as f64).collect();
    let analytic = theory_on_bins(&edges, |x| {
        n_body_density_finite(&sys, &PointConfiguration::on_circle(&[0.0, x])).unwrap()
    });
    let width = 1.0 / bins as f64;
    let linf = max_of(
        counts
            .iter()
            .zip(&analytic)
            .map(|(&c, a)| (c as f64 / (steps as f64 * width) - a).abs()),
    );
    (linf, chain.acceptance_rate())
}

// ---------------------------------------------------------------- ensembles

/// Criterion-style GUE run: `(l_inf, l2)` against the sine-kernel curve.
pub fn gue_pair_distance(
    config: &GueConfig,
    bulk: f64,
    bin_width: f64,
    w_low: f64,
    w_high: f64,
) -> crate::Result<(f64, f64)> {
    let spectra = sample_gue_spectrum(config);
    let seqs = spectra
        .iter()
        .map(|sp| unfold_semicircle(sp, bulk))
        .collect::<crate::Result<Vec<_>>>()?;
    let est = estimate_pooled(&seqs, 3.0, bin_width)?;
    let theory = theory_on_bins(&est.bin_edges, |w| pair_correlation_theory(0.5, w).unwrap());
    let d = curve_distance(&est, &theory, w_low, w_high)?;
    Ok((d.l_inf, d.l2))
}

fn ensemble_checks() -> Vec<Check> {
    let s = Suite::Ensembles;
    let mut out = Vec::new();

    let cfg = GueConfig::new(30, 8, 99).unwrap();
    let identical = sample_gue_spectrum(&cfg) == sample_gue_spectrum(&cfg);
    out.push(Check::holds(
        s,
        "seed_determinism",
        identical,
        "bitwise equal spectra",
    ));

    let cfg = GueConfig::new(200, 200, 2024).unwrap();
    let spectra = sample_gue_spectrum(&cfg);
    let mut scaled: Vec<f64> = spectra
        .iter()
        .flatten()
        .map(|l| l / (200f64).sqrt())
        .collect();
    scaled.sort_by(f64::total_cmp);
    let total = scaled.len() as f64;
    let ks = max_of(scaled.iter().enumerate().map(|(i, &x)| {
        let cdf = semicircle_counting(x, 1);
        (cdf - i as f64 / total)
            .abs()
            .max((cdf - (i + 1) as f64 / total).abs())
    }));
    out.push(Check::at_most(
        s,
        "semicircle_kolmogorov",
        ks,
        0.03,
        "n = 200, M = 200, lambda / sqrt(n)",
    ));

    let monotone = spectra.iter().take(20).all(|sp| {
        unfold_semicircle(sp, 1.0).is_ok_and(|u| u.values().windows(2).all(|w| w[0] < w[1]))
    });
    out.push(Check::holds(
        s,
        "unfold_monotone",
        monotone,
        "full spectra, 20 samples",
    ));

    let probe_cfg = GueConfig::new(50, 10, 7).unwrap();
    let backward = max_of((0..10).map(|i| {
        let h = gue_matrix(&probe_cfg, i);
        let norm = h.norm();
        let eig = h.clone().symmetric_eigen();
        max_of((0..50).map(|k| {
            let v = eig.eigenvectors.column(k);
            let lambda = nalgebra::Complex::new(eig.eigenvalues[k], 0.0);
            (&h * v - v * lambda).norm() / norm
        }))
    }));
    out.push(Check::at_most(
        s,
        "eigen_backward_error",
        backward,
        1e-8,
        "||Hv - lv|| / ||H||, 10 probes",
    ));

    let cfg = GueConfig::new(200, 100, 5).unwrap();
    let spacing = sample_gue_spectrum(&cfg)
        .iter()
        .map(|sp| unfold_semicircle(sp, 0.5).map(|u| u.mean_spacing().unwrap()))
        .collect::<crate::Result<Vec<f64>>>()
        .map(|v| v.iter().sum::<f64>() / v.len() as f64);
    out.push(match spacing {
        Ok(m) => Check::at_most(
            s,
            "unfolded_mean_spacing",
            (m - 1.0).abs(),
            0.05,
            format!("mean {m:.4}"),
        ),
        Err(e) => Check::failed(s, "unfolded_mean_spacing", e),
    });

    let small = sample_gue_spectrum(&GueConfig::new(2, 100_000, 3).unwrap());
    let spacings: Vec<f64> = small.iter().map(|sp| sp[1] - sp[0]).collect();
    let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
    let tiny = spacings.iter().filter(|&&d| d / mean < 0.1).count() as f64 / spacings.len() as f64;
    out.push(Check::at_most(
        s,
        "two_by_two_level_repulsion",
        tiny,
        0.01,
        "P(s < 0.1), M = 10^5",
    ));

    let traces: Vec<f64> = small.iter().map(|sp| sp[0] + sp[1]).collect();
    let tmean = traces.iter().sum::<f64>() / traces.len() as f64;
    let tvar = traces.iter().map(|t| (t - tmean).powi(2)).sum::<f64>() / (traces.len() - 1) as f64;
    let se = (tvar / traces.len() as f64).sqrt();
    out.push(Check::at_most(
        s,
        "two_by_two_trace_mean",
        tmean.abs() / se,
        3.0,
        "|mean| in standard errors",
    ));

    let edge = 2.0 * 50f64.sqrt();
    let largest = max_of(
        sample_gue_spectrum(&GueConfig::new(50, 100, 11).unwrap())
            .iter()
            .flatten()
            .map(|l| l.abs()),
    );
    out.push(Check::at_most(
        s,
        "semicircle_edge",
        largest / edge,
        1.2,
        "max |lambda| / 2 sqrt(n), n = 50",
    ));

    for seed in [1u64, 2, 3] {
        let cfg = GueConfig::new(200, 200, seed).unwrap();
        let name = format!("pair_correlation_seed{seed}");
        match gue_pair_distance(&cfg, 0.5, 0.05, 0.25, 2.0) {
            Ok((linf, l2)) => {
                out.push(Check::at_most(
                    s,
                    &format!("{name}_linf"),
                    linf,
                    0.08,
                    "n = 200, M = 200, w in [0.25, 2]",
                ));
                out.push(Check::at_most(
                    s,
                    &format!("{name}_l2"),
                    l2,
                    0.03,
                    "n = 200, M = 200, w in [0.25, 2]",
                ));
            }
            Err(e) => out.push(Check::failed(s, &name, e)),
        }
    }
    out
}

// ---------------------------------------------------------------- zeta

fn zeta_checks() -> Vec<Check> {
    let s = Suite::Zeta;
    let mut out = Vec::new();

    for t_max in [100.0, 200.0, 500.0] {
        let name = format!("counting_T{t_max}");
        out.push(match find_zeros(&ZeroScan::new(1.0, t_max)) {
            Ok(rep) => {
                let expected = counting_estimate(t_max).unwrap();
                Check::at_most(
                    s,
                    &name,
                    (rep.zeros.len() as f64 - expected).abs(),
                    2.0,
                    format!("{} zeros vs theta/pi + 1 = {expected:.2}", rep.zeros.len()),
                )
            }
            Err(e) => Check::failed(s, &name, e),
        });
    }

    let base = find_zeros(&ZeroScan::new(10.0, 500.0));
    let halved = find_zeros(&ZeroScan::new(10.0, 500.0).grid_step(0.025));
    match (&base, &halved) {
        (Ok(a), Ok(b)) => {
            let same = a.zeros.len() == b.zeros.len();
            out.push(Check::holds(
                s,
                "zero_count_stable",
                same,
                format!("{} vs {}", a.zeros.len(), b.zeros.len()),
            ));
            let shift = if same {
                max_of(
                    a.zeros
                        .heights()
                        .iter()
                        .zip(b.zeros.heights())
                        .map(|(x, y)| (x - y).abs()),
                )
            } else {
                f64::INFINITY
            };
            out.push(Check::at_most(
                s,
                "zero_positions_stable",
                shift,
                1e-6,
                "grid 0.05 vs 0.025 on (10, 500)",
            ));
        }
        (Err(e), _) | (_, Err(e)) => out.push(Check::failed(s, "zero_stability", e)),
    }

    if let Ok(rep) = &base {
        let window = rep.zeros.window(50.0, 500.0);
        let smooth = unfold_zeros_with(&window, ZeroUnfolding::Smooth).unwrap();
        let leading = unfold_zeros_with(&window, ZeroUnfolding::Leading).unwrap();
        let m = leading.mean_spacing().unwrap();
        out.push(Check::at_most(
            s,
            "unfolded_mean_spacing",
            (m - 1.0).abs(),
            0.10,
            format!(
                "t in [50, 500]: {m:.4}; smooth count map gives {:.4}",
                smooth.mean_spacing().unwrap()
            ),
        ));
        for (name, seq) in [
            ("pair_correlation_computed", &leading),
            ("pair_correlation_computed_smooth_map", &smooth),
        ] {
            let est = estimate_pair_correlation(seq, 3.0, 0.25).unwrap();
            let theory =
                theory_on_bins(&est.bin_edges, |w| pair_correlation_theory(0.5, w).unwrap());
            let d = curve_distance(&est, &theory, 0.25, 1.5).unwrap();
            out.push(Check::at_most(
                s,
                name,
                d.l_inf,
                0.25,
                "t in [50, 500], bins 0.25, w in [0.25, 1.5]",
            ));
        }
    }

    let first = [0.1, 0.05, 0.01]
        .iter()
        .map(|&g| {
            find_zeros(&ZeroScan::new(10.0, 15.0).grid_step(g)).map(|r| r.zeros.heights().to_vec())
        })
        .collect::<crate::Result<Vec<_>>>();
    out.push(match first {
        Ok(runs) => {
            let single = runs.iter().all(|z| z.len() == 1);
            let spread = if single {
                max_of(runs.iter().map(|z| (z[0] - runs[0][0]).abs()))
            } else {
                f64::INFINITY
            };
            Check::at_most(
                s,
                "first_zero_grid_stable",
                spread,
                1e-6,
                format!("t1 = {:.9}", runs[0].first().copied().unwrap_or(f64::NAN)),
            )
        }
        Err(e) => Check::failed(s, "first_zero_grid_stable", e),
    });

    let mut r = rng(40);
    let em = max_of((0..50).map(|_| {
        let t = r.gen_range(0.0..=500.0);
        let m = crate::zeta::default_terms(t);
        (zeta_critical_line(t, Some(m)).unwrap() - zeta_critical_line(t, Some(2 * m)).unwrap())
            .norm()
    }));
    out.push(Check::at_most(
        s,
        "euler_maclaurin_m_vs_2m",
        em,
        1e-8,
        "50 heights in [0, 500]",
    ));

    let modulus = max_of((0..100).map(|_| {
        let t = r.gen_range(5.0..=300.0);
        (zeta_critical_line(t, None).unwrap().norm() - hardy_z(t).unwrap().abs()).abs()
    }));
    out.push(Check::at_most(
        s,
        "modulus_matches_hardy_z",
        modulus,
        1e-8,
        "100 heights in [5, 300]",
    ));

    let imag =
        max_of((0..1000).map(|_| hardy_z_complex(r.gen_range(5.0..=500.0)).unwrap().im.abs()));
    out.push(Check::at_most(
        s,
        "hardy_z_real",
        imag,
        1e-7,
        "1000 heights in [5, 500]",
    ));

    let conj = max_of((0..100).map(|_| {
        let t = r.gen_range(0.0..=500.0);
        (zeta_critical_line(-t, None).unwrap() - zeta_critical_line(t, None).unwrap().conj()).norm()
    }));
    out.push(Check::at_most(
        s,
        "conjugate_symmetry",
        conj,
        1e-8,
        "100 heights",
    ));
    out
}

// ---------------------------------------------------------------- stats

/// Unit-density Poisson sequence: cumulative sums of Exp(1) gaps.
pub fn poisson_sequence(n: usize, seed: u64) -> UnfoldedSequence {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut x = 0.0;
    let values = (0..n)
        .map(|_| {
            x += -(1.0 - r.gen::<f64>()).ln();
            x
        })
        .collect();
    UnfoldedSequence::new(values, SequenceSource::Synthetic).expect("exponential gaps are positive")
}

fn stats_checks() -> Vec<Check> {
    let s = Suite::Stats;
    let mut out = Vec::new();

    let poisson = poisson_sequence(10_000, 50);
    let est = estimate_pair_correlation(&poisson, 3.0, 0.25).unwrap();
    let flat = vec![1.0; est.values.len()];
    let worst = max_of(
        est.bin_centers()
            .iter()
            .zip(&est.values)
            .filter(|(c, _)| **c >= 0.1)
            .map(|(_, v)| (v - 1.0).abs()),
    );
    out.push(Check::at_most(
        s,
        "poisson_flat",
        worst,
        0.1,
        "10^4 points, bins 0.25, w in [0.1, 3]",
    ));
    let d = curve_distance(&est, &flat, 0.1, 3.0).unwrap();
    out.push(Check::at_most(
        s,
        "poisson_distance",
        d.l_inf,
        0.1,
        "l_inf vs 1",
    ));

    let mean_l2 = |n: usize, tag: u64| -> f64 {
        (0..10)
            .map(|rep| {
                let seq = poisson_sequence(n, tag * 100 + rep);
                let est = estimate_pair_correlation(&seq, 3.0, 0.05).unwrap();
                curve_distance(&est, &vec![1.0; est.values.len()], 0.0, 3.0)
                    .unwrap()
                    .l2
            })
            .sum::<f64>()
            / 10.0
    };
    let ratio = mean_l2(10_000, 51) / mean_l2(20_000, 52);
    out.push(Check::holds(
        s,
        "estimator_consistency",
        (1.2..=1.8).contains(&ratio),
        format!("l2 ratio for doubled sample {ratio:.3}, 10 replicates each"),
    ));

    let seq = poisson_sequence(2_000, 53);
    let fine = estimate_pair_correlation(&seq, 3.0, 0.1).unwrap();
    let coarse = estimate_pair_correlation(&seq, 3.0, 0.2).unwrap();
    let merged: Vec<u64> = fine.pair_counts.chunks(2).map(|c| c[0] + c[1]).collect();
    out.push(Check::holds(
        s,
        "binning_invariance",
        merged == coarse.pair_counts,
        "pairwise-merged 0.1 bins vs 0.2 bins",
    ));

    let w = seq.values();
    let last = w[w.len() - 1];
    let mut brute = 0u64;
    for i in 0..w.len() {
        if w[i] + 3.0 > last {
            continue;
        }
        for j in (i + 1)..w.len() {
            if w[j] - w[i] <= 3.0 {
                brute += 1;
            }
        }
    }
    let counted: u64 = fine.pair_counts.iter().sum();
    out.push(Check::holds(
        s,
        "window_correctness",
        counted == brute,
        format!("{counted} vs brute force {brute}"),
    ));

    let lattice = UnfoldedSequence::new(
        (1..=100).map(|k| k as f64).collect(),
        SequenceSource::Synthetic,
    )
    .unwrap();
    let mut counter = PairCounter::new(3.5, 0.5).unwrap();
    counter.add_sequence(lattice.values()).unwrap();
    let est = counter.finish().unwrap();
    let lattice_ok = est.values.iter().enumerate().all(|(k, v)| {
        let expected = if [2, 4, 6].contains(&k) { 2.0 } else { 0.0 };
        (v - expected).abs() < 1e-12
    });
    out.push(Check::holds(
        s,
        "integer_lattice",
        lattice_ok,
        "one neighbour per integer gap",
    ));
    out
}
