use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{fold_unit, n_body_density_finite, PointConfiguration};
use crate::error::{Error, Result};
use crate::kernel::FiniteSystem;

const MAX_PARTICLES: usize = 8;
const INITIAL_DRAWS: usize = 10_000;
const MIN_INITIAL_DENSITY: f64 = 1e-12;

/// Tuning knobs for [`MetropolisChain`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetropolisConfig {
    /// Half-width of the uniform single-particle displacement.
    pub step_size: f64,
    pub burn_in: usize,
    pub seed: u64,
}

impl MetropolisConfig {
    /// Step `0.25 / N` and 10⁴ burn-in steps.
    pub fn for_system(system: &FiniteSystem, seed: u64) -> Self {
        Self {
            step_size: 0.25 / system.n_particles() as f64,
            burn_in: 10_000,
            seed,
        }
    }
}

/// Random-walk Metropolis chain targeting `|Ψ|² ∝ det K^{(N)}` for a
/// one-dimensional finite system.
///
/// Each step moves one uniformly chosen particle by a uniform displacement
/// in `[-step, step]`, folds it back onto the torus and accepts with
/// probability `min(1, det K' / det K)`. The iterator yields the chain state
/// after every step, rejected proposals included. Independent chains with
/// different seeds can run side by side.
#[derive(Debug, Clone)]
pub struct MetropolisChain {
    system: FiniteSystem,
    positions: Vec<f64>,
    density: f64,
    step_size: f64,
    rng: ChaCha8Rng,
    proposed: u64,
    accepted: u64,
}

impl MetropolisChain {
    pub fn new(system: FiniteSystem, config: MetropolisConfig) -> Result<Self> {
        if system.dimension() != 1 {
            return Err(Error::Domain(
                "Metropolis sampler supports d = 1 only".into(),
            ));
        }
        if system.n_particles() > MAX_PARTICLES {
            return Err(Error::Domain(format!(
                "Metropolis sampler supports N <= {MAX_PARTICLES}"
            )));
        }
        if !(config.step_size > 0.0) {
            return Err(Error::Domain("step size must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let n = system.n_particles();
        let mut start = None;
        for _ in 0..INITIAL_DRAWS {
            let positions: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let density =
                n_body_density_finite(&system, &PointConfiguration::on_circle(&positions))?;
            if density > MIN_INITIAL_DENSITY {
                start = Some((positions, density));
                break;
            }
        }
        let (positions, density) = start.ok_or_else(|| {
            Error::ZeroDensity(format!(
                "no initial configuration with positive density in {INITIAL_DRAWS} draws"
            ))
        })?;
        let mut chain = Self {
            system,
            positions,
            density,
            step_size: config.step_size,
            rng,
            proposed: 0,
            accepted: 0,
        };
        for _ in 0..config.burn_in {
            chain.step();
        }
        chain.proposed = 0;
        chain.accepted = 0;
        Ok(chain)
    }

    /// One Metropolis update.
    pub fn step(&mut self) {
        let i = self.rng.gen_range(0..self.positions.len());
        let old = self.positions[i];
        let shift = self.rng.gen_range(-self.step_size..=self.step_size);
        self.positions[i] = fold_unit(old + shift);
        let proposal = n_body_density_finite(
            &self.system,
            &PointConfiguration::on_circle(&self.positions),
        )
        .expect("chain configuration matches the system");
        self.proposed += 1;
        let u: f64 = self.rng.gen();
        if proposal >= self.density || u * self.density < proposal {
            self.density = proposal;
            self.accepted += 1;
        } else {
            self.positions[i] = old;
        }
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    /// Accepted fraction since burn-in ended.
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }
}

impl Iterator for MetropolisChain {
    type Item = PointConfiguration;

    fn next(&mut self) -> Option<Self::Item> {
        self.step();
        Some(PointConfiguration::on_circle(&self.positions))
    }
}

/// `n_steps` successive chain states after `burn_in` discarded steps.
pub fn sample_slater_metropolis(
    system: &FiniteSystem,
    n_steps: usize,
    burn_in: usize,
    step_size: f64,
    seed: u64,
) -> Result<std::iter::Take<MetropolisChain>> {
    let chain = MetropolisChain::new(
        system.clone(),
        MetropolisConfig {
            step_size,
            burn_in,
            seed,
        },
    )?;
    Ok(chain.take(n_steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsupported_systems() {
        let plane = FiniteSystem::fermi_sea(2, 2).unwrap();
        assert!(
            MetropolisChain::new(plane.clone(), MetropolisConfig::for_system(&plane, 1)).is_err()
        );
        let crowd = FiniteSystem::fermi_sea(1, 9).unwrap();
        assert!(
            MetropolisChain::new(crowd.clone(), MetropolisConfig::for_system(&crowd, 1)).is_err()
        );
    }

    #[test]
    fn same_seed_same_chain() {
        let sys = FiniteSystem::fermi_sea(1, 3).unwrap();
        let a: Vec<_> = sample_slater_metropolis(&sys, 200, 100, 0.1, 9)
            .unwrap()
            .collect();
        let b: Vec<_> = sample_slater_metropolis(&sys, 200, 100, 0.1, 9)
            .unwrap()
            .collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 200);
    }

    #[test]
    fn states_stay_on_torus_with_positive_density() {
        let sys = FiniteSystem::fermi_sea(1, 4).unwrap();
        let mut chain =
            MetropolisChain::new(sys.clone(), MetropolisConfig::for_system(&sys, 3)).unwrap();
        for _ in 0..2_000 {
            let cfg = chain.next().unwrap();
            assert!(cfg.points().iter().all(|p| (0.0..1.0).contains(&p[0])));
            assert!(chain.density() > 0.0);
        }
        let rate = chain.acceptance_rate();
        assert!(rate > 0.0 && rate < 1.0);
    }
}
