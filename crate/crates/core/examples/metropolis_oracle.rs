//! Metropolis sampling of |Psi|^2 for two fermions on a ring, histogrammed
//! against the analytic two-body density.
//!
//! ```bash
//! cargo run --release --example metropolis_oracle -- [steps] [seed]
//! ```

use fermikernel::correlations::{
    fold_unit, n_body_density_finite, MetropolisChain, MetropolisConfig, PointConfiguration,
};
use fermikernel::kernel::FiniteSystem;

const BINS: usize = 40;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>());
    let steps = args.next().transpose()?.unwrap_or(1_000_000) as usize;
    let seed = args.next().transpose()?.unwrap_or(7);

    let sys = FiniteSystem::fermi_sea(1, 2)?;
    let config = MetropolisConfig {
        step_size: 0.5,
        ..MetropolisConfig::for_system(&sys, seed)
    };
    let mut chain = MetropolisChain::new(sys.clone(), config)?;
    let mut counts = [0u64; BINS];
    for _ in 0..steps {
        chain.step();
        let p = chain.positions();
        let sep = fold_unit(p[1] - p[0]);
        counts[((sep * BINS as f64) as usize).min(BINS - 1)] += 1;
    }

    println!("steps {steps}, acceptance {:.3}", chain.acceptance_rate());
    println!("{:>7} {:>9} {:>9}", "r", "sampled", "exact");
    let mut worst: f64 = 0.0;
    for (b, c) in counts.iter().enumerate() {
        let r = (b as f64 + 0.5) / BINS as f64;
        let sampled = *c as f64 * BINS as f64 / steps as f64;
        let exact = n_body_density_finite(&sys, &PointConfiguration::on_circle(&[0.0, r]))?;
        worst = worst.max((sampled - exact).abs());
        if b % 4 == 0 {
            println!("{r:>7.4} {sampled:>9.4} {exact:>9.4}");
        }
    }
    println!("max deviation at bin centres {worst:.4}");
    Ok(())
}
