//! Every marginal of a finite Fermi sea integrates to one over the torus.
//!
//! ```bash
//! cargo run --release --example normalization
//! ```

use fermikernel::correlations::normalization_residual;
use fermikernel::kernel::FiniteSystem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>3} {:>3} {:>22} {:>10} {:>6}",
        "N", "n", "integral", "residual", "order"
    );
    for n_particles in [2, 3] {
        let sys = FiniteSystem::fermi_sea(1, n_particles)?;
        for n in 1..=n_particles {
            let check = normalization_residual(&sys, n, 32)?;
            println!(
                "{n_particles:>3} {n:>3} {:>22.16} {:>10.2e} {:>6}",
                check.integral, check.residual, check.order
            );
        }
    }
    Ok(())
}
