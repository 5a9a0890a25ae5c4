//! Two-body density of a 1-d Fermi sea on the unit circle, finite N against
//! the sine kernel, and the quadratic Pauli hole at short distance.
//!
//! ```bash
//! cargo run --release --example correlation_densities
//! ```

use fermikernel::correlations::{
    n_body_density_asymptotic, n_body_density_finite, PointConfiguration,
};
use fermikernel::kernel::{FiniteSystem, KernelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sizes = [3usize, 11, 51];
    let systems: Vec<FiniteSystem> = sizes
        .iter()
        .map(|&n| FiniteSystem::fermi_sea(1, n))
        .collect::<Result<_, _>>()?;
    let limits: Vec<KernelParams> = sizes
        .iter()
        .map(|&n| KernelParams::for_dimension(1, n as f64))
        .collect::<Result<_, _>>()?;

    println!("rho2(0, r) per unit density squared");
    print!("{:>6}", "r");
    for n in sizes {
        print!("  {:>9}  {:>9}", format!("N={n}"), "sine");
    }
    println!();
    for i in 0..=20 {
        let r = 0.025 * i as f64;
        let cfg = PointConfiguration::on_circle(&[0.0, r]);
        print!("{r:>6.3}");
        for (sys, lim) in systems.iter().zip(&limits) {
            print!(
                "  {:>9.5}  {:>9.5}",
                n_body_density_finite(sys, &cfg)?,
                n_body_density_asymptotic(lim, &cfg)
            );
        }
        println!();
    }

    let sine = KernelParams::new(0.5, std::f64::consts::PI)?;
    println!();
    println!("{:>10} {:>14} {:>14}", "k_F r", "rho2", "(k_F r)^2/3");
    for x in [1e-1, 1e-2, 1e-3] {
        let cfg = PointConfiguration::free(1, vec![vec![0.0], vec![x / std::f64::consts::PI]])?;
        println!(
            "{x:>10.0e} {:>14.6e} {:>14.6e}",
            n_body_density_asymptotic(&sine, &cfg),
            x * x / 3.0
        );
    }

    let three = FiniteSystem::fermi_sea(1, 3)?;
    let cfg = PointConfiguration::on_circle(&[0.1, 0.4, 0.75]);
    println!();
    println!(
        "rho3 for N = 3 at (0.1, 0.4, 0.75): {:.6}",
        n_body_density_finite(&three, &cfg)?
    );
    Ok(())
}
