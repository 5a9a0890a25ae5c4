//! Zeros of ζ on the critical line, unfolded, against `1 − (sin πw / πw)²`.
//!
//! ```bash
//! cargo run --release --example zeta_pair_correlation -- [t_min] [t_max]
//! ```

use fermikernel::correlations::pair_correlation_theory;
use fermikernel::stats::{curve_distance, estimate_pair_correlation, theory_on_bins};
use fermikernel::zeta::{find_zeros, unfold_zeros_with, ZeroScan, ZeroUnfolding};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>());
    let t_min = args.next().transpose()?.unwrap_or(50.0);
    let t_max = args.next().transpose()?.unwrap_or(500.0);

    let report = find_zeros(&ZeroScan::new(t_min, t_max))?;
    println!(
        "{} zeros in [{t_min}, {t_max}], counting estimate {:.2}",
        report.zeros.len(),
        report.expected_count
    );
    if let Some(w) = &report.warning {
        println!("warning: {w}");
    }
    for t in report.zeros.heights().iter().take(3) {
        println!("  t = {t:.9}");
    }

    for map in [ZeroUnfolding::Leading, ZeroUnfolding::Smooth] {
        let unfolded = unfold_zeros_with(&report.zeros, map)?;
        let estimate = estimate_pair_correlation(&unfolded, 3.0, 0.25)?;
        let theory = theory_on_bins(&estimate.bin_edges, |w| {
            pair_correlation_theory(0.5, w).unwrap()
        });
        let d = curve_distance(&estimate, &theory, 0.25, 1.5)?;
        println!(
            "{map:?}: mean spacing {:.4}, l_inf {:.4}, l2 {:.4}",
            unfolded.mean_spacing().unwrap_or(f64::NAN),
            d.l_inf,
            d.l2
        );
    }
    Ok(())
}
