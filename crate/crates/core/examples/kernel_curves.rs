//! The kernel family K(r; nu) for d = 1..4 at matched density.
//!
//! ```bash
//! cargo run --release --example kernel_curves -- [n_particles]
//! ```

use fermikernel::kernel::{kernel_closed_form, KernelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: f64 = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(1.0);

    let params: Vec<KernelParams> = (1..=4)
        .map(|d| KernelParams::for_dimension(d, n))
        .collect::<Result<_, _>>()?;
    print!("{:>6}", "k_F r");
    for p in &params {
        print!("  {:>11}", format!("nu={}", p.nu()));
    }
    println!();
    for i in 0..=40 {
        let x = 0.25 * i as f64;
        print!("{x:>6.2}");
        for p in &params {
            print!("  {:>11.7}", p.value(x / p.k_f()));
        }
        println!();
    }

    // the half-integer orders have elementary forms
    let p = KernelParams::new(1.5, std::f64::consts::PI)?;
    println!();
    println!(
        "nu = 3/2, k_F = pi, r = 1: Bessel path {:.10}, closed form {:.10}",
        p.value(1.0),
        kernel_closed_form(&p, 1.0)?
    );
    Ok(())
}
