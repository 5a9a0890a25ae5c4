//! Locate zeros of Z(t) on an interval and write them as a zero table.
//!
//! ```bash
//! cargo run --release --example zeta_zeros -- [t_min] [t_max] > zeros.txt
//! ```

use fermikernel::zeta::{find_zeros, hardy_z, write_zero_table, ZeroScan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>());
    let t_min = args.next().transpose()?.unwrap_or(10.0);
    let t_max = args.next().transpose()?.unwrap_or(100.0);

    let report = find_zeros(&ZeroScan::new(t_min, t_max))?;
    eprintln!(
        "{} zeros, counting estimate {:.2}",
        report.zeros.len(),
        report.expected_count
    );
    if let Some(w) = &report.warning {
        eprintln!("warning: {w}");
    }
    if let Some(&t) = report.zeros.heights().first() {
        eprintln!("Z({t:.9}) = {:.2e}", hardy_z(t)?);
    }
    let header = vec![
        format!("zeros of Z(t) on [{t_min}, {t_max}]"),
        report.zeros.provenance().to_string(),
    ];
    write_zero_table(&report.zeros, &header, std::io::stdout().lock())?;
    Ok(())
}
