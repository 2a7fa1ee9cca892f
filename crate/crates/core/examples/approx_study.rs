//! How well integral stability at level `⌈rate·|A|⌉` predicts stability,
//! swept over rates.
//!
//! cargo run --release --example approx_study -- levelwise

use conceptgauge::experiments::{run_approx_study, ApproxStudySpec};

fn main() -> anyhow::Result<()> {
    let mut spec = ApproxStudySpec::default();
    spec.design.densities = vec![0.2, 0.3];
    spec.design.contexts_per_density = 30;
    if let Some(r) = std::env::args().nth(1) {
        spec.regressor = r.parse()?;
    }
    let r = run_approx_study(&spec)?;
    println!("rate   R²(0.2)  R²(0.3)");
    for &rate in &spec.rates {
        let cell = |d| {
            r.cell(d, rate)
                .and_then(|c| c.r_squared())
                .unwrap_or(f64::NAN)
        };
        println!("{rate:.2}   {:.3}    {:.3}", cell(0.2), cell(0.3));
    }
    Ok(())
}
