//! Rank agreement between indices over random contexts. The default run is
//! small; pass a context count per density to scale it up (100 matches the
//! published design).
//!
//! cargo run --release --example correlation_study -- 20

use conceptgauge::experiments::{run_correlation_study, CorrelationStudySpec};

fn main() -> anyhow::Result<()> {
    let per_density = std::env::args().nth(1).map_or(Ok(5), |s| s.parse())?;
    let mut spec = CorrelationStudySpec::default();
    spec.design.contexts_per_density = per_density;
    let r = run_correlation_study(&spec)?;

    let pairs = [
        ("stability", "delta_l"),
        ("robustness:alpha=0.1", "robustness:alpha=0.3"),
        ("stab2oe", "stab2oie"),
        ("cv", "cu"),
        ("support", "stability"),
    ];
    for (a, b) in pairs {
        println!("{:>8.3}  {a} ~ {b}", r.mean_tau(a, b).unwrap_or(f64::NAN));
    }
    println!(
        "max within-density sd {:.3}, {} regenerated, {} degenerate pairs",
        r.max_group_sd(),
        r.regenerated,
        r.degenerate_pairs
    );
    Ok(())
}
