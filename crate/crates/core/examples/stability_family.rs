//! Exact stability, its logarithmic bounds, robustness and the Monte Carlo
//! estimate on the bundled 20×19 index context.
//!
//! cargo run --example stability_family

use conceptgauge::indices::{
    lstab_and_bounds_all, robustness_all, stability_montecarlo, IntegralSide, LevelCounts,
    StabilityCounts,
};
use conceptgauge::{fixtures, ConceptLattice};

fn main() -> anyhow::Result<()> {
    let lat = ConceptLattice::build(&fixtures::table1(), &Default::default())?;
    let counts = StabilityCounts::compute(&lat)?;
    let bounds = lstab_and_bounds_all(&lat)?;
    let rob = robustness_all(&lat, 0.3)?;
    let levels = LevelCounts::compute(&lat)?;

    println!(" id |A|  stab    mc      lstab  lower  Δ_l  2noe  rob.3   J_Σ");
    for c in (0..lat.len()).step_by(6) {
        let b = &bounds[c];
        let mc = stability_montecarlo(lat.context(), lat.concept(c), 4096, 1)?;
        let full = levels.integral(c, 0, IntegralSide::Full).value;
        println!(
            "{c:>3} {:>3}  {:.4}  {:.4}  {:>5.2}  {:>5.2}  {:>3}  {:>4}  {:.4}  {full:.3}",
            counts.extent_size(c),
            counts.stability(c),
            mc,
            b.lstab,
            b.lstab_lower,
            b.delta_l,
            b.stab2noe,
            rob[c],
        );
    }

    // robustness at one half is stability
    let half = robustness_all(&lat, 0.5)?;
    let worst = (0..lat.len())
        .map(|c| (half[c] - counts.stability(c)).abs())
        .fold(0.0, f64::max);
    println!("max |rob(0.5) - stability| = {worst:.2e}");
    Ok(())
}
