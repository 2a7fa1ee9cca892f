//! Which indices tell original concepts apart from noise-born ones, on
//! block-diagonal contexts with flipped cells.
//!
//! cargo run --release --example noise_study

use conceptgauge::experiments::{run_noise_study, Matching, NoiseStudySpec, STUDY_BUDGET};
use conceptgauge::fixtures;
use conceptgauge::indices::parse_spec_list;

fn main() -> anyhow::Result<()> {
    let indices = parse_spec_list(
        "robustness:alpha=0.3,robustness:alpha=0.8,stability,separation,cv,cfc,cu,\
         similarity,similarity:sim=jaccard,nb=m,predictability",
    )?;
    let rates = vec![0.01, 0.03, 0.05, 0.1];
    for (name, base) in fixtures::noise_fixtures() {
        let spec = NoiseStudySpec {
            base,
            noise_rates: rates.clone(),
            trials_per_rate: 10,
            indices: indices.clone(),
            seed: 1,
            matching: Matching::Intent,
            budget: STUDY_BUDGET,
        };
        let r = run_noise_study(&spec)?;
        println!("{name}");
        for s in &indices {
            let aucs: Vec<String> = rates
                .iter()
                .map(|&x| format!("{:.3}", r.mean_auc(x, &s.to_string()).unwrap_or(f64::NAN)))
                .collect();
            println!("  {:<36} {}", s.to_string(), aucs.join("  "));
        }
    }
    Ok(())
}
