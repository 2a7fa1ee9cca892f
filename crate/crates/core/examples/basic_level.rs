//! Basic-level indices: similarity with its eight aggregation variants,
//! predictability, and the cue-validity family.
//!
//! cargo run --example basic_level

use conceptgauge::indices::{
    basic_level_similarity_all, cv_cfc_cu, predictability_all, Aggregation, Similarity,
    SimilarityConfig,
};
use conceptgauge::measures::AggregatorKind;
use conceptgauge::{fixtures, ConceptLattice};

fn main() -> anyhow::Result<()> {
    let lat = ConceptLattice::build(&fixtures::table1(), &Default::default())?;
    let ctx = lat.context();

    let mut columns = Vec::new();
    for similarity in [Similarity::Smc, Similarity::Jaccard] {
        for nb in [Aggregation::Average, Aggregation::Extreme] {
            for obj in [Aggregation::Average, Aggregation::Extreme] {
                let cfg = SimilarityConfig {
                    similarity,
                    object_aggregation: obj,
                    neighbor_aggregation: nb,
                    ..Default::default()
                };
                columns.push((
                    format!("{similarity}/{nb}{obj}"),
                    basic_level_similarity_all(&lat, &cfg)?,
                ));
            }
        }
    }
    // the product t-norm is a common alternative to the minimum
    let product = SimilarityConfig {
        tnorm: AggregatorKind::AlgebraicProduct,
        ..Default::default()
    };
    columns.push(("pred/product".into(), predictability_all(&lat, &product)?));

    for (name, col) in &columns {
        let best = (0..col.len())
            .max_by(|&a, &b| col[a].total_cmp(&col[b]).then(b.cmp(&a)))
            .unwrap();
        println!("{name:<16} best concept #{best:<3} score {:.3}", col[best]);
    }

    println!("\n id    cv     cfc    cu");
    for c in lat.concepts().iter().take(8) {
        let v = cv_cfc_cu(ctx, c, false);
        println!("{:>3}  {:.3}  {:.3}  {:.3}", c.id, v.cv, v.cfc, v.cu);
    }
    Ok(())
}
