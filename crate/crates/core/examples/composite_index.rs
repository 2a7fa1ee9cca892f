//! New indices assembled from a base measure, a scope of related concepts,
//! a comparison and an aggregator.
//!
//! cargo run --example composite_index

use conceptgauge::measures::{evaluate_composite, index1, index2, CompositeIndexSpec};
use conceptgauge::{fixtures, ConceptLattice};

fn main() -> anyhow::Result<()> {
    let lat = ConceptLattice::build(&fixtures::fig2(), &Default::default())?;
    let specs: Vec<CompositeIndexSpec> = [
        "lower:support:ratio:maximum",
        "upper:lift:difference:mean",
        "descendants:stability:difference:min",
        "outside:conditional_probability:none:maximum",
    ]
    .iter()
    .map(|s| s.parse())
    .collect::<Result<_, _>>()?;

    print!("id");
    for s in &specs {
        print!("  {s}");
    }
    println!("  index1  index2");
    for c in 0..lat.len() {
        print!("{c:>2}");
        for s in &specs {
            let v = evaluate_composite(&lat, c, s)?;
            print!(
                "  {:>8.4}{}",
                v.value,
                if v.empty_scope { "*" } else { " " }
            );
        }
        let i2 = index2(lat.context(), &lat.concept(c).intent, false)?;
        println!("  {:>6.3}  {i2:>6.3}", index1(&lat, c)?);
    }
    println!("* empty scope");
    Ok(())
}
