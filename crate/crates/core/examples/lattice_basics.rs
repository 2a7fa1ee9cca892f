//! Builds the concept lattice of the bundled 7×11 context and walks it.
//!
//! cargo run --example lattice_basics

use conceptgauge::{fixtures, ConceptLattice};

fn main() -> anyhow::Result<()> {
    let ctx = fixtures::fig2();
    let lat = ConceptLattice::build(&ctx, &Default::default())?;
    println!(
        "{} objects, {} attributes, {} concepts",
        ctx.n_objects(),
        ctx.n_attributes(),
        lat.len()
    );

    let name = |ids: Vec<usize>, names: &[String]| -> String {
        ids.into_iter()
            .map(|i| names[i].as_str())
            .collect::<Vec<_>>()
            .join(", ")
    };
    for c in lat.concepts() {
        println!(
            "#{:<2} extent {{{}}}\n    intent {{{}}}\n    lower neighbours {:?}",
            c.id,
            name(c.extent.iter().collect(), ctx.object_names()),
            name(c.intent.iter().collect(), ctx.attribute_names()),
            lat.lower_neighbors(c.id)
        );
    }

    let mobius = lat.mobius(lat.top())?;
    let nonzero: Vec<_> = mobius.iter().filter(|&(_, m)| m != 0).collect();
    println!("nonzero mobius values below the top: {nonzero:?}");

    // JSON round trip keeps ids and order.
    let back = ConceptLattice::from_json(&lat.to_json())?;
    assert_eq!(back.len(), lat.len());
    Ok(())
}
