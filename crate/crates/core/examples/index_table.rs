//! Tabulates indices from spec strings, the same syntax the `cg index`
//! command takes.
//!
//! cargo run --example index_table -- "support,stability,robustness:alpha=0.3"

use conceptgauge::indices::{compute_index_table, parse_spec_list};
use conceptgauge::{fixtures, ConceptLattice};

fn main() -> anyhow::Result<()> {
    let list = std::env::args().nth(1).unwrap_or_else(|| {
        "support,stability,lstab,delta_l,stab2oie,robustness:alpha=0.3,\
         integral_stability_minor:rate=0.4,separation,monocle,margin_closed_relaxed,cv"
            .to_string()
    });
    let specs = parse_spec_list(&list)?;
    let lat = ConceptLattice::build(&fixtures::fig2(), &Default::default())?;
    let table = compute_index_table(&lat, &specs)?;
    print!("{}", table.to_csv());
    for (i, spec) in table.specs().iter().enumerate() {
        let n = table.out_of_range(i);
        if n > 0 {
            eprintln!("{spec}: {n} concepts outside the valid level range");
        }
    }
    Ok(())
}
