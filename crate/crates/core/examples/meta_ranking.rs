//! Ranks the concepts of the index-property context by the indices
//! themselves and lists the concepts that recur across the top-8 lists.
//!
//! cargo run --example meta_ranking

use conceptgauge::experiments::run_meta_demo;

fn main() -> anyhow::Result<()> {
    let report = run_meta_demo()?;
    for r in &report.rankings {
        let ids: Vec<String> = r.top.iter().map(|(c, _)| c.to_string()).collect();
        println!("{:<40} {}", r.index, ids.join(" "));
    }
    println!();
    print!("{}", report.render());
    Ok(())
}
