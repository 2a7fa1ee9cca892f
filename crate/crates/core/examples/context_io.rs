//! Random contexts, cell-flip noise and the three text formats.
//!
//! cargo run --example context_io

use conceptgauge::context::{
    apply_noise, generate_random_context, read_context, write_context, ContextFormat, NoiseSpec,
    RandomContextSpec,
};
use conceptgauge::enumerate_concepts;

fn main() -> anyhow::Result<()> {
    let ctx = generate_random_context(&RandomContextSpec {
        n_objects: 6,
        n_attributes: 5,
        density: 0.4,
        seed: 42,
    })?;
    println!("density {:.2}", ctx.density());

    for format in [ContextFormat::Cxt, ContextFormat::Fimi, ContextFormat::Csv] {
        let bytes = write_context(&ctx, format);
        let text = String::from_utf8(bytes)?;
        println!("--- {} ---\n{text}", format.name());
        let back = read_context(&text, format)?;
        assert_eq!(back.rows(), ctx.rows());
    }

    let noisy = apply_noise(&ctx, &NoiseSpec { rate: 0.1, seed: 7 })?;
    let flipped: usize = (0..ctx.n_objects())
        .map(|g| ctx.row(g).union_count(noisy.row(g)) - ctx.row(g).intersection_count(noisy.row(g)))
        .sum();
    println!(
        "{flipped} cells flipped; {} concepts before, {} after",
        enumerate_concepts(&ctx, 0)?.len(),
        enumerate_concepts(&noisy, 0)?.len()
    );
    Ok(())
}
