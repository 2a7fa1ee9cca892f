//! Bundled contexts.

use crate::context::{block_diagonal, read_context, ContextFormat, FormalContext};

const FIG2: &str = include_str!("../data/fig2.cxt");
const TABLE1: &str = include_str!("../data/table1.cxt");

/// The 7×11 context of subsampling-based indices; 8 concepts.
pub fn fig2() -> FormalContext {
    read_context(FIG2, ContextFormat::Cxt).expect("bundled fig2.cxt parses")
}

/// The 20×19 context of indices and their properties; 73 concepts.
pub fn table1() -> FormalContext {
    read_context(TABLE1, ContextFormat::Cxt).expect("bundled table1.cxt parses")
}

/// Raw Burmeister text of a bundled fixture.
pub fn raw(name: &str) -> Option<&'static str> {
    match name {
        "fig2" => Some(FIG2),
        "table1" => Some(TABLE1),
        _ => None,
    }
}

/// Block-diagonal stand-ins for the noise-study lattices: three 100×2
/// blocks and two 150×3 blocks (both 300×6), and two 200×2 blocks (400×4).
pub fn noise_fixtures() -> Vec<(&'static str, FormalContext)> {
    vec![
        ("blocks_3x100x2", block_diagonal(3, 100, 2)),
        ("blocks_2x150x3", block_diagonal(2, 150, 3)),
        ("blocks_2x200x2", block_diagonal(2, 200, 2)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_concepts;

    #[test]
    fn fixture_shapes() {
        let f = fig2();
        assert_eq!((f.n_objects(), f.n_attributes()), (7, 11));
        assert_eq!(enumerate_concepts(&f, 0).unwrap().len(), 8);
        let t = table1();
        assert_eq!((t.n_objects(), t.n_attributes()), (20, 19));
        assert_eq!(enumerate_concepts(&t, 0).unwrap().len(), 73);
        let dims: Vec<_> = noise_fixtures()
            .iter()
            .map(|(_, c)| (c.n_objects(), c.n_attributes()))
            .collect();
        assert_eq!(dims, [(300, 6), (300, 6), (400, 4)]);
    }
}
