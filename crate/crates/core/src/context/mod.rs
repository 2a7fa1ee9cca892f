//! Formal contexts: the object × attribute incidence relation and its
//! derivation operators.

mod io;
mod random;

pub use io::{read_context, read_context_from_path, write_context, ContextFormat};
pub use random::{apply_noise, generate_random_context, keyed_rng, NoiseSpec, RandomContextSpec};

use std::collections::HashSet;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A set of object indices of some context.
pub type ObjectSet = BitSet;
/// A set of attribute indices of some context.
pub type AttributeSet = BitSet;

/// Binary object × attribute table with names.
///
/// Rows (object intents) and columns (attribute extents) are both kept so
/// that either derivation operator is a sequence of word-parallel
/// intersections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalContext {
    object_names: Vec<String>,
    attribute_names: Vec<String>,
    rows: Vec<AttributeSet>,
    cols: Vec<ObjectSet>,
}

impl FormalContext {
    /// Builds a context from names and per-object attribute sets.
    pub fn new(
        object_names: Vec<String>,
        attribute_names: Vec<String>,
        rows: Vec<AttributeSet>,
    ) -> Result<Self> {
        let n_obj = object_names.len();
        let n_att = attribute_names.len();
        if n_obj == 0 || n_att == 0 {
            return Err(Error::InvalidContext(format!(
                "context needs at least one object and one attribute (got {n_obj}x{n_att})"
            )));
        }
        if rows.len() != n_obj {
            return Err(Error::Dimension(format!(
                "{} incidence rows for {} objects",
                rows.len(),
                n_obj
            )));
        }
        if let Some((g, r)) = rows.iter().enumerate().find(|(_, r)| r.universe() != n_att) {
            return Err(Error::Dimension(format!(
                "row {g} is sized for {} attributes, context has {n_att}",
                r.universe()
            )));
        }
        check_unique("object", &object_names)?;
        check_unique("attribute", &attribute_names)?;

        let mut cols = vec![BitSet::new(n_obj); n_att];
        for (g, row) in rows.iter().enumerate() {
            for m in row {
                cols[m].insert(g);
            }
        }
        Ok(Self {
            object_names,
            attribute_names,
            rows,
            cols,
        })
    }

    /// Builds a context from a 0/1 matrix with generated names `g0..`, `m0..`.
    pub fn from_matrix(matrix: &[Vec<bool>]) -> Result<Self> {
        let n_att = matrix.first().map_or(0, Vec::len);
        if let Some(bad) = matrix.iter().position(|r| r.len() != n_att) {
            return Err(Error::Dimension(format!(
                "matrix row {bad} has {} cells, expected {n_att}",
                matrix[bad].len()
            )));
        }
        let rows = matrix
            .iter()
            .map(|r| {
                BitSet::from_indices(
                    n_att,
                    r.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i),
                )
            })
            .collect();
        Self::new(
            default_names("g", matrix.len()),
            default_names("m", n_att),
            rows,
        )
    }

    #[inline]
    pub fn n_objects(&self) -> usize {
        self.object_names.len()
    }

    #[inline]
    pub fn n_attributes(&self) -> usize {
        self.attribute_names.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.object_names
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    /// `g′`, the attributes of object `g`.
    #[inline]
    pub fn row(&self, g: usize) -> &AttributeSet {
        &self.rows[g]
    }

    /// `m′`, the objects having attribute `m`.
    #[inline]
    pub fn column(&self, m: usize) -> &ObjectSet {
        &self.cols[m]
    }

    pub fn rows(&self) -> &[AttributeSet] {
        &self.rows
    }

    #[inline]
    pub fn incident(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    /// Number of crosses in the table.
    pub fn ones(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum()
    }

    pub fn density(&self) -> f64 {
        self.ones() as f64 / (self.n_objects() * self.n_attributes()) as f64
    }

    pub fn empty_objects(&self) -> ObjectSet {
        BitSet::new(self.n_objects())
    }

    pub fn empty_attributes(&self) -> AttributeSet {
        BitSet::new(self.n_attributes())
    }

    pub fn all_objects(&self) -> ObjectSet {
        BitSet::full(self.n_objects())
    }

    pub fn all_attributes(&self) -> AttributeSet {
        BitSet::full(self.n_attributes())
    }

    /// `A′`: attributes shared by every object of `a`; all of `M` for `a = ∅`.
    pub fn derive_objects(&self, a: &ObjectSet) -> Result<AttributeSet> {
        self.check_objects(a)?;
        Ok(self.common_attributes(a))
    }

    /// `B′`: objects having every attribute of `b`; all of `G` for `b = ∅`.
    pub fn derive_attributes(&self, b: &AttributeSet) -> Result<ObjectSet> {
        self.check_attributes(b)?;
        Ok(self.common_objects(b))
    }

    /// `B″`.
    pub fn close_attributes(&self, b: &AttributeSet) -> Result<AttributeSet> {
        self.check_attributes(b)?;
        Ok(self.common_attributes(&self.common_objects(b)))
    }

    /// `A″`.
    pub fn close_objects(&self, a: &ObjectSet) -> Result<ObjectSet> {
        self.check_objects(a)?;
        Ok(self.common_objects(&self.common_attributes(a)))
    }

    /// Unchecked `A′`. The caller guarantees `a` is sized for this context.
    pub fn common_attributes(&self, a: &ObjectSet) -> AttributeSet {
        debug_assert_eq!(a.universe(), self.n_objects());
        let mut out = self.all_attributes();
        for g in a {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    /// Unchecked `B′`. The caller guarantees `b` is sized for this context.
    pub fn common_objects(&self, b: &AttributeSet) -> ObjectSet {
        debug_assert_eq!(b.universe(), self.n_attributes());
        let mut out = self.all_objects();
        for m in b {
            out.intersect_with(&self.cols[m]);
        }
        out
    }

    /// Builds an object set from indices, rejecting out-of-range members.
    pub fn object_set<I: IntoIterator<Item = usize>>(&self, items: I) -> Result<ObjectSet> {
        BitSet::try_from_indices(self.n_objects(), items).map_err(|i| {
            Error::Dimension(format!(
                "object index {i} out of range ({} objects)",
                self.n_objects()
            ))
        })
    }

    /// Builds an attribute set from indices, rejecting out-of-range members.
    pub fn attribute_set<I: IntoIterator<Item = usize>>(&self, items: I) -> Result<AttributeSet> {
        BitSet::try_from_indices(self.n_attributes(), items).map_err(|i| {
            Error::Dimension(format!(
                "attribute index {i} out of range ({} attributes)",
                self.n_attributes()
            ))
        })
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attribute_names.iter().position(|n| n == name)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_names.iter().position(|n| n == name)
    }

    fn check_objects(&self, a: &ObjectSet) -> Result<()> {
        if a.universe() != self.n_objects() {
            return Err(Error::Dimension(format!(
                "object set sized for {} objects, context has {}",
                a.universe(),
                self.n_objects()
            )));
        }
        Ok(())
    }

    fn check_attributes(&self, b: &AttributeSet) -> Result<()> {
        if b.universe() != self.n_attributes() {
            return Err(Error::Dimension(format!(
                "attribute set sized for {} attributes, context has {}",
                b.universe(),
                self.n_attributes()
            )));
        }
        Ok(())
    }

    /// Returns a copy with every cell complemented.
    pub fn complement(&self) -> Self {
        let rows = self.rows.iter().map(BitSet::complement).collect();
        Self::new(
            self.object_names.clone(),
            self.attribute_names.clone(),
            rows,
        )
        .expect("complement preserves validity")
    }
}

pub(crate) fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn check_unique(kind: &str, names: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(names.len());
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::InvalidContext(format!(
                "duplicate {kind} name `{n}`"
            )));
        }
    }
    Ok(())
}

/// Block-diagonal context: `blocks` disjoint all-ones rectangles of
/// `rows_per_block × cols_per_block`, zeros elsewhere.
pub fn block_diagonal(
    blocks: usize,
    rows_per_block: usize,
    cols_per_block: usize,
) -> FormalContext {
    let n_obj = blocks * rows_per_block;
    let n_att = blocks * cols_per_block;
    let rows = (0..n_obj)
        .map(|g| {
            let b = g / rows_per_block;
            BitSet::from_indices(n_att, b * cols_per_block..(b + 1) * cols_per_block)
        })
        .collect();
    FormalContext::new(default_names("g", n_obj), default_names("m", n_att), rows)
        .expect("block-diagonal dimensions are positive")
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// G={g1,g2,g3}, M={a,b}; g1→{a}, g2→{a,b}, g3→{b}.
    pub fn k1() -> FormalContext {
        FormalContext::new(
            vec!["g1".into(), "g2".into(), "g3".into()],
            vec!["a".into(), "b".into()],
            vec![
                BitSet::from_indices(2, [0]),
                BitSet::from_indices(2, [0, 1]),
                BitSet::from_indices(2, [1]),
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::k1;
    use super::*;

    #[test]
    fn derive_objects_examples() {
        let k = k1();
        let a = k.object_set([0, 1]).unwrap();
        assert_eq!(k.derive_objects(&a).unwrap().to_vec(), vec![0]);
        assert_eq!(
            k.derive_objects(&k.empty_objects()).unwrap().to_vec(),
            vec![0, 1]
        );
        assert!(k.derive_objects(&k.all_objects()).unwrap().is_empty());
    }

    #[test]
    fn derive_attributes_examples() {
        let k = k1();
        assert_eq!(
            k.derive_attributes(&k.attribute_set([0]).unwrap())
                .unwrap()
                .to_vec(),
            vec![0, 1]
        );
        assert_eq!(
            k.derive_attributes(&k.empty_attributes()).unwrap().to_vec(),
            vec![0, 1, 2]
        );
        assert_eq!(
            k.derive_attributes(&k.all_attributes()).unwrap().to_vec(),
            vec![1]
        );
    }

    #[test]
    fn closure_examples() {
        let k = k1();
        assert_eq!(
            k.close_attributes(&k.attribute_set([0]).unwrap())
                .unwrap()
                .to_vec(),
            vec![0]
        );
        assert!(k
            .close_attributes(&k.empty_attributes())
            .unwrap()
            .is_empty());
        assert_eq!(
            k.close_attributes(&k.all_attributes()).unwrap(),
            k.all_attributes()
        );
    }

    #[test]
    fn dimension_errors() {
        let k = k1();
        assert!(matches!(
            k.derive_objects(&BitSet::new(4)),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            k.derive_attributes(&BitSet::new(3)),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(k.object_set([3]), Err(Error::Dimension(_))));
    }

    #[test]
    fn rejects_duplicate_names_and_empty_dims() {
        let dup = FormalContext::new(
            vec!["x".into(), "x".into()],
            vec!["a".into()],
            vec![BitSet::new(1), BitSet::new(1)],
        );
        assert!(matches!(dup, Err(Error::InvalidContext(_))));
        let empty = FormalContext::new(vec![], vec!["a".into()], vec![]);
        assert!(matches!(empty, Err(Error::InvalidContext(_))));
    }

    #[test]
    fn block_diagonal_shape() {
        let c = block_diagonal(3, 100, 2);
        assert_eq!((c.n_objects(), c.n_attributes()), (300, 6));
        assert_eq!(c.ones(), 600);
        assert_eq!(c.row(150).to_vec(), vec![2, 3]);
    }
}
