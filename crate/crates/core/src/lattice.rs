//! Concept enumeration and the covering relation of the concept lattice.
//!
//! Concepts are generated with Close-by-One: a depth-first walk over
//! attribute additions where a closure is kept only when it introduces no
//! attribute smaller than the one just added (the canonicity test). This
//! visits every intent exactly once without a lookup table. Each top-level
//! branch is an independent subtree and is processed in parallel.
//!
//! Ids are assigned by ascending intent bit pattern (attribute 0 most
//! significant), which is a linear extension of intent inclusion: the top
//! concept gets the smallest id and every subconcept has a larger id than
//! its superconcepts.

use std::collections::{HashMap, VecDeque};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::context::{AttributeSet, FormalContext, ObjectSet};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Concept {
    pub id: usize,
    pub extent: ObjectSet,
    pub intent: AttributeSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeOptions {
    /// Concepts with fewer extent objects are not generated.
    pub min_support: usize,
    /// Upper bound on the number of concepts; exceeding it is an error.
    pub budget: usize,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        Self {
            min_support: 0,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConceptLattice {
    context: Arc<FormalContext>,
    concepts: Vec<Concept>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    top: usize,
    bottom: Option<usize>,
    min_support: usize,
}

/// All concepts with `|extent| >= min_support`, default budget.
pub fn enumerate_concepts(ctx: &FormalContext, min_support: usize) -> Result<ConceptLattice> {
    ConceptLattice::build(
        ctx,
        &LatticeOptions {
            min_support,
            ..LatticeOptions::default()
        },
    )
}

impl ConceptLattice {
    pub fn build(ctx: &FormalContext, opts: &LatticeOptions) -> Result<Self> {
        Self::build_shared(Arc::new(ctx.clone()), opts)
    }

    pub fn build_shared(ctx: Arc<FormalContext>, opts: &LatticeOptions) -> Result<Self> {
        if opts.min_support > ctx.n_objects() {
            return Err(Error::InvalidParameter(format!(
                "min_support {} exceeds the object count {}",
                opts.min_support,
                ctx.n_objects()
            )));
        }
        let mut pairs = close_by_one(&ctx, opts)?;
        pairs.sort_by(|a, b| a.1.lex_cmp(&b.1));
        let concepts: Vec<Concept> = pairs
            .into_iter()
            .enumerate()
            .map(|(id, (extent, intent))| Concept { id, extent, intent })
            .collect();
        let lower = lower_covers(&ctx, &concepts, opts.min_support);
        Self::assemble(ctx, concepts, lower, opts.min_support)
    }

    fn assemble(
        context: Arc<FormalContext>,
        concepts: Vec<Concept>,
        lower: Vec<Vec<usize>>,
        min_support: usize,
    ) -> Result<Self> {
        let mut upper = vec![Vec::new(); concepts.len()];
        for (c, ls) in lower.iter().enumerate() {
            for &d in ls {
                upper[d].push(c);
            }
        }
        let top = concepts
            .iter()
            .position(|c| c.extent.is_full())
            .ok_or_else(|| Error::Invariant("no concept with full extent".into()))?;
        let bottom = concepts.iter().position(|c| c.intent.is_full());
        Ok(Self {
            context,
            concepts,
            lower,
            upper,
            top,
            bottom,
            min_support,
        })
    }

    pub fn context(&self) -> &FormalContext {
        &self.context
    }

    pub fn shared_context(&self) -> Arc<FormalContext> {
        Arc::clone(&self.context)
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    #[inline]
    pub fn concept(&self, id: usize) -> &Concept {
        &self.concepts[id]
    }

    pub fn get(&self, id: usize) -> Result<&Concept> {
        self.concepts.get(id).ok_or(Error::ConceptOutOfRange {
            id,
            len: self.len(),
        })
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// The concept with intent `M`; absent when it was cut by `min_support`.
    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    pub fn min_support(&self) -> usize {
        self.min_support
    }

    /// True when no concept was excluded by the support threshold.
    pub fn is_complete(&self) -> bool {
        self.bottom.is_some()
    }

    pub(crate) fn require_complete(&self, what: &str) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{what} needs the complete lattice (built with min_support = {})",
                self.min_support
            )))
        }
    }

    /// Direct subconcepts.
    #[inline]
    pub fn lower_neighbors(&self, id: usize) -> &[usize] {
        &self.lower[id]
    }

    /// Direct superconcepts.
    #[inline]
    pub fn upper_neighbors(&self, id: usize) -> &[usize] {
        &self.upper[id]
    }

    /// Cover edges as `(lower, upper)` pairs, sorted.
    pub fn cover_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .lower
            .iter()
            .enumerate()
            .flat_map(|(c, ls)| ls.iter().map(move |&d| (d, c)))
            .collect();
        edges.sort_unstable();
        edges
    }

    /// `(A,B) ≤ (C,D)` iff `A ⊆ C`.
    pub fn leq(&self, c: usize, d: usize) -> Result<bool> {
        let a = self.get(c)?;
        let b = self.get(d)?;
        Ok(a.extent.is_subset(&b.extent))
    }

    /// Ids of all `d ≤ c` (including `c`), ascending.
    pub fn descendants(&self, c: usize) -> Result<Vec<usize>> {
        self.get(c)?;
        let mut walker = IdealWalker::new(self.len());
        let mut ids = walker.ideal(self, c).to_vec();
        ids.sort_unstable();
        Ok(ids)
    }

    /// Ids of all `d ≥ c` (including `c`), ascending.
    pub fn ancestors(&self, c: usize) -> Result<Vec<usize>> {
        self.get(c)?;
        let mut seen = vec![false; self.len()];
        let mut stack = vec![c];
        seen[c] = true;
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            out.push(x);
            for &u in &self.upper[x] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Möbius function `μ(d, c)` for every `d ≤ c`.
    pub fn mobius(&self, c: usize) -> Result<MobiusTable> {
        let ideal = self.descendants(c)?;
        // Larger extents first: every z with d < z ≤ c precedes d.
        let mut order = ideal.clone();
        order.sort_by_key(|&d| (std::cmp::Reverse(self.concepts[d].extent.count()), d));
        let mut values: Vec<(usize, i64)> = Vec::with_capacity(order.len());
        for &d in &order {
            let mu = if d == c {
                1
            } else {
                let ext = &self.concepts[d].extent;
                let s: i64 = values
                    .iter()
                    .filter(|&&(z, _)| z != d && ext.is_subset(&self.concepts[z].extent))
                    .map(|&(_, m)| m)
                    .sum();
                -s
            };
            values.push((d, mu));
        }
        values.sort_unstable_by_key(|&(d, _)| d);
        Ok(MobiusTable { upper: c, values })
    }

    /// Looks up the concept with the given intent.
    pub fn find_by_intent(&self, intent: &AttributeSet) -> Option<usize> {
        self.concepts
            .binary_search_by(|c| c.intent.lex_cmp(intent))
            .ok()
    }

    pub fn to_dump(&self) -> LatticeDump {
        let ctx = &self.context;
        LatticeDump {
            context: ContextDump {
                objects: ctx.object_names().to_vec(),
                attributes: ctx.attribute_names().to_vec(),
                rows: ctx.rows().iter().map(BitSet::to_vec).collect(),
            },
            min_support: self.min_support,
            concepts: self
                .concepts
                .iter()
                .map(|c| ConceptDump {
                    id: c.id,
                    extent: c.extent.to_vec(),
                    intent: c.intent.to_vec(),
                    extent_names: c
                        .extent
                        .iter()
                        .map(|g| ctx.object_names()[g].clone())
                        .collect(),
                    intent_names: c
                        .intent
                        .iter()
                        .map(|m| ctx.attribute_names()[m].clone())
                        .collect(),
                })
                .collect(),
            covers: self.cover_edges(),
            top: self.top,
            bottom: self.bottom,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dump()).expect("lattice dump serializes")
    }

    /// Rebuilds a lattice from a dump, checking that every concept is
    /// closed against the embedded context and that the covers match.
    pub fn from_dump(dump: &LatticeDump) -> Result<Self> {
        let n_att = dump.context.attributes.len();
        let rows = dump
            .context
            .rows
            .iter()
            .map(|r| {
                BitSet::try_from_indices(n_att, r.iter().copied())
                    .map_err(|i| Error::Dimension(format!("attribute index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        let ctx = Arc::new(FormalContext::new(
            dump.context.objects.clone(),
            dump.context.attributes.clone(),
            rows,
        )?);
        let mut concepts = Vec::with_capacity(dump.concepts.len());
        for (i, c) in dump.concepts.iter().enumerate() {
            if c.id != i {
                return Err(Error::Invariant(format!(
                    "concept ids not dense at position {i}"
                )));
            }
            let extent = ctx.object_set(c.extent.iter().copied())?;
            let intent = ctx.attribute_set(c.intent.iter().copied())?;
            if ctx.common_attributes(&extent) != intent || ctx.common_objects(&intent) != extent {
                return Err(Error::Invariant(format!("concept {i} is not closed")));
            }
            concepts.push(Concept {
                id: i,
                extent,
                intent,
            });
        }
        let lower = lower_covers(&ctx, &concepts, dump.min_support);
        let lat = Self::assemble(ctx, concepts, lower, dump.min_support)?;
        if lat.cover_edges() != dump.covers {
            return Err(Error::Invariant(
                "cover edges disagree with the concepts".into(),
            ));
        }
        Ok(lat)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dump: LatticeDump = serde_json::from_str(text)?;
        Self::from_dump(&dump)
    }
}

/// `μ(d, c)` for a fixed upper concept `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusTable {
    upper: usize,
    values: Vec<(usize, i64)>,
}

impl MobiusTable {
    pub fn upper(&self) -> usize {
        self.upper
    }

    /// `μ(d, c)`, or `None` when `d` is not below `c`.
    pub fn get(&self, d: usize) -> Option<i64> {
        self.values
            .binary_search_by_key(&d, |&(id, _)| id)
            .ok()
            .map(|i| self.values[i].1)
    }

    /// `(d, μ(d, c))` pairs in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.values.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Reusable breadth-first walk over lower covers.
pub struct IdealWalker {
    stamp: Vec<u32>,
    epoch: u32,
    out: Vec<usize>,
    queue: VecDeque<usize>,
}

impl IdealWalker {
    pub fn new(n: usize) -> Self {
        Self {
            stamp: vec![0; n],
            epoch: 0,
            out: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    /// All `d ≤ c` including `c`, in breadth-first order (unsorted).
    pub fn ideal(&mut self, lat: &ConceptLattice, c: usize) -> &[usize] {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.out.clear();
        self.queue.clear();
        self.stamp[c] = self.epoch;
        self.queue.push_back(c);
        while let Some(x) = self.queue.pop_front() {
            self.out.push(x);
            for &d in lat.lower_neighbors(x) {
                if self.stamp[d] != self.epoch {
                    self.stamp[d] = self.epoch;
                    self.queue.push_back(d);
                }
            }
        }
        &self.out
    }
}

type Pair = (ObjectSet, AttributeSet);

fn close_by_one(ctx: &FormalContext, opts: &LatticeOptions) -> Result<Vec<Pair>> {
    let top_extent = ctx.all_objects();
    let top_intent = ctx.common_attributes(&top_extent);
    let count = AtomicUsize::new(1);
    let over = AtomicBool::new(false);
    if opts.budget == 0 {
        return Err(Error::BudgetExceeded { budget: 0 });
    }

    // First level of the tree, expanded serially; subtrees run in parallel.
    let mut roots = Vec::new();
    for j in 0..ctx.n_attributes() {
        if top_intent.contains(j) {
            continue;
        }
        if let Some(child) = canonical_child(ctx, &top_extent, &top_intent, j, opts.min_support) {
            roots.push((child, j + 1));
        }
    }

    let subtrees: Vec<Vec<Pair>> = roots
        .into_par_iter()
        .map(|(root, next)| {
            let mut out = Vec::new();
            let mut stack = vec![(root, next)];
            while let Some(((extent, intent), from)) = stack.pop() {
                if over.load(AtomicOrdering::Relaxed) {
                    break;
                }
                if count.fetch_add(1, AtomicOrdering::Relaxed) + 1 > opts.budget {
                    over.store(true, AtomicOrdering::Relaxed);
                    break;
                }
                for j in (from..ctx.n_attributes()).rev() {
                    if intent.contains(j) {
                        continue;
                    }
                    if let Some(child) = canonical_child(ctx, &extent, &intent, j, opts.min_support)
                    {
                        stack.push((child, j + 1));
                    }
                }
                out.push((extent, intent));
            }
            out
        })
        .collect();

    if over.load(AtomicOrdering::Relaxed) {
        return Err(Error::BudgetExceeded {
            budget: opts.budget,
        });
    }
    let mut all = Vec::with_capacity(count.load(AtomicOrdering::Relaxed));
    all.push((top_extent, top_intent));
    all.extend(subtrees.into_iter().flatten());
    Ok(all)
}

fn canonical_child(
    ctx: &FormalContext,
    extent: &ObjectSet,
    intent: &AttributeSet,
    j: usize,
    min_support: usize,
) -> Option<Pair> {
    let child_extent = extent.intersection(ctx.column(j));
    if child_extent.count() < min_support {
        return None;
    }
    let child_intent = ctx.common_attributes(&child_extent);
    child_intent
        .agrees_below(intent, j)
        .then_some((child_extent, child_intent))
}

/// Lower covers per concept, by the neighbour test of Lindig: among the
/// closures of `B ∪ {m}`, an attribute that reappears in another candidate's
/// closure cannot generate a minimal one.
fn lower_covers(ctx: &FormalContext, concepts: &[Concept], min_support: usize) -> Vec<Vec<usize>> {
    let index: HashMap<&AttributeSet, usize> = concepts.iter().map(|c| (&c.intent, c.id)).collect();
    concepts
        .par_iter()
        .map(|c| {
            let mut min_set = c.intent.complement();
            let mut out = Vec::new();
            for m in c.intent.complement().iter() {
                let extent = c.extent.intersection(ctx.column(m));
                let intent = ctx.common_attributes(&extent);
                let mut fresh = intent.difference(&c.intent);
                fresh.remove(m);
                if fresh.is_disjoint(&min_set) {
                    if extent.count() >= min_support {
                        if let Some(&d) = index.get(&intent) {
                            out.push(d);
                        }
                    }
                } else {
                    min_set.remove(m);
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDump {
    pub context: ContextDump,
    pub min_support: usize,
    pub concepts: Vec<ConceptDump>,
    /// `(lower, upper)` id pairs.
    pub covers: Vec<(usize, usize)>,
    pub top: usize,
    pub bottom: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextDump {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    pub rows: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptDump {
    pub id: usize,
    pub extent: Vec<usize>,
    pub intent: Vec<usize>,
    pub extent_names: Vec<String>,
    pub intent_names: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::k1;

    fn k1_lattice() -> ConceptLattice {
        enumerate_concepts(&k1(), 0).unwrap()
    }

    fn id_of(lat: &ConceptLattice, intent: &[usize]) -> usize {
        let b = lat.context().attribute_set(intent.iter().copied()).unwrap();
        lat.find_by_intent(&b).unwrap()
    }

    #[test]
    fn k1_has_four_concepts_in_intent_order() {
        let lat = k1_lattice();
        assert_eq!(lat.len(), 4);
        let intents: Vec<Vec<usize>> = lat.concepts().iter().map(|c| c.intent.to_vec()).collect();
        assert_eq!(intents, vec![vec![], vec![1], vec![0], vec![0, 1]]);
        let extents: Vec<Vec<usize>> = lat.concepts().iter().map(|c| c.extent.to_vec()).collect();
        assert_eq!(
            extents,
            vec![vec![0, 1, 2], vec![1, 2], vec![0, 1], vec![1]]
        );
        assert_eq!(lat.top(), 0);
        assert_eq!(lat.bottom(), Some(3));
    }

    #[test]
    fn k1_covers() {
        let lat = k1_lattice();
        assert_eq!(lat.cover_edges(), vec![(1, 0), (2, 0), (3, 1), (3, 2)]);
        assert_eq!(lat.upper_neighbors(3), &[1, 2]);
    }

    #[test]
    fn leq_examples() {
        let lat = k1_lattice();
        let a = id_of(&lat, &[0]);
        let b = id_of(&lat, &[1]);
        let bot = lat.bottom().unwrap();
        for c in 0..lat.len() {
            assert!(lat.leq(bot, c).unwrap());
            assert!(lat.leq(c, c).unwrap());
        }
        assert!(!lat.leq(a, b).unwrap());
        assert!(matches!(
            lat.leq(0, 9),
            Err(Error::ConceptOutOfRange { .. })
        ));
    }

    #[test]
    fn descendants_examples() {
        let lat = k1_lattice();
        let a = id_of(&lat, &[0]);
        let bot = lat.bottom().unwrap();
        assert_eq!(lat.descendants(lat.top()).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(lat.descendants(a).unwrap(), vec![a, bot]);
        assert_eq!(lat.descendants(bot).unwrap(), vec![bot]);
        assert!(lat.descendants(4).is_err());
    }

    #[test]
    fn mobius_examples() {
        let lat = k1_lattice();
        let a = id_of(&lat, &[0]);
        let bot = lat.bottom().unwrap();
        assert_eq!(lat.mobius(a).unwrap().get(bot), Some(-1));
        assert_eq!(lat.mobius(a).unwrap().get(a), Some(1));
        assert_eq!(lat.mobius(lat.top()).unwrap().get(bot), Some(1));
        assert_eq!(lat.mobius(a).unwrap().get(lat.top()), None);
    }

    #[test]
    fn min_support_filters_and_drops_bottom() {
        let lat = enumerate_concepts(&k1(), 2).unwrap();
        assert_eq!(lat.len(), 3);
        assert_eq!(lat.bottom(), None);
        assert!(!lat.is_complete());
        assert!(lat.lower_neighbors(1).is_empty());
        assert!(enumerate_concepts(&k1(), 4).is_err());
    }

    #[test]
    fn budget_is_an_error() {
        let opts = LatticeOptions {
            min_support: 0,
            budget: 3,
        };
        assert!(matches!(
            ConceptLattice::build(&k1(), &opts),
            Err(Error::BudgetExceeded { budget: 3 })
        ));
        let ok = LatticeOptions { budget: 4, ..opts };
        assert_eq!(ConceptLattice::build(&k1(), &ok).unwrap().len(), 4);
    }

    #[test]
    fn json_round_trip() {
        let lat = k1_lattice();
        let back = ConceptLattice::from_json(&lat.to_json()).unwrap();
        assert_eq!(back.concepts(), lat.concepts());
        assert_eq!(back.cover_edges(), lat.cover_edges());
    }

    #[test]
    fn json_dump_rejects_tampering() {
        let mut dump = k1_lattice().to_dump();
        dump.concepts[1].extent = vec![0, 1, 2];
        assert!(ConceptLattice::from_dump(&dump).is_err());
    }
}
