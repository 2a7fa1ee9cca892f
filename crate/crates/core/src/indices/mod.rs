//! Per-concept interestingness indices.

mod basic;
mod basic_level;
mod bounds;
mod spec;
mod stability;
mod table;

pub use basic::{
    concept_probability, cv_cfc_cu, delta_tcfi, margin_closed, margin_closed_relaxed, monocle,
    separation, support, ClosednessModel, CvCfcCu, MonocleWeights,
};
pub use basic_level::{
    basic_level_similarity, basic_level_similarity_all, cohesion, predictability,
    predictability_all, predictability_score, similarity, Aggregation, Similarity,
    SimilarityConfig,
};
pub use bounds::{delta_h, lstab_and_bounds, lstab_and_bounds_all, LStabBounds};
pub use spec::{parse_spec_list, IndexSpec, Level, KINDS};
pub use stability::{
    gamma_via_mobius, integral_stability, levelwise_stability, robustness, robustness_all,
    robustness_literal, robustness_polynomial, robustness_via_mobius, stability_exact,
    stability_montecarlo, stability_montecarlo_all, stability_via_mobius, IntegralSide,
    LevelCounts, LevelValue, StabilityCounts,
};
pub use table::{compute_index_table, format_g, IndexTable};
