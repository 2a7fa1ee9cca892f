//! Rule measures, aggregation functions and composite indices.

mod aggregate;
mod composite;
mod rules;

pub use aggregate::{aggregate, norm2, AggregatorKind};
pub use composite::{
    evaluate_composite, index1, index2, BaseMeasure, Comparison, CompositeIndexSpec,
    CompositeValue, ItemsetMeasure, Order, Scope,
};
pub use rules::{
    contingency_from_sets, rule_measure, rule_measure_flagged, ContingencyTable, MeasureKind,
    MeasureValue,
};
