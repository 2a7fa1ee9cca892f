//! Rule measures over contingency tables and the aggregation operators
//! used to combine them.
//!
//! cargo run --example rule_measures

use conceptgauge::fixtures;
use conceptgauge::measures::{
    aggregate, contingency_from_sets, norm2, rule_measure_flagged, AggregatorKind,
    ContingencyTable, MeasureKind,
};

fn main() -> anyhow::Result<()> {
    // an association between two attributes of the index context
    let ctx = fixtures::table1();
    let a = ctx.attribute_set([ctx.attribute_index("for closed subsets").unwrap()])?;
    let b = ctx.attribute_set([ctx.attribute_index("polynomial complexity").unwrap()])?;
    let t = contingency_from_sets(&ctx, &a, &b)?;
    println!("{t:?}\n");
    for kind in MeasureKind::ALL {
        let v = rule_measure_flagged(kind, &t);
        let flag = if v.undefined { "  (0/0)" } else { "" };
        println!("{:<32} {:>10.4}{flag}", kind.name(), v.value);
    }

    // independence: lift 1, leverage 0
    let ind = ContingencyTable::new(4, 4, 4, 4);
    println!(
        "\nindependent table: lift {} leverage {}",
        rule_measure_flagged(MeasureKind::Lift, &ind).value,
        rule_measure_flagged(MeasureKind::Leverage, &ind).value
    );

    let xs = [0.9, 0.6, 0.75];
    println!("\n{:<22} {xs:?}", "aggregator");
    for kind in AggregatorKind::ALL {
        println!("{:<22} {:.4}", kind.name(), aggregate(&xs, kind)?);
    }
    for t in AggregatorKind::TNORMS {
        let s = t.dual().expect("t-norms have duals");
        let (x, y) = (0.3, 0.8);
        let lhs = norm2(s, x, y)?;
        let rhs = 1.0 - norm2(t, 1.0 - x, 1.0 - y)?;
        println!("{} vs dual {}: {lhs:.6} = {rhs:.6}", t.name(), s.name());
    }
    Ok(())
}
