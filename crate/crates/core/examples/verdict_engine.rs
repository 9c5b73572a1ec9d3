//! Runs the verdict engine on pairs of diagonal graph systems and shows
//! which rule decided each pair.
//!
//! ```text
//! cargo run --example verdict_engine
//! ```

use twosub::seqclassify::{classify_algebraic_graph, Budgets, Engine, Rule};
use twosub::seqmodel::{DiagonalSpec, SymTerm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inv = |p: f64| SymTerm::power(1.0, -p);
    let a = DiagonalSpec::single(inv(1.0))?;
    let b = DiagonalSpec::single(inv(2.0))?;
    let grow2 = DiagonalSpec::direct_sum(vec![SymTerm::power(1.0, 2.0), inv(2.0)])?;
    let grow3 = DiagonalSpec::direct_sum(vec![SymTerm::power(1.0, 3.0), inv(3.0)])?;
    let shifted = a.clone().with_shift(1);

    let engine = Engine::new(Budgets::default());
    for (x, y) in [(&a, &b), (&a, &shifted), (&grow2, &grow3), (&a, &a)] {
        let v = engine.classify_bounded_graph(x, y);
        println!("{} vs {}", x.describe(), y.describe());
        println!("  {} [{}] {}", v.relation, v.rule_id, v.citation);
    }

    let v = classify_algebraic_graph(&a, &b)?;
    println!("algebraic: {} [{}]", v.relation, v.rule_id);

    let starved = Engine::new(Budgets { k_max: 4, ..Budgets::default() });
    println!("with K <= 4: {}", starved.classify_bounded_graph(&grow2, &grow3).relation);
    let no_ratio = Engine::new(Budgets::default()).without(Rule::RatioComparison);
    let v = no_ratio.classify_bounded_graph(&a, &b);
    println!("without the ratio rule: {} [{}]", v.relation, v.rule_id);
    Ok(())
}
