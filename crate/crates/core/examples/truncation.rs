//! Truncates diagonal models to finite matrices and classifies the
//! resulting finite graph systems.
//!
//! ```text
//! cargo run --example truncation
//! ```

use twosub::finsys::{classify_bounded_fin, dim_quadruple, graph_system, DimQuadruple};
use twosub::seqmodel::{DiagonalSpec, SymTerm};

fn tuple(q: DimQuadruple) -> (usize, usize, usize, usize) {
    (q.d_meet, q.d1, q.d2, q.d_coker)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = DiagonalSpec::single(SymTerm::power(1.0, 2.0))?;
    let b = DiagonalSpec::single(SymTerm::constant(2.0))?;
    for n in [8, 32, 128] {
        let sa = graph_system(&a.truncate(n))?;
        let sb = graph_system(&b.truncate(n))?;
        println!(
            "N = {n:<3}  quadruples {:?} / {:?}  isomorphic {}",
            tuple(dim_quadruple(&sa)?),
            tuple(dim_quadruple(&sb)?),
            classify_bounded_fin(&sa, &sb)?
        );
    }
    Ok(())
}
