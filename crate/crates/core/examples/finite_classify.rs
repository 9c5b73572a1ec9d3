//! Classifies two finite graph systems up to unitary and bounded
//! isomorphism and builds an explicit bounded isomorphism.
//!
//! ```text
//! cargo run --example finite_classify
//! ```

use twosub::finsys::{classify_bounded_fin, classify_unitary_fin, dim_quadruple, graph_system, witness_graph_bounded};
use twosub::linalg::Matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = Matrix::from_diag(&[1.0, 0.5]);
    let t2 = Matrix::from_diag(&[1.0, 1.0 / 3.0]);
    let a = graph_system(&t)?;
    let b = graph_system(&t2)?;

    println!("quadruple of graph(T):  {:?}", dim_quadruple(&a)?);
    println!("quadruple of graph(T'): {:?}", dim_quadruple(&b)?);
    println!("boundedly isomorphic:   {}", classify_bounded_fin(&a, &b)?);
    println!("unitarily isomorphic:   {}", classify_unitary_fin(&a, &b)?);

    let w = witness_graph_bounded(&t, &t2)?.expect("equal ranks give a witness");
    println!("witness residuals:      {:.1e} {:.1e}", w.residuals.0, w.residuals.1);
    println!("condition number:       {:.4}", w.condition_number);
    for row in w.map.to_rows() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:8.4}")).collect();
        println!("  [{}]", cells.join(" "));
    }
    Ok(())
}
