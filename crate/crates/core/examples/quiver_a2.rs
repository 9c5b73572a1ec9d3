//! Graph systems as representations of the A2 quiver: two maps are
//! equivalent exactly when their ranks agree.
//!
//! ```text
//! cargo run --example quiver_a2
//! ```

use twosub::finsys::{quiver_iso_a2, witness_graph_bounded};
use twosub::linalg::Matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]])?;
    let t2 = Matrix::from_rows(&[vec![0.0, 5.0, 0.0], vec![0.0, 0.0, 0.0]])?;
    let t3 = Matrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]])?;

    for (name, other) in [("rank-one", &t2), ("rank-two", &t3)] {
        let equivalent = quiver_iso_a2(&t, other)?;
        let witnessed = witness_graph_bounded(&t, other)?.is_some();
        println!("rank-one T vs {name}: equivalent {equivalent}, witness {witnessed}");
    }
    Ok(())
}
