//! Oblique projection onto E1 along a complementary E2.
//!
//! ```text
//! cargo run --example oblique_projection
//! ```

use twosub::finsys::oblique_projection;
use twosub::linalg::Matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e1 = Matrix::from_cols(2, &[vec![1.0, 0.0]])?;
    let e2 = Matrix::from_cols(2, &[vec![1.0, 1.0]])?;
    let p = oblique_projection(&e1, &e2)?.expect("lines in general position are complementary");
    println!("P = {:?}", p.to_rows());
    println!("|P^2 - P| = {:.1e}", p.matmul(&p)?.sub(&p)?.max_abs());
    println!("|P| = {:.6} (1/sin of the angle between the lines)", p.norm2()?);

    let same = oblique_projection(&e1, &e1)?;
    println!("E1 against itself: {}", if same.is_some() { "complementary" } else { "not complementary" });
    Ok(())
}
