//! Singular values and principal angles between two planes in R^4.
//!
//! ```text
//! cargo run --example principal_angles
//! ```

use twosub::linalg::{intersection, principal_angles, rank, svd, Matrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (c, s) = (0.4f64.cos(), 0.4f64.sin());
    let u = Matrix::from_cols(4, &[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]])?;
    let v = Matrix::from_cols(4, &[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, c, s, 0.0]])?;

    let cross = u.transpose().matmul(&v)?;
    let d = svd(&cross)?;
    println!("cosines of the angles  {:?}", d.sigma);
    println!("principal angles       {:?}", principal_angles(&u, &v)?);
    let meet = intersection(&u, &v, 1e-10)?;
    println!("dim of intersection    {}", meet.cols());
    println!("rank of [U V]          {}", rank(&u.hstack(&v)?, None)?);
    Ok(())
}
