//! Assembles a system from prescribed Halmos data, hides it behind a
//! random rotation, and recovers the five parts.
//!
//! ```text
//! cargo run --example halmos
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twosub::finsys::{assemble_from_parts, halmos_decompose};
use twosub::linalg::random_orthogonal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let dims = [1, 2, 1, 1];
    let angles = [0.3, 0.9, 1.2];
    let n = dims.iter().sum::<usize>() + 2 * angles.len();
    let q = random_orthogonal(n, &mut rng);
    let system = assemble_from_parts(dims, &angles, &q)?;

    let parts = halmos_decompose(&system)?;
    let [mm, mp, pm, pp, generic] = parts.dims();
    println!("ambient dimension   {n}");
    println!("E1 ∩ E2             {mm}");
    println!("E1 ∩ E2⊥            {mp}");
    println!("E1⊥ ∩ E2            {pm}");
    println!("E1⊥ ∩ E2⊥           {pp}");
    println!("generic 2-planes    {generic}");
    println!("prescribed angles   {angles:?}");
    println!("recovered angles    {:?}", parts.generic_angles);
    Ok(())
}
