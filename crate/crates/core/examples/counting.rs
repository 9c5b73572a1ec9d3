//! The spectral counting function on a few windows, including a window
//! that meets continuous spectrum.
//!
//! ```text
//! cargo run --example counting
//! ```

use twosub::seqmodel::{DiagonalSpec, SymTerm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = DiagonalSpec::single(SymTerm::power(1.0, -2.0))?.with_interval(2.0, 3.0)?;
    println!("operator {}", spec.describe());
    for (alpha, beta) in [(1e-2, 1.0), (1e-4, 1e-2), (1e-8, 1e-4), (1.0, 2.5)] {
        println!("N[{alpha:e}, {beta:e}] = {}", spec.counting(alpha, beta)?);
    }
    Ok(())
}
