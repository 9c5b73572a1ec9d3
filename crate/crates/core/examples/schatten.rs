//! Schatten exponents and singular value sequences of symbolic diagonal
//! operators.
//!
//! ```text
//! cargo run --example schatten
//! ```

use twosub::seqmodel::{DiagonalSpec, SymTerm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for s in [0.5, 1.0, 2.0, 3.0] {
        let spec = DiagonalSpec::single(SymTerm::power(1.0, -s))?;
        let sh = spec.sh_exponent();
        println!(
            "1/n^{s:<3}  Sh = {sh:<6}  in S_(Sh-0.1): {:<5}  in S_(Sh+0.1): {}",
            spec.schatten_member(sh - 0.1)?,
            spec.schatten_member(sh + 0.1)?
        );
    }

    let log = DiagonalSpec::single(SymTerm::new(1.0, 1.0, -1.0, 1.0, -1.0)?)?;
    println!("{}  Sh = {}", log.describe(), log.sh_exponent());

    let merged = DiagonalSpec::direct_sum(vec![SymTerm::power(1.0, -1.0), SymTerm::power(0.75, -2.0)])?;
    println!("{}  leading mu {:?}", merged.describe(), merged.mu_sequence(6)?);
    Ok(())
}
