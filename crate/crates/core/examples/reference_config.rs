//! Prints the configuration holding every worked example, the same file
//! shipped as `examples/reference.json`.
//!
//! ```text
//! cargo run --example reference_config > my.json
//! ```

fn main() {
    println!("{}", twosub::cli::selftest::reference_config().to_json());
}
