//! Runs the built-in reproduction suite and prints one line per criterion.
//!
//! ```text
//! cargo run --release --example selftest
//! ```

use twosub::cli::{cmd_selftest, Options};

fn main() {
    let report = cmd_selftest(&Options::default());
    let summary = report.selftest.expect("selftest report");
    for c in &summary.criteria {
        println!("{} {:<5} {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name);
    }
    println!("{} passed, {} failed", summary.passed, summary.failed);
    if summary.failed > 0 {
        std::process::exit(1);
    }
}
