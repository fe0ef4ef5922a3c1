//! Verify the closed-form curvature and torsion identities against direct
//! Cartan computations over randomized orthonormal coframes. Constant
//! frames are checked in exact arithmetic.
//!
//! Run: `cargo run --release --example curvature_identities`

use torsionlab::verify::{list_identities, run_identity};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut any_fail = false;
    for name in list_identities() {
        let outcome = run_identity(name, 8, 0)?;
        println!(
            "{:<22} {}  samples={:<3} max residual {:.3e}{}",
            name,
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.samples,
            outcome.max_residual,
            if outcome.all_exact { "  (exact)" } else { "" }
        );
        for note in outcome.notes.iter().take(3) {
            println!("    {}", note);
        }
        any_fail |= !outcome.pass;
    }
    if any_fail {
        std::process::exit(1);
    }
    Ok(())
}
