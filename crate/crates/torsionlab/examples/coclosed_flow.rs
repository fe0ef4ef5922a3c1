//! The family of co-closed flows ∂ₜ(⋆φ) = −dT + 2d((C−λτ₀)φ) reduced onto
//! the two-parameter S³×T⁴ ansatz: critical points, parameter velocities,
//! the evolution of τ₀, and the parabolic range of the linearization.
//!
//! Run: `cargo run --release --example coclosed_flow`

use torsionlab::coh1::{critical_point_check, AnsatzFamily};
use torsionlab::g2::parabolic_range;
use torsionlab::scalar::Scalar;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fam = AnsatzFamily::s3t4()?;

    println!("flow -dT (λ = 0, C = 0):");
    for p in [[1.0, 1.0], [1.3, 0.8], [0.7, 1.4]] {
        let (pdot, residual) = fam.flow_reduce(&p, 0.0, 0.0)?;
        println!(
            "  p = {:?}: pdot = [{:+.3e}, {:+.3e}], residual {:.2e}",
            p, pdot[0], pdot[1], residual
        );
    }
    println!("  (every member of this family is a strong critical point)");

    println!("\nmodified co-flow (λ = 7/6, C = 1):");
    for p in [[1.0, 1.0], [1.3, 0.8], [0.7, 1.4]] {
        let (pdot, residual) = fam.flow_reduce(&p, 7.0 / 6.0, 1.0)?;
        println!(
            "  p = {:?}: pdot = [{:+.3e}, {:+.3e}], residual {:.2e}",
            p, pdot[0], pdot[1], residual
        );
    }

    let s = fam.structure_at(&[1.0, 1.0])?;
    let (c1, c2, c3) = critical_point_check(&s, &Scalar::frac(7, 6), &Scalar::one())?;
    println!("\ncritical-point residuals at p = (1,1), (λ, C) = (7/6, 1): {:.1e} {:.1e} {:.1e}", c1, c2, c3);

    let (lhs, rhs, res) = fam.tau0_evolution_check(&[1.2, 0.9], 0.0, 0.0, 1e-4)?;
    println!(
        "τ₀ evolution at p = (1.2, 0.9), flow −dT: d/dt = {:+.3e}, predicted {:+.3e}, residual {:.2e}",
        lhs, rhs, res
    );

    println!("\nparabolic range of the co-closed family (μ = λ − 7/6):");
    for mu in [-1.0f64, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0] {
        // rational approximation of μ keeps the evaluation exact
        let scaled = (mu * 16.0).round() as i64;
        let ok = parabolic_range(&Scalar::frac(scaled, 16));
        println!("  μ = {:+.2}: {}", mu, if ok { "parabolic" } else { "outside" });
    }
    Ok(())
}
