//! SU(3)-structures and the Bismut connection: the almost-CYT nilmanifold,
//! the two torsion-compatible structures on S³×S³, and the nearly Kähler
//! one — Nijenhuis tensors, T_ω, dT_ω and the Bismut Ricci form.
//!
//! Run: `cargo run --release --example bismut_su3`

use torsionlab::catalog::{find, load_default};
use torsionlab::connection::ConnectionForms;
use torsionlab::parse::{render_form, render_scalar};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let entries = load_default()?;
    for name in ["nilmanifold_cyt", "s3s3_askt", "s3s3_skt", "s3s3_nk"] {
        let entry = find(&entries, name)?;
        let s = entry.su3()?;
        let t = s.torsion()?;
        println!("== {} ==", name);
        println!("  sigma0 = {}, pi0 = {}", render_scalar(&t.sigma0), render_scalar(&t.pi0));
        println!("  nu1 = {}, pi1 = {}", render_form(&t.nu1), render_form(&t.pi1));
        println!("  nu3 = {}", render_form(&t.nu3));
        let n = s.nijenhuis(&t)?;
        let direct = s.nijenhuis_direct()?;
        let agree = n.sub(&direct).is_skew_exact() && n.sub(&direct).to_form().is_zero();
        println!("  Nijenhuis formula == brackets: {}", agree);
        if t.skew_nijenhuis() {
            let nhat = s.nijenhuis_form(&t)?;
            println!("  Nhat = {}", render_form(&nhat));
            let big_t = s.torsion_t(&t)?;
            println!("  T_omega = {}", render_form(&big_t));
            println!("  dT_omega = {}", render_form(&s.d(&big_t)?));
            // Bismut Ricci form: closed-form prediction vs Cartan curvature
            let rho_pred = s.rho_b_predicted(&t)?;
            let conn = ConnectionForms::with_skew_torsion(s.frame(), &big_t)?;
            let curv = conn.curvature()?;
            let rho_direct = curv.rho_form(s.j_matrix())?;
            println!(
                "  rho^B = {} (matches curvature: {})",
                render_form(&rho_pred),
                rho_pred.sub(&rho_direct)?.is_zero()
            );
            println!("  Rm^B = 0: {}", curv.is_flat());
        }
        println!("  flags: {:?}\n", s.classify()?);
    }
    Ok(())
}
