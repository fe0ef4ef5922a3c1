//! Walk the built-in catalog: print each entry's torsion class.
//!
//! Run: `cargo run --release --example catalog_tour`

use torsionlab::catalog::load_default;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let entries = load_default()?;
    println!("{} catalog entries\n", entries.len());
    for e in &entries {
        print!("{:<20} dim {}  ", e.name, e.frame.dim());
        if e.g2_form.is_some() {
            let s = if e.is_parametric() {
                let mid = {
                    let p = e.frame.param().unwrap();
                    0.5 * (p.interval.0 + p.interval.1)
                };
                e.g2_at(mid)?
            } else {
                e.g2()?
            };
            let flags = s.classify()?;
            let class = if flags.torsion_free {
                "torsion-free"
            } else if flags.harmonic_t {
                "harmonic strong G2T"
            } else if flags.strong_g2t {
                "strong G2T"
            } else if flags.g2t {
                "G2T (not strong)"
            } else {
                "generic G2"
            };
            println!("G2: {}", class);
        } else if e.su3_forms.is_some() {
            let s = e.su3()?;
            let flags = s.classify()?;
            let mut tags = Vec::new();
            if flags.hermitian {
                tags.push("Hermitian");
            }
            if flags.nearly_kahler {
                tags.push("nearly Kähler");
            }
            if flags.almost_skt {
                tags.push("almost SKT");
            }
            if flags.almost_cyt {
                tags.push("almost CYT");
            }
            if flags.half_flat {
                tags.push("half-flat");
            }
            if tags.is_empty() {
                tags.push("generic SU(3)");
            }
            println!("SU(3): {}", tags.join(", "));
        } else {
            println!("frame only");
        }
    }
    Ok(())
}
