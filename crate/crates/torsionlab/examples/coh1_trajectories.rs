//! Integrate the SU(2)³ cohomogeneity-one system for C = 0, −2, +2 and
//! write trajectory CSV files (the data behind the phase portraits). The
//! C = 0 branch follows the torsion-free cone solution; C = −2 sits at the
//! fixed point (1,1); C = +2 tracks the half-complete explicit solution.
//!
//! Run: `cargo run --release --example coh1_trajectories`

use torsionlab::coh1::{integrate, phase_portrait, Coh1State};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    std::fs::create_dir_all("out")?;

    // C = 0: start on the exact torsion-free curve
    let s0 = 1.1f64;
    let h0 = 2.0 * s0 / 3.0f64.sqrt();
    let f0 = 2.0 / 3.0 * s0 * (1.0 - s0.powi(-3)).sqrt();
    let traj = integrate(&Coh1State::new(0.0, h0, f0, 0.0), 2.0, 1e-3)?;
    traj.write_csv(std::fs::File::create("out/coh1_c0.csv")?)?;
    let last = traj.rows.last().unwrap();
    println!(
        "C = 0 : {} rows, f/h -> {:.5} (cone slope 1/sqrt(3) = {:.5}), max |dT| = {:.2e}",
        traj.rows.len(),
        last.f / last.h,
        1.0 / 3.0f64.sqrt(),
        traj.rows.iter().map(|r| r.dt_norm).fold(0.0f64, f64::max),
    );

    // C = −2: the fixed point
    let traj = integrate(&Coh1State::new(0.0, 1.0, 1.0, -2.0), 2.0, 1e-3)?;
    traj.write_csv(std::fs::File::create("out/coh1_cm2.csv")?)?;
    let last = traj.rows.last().unwrap();
    println!(
        "C = -2: stays at ({:.12}, {:.12})",
        last.h, last.f
    );

    // C = +2: f ≡ 1, h = sqrt(8t − c0)
    let traj = integrate(&Coh1State::new(1.0, 2.0, 1.0, 2.0), 3.0, 1e-3)?;
    traj.write_csv(std::fs::File::create("out/coh1_cp2.csv")?)?;
    let last = traj.rows.last().unwrap();
    println!(
        "C = +2: h({:.1}) = {:.8} (exact {:.8}), f = {:.8}",
        last.t,
        last.h,
        (8.0 * last.t - 4.0).sqrt(),
        last.f
    );

    // phase portraits for the three parameter values
    for (c, name) in [(0.0, "p0"), (-2.0, "pm2"), (2.0, "pp2")] {
        let seeds = match name {
            "p0" => vec![(h0, f0), (1.5, 0.4), (2.0, 1.2)],
            "pm2" => vec![(1.0, 1.0), (1.2, 0.9), (1.4, 1.1)],
            _ => vec![(2.0, 1.0), (1.5, 1.3), (3.0, 0.7)],
        };
        let branches = phase_portrait(c, &seeds, 25.0, 1e-3);
        let mut out = String::from("C,seed_h,seed_f,h,f\n");
        for b in &branches {
            for (h, f) in &b.rows {
                out.push_str(&format!("{},{},{},{},{}\n", c, b.seed.0, b.seed.1, h, f));
            }
        }
        std::fs::write(format!("out/portrait_{}.csv", name), out)?;
        println!(
            "portrait C = {:+}: {} branches, final slopes {:?}",
            c,
            branches.len(),
            branches
                .iter()
                .map(|b| (b.final_slope * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        );
    }
    println!("CSV files written under out/");
    Ok(())
}
