//! Command-line front end: catalog analysis, identity verification sweeps,
//! ODE and flow runs, plot-data emission.
//!
//! Every command prints a human-readable summary followed by one line of
//! machine-readable JSON (`"schema": 1`); forms in the report are printed
//! in the catalog expression grammar so reports can be re-parsed. Exit code
//! 0 means every requested check passed.

use crate::catalog::{self, CatalogEntry};
use crate::coh1::{self, AnsatzFamily, Coh1State};
use crate::connection::ConnectionForms;
use crate::parse::{parse_form, render_form, render_scalar};
use crate::reduction::{self, QuotientView, ReductionData};
use crate::scalar::Scalar;
use crate::verify;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Write;

#[derive(Parser)]
#[command(
    name = "torsionlab",
    version,
    about = "exterior-calculus workbench for G2/SU(3) structures with skew torsion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report to this path instead of stdout.
    #[arg(long, global = true)]
    json: Option<String>,
    /// Catalog path override (also honored via TORSIONLAB_CATALOG).
    #[arg(long, global = true)]
    catalog: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// List or show catalog entries.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Torsion forms, classification flags and curvature summaries of an entry.
    Analyze(AnalyzeArgs),
    /// Run named identity verifications over randomized frames.
    Verify(VerifyArgs),
    /// Integrate the cohomogeneity-one system and write the trajectory CSV.
    Coh1(Coh1Args),
    /// Integrate the phase-plane equation for several seeds and write CSV.
    Portrait(PortraitArgs),
    /// Reduce a co-closed flow onto an invariant ansatz family.
    Flow(FlowArgs),
    /// S¹-reduction checks for an entry (product bases and quotients).
    Reduce(ReduceArgs),
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Print the entry names.
    List,
    /// Show the structure equations of one entry.
    Show {
        #[arg(long)]
        entry: String,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    entry: String,
    /// Parameter value for warped frames (default: interval midpoint).
    #[arg(long)]
    t: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity name (repeatable); all identities when omitted.
    #[arg(long)]
    identity: Vec<String>,
    #[arg(long, default_value_t = 8)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Coh1Args {
    #[arg(long, alias = "C")]
    c: f64,
    #[arg(long)]
    h0: f64,
    #[arg(long)]
    f0: f64,
    #[arg(long, default_value_t = 0.0)]
    t0: f64,
    #[arg(long)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Trajectory CSV output path.
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct PortraitArgs {
    #[arg(long, alias = "C")]
    c: f64,
    /// Seeds as "h:f" pairs, comma separated.
    #[arg(long, default_value = "1:1,0.8:0.4,1.5:0.5,2:1.5")]
    seeds: String,
    #[arg(long, default_value_t = 25.0)]
    h_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct FlowArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long, alias = "C")]
    c: f64,
    #[arg(long, default_value = "s3t4")]
    family: String,
    /// Initial parameters: comma-separated values, or "crit".
    #[arg(long, default_value = "crit")]
    p0: String,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    entry: String,
    /// Curvature form for 6-dimensional bases (expression grammar).
    #[arg(long)]
    f_eta: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
}

fn load_entries(path: &Option<String>) -> Result<Vec<CatalogEntry>, String> {
    match path {
        Some(p) => catalog::load_catalog(p).map_err(|e| e.to_string()),
        None => catalog::load_default().map_err(|e| e.to_string()),
    }
}

struct Report {
    lines: Vec<String>,
    results: Vec<Value>,
    pass: bool,
}

impl Report {
    fn new() -> Self {
        Report {
            lines: Vec::new(),
            results: Vec::new(),
            pass: true,
        }
    }

    fn text(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn check(&mut self, name: &str, pass: bool, detail: Value) {
        if !pass {
            self.pass = false;
        }
        self.lines
            .push(format!("{} {}", if pass { "PASS" } else { "FAIL" }, name));
        self.results.push(json!({
            "name": name,
            "pass": pass,
            "detail": detail,
        }));
    }

    fn value(&mut self, name: &str, value: Value) {
        self.results.push(json!({ "name": name, "value": value }));
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let mut report = Report::new();
    let command_name;
    let outcome = match &cli.command {
        Command::Catalog { action } => {
            command_name = "catalog";
            cmd_catalog(action, &cli.catalog, &mut report)
        }
        Command::Analyze(args) => {
            command_name = "analyze";
            cmd_analyze(args, &cli.catalog, &mut report)
        }
        Command::Verify(args) => {
            command_name = "verify";
            cmd_verify(args, &mut report)
        }
        Command::Coh1(args) => {
            command_name = "coh1";
            cmd_coh1(args, &mut report)
        }
        Command::Portrait(args) => {
            command_name = "portrait";
            cmd_portrait(args, &mut report)
        }
        Command::Flow(args) => {
            command_name = "flow";
            cmd_flow(args, &mut report)
        }
        Command::Reduce(args) => {
            command_name = "reduce";
            cmd_reduce(args, &cli.catalog, &mut report)
        }
    };
    if let Err(e) = outcome {
        eprintln!("error: {}", e);
        return 2;
    }
    for line in &report.lines {
        println!("{}", line);
    }
    let doc = json!({
        "schema": 1,
        "command": command_name,
        "pass": report.pass,
        "results": report.results,
    });
    match &cli.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, serde_json::to_string_pretty(&doc).unwrap()) {
                eprintln!("error: cannot write JSON report: {}", e);
                return 2;
            }
        }
        None => println!("{}", doc),
    }
    if report.pass {
        0
    } else {
        1
    }
}

fn cmd_catalog(
    action: &CatalogAction,
    catalog_path: &Option<String>,
    report: &mut Report,
) -> Result<(), String> {
    let entries = load_entries(catalog_path)?;
    match action {
        CatalogAction::List => {
            for e in &entries {
                let kind = match (&e.g2_form, &e.su3_forms) {
                    (Some(_), _) => "g2",
                    (_, Some(_)) => "su3",
                    _ => "frame",
                };
                report.text(format!(
                    "{:<20} dim={} {}{}",
                    e.name,
                    e.frame.dim(),
                    kind,
                    if e.is_parametric() { " parametric" } else { "" }
                ));
                report.value(&e.name, json!({"dim": e.frame.dim(), "kind": kind}));
            }
        }
        CatalogAction::Show { entry } => {
            let e = catalog::find(&entries, entry).map_err(|e| e.to_string())?;
            for i in 1..=e.frame.dim() {
                report.text(format!(
                    "d(e^{}) = {}",
                    i,
                    render_form(e.frame.d_of_generator(i))
                ));
                report.value(
                    &format!("d_e{}", i),
                    json!(render_form(e.frame.d_of_generator(i))),
                );
            }
            if let Some(phi) = &e.g2_form {
                report.text(format!("phi = {}", render_form(phi)));
            }
            if let Some((o, p, m)) = &e.su3_forms {
                report.text(format!("omega = {}", render_form(o)));
                report.text(format!("omega_plus = {}", render_form(p)));
                report.text(format!("omega_minus = {}", render_form(m)));
            }
        }
    }
    Ok(())
}

fn cmd_analyze(
    args: &AnalyzeArgs,
    catalog_path: &Option<String>,
    report: &mut Report,
) -> Result<(), String> {
    let entries = load_entries(catalog_path)?;
    let e = catalog::find(&entries, &args.entry).map_err(|e| e.to_string())?;
    let t0 = match (args.t, e.is_parametric()) {
        (Some(t), true) => {
            let p = e.frame.param().unwrap();
            if t <= p.interval.0 || t >= p.interval.1 {
                return Err(format!(
                    "t = {} outside the validity interval ({}, {})",
                    t, p.interval.0, p.interval.1
                ));
            }
            t
        }
        (None, true) => {
            let p = e.frame.param().unwrap();
            0.5 * (p.interval.0 + p.interval.1)
        }
        (Some(_), false) => return Err("entry is not parametric; --t not applicable".into()),
        (None, false) => 1.0,
    };
    if e.g2_form.is_some() {
        let s = if e.is_parametric() {
            e.g2_at(t0).map_err(|e| e.to_string())?
        } else {
            e.g2().map_err(|e| e.to_string())?
        };
        let tor = s.torsion().map_err(|e| e.to_string())?;
        report.text(format!("entry: {} (G2, t = {})", e.name, t0));
        for (key, val) in [
            ("tau0", render_scalar(&tor.tau0)),
            ("tau1", render_form(&tor.tau1)),
            ("tau2", render_form(&tor.tau2)),
            ("tau3", render_form(&tor.tau3)),
        ] {
            report.text(format!("{} = {}", key, val));
            report.value(key, json!(val));
        }
        let flags = s.classify().map_err(|e| e.to_string())?;
        report.text(format!("flags: {:?}", flags));
        report.value("flags", json!(format!("{:?}", flags)));
        let scal = crate::verify::riemann_oracle(s.frame())
            .map_err(|e| e.to_string())?
            .scal;
        report.text(format!("Scal(g) = {}", render_scalar(&scal)));
        report.value("scal", json!(render_scalar(&scal)));
        if flags.g2t {
            let big_t = s.torsion_t().map_err(|e| e.to_string())?;
            report.text(format!("T = {}", render_form(&big_t)));
            report.value("T", json!(render_form(&big_t)));
            let conn = ConnectionForms::with_skew_torsion(s.frame(), &big_t)
                .map_err(|e| e.to_string())?;
            let ric_t = conn.curvature().map_err(|e| e.to_string())?.ricci();
            let ric_zero = ric_t.max_abs_eval(t0) < 1e-10;
            report.text(format!("Ric^T = 0: {}", ric_zero));
            report.value("ricT_zero", json!(ric_zero));
        }
    } else if e.su3_forms.is_some() {
        let s = e.su3().map_err(|e| e.to_string())?;
        let tor = s.torsion().map_err(|e| e.to_string())?;
        report.text(format!("entry: {} (SU(3))", e.name));
        for (key, val) in [
            ("sigma0", render_scalar(&tor.sigma0)),
            ("pi0", render_scalar(&tor.pi0)),
            ("nu1", render_form(&tor.nu1)),
            ("pi1", render_form(&tor.pi1)),
            ("pi2", render_form(&tor.pi2)),
            ("sigma2", render_form(&tor.sigma2)),
            ("nu3", render_form(&tor.nu3)),
        ] {
            report.text(format!("{} = {}", key, val));
            report.value(key, json!(val));
        }
        let flags = s.classify().map_err(|e| e.to_string())?;
        report.text(format!("flags: {:?}", flags));
        report.value("flags", json!(format!("{:?}", flags)));
        if tor.skew_nijenhuis() {
            let big_t = s.torsion_t(&tor).map_err(|e| e.to_string())?;
            report.text(format!("T_omega = {}", render_form(&big_t)));
            report.value("T_omega", json!(render_form(&big_t)));
            let rho = s.rho_b_predicted(&tor).map_err(|e| e.to_string())?;
            report.text(format!("rho^B = {}", render_form(&rho)));
            report.value("rhoB", json!(render_form(&rho)));
        }
    } else {
        return Err("entry declares neither a G2 form nor SU(3) forms".into());
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, report: &mut Report) -> Result<(), String> {
    let mut names: Vec<String> = if args.identity.is_empty() {
        verify::list_identities()
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        args.identity.clone()
    };
    names.sort();
    for name in &names {
        let outcome =
            verify::run_identity(name, args.samples, args.seed).map_err(|e| e.to_string())?;
        report.check(
            name,
            outcome.pass,
            json!({
                "samples": outcome.samples,
                "max_residual": outcome.max_residual,
                "exact": outcome.all_exact,
                "notes": outcome.notes,
            }),
        );
    }
    Ok(())
}

fn cmd_coh1(args: &Coh1Args, report: &mut Report) -> Result<(), String> {
    let s0 = Coh1State::new(args.t0, args.h0, args.f0, args.c);
    let traj = coh1::integrate(&s0, args.t_end, args.step).map_err(|e| e.to_string())?;
    let file = std::fs::File::create(&args.out).map_err(|e| e.to_string())?;
    traj.write_csv(std::io::BufWriter::new(file))
        .map_err(|e| e.to_string())?;
    let drift = traj
        .rows
        .iter()
        .map(|r| r.conserved_residual.abs())
        .fold(0.0f64, f64::max);
    report.text(format!(
        "integrated {} steps, stop = {:?}, error estimate {:.3e}, max conserved drift {:.3e}",
        traj.rows.len(),
        traj.stop,
        traj.error_estimate,
        drift
    ));
    report.value(
        "trajectory",
        json!({
            "rows": traj.rows.len(),
            "stop": format!("{:?}", traj.stop),
            "error_estimate": traj.error_estimate,
            "max_conserved_drift": drift,
            "out": args.out,
        }),
    );
    Ok(())
}

fn cmd_portrait(args: &PortraitArgs, report: &mut Report) -> Result<(), String> {
    let mut seeds = Vec::new();
    for part in args.seeds.split(',') {
        let mut it = part.split(':');
        let h: f64 = it
            .next()
            .ok_or("bad seed")?
            .trim()
            .parse()
            .map_err(|_| "bad seed h")?;
        let f: f64 = it
            .next()
            .ok_or("bad seed")?
            .trim()
            .parse()
            .map_err(|_| "bad seed f")?;
        seeds.push((h, f));
    }
    let branches = coh1::phase_portrait(args.c, &seeds, args.h_end, args.step);
    let mut out =
        std::io::BufWriter::new(std::fs::File::create(&args.out).map_err(|e| e.to_string())?);
    writeln!(out, "C,seed_h,seed_f,h,f").map_err(|e| e.to_string())?;
    for b in &branches {
        for (h, f) in &b.rows {
            writeln!(
                out,
                "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
                args.c, b.seed.0, b.seed.1, h, f
            )
            .map_err(|e| e.to_string())?;
        }
    }
    for b in &branches {
        report.text(format!(
            "seed ({}, {}): {} rows, stop = {:?}, final f/h = {:.6}",
            b.seed.0,
            b.seed.1,
            b.rows.len(),
            b.stop,
            b.final_slope
        ));
        report.value(
            &format!("seed_{}_{}", b.seed.0, b.seed.1),
            json!({"rows": b.rows.len(), "final_slope": b.final_slope,
                   "stop": format!("{:?}", b.stop)}),
        );
    }
    Ok(())
}

fn cmd_flow(args: &FlowArgs, report: &mut Report) -> Result<(), String> {
    let fam = AnsatzFamily::by_name(&args.family).map_err(|e| e.to_string())?;
    let p0: Vec<f64> = if args.p0 == "crit" {
        vec![1.0, 1.0]
    } else {
        args.p0
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| "bad p0".to_string()))
            .collect::<Result<_, _>>()?
    };
    let (pdot, residual) = fam
        .flow_reduce(&p0, args.lambda, args.c)
        .map_err(|e| e.to_string())?;
    report.text(format!(
        "family {} at p = {:?}: pdot = {:?}, residual = {:.3e}",
        fam.name, p0, pdot, residual
    ));
    report.value(
        "flow",
        json!({"p0": p0, "pdot": pdot, "residual": residual}),
    );
    Ok(())
}

fn cmd_reduce(
    args: &ReduceArgs,
    catalog_path: &Option<String>,
    report: &mut Report,
) -> Result<(), String> {
    let entries = load_entries(catalog_path)?;
    let e = catalog::find(&entries, &args.entry).map_err(|e| e.to_string())?;
    if e.su3_forms.is_some() {
        let base = e.su3().map_err(|e| e.to_string())?;
        let f_eta = match &args.f_eta {
            Some(src) => parse_form(src, 6, 2).map_err(|e| e.to_string())?,
            None => crate::form::Form::zero(6, 2),
        };
        let t = Scalar::float(args.t);
        let r = ReductionData::new(base, f_eta, t).map_err(|e| e.to_string())?;
        let gh = r.gibbons_hawking_check().map_err(|e| e.to_string())?;
        report.check(
            "gibbons_hawking",
            crate::g2::form_vanishes(&gh),
            json!({"residual": gh.max_abs_coeff()}),
        );
        let g2 = r.build_g2().map_err(|e| e.to_string())?;
        let tor = g2.torsion().map_err(|e| e.to_string())?;
        report.check(
            "g2t",
            crate::g2::form_vanishes(&tor.tau2),
            json!({"tau2": tor.tau2.max_abs_coeff()}),
        );
        let tau1_pred = r.tau1_predicted().map_err(|e| e.to_string())?;
        let d = tor.tau1.sub(&tau1_pred).map_err(|e| e.to_string())?;
        report.check(
            "tau1_formula",
            crate::g2::form_vanishes(&d),
            json!({"residual": d.max_abs_coeff()}),
        );
        let het = r.heterotic_residual().map_err(|e| e.to_string())?;
        report.check(
            "heterotic",
            crate::g2::form_vanishes(&het),
            json!({"residual": het.max_abs_coeff()}),
        );
        let base = e.su3().map_err(|e| e.to_string())?;
        let checks = reduction::product_strong_check(base).map_err(|e| e.to_string())?;
        report.text(format!("product checks: {:?}", checks));
        report.value("product_checks", json!(format!("{:?}", checks)));
    } else if e.g2_form.is_some() {
        let g2 = e.g2().map_err(|e| e.to_string())?;
        let q = QuotientView::new(&g2).map_err(|e| e.to_string())?;
        let rep = q.report().map_err(|e| e.to_string())?;
        report.text(format!("dtau1 = {}", render_form(&q.f_eta)));
        report.check(
            "half_flat",
            rep.half_flat_residual < 1e-10,
            json!({"residual": rep.half_flat_residual}),
        );
        report.check(
            "cocoupled_normalization",
            rep.coupled_residual < 1e-10,
            json!({"residual": rep.coupled_residual}),
        );
        report.check(
            "eigenform_pde",
            rep.eigenform_residual < 1e-10,
            json!({"residual": rep.eigenform_residual}),
        );
        report.check(
            "heterotic",
            rep.heterotic_residual < 1e-10,
            json!({"residual": rep.heterotic_residual}),
        );
        report.check(
            "nu3_norm",
            rep.nu3_norm_residual < 1e-10,
            json!({"residual": rep.nu3_norm_residual}),
        );
        report.check(
            "scal_cross_check",
            rep.scal_residual < 1e-10,
            json!({"residual": rep.scal_residual}),
        );
        report.text(format!(
            "flags: half_flat={} cocoupled={} almost_cyt={}",
            rep.half_flat, rep.cocoupled, rep.almost_cyt
        ));
        report.value(
            "flags",
            json!({"half_flat": rep.half_flat, "cocoupled": rep.cocoupled,
                   "almost_cyt": rep.almost_cyt}),
        );
    } else {
        return Err("entry has neither SU(3) forms nor a G2 form".into());
    }
    Ok(())
}
