//! Transmission solves: `solve`, `mie-compare` and `sweep`.

use super::{base_record, Invocation};
use crate::config::{ConfigMap, MeshSpec, ReferenceKind, SolveSpec};
use crate::error::{CliError, CliResult};
use crate::output::{complex_pair, field_row, num, OutputDir, Raster, RunRecord, SolveStats, WallTimes, FIELD_HEADER};
use axidirac::dirac::{AssembledSystem, SystemConfig, Wavenumbers};
use axidirac::fields::{
    accuracy_digits, evaluate_fields, jump_checks, relative_errors, EvalOptions, FieldSample, FieldSolution,
    JumpReport,
};
use axidirac::geometry::PanelMesh;
use axidirac::gmres::GmresOptions;
use axidirac::incident::IncidentField;
use axidirac::mie::MieSolution;
use axidirac::neumann::{compute_weight, excitation_diagnostic};
use rayon::prelude::*;
use serde_json::json;
use std::f64::consts::FRAC_PI_4;
use std::time::Instant;

/// Result of one solve, evaluated on the grid and compared with the
/// reference when there is one.
pub struct SolveOutcome {
    pub nodes: usize,
    pub stats: SolveStats,
    pub fields: FieldSolution,
    pub reference: Option<Vec<FieldSample>>,
    pub digits: Option<[Option<i32>; 4]>,
    pub errors: Option<[f64; 4]>,
    pub jumps: JumpReport,
    /// |d¹_N f⁰|/max|f⁰| on genus-1 surfaces.
    pub excitation: Option<f64>,
    pub advisories: Vec<String>,
    pub wall: WallTimes,
}

fn system_config(spec: &SolveSpec) -> SystemConfig {
    let mut cfg = if spec.augment {
        SystemConfig::new(spec.variant)
    } else {
        SystemConfig::unaugmented(spec.variant)
    };
    cfg.gmres = GmresOptions {
        tol: spec.gmres_tol,
        max_iter: spec.gmres_max_iter,
        ..GmresOptions::default()
    };
    cfg
}

/// The genus-1 weight function when the surface needs one.
fn weight_for(mesh: &PanelMesh) -> CliResult<Option<Vec<f64>>> {
    Ok(if mesh.genus() == 1 {
        Some(compute_weight(mesh)?.values)
    } else {
        None
    })
}

fn reference_fields(
    spec: &SolveSpec,
    mesh: &PanelMesh,
    wn: Wavenumbers,
    targets: &[(f64, f64)],
) -> CliResult<Option<Vec<FieldSample>>> {
    match spec.resolved_reference() {
        ReferenceKind::Mie => {
            if !spec.mesh.is_sphere() {
                return Err(CliError::NotSphere(spec.mesh.geometry.clone()));
            }
            Ok(Some(MieSolution::unit_sphere(wn)?.samples(targets)?))
        }
        ReferenceKind::Overresolve => {
            let fine = mesh.overresolve()?;
            let w = weight_for(&fine)?;
            let sys = AssembledSystem::build(&fine, wn, system_config(spec), w.as_deref())?;
            let f0 = IncidentField::new(spec.incident, wn.k_minus).trace(&fine)?;
            let rep = sys.solve(&f0)?;
            Ok(Some(evaluate_fields(&sys, &rep.h, &f0, targets, &EvalOptions::default())?.samples))
        }
        ReferenceKind::None | ReferenceKind::Auto => Ok(None),
    }
}

pub fn run_solve(spec: &SolveSpec, wn: Wavenumbers) -> CliResult<SolveOutcome> {
    let start = Instant::now();
    let mesh = spec.mesh.mesh()?;
    let targets = spec.grid.points();

    // The reference runs first so that its (larger) system is freed before
    // the working one is assembled.
    let t = Instant::now();
    let reference = reference_fields(spec, &mesh, wn, &targets)?;
    let t_reference = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let weight = weight_for(&mesh)?;
    let sys = AssembledSystem::build(&mesh, wn, system_config(spec), weight.as_deref())?;
    let f0 = IncidentField::new(spec.incident, wn.k_minus).trace(&mesh)?;
    let t_assemble = t.elapsed().as_secs_f64();

    let rep = sys.solve(&f0)?;
    let t = Instant::now();
    let fields = evaluate_fields(&sys, &rep.h, &f0, &targets, &EvalOptions::default())?;
    let t_evaluate = t.elapsed().as_secs_f64();
    let jumps = jump_checks(&sys, &rep.h, &f0);
    let excitation = weight.as_ref().map(|w| excitation_diagnostic(&mesh, &f0, w, &wn).ratio);

    let (digits, errors) = match &reference {
        Some(r) => (Some(accuracy_digits(&fields, r)?), Some(relative_errors(&fields, r)?)),
        None => (None, None),
    };
    let mut advisories = wn.advisories(mesh.curve.diameter());
    advisories.extend(sys.params.advisories());
    if !rep.converged {
        advisories.push(format!(
            "GMRES stopped at relative residual {:.2e} after {} iterations{}",
            rep.residual,
            rep.iterations,
            if rep.stagnated { " (stagnated)" } else { "" }
        ));
    }
    Ok(SolveOutcome {
        nodes: mesh.len(),
        stats: SolveStats {
            iterations: rep.iterations,
            residual: rep.residual,
            converged: rep.converged,
            stagnated: rep.stagnated,
        },
        fields,
        reference,
        digits,
        errors,
        jumps,
        excitation,
        advisories,
        wall: WallTimes {
            assemble: t_assemble,
            solve: rep.wall.as_secs_f64(),
            evaluate: t_evaluate,
            reference: t_reference,
            total: start.elapsed().as_secs_f64(),
        },
    })
}

fn digits_text(d: &[Option<i32>; 4]) -> String {
    let parts: Vec<String> = d.iter().map(|v| v.map_or("-".into(), |x| x.to_string())).collect();
    format!("{{{}}}", parts.join(","))
}

fn solve_record(command: &str, cfg: &ConfigMap, spec: &SolveSpec, wn: Wavenumbers, out: &SolveOutcome) -> RunRecord {
    RunRecord {
        variant: Some(spec.variant.to_string()),
        augmented: Some(spec.augment),
        k_minus: Some(complex_pair(wn.k_minus)),
        k_plus: Some(complex_pair(wn.k_plus)),
        incident: Some(format!("{:?}", spec.incident)),
        reference: Some(spec.resolved_reference().as_str().into()),
        solve: Some(out.stats),
        digits: out.digits,
        relative_errors: out.errors,
        nodes: out.nodes,
        advisories: out.advisories.clone(),
        details: json!({
            "flux_e_minus": out.jumps.flux_e_minus,
            "normal_jump": out.jumps.normal_jump,
            "tangential_e": out.jumps.tangential_e,
            "tangential_h": out.jumps.tangential_h,
            "helmholtz": out.jumps.helmholtz,
            "excitation_ratio": out.excitation,
        }),
        wall_seconds: out.wall,
        ..base_record(command, cfg, &spec.mesh)
    }
}

fn write_field_artifacts(dir: &OutputDir, name: &str, spec: &SolveSpec, fields: &FieldSolution) -> CliResult<()> {
    dir.csv(&format!("{name}_fields.csv"), &FIELD_HEADER, fields.samples.iter().map(field_row))?;
    let (nx, nz) = (spec.grid.nx, spec.grid.nz);
    let norm = |v: &[num_complex::Complex64; 3]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let e: Vec<f64> = fields.samples.iter().map(|s| norm(&s.e)).collect();
    let h: Vec<f64> = fields.samples.iter().map(|s| norm(&s.h)).collect();
    let et: Vec<f64> = fields.samples.iter().map(|s| s.e[2].re).collect();
    dir.raster(&format!("{name}_abs_e.pgm"), &Raster::magnitude(&e, nx, nz))?;
    dir.raster(&format!("{name}_abs_h.pgm"), &Raster::magnitude(&h, nx, nz))?;
    dir.raster(&format!("{name}_re_e_theta.ppm"), &Raster::signed(&et, nx, nz))?;
    Ok(())
}

fn summary(name: &str, out: &SolveOutcome) -> String {
    let mut s = format!(
        "{name}: {} nodes, GMRES {} iterations, residual {:.2e}",
        out.nodes, out.stats.iterations, out.stats.residual
    );
    if let Some(d) = &out.digits {
        s += &format!(", digits [E+,E-,H+,H-] = {}", digits_text(d));
    }
    if let Some(x) = out.excitation {
        s += &format!(", excitation ratio {x:.3e}");
    }
    s
}

pub fn cmd_solve(inv: &Invocation) -> CliResult<RunRecord> {
    let spec = SolveSpec::from_config(&inv.config)?;
    let wn = crate::config::wavenumbers(&inv.config)?;
    let name = inv.config.require("name")?.to_string();
    let out = run_solve(&spec, wn)?;
    write_field_artifacts(&inv.out, &name, &spec, &out.fields)?;
    for a in &out.advisories {
        eprintln!("warning: {a}");
    }
    println!("{}", summary(&name, &out));
    Ok(solve_record("solve", &inv.config, &spec, wn, &out))
}

/// Solver against the Mie series on the unit sphere, with per-point
/// absolute errors.
pub fn cmd_mie_compare(inv: &Invocation) -> CliResult<RunRecord> {
    let mut cfg = inv.config.clone();
    cfg.set("reference", "mie");
    let spec = SolveSpec::from_config(&cfg)?;
    if !spec.mesh.is_sphere() {
        return Err(CliError::NotSphere(spec.mesh.geometry.clone()));
    }
    let wn = crate::config::wavenumbers(&cfg)?;
    let name = cfg.require("name")?.to_string();
    let out = run_solve(&spec, wn)?;
    write_field_artifacts(&inv.out, &name, &spec, &out.fields)?;
    let reference = out.reference.as_deref().unwrap_or_default();
    let mut header: Vec<&str> = vec!["x", "z", "region", "near"];
    header.extend(["err_e_rho", "err_e_z", "err_e_theta", "err_h_rho", "err_h_z", "err_h_theta"]);
    let rows = out.fields.samples.iter().zip(reference).map(|(s, r)| {
        let mut row = vec![num(s.x), num(s.z), s.region.as_str().to_string(), (s.near as u8).to_string()];
        for (a, b) in s.e.iter().chain(&s.h).zip(r.e.iter().chain(&r.h)) {
            row.push(num((a - b).norm()));
        }
        row
    });
    inv.out.csv(&format!("{name}_mie_errors.csv"), &header, rows)?;
    inv.out.csv(&format!("{name}_mie_fields.csv"), &FIELD_HEADER, reference.iter().map(field_row))?;
    println!("{} (reference: Mie series)", summary(&name, &out));
    Ok(solve_record("mie-compare", &cfg, &spec, wn, &out))
}

/// Log-uniform values from `lo` to `hi` inclusive.
pub fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![(lo * hi).sqrt()];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)).collect()
}

pub const SWEEP_DEFAULTS: &[(&str, &str)] = &[
    ("kml_min", "1e-10"),
    ("kml_max", "1e-1"),
    ("kml_points", "3"),
    ("kpl_min", "1e-2"),
    ("kpl_max", "50"),
    ("kpl_points", "3"),
    ("name", "sweep"),
];

/// Grid of (k₋L, |k₊|L) with arg k₋ = 0 and arg k₊ = π/4.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub points: Vec<(f64, f64)>,
    pub diameter: f64,
}

impl SweepSpec {
    pub fn from_config(c: &ConfigMap, mesh: &MeshSpec) -> CliResult<Self> {
        let km = log_points(c.parse("kml_min")?, c.parse("kml_max")?, c.parse("kml_points")?);
        let kp = log_points(c.parse("kpl_min")?, c.parse("kpl_max")?, c.parse("kpl_points")?);
        let points = km.iter().flat_map(|&a| kp.iter().map(move |&b| (a, b))).collect();
        Ok(Self {
            points,
            diameter: mesh.curve()?.diameter(),
        })
    }

    pub fn wavenumbers(&self, (kml, kpl): (f64, f64)) -> CliResult<Wavenumbers> {
        let l = self.diameter;
        Ok(Wavenumbers::new(
            num_complex::Complex64::new(kml / l, 0.0),
            num_complex::Complex64::from_polar(kpl / l, FRAC_PI_4),
        )?)
    }
}

pub const SWEEP_HEADER: [&str; 14] = [
    "index",
    "k_minus_l",
    "k_plus_abs_l",
    "arg_k_plus",
    "iterations",
    "residual",
    "digits_e_plus",
    "digits_e_minus",
    "digits_h_plus",
    "digits_h_minus",
    "min_digits",
    "target_digits",
    "advisories",
    "status",
];

/// Runs every grid point (concurrently unless the run is deterministic)
/// and writes the Y(X) table. Failed points are logged and kept in the table.
pub fn cmd_sweep(inv: &Invocation) -> CliResult<Vec<RunRecord>> {
    let spec = SolveSpec::from_config(&inv.config)?;
    let sweep = SweepSpec::from_config(&inv.config, &spec.mesh)?;
    let name = inv.config.require("name")?.to_string();
    let run = |(i, p): (usize, &(f64, f64))| -> (usize, (f64, f64), CliResult<(Wavenumbers, SolveOutcome)>) {
        let r = sweep.wavenumbers(*p).and_then(|wn| Ok((wn, run_solve(&spec, wn)?)));
        (i, *p, r)
    };
    let results: Vec<_> = if inv.deterministic {
        sweep.points.iter().enumerate().map(run).collect()
    } else {
        sweep.points.par_iter().enumerate().map(run).collect()
    };

    let mut rows = Vec::new();
    let mut records = Vec::new();
    for (i, (kml, kpl), r) in results {
        let mut row = vec![i.to_string(), num(kml), num(kpl), num(FRAC_PI_4)];
        match r {
            Ok((wn, out)) => {
                let d = out.digits.unwrap_or([None; 4]);
                let min = d.iter().map(|v| v.unwrap_or(i32::MIN)).min().filter(|m| *m > i32::MIN);
                row.push(out.stats.iterations.to_string());
                row.push(num(out.stats.residual));
                row.extend(d.iter().map(|v| v.map_or(String::new(), |x| x.to_string())));
                row.push(min.map_or(String::new(), |x| x.to_string()));
                row.push(crate::output::TARGET_DIGITS.to_string());
                row.push(out.advisories.len().to_string());
                row.push("ok".into());
                println!("point {i}: k-L = {kml:.1e}, |k+|L = {kpl:.1e}: {}", summary(&name, &out));
                records.push(solve_record("sweep", &inv.config, &spec, wn, &out));
            }
            Err(e) => {
                eprintln!("point {i}: k-L = {kml:.1e}, |k+|L = {kpl:.1e} failed: {e}");
                row.extend(std::iter::repeat_n(String::new(), 7));
                row.push(crate::output::TARGET_DIGITS.to_string());
                row.push(String::new());
                row.push(format!("error: {e}"));
                records.push(RunRecord {
                    error: Some(e.to_string()),
                    details: json!({"k_minus_l": kml, "k_plus_abs_l": kpl}),
                    ..base_record("sweep", &inv.config, &spec.mesh)
                });
            }
        }
        rows.push(row);
    }
    let path = inv.out.csv(&format!("{name}_table.csv"), &SWEEP_HEADER, rows)?;
    println!("table: {}", path.display());
    Ok(records)
}
