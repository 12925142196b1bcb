//! Genus-1 tools: the weight function and the Neumann eigenfield panels.

use super::{base_record, Invocation};
use crate::config::{GridSpec, MeshSpec};
use crate::error::{CliError, CliResult};
use crate::output::{complex_pair, num, OutputDir, Raster, RunRecord, WallTimes};
use axidirac::dirac::{AssembledSystem, SystemConfig, Variant, Wavenumbers};
use axidirac::fields::{evaluate_fields, EvalOptions, Region};
use axidirac::geometry::PanelMesh;
use axidirac::incident::{IncidentField, IncidentKind};
use axidirac::neumann::{compute_weight, eigenfields, null_vector_weight, relative_deviation, WeightFunction};
use serde_json::json;
use std::time::Instant;

pub const WEIGHT_DEFAULTS: &[(&str, &str)] = &[("geometry", "torus"), ("panels", "32"), ("name", "weight")];

pub const EIGENFIELD_DEFAULTS: &[(&str, &str)] = &[
    ("geometry", "torus"),
    ("panels", "32"),
    ("x_min", "-2"),
    ("x_max", "2"),
    ("z_min", "-1.2"),
    ("z_max", "1.2"),
    ("grid_nx", "60"),
    ("grid_nz", "60"),
    ("sets", "superconductor,ordinary,borderline"),
    ("borderline_k_minus", "1e-8"),
    ("borderline_k_plus", "10+10i"),
    ("name", "eigen"),
];

fn genus_one_mesh(command: &'static str, spec: &MeshSpec) -> CliResult<PanelMesh> {
    let mesh = spec.mesh()?;
    if mesh.genus() != 1 {
        return Err(CliError::NeedsGenusOne {
            command,
            geometry: spec.geometry.clone(),
        });
    }
    Ok(mesh)
}

fn weight_details(mesh: &PanelMesh, w: &WeightFunction, alt: &[f64], null_residual: f64) -> serde_json::Value {
    json!({
        "minimum": w.values.iter().copied().fold(f64::INFINITY, f64::min),
        "average": w.average(mesh),
        "gmres_iterations": w.gmres_iterations,
        "gmres_residual": w.gmres_residual,
        "exterior_defect": w.exterior_defect,
        "imaginary_part": w.imaginary_part,
        "null_vector_route_deviation": relative_deviation(alt, &w.values),
        "null_vector_residual": null_residual,
    })
}

pub fn cmd_weight(inv: &Invocation) -> CliResult<RunRecord> {
    let start = Instant::now();
    let spec = MeshSpec::from_config(&inv.config)?;
    let mesh = genus_one_mesh("weight", &spec)?;
    let name = inv.config.require("name")?.to_string();
    let w = compute_weight(&mesh)?;
    let (alt, res) = null_vector_weight(&mesh)?;
    let header = ["node", "s", "rho", "z", "w", "w_null_vector"];
    let rows = mesh
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| vec![i.to_string(), num(n.s), num(n.rho), num(n.z), num(w.values[i]), num(alt[i])]);
    let path = inv.out.csv(&format!("{name}_weight.csv"), &header, rows)?;
    let details = weight_details(&mesh, &w, &alt, res);
    println!("weight on {} nodes: {details}", mesh.len());
    println!("table: {}", path.display());
    Ok(RunRecord {
        nodes: mesh.len(),
        details,
        wall_seconds: WallTimes {
            total: start.elapsed().as_secs_f64(),
            ..WallTimes::default()
        },
        ..base_record("weight", &inv.config, &spec)
    })
}

/// One panel set: scalar grid maps, each written as CSV column and raster.
struct PanelSet<'a> {
    label: &'a str,
    columns: Vec<(&'a str, Vec<f64>)>,
}

fn write_set(dir: &OutputDir, name: &str, grid: &GridSpec, targets: &[(f64, f64)], inside: &[bool], set: &PanelSet) -> CliResult<()> {
    let mut header = vec!["x", "z", "inside"];
    header.extend(set.columns.iter().map(|(c, _)| *c));
    let rows = targets.iter().enumerate().map(|(i, &(x, z))| {
        let mut row = vec![num(x), num(z), (inside[i] as u8).to_string()];
        row.extend(set.columns.iter().map(|(_, v)| num(v[i])));
        row
    });
    dir.csv(&format!("{name}_{}.csv", set.label), &header, rows)?;
    for (col, v) in &set.columns {
        let abs: Vec<f64> = v.iter().map(|x| x.abs()).collect();
        dir.raster(&format!("{name}_{}_{col}.pgm", set.label), &Raster::magnitude(&abs, grid.nx, grid.nz))?;
    }
    Ok(())
}

fn max_h(hr: &[f64], hz: &[f64]) -> f64 {
    hr.iter().zip(hz).map(|(a, b)| a.hypot(*b)).filter(|v| v.is_finite()).fold(0.0, f64::max)
}

/// Surface current |J_s| painted at the nodes (and their mirror images) on
/// the grid raster.
fn surface_raster(mesh: &PanelMesh, js: &[f64], grid: &GridSpec) -> Raster {
    let mut v = vec![0.0; grid.nx * grid.nz];
    let cell = |t: f64, (a, b): (f64, f64), n: usize| {
        let i = ((t - a) / (b - a) * (n as f64 - 1.0)).round();
        (i >= 0.0 && i < n as f64).then_some(i as usize)
    };
    for (nd, j) in mesh.nodes.iter().zip(js) {
        for x in [nd.rho, -nd.rho] {
            if let (Some(i), Some(k)) = (cell(x, grid.x, grid.nx), cell(nd.z, grid.z, grid.nz)) {
                let p = &mut v[k * grid.nx + i];
                *p = f64::max(*p, *j);
            }
        }
    }
    Raster::magnitude(&v, grid.nx, grid.nz)
}

/// Borderline panels: a z-coil solve at small k₋ with k₊ fixed, shown as
/// |J_θ| ∝ |k₊k̂ E_θ| inside and the total H, normalized so that max|H| = 1.
fn borderline<'a>(mesh: &PanelMesh, weight: &[f64], wn: Wavenumbers, targets: &[(f64, f64)]) -> CliResult<(PanelSet<'a>, serde_json::Value)> {
    let sys = AssembledSystem::build(mesh, wn, SystemConfig::new(Variant::AInf), Some(weight))?;
    let inc = IncidentField::new(IncidentKind::ZCoil, wn.k_minus);
    let f0 = inc.trace(mesh)?;
    let rep = sys.solve(&f0)?;
    let sol = evaluate_fields(&sys, &rep.h, &f0, targets, &EvalOptions::default())?;
    let eta_j = -num_complex::Complex64::i() * wn.k_plus * wn.khat();
    let mut j = Vec::with_capacity(targets.len());
    let mut hr = Vec::with_capacity(targets.len());
    let mut hz = Vec::with_capacity(targets.len());
    for s in &sol.samples {
        let (h, jt) = match s.region {
            Region::Interior => (s.h, (eta_j * s.e[2]).norm()),
            Region::Exterior => {
                let (_, h0) = inc.eval(s.x.abs(), s.z)?;
                ([s.h[0] + h0[0], s.h[1] + h0[1], s.h[2] + h0[2]], 0.0)
            }
        };
        j.push(jt);
        hr.push(h[0].norm());
        hz.push(h[1].norm());
    }
    let scale = max_h(&hr, &hz);
    for v in j.iter_mut().chain(hr.iter_mut()).chain(hz.iter_mut()) {
        *v /= scale;
    }
    let details = json!({
        "k_minus": complex_pair(wn.k_minus),
        "k_plus": complex_pair(wn.k_plus),
        "gmres_iterations": rep.iterations,
        "gmres_residual": rep.residual,
        "max_h": max_h(&hr, &hz),
        "interpretation": "A∞-aug z-coil solve at small k₋ with k₊ fixed",
    });
    Ok((
        PanelSet {
            label: "borderline",
            columns: vec![("abs_j_theta", j), ("abs_h_rho", hr), ("abs_h_z", hz)],
        },
        details,
    ))
}

pub fn cmd_eigenfield(inv: &Invocation) -> CliResult<RunRecord> {
    let start = Instant::now();
    let c = &inv.config;
    let spec = MeshSpec::from_config(c)?;
    let mesh = genus_one_mesh("eigenfield", &spec)?;
    let grid = GridSpec::from_config(c)?;
    let name = c.require("name")?.to_string();
    let sets = c.list("sets")?;
    for s in &sets {
        if !matches!(s.as_str(), "superconductor" | "ordinary" | "borderline") {
            return Err(CliError::Config(format!(
                "unknown eigenfield set {s:?}; expected superconductor, ordinary or borderline"
            )));
        }
    }
    let wants = |s: &str| sets.iter().any(|x| x == s);
    let targets = grid.points();
    let w = compute_weight(&mesh)?;
    let ef = eigenfields(&mesh, &w, &targets)?;
    let mut details = serde_json::Map::new();
    let d = ef.diagnostics;
    details.insert(
        "diagnostics".into(),
        json!({
            "null_residual": d.null_residual,
            "normal_j": d.normal_j,
            "fit_deviation": d.fit_deviation,
            "normal_h_superconductor": d.normal_h_super,
            "current_constant": d.current_constant,
        }),
    );

    if wants("ordinary") {
        let set = PanelSet {
            label: "ordinary",
            columns: vec![
                ("j_theta", ef.eddy_j.clone()),
                ("h_rho", ef.eddy_h.iter().map(|h| h[0]).collect()),
                ("h_z", ef.eddy_h.iter().map(|h| h[1]).collect()),
            ],
        };
        write_set(&inv.out, &name, &grid, &targets, &ef.inside, &set)?;
        details.insert("ordinary_max_h".into(), json!(max_h(&set.columns[1].1, &set.columns[2].1)));
    }
    if wants("superconductor") {
        let set = PanelSet {
            label: "superconductor",
            columns: vec![
                ("h_rho", ef.super_h.iter().map(|h| h[0]).collect()),
                ("h_z", ef.super_h.iter().map(|h| h[1]).collect()),
            ],
        };
        write_set(&inv.out, &name, &grid, &targets, &ef.inside, &set)?;
        details.insert("superconductor_max_h".into(), json!(max_h(&set.columns[0].1, &set.columns[1].1)));
        let rows = mesh
            .nodes
            .iter()
            .zip(&ef.surface_current)
            .map(|(n, j)| vec![num(n.s), num(n.rho), num(n.z), num(*j)]);
        inv.out.csv(&format!("{name}_superconductor_surface.csv"), &["s", "rho", "z", "abs_j_surface"], rows)?;
        inv.out.raster(
            &format!("{name}_superconductor_abs_j_surface.pgm"),
            &surface_raster(&mesh, &ef.surface_current, &grid),
        )?;
    }
    if wants("borderline") {
        let wn = Wavenumbers::new(c.complex("borderline_k_minus")?, c.complex("borderline_k_plus")?)?;
        let (set, info) = borderline(&mesh, &w.values, wn, &targets)?;
        write_set(&inv.out, &name, &grid, &targets, &ef.inside, &set)?;
        details.insert("borderline".into(), info);
    }
    println!("eigenfield sets {sets:?} on a {}x{} grid: {}", grid.nx, grid.nz, serde_json::Value::Object(details.clone()));
    Ok(RunRecord {
        nodes: mesh.len(),
        details: serde_json::Value::Object(details),
        wall_seconds: WallTimes {
            total: start.elapsed().as_secs_f64(),
            ..WallTimes::default()
        },
        ..base_record("eigenfield", c, &spec)
    })
}
