//! Condition numbers of the augmented systems and of their field
//! representation maps along a k₋ sweep.

use super::{base_record, Invocation};
use crate::config::MeshSpec;
use crate::error::CliResult;
use crate::output::{complex_pair, num, RunRecord, WallTimes};
use axidirac::dirac::{AssembledSystem, SystemConfig, Variant, Wavenumbers};
use axidirac::fields::field_map_condition;
use axidirac::neumann::compute_weight;
use num_complex::Complex64 as C64;
use serde_json::json;
use std::time::Instant;

pub const COND_DEFAULTS: &[(&str, &str)] = &[
    ("geometry", "torus"),
    ("panels", "16"),
    ("k_plus", "1+1i"),
    ("km_min", "1e-12"),
    ("km_max", "1"),
    ("km_points", "7"),
    ("name", "cond"),
];

/// Condition numbers at one k₋; NaN where the SVD failed.
#[derive(Debug, Clone, Copy)]
struct CondPoint {
    ainf_system: f64,
    ainf_map: f64,
    b_system: f64,
    b_map: f64,
}

fn or_nan(label: &str, km: f64, r: axidirac::Result<f64>) -> f64 {
    r.unwrap_or_else(|e| {
        eprintln!("k- = {km:.1e}: {label} skipped: {e}");
        f64::NAN
    })
}

fn spread(v: &[f64]) -> f64 {
    let f: Vec<f64> = v.iter().copied().filter(|x| x.is_finite()).collect();
    f.iter().copied().fold(0.0, f64::max) / f.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn cmd_cond(inv: &Invocation) -> CliResult<RunRecord> {
    let start = Instant::now();
    let c = &inv.config;
    let mesh_spec = MeshSpec::from_config(c)?;
    let mesh = mesh_spec.mesh()?;
    let weight = if mesh.genus() == 1 {
        Some(compute_weight(&mesh)?.values)
    } else {
        None
    };
    let k_plus = c.complex("k_plus")?;
    let kms = super::solve::log_points(c.parse("km_min")?, c.parse("km_max")?, c.parse("km_points")?);
    let name = c.require("name")?.to_string();

    let mut points = Vec::new();
    for &km in &kms {
        let wn = Wavenumbers::new(C64::new(km, 0.0), k_plus)?;
        let b = AssembledSystem::build(&mesh, wn, SystemConfig::new(Variant::B), weight.as_deref())?;
        let b_system = or_nan("B system", km, b.matrix.condition_number());
        let b_map = or_nan("B field map", km, field_map_condition(&b));
        // The Cauchy matrices carry over to the second system.
        let a = AssembledSystem::from_cauchy(&mesh, wn, SystemConfig::new(Variant::AInf), b.cauchy, weight.as_deref())?;
        let p = CondPoint {
            ainf_system: or_nan("Ainf system", km, a.matrix.condition_number()),
            ainf_map: or_nan("Ainf field map", km, field_map_condition(&a)),
            b_system,
            b_map,
        };
        println!(
            "k- = {km:.1e}: Ainf-aug system {:.2e} map {:.2e}; B-aug system {:.2e} map {:.2e}",
            p.ainf_system, p.ainf_map, p.b_system, p.b_map
        );
        points.push(p);
    }
    let header = ["k_minus", "ainf_aug_system", "ainf_aug_field_map", "b_aug_system", "b_aug_field_map"];
    let rows = kms.iter().zip(&points).map(|(km, p)| {
        vec![num(*km), num(p.ainf_system), num(p.ainf_map), num(p.b_system), num(p.b_map)]
    });
    let path = inv.out.csv(&format!("{name}_condition.csv"), &header, rows)?;

    let col = |f: fn(&CondPoint) -> f64| points.iter().map(f).collect::<Vec<_>>();
    let spreads = json!({
        "ainf_aug_system": spread(&col(|p| p.ainf_system)),
        "ainf_aug_field_map": spread(&col(|p| p.ainf_map)),
        "b_aug_system": spread(&col(|p| p.b_system)),
        "b_aug_field_map": spread(&col(|p| p.b_map)),
    });
    println!("spread (max/min) over the sweep: {spreads}");
    println!("table: {}", path.display());
    Ok(RunRecord {
        nodes: mesh.len(),
        k_plus: Some(complex_pair(k_plus)),
        details: json!({ "k_minus": kms, "spread": spreads }),
        wall_seconds: WallTimes {
            total: start.elapsed().as_secs_f64(),
            ..WallTimes::default()
        },
        ..base_record("cond", c, &mesh_spec)
    })
}
