#![allow(dead_code)]

use axidirac::density::DiracDensity;
use axidirac::geometry::{CurveKind, GeneratingCurve, PanelMesh};
use num_complex::Complex64 as C64;

pub fn mesh(kind: CurveKind, panels: usize) -> PanelMesh {
    PanelMesh::discretize(&GeneratingCurve::build(kind).unwrap(), panels, 16).unwrap()
}

/// Axis-regular density: the scalar slots are smooth in (ρ, z) and the
/// vector slots are traces of smooth fields whose ρ̂ and θ̂ parts vanish
/// like ρ on the axis. `a` selects one member of the family.
pub fn smooth_density(mesh: &PanelMesh, a: f64) -> DiracDensity {
    let mut h = DiracDensity::zeros(mesh.len());
    for (i, nd) in mesh.nodes.iter().enumerate() {
        let re = slots(nd.rho, nd.z, nd.nu, nd.tau, a);
        let im = slots(nd.rho, nd.z, nd.nu, nd.tau, -0.8 * a - 0.5);
        for c in 0..8 {
            h.component_mut(c + 1)[i] = C64::new(re[c], 0.5 * im[c]);
        }
    }
    h
}

fn slots(r: f64, z: f64, nu: (f64, f64), tau: (f64, f64), a: f64) -> [f64; 8] {
    let u = [r * (z - a), 0.7 + a * z, 0.4 * r];
    let v = [r * (a + z), 1.0 - a * z * z, r * (1.0 - 0.2 * z + a)];
    let dot = |d: (f64, f64), w: &[f64; 3]| d.0 * w[0] + d.1 * w[1];
    [
        (1.2 * z + a * r * r).cos(),
        dot(nu, &u),
        dot(tau, &u),
        u[2],
        (0.5 - z * r * r + a).sin() + 0.2,
        dot(nu, &v),
        dot(tau, &v),
        v[2],
    ]
}

/// "{13,13,12,13}" with "-" for undefined counts.
pub fn digits_str(d: &[Option<i32>; 4]) -> String {
    let parts: Vec<String> = d.iter().map(|v| v.map_or("-".into(), |x| x.to_string())).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn all_at_least(d: &[Option<i32>; 4], min: i32) -> bool {
    d.iter().all(|v| v.is_some_and(|x| x >= min))
}
