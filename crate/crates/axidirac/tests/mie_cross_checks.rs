//! The sphere reference solution checked against the Cauchy projections and
//! against the solver's own boundary traces.

mod common;

use axidirac::cauchy::CauchyMatrix;
use axidirac::density::DiracDensity;
use axidirac::dirac::{AssembledSystem, SystemConfig, Variant, Wavenumbers};
use axidirac::fields::Region;
use axidirac::geometry::CurveKind;
use axidirac::incident::{partial_wave, trace_components, IncidentField};
use axidirac::mie::MieSolution;
use common::mesh;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

fn wn() -> Wavenumbers {
    Wavenumbers::new(C64::new(0.05, 0.0), C64::new(1.0, 1.0)).unwrap()
}

/// Fields just inside or just outside the unit sphere in the direction of
/// (ρ, z); points on the sphere can round to either side.
fn fields_on(sol: &MieSolution, rho: f64, z: f64, side: Region) -> ([C64; 3], [C64; 3]) {
    let r = rho.hypot(z);
    let f = match side {
        Region::Interior => (1.0 - 1e-15) / r,
        Region::Exterior => (1.0 + 1e-15) / r,
    };
    let (reg, e, h) = sol.fields(rho * f, z * f).unwrap();
    assert_eq!(reg, side);
    (e, h)
}

fn norm3(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn interface_residual_is_at_roundoff_on_64_points() {
    for wn in [wn(), Wavenumbers::eddy(1e-4, 2f64.sqrt()).unwrap(), Wavenumbers::eddy(1e-2, 20.0).unwrap()] {
        let sol = MieSolution::unit_sphere(wn).unwrap();
        let kh = wn.khat();
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..64 {
            let th = PI * (i as f64 + 0.5) / 64.0;
            let (s, c) = th.sin_cos();
            let (ei, hi) = fields_on(&sol, s, c, Region::Interior);
            let (es, hs) = fields_on(&sol, s, c, Region::Exterior);
            let (e0, h0) = partial_wave(wn.k_minus, s, c).unwrap();
            let et: Vec<C64> = (0..3).map(|k| es[k] + e0[k]).collect();
            let ht: Vec<C64> = (0..3).map(|k| hs[k] + h0[k]).collect();
            let tan = |v: &[C64]| [v[0] * c - v[1] * s, v[2]];
            let nor = |v: &[C64]| v[0] * s + v[1] * c;
            let d = [
                tan(&ei)[0] - tan(&et)[0],
                tan(&ei)[1] - tan(&et)[1],
                tan(&hi)[0] - tan(&ht)[0],
                tan(&hi)[1] - tan(&ht)[1],
                kh * kh * nor(&ei) - nor(&et),
            ];
            worst = worst.max(d.iter().map(|z| z.norm()).fold(0.0, f64::max));
            scale = scale.max(norm3(&et)).max(norm3(&ht));
        }
        assert!(worst <= 1e-12 * scale, "k = {wn:?}: {worst:e} (scale {scale:e})");
    }
}

#[test]
fn traces_lie_in_the_hardy_spaces_of_their_sides() {
    let w = wn();
    let m = mesh(CurveKind::Sphere, 12);
    let sol = MieSolution::unit_sphere(w).unwrap();
    let kh = w.khat();
    let mut interior = DiracDensity::zeros(m.len());
    let mut exterior = DiracDensity::zeros(m.len());
    for (i, nd) in m.nodes.iter().enumerate() {
        let (e, h) = fields_on(&sol, nd.rho, nd.z, Region::Interior);
        // Inside, F₂ = H/k̂.
        let t = trace_components(nd.nu, nd.tau, &e, &h.map(|v| v / kh));
        let (es, hs) = fields_on(&sol, nd.rho, nd.z, Region::Exterior);
        let ts = trace_components(nd.nu, nd.tau, &es, &hs);
        for c in 0..8 {
            interior.component_mut(c + 1)[i] = t[c];
            exterior.component_mut(c + 1)[i] = ts[c];
        }
    }
    let ep = CauchyMatrix::assemble(&m, w.k_plus).unwrap();
    let em = CauchyMatrix::assemble(&m, w.k_minus).unwrap();
    let dp = (&ep.op.apply(&interior) - &interior).max_abs() / interior.max_abs();
    let dm = (&em.op.apply(&exterior) + &exterior).max_abs() / exterior.max_abs();
    assert!(dp < 1e-9, "interior: {dp:e}");
    assert!(dm < 1e-9, "exterior: {dm:e}");
}

#[test]
fn solver_traces_match_the_reference_on_the_boundary() {
    let w = wn();
    let m = mesh(CurveKind::Sphere, 12);
    let sol = MieSolution::unit_sphere(w).unwrap();
    let sys = AssembledSystem::build(&m, w, SystemConfig::new(Variant::B), None).unwrap();
    let f0 = IncidentField::PartialWave { k: w.k_minus }.trace(&m).unwrap();
    let h = sys.solve(&f0).unwrap().h;
    let tm = sys.exterior_trace(&h);
    let mut worst = 0.0f64;
    for (i, nd) in m.nodes.iter().enumerate() {
        let (es, hs) = fields_on(&sol, nd.rho, nd.z, Region::Exterior);
        let t = trace_components(nd.nu, nd.tau, &es, &hs);
        for c in 0..8 {
            worst = worst.max((tm.component(c + 1)[i] - t[c]).norm());
        }
    }
    assert!(worst < 1e-9 * tm.max_abs().max(f0.max_abs()), "{worst:e}");
}

#[test]
fn scattered_field_radiates() {
    // |x̂ × E⁻ − H⁻| decays faster than |E⁻| along a ray.
    let w = Wavenumbers::new(C64::new(1.0, 0.0), C64::new(3.0, 3.0)).unwrap();
    let sol = MieSolution::unit_sphere(w).unwrap();
    let (s, c) = 1.1f64.sin_cos();
    let ratio = |r: f64| {
        let (_, e, h) = sol.fields(r * s, r * c).unwrap();
        // x̂ = (s, c, 0) in (ρ̂, ẑ, θ̂), a left-handed frame: ρ̂ × ẑ = −θ̂.
        let cross = [-c * e[2], s * e[2], c * e[0] - s * e[1]];
        let d: Vec<C64> = (0..3).map(|k| cross[k] - h[k]).collect();
        norm3(&d) / norm3(&e)
    };
    let (near, mid, far) = (ratio(20.0), ratio(200.0), ratio(2000.0));
    assert!(mid < 0.2 * near && far < 0.2 * mid, "{near:e} {mid:e} {far:e}");
}
