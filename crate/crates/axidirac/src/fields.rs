//! Fields from a solved density: volume evaluation in a meridian window,
//! boundary traces, jump diagnostics and the accuracy metrics.

use crate::cauchy::volume_cauchy;
use crate::density::{DiracDensity, Parity};
use crate::dirac::AssembledSystem;
use crate::error::{AxiError, Result};
use crate::geometry::PanelMesh;
use crate::kernel::KernelKind;
use ndarray::{concatenate, s, Array2, Axis};
use ndarray_linalg::SVD;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

/// Region of a target point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Interior,
    Exterior,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Interior => "interior",
            Region::Exterior => "exterior",
        }
    }
}

/// Physical fields at one target, vectors in (ρ̂, ẑ, θ̂). In the exterior
/// `e` and `h` are the scattered fields E⁻, H⁻.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// Signed meridian coordinate x (ρ = |x|) and z.
    pub x: f64,
    pub z: f64,
    pub region: Region,
    /// Closer to Γ than the near-boundary band.
    pub near: bool,
    pub e: [C64; 3],
    pub h: [C64; 3],
    /// The Helmholtz slots F₀ and F₃; zero for exact Maxwell data.
    pub helmholtz: [C64; 2],
}

/// Field values on a target set plus the boundary scales used to turn
/// absolute errors into relative ones.
#[derive(Debug, Clone)]
pub struct FieldSolution {
    pub samples: Vec<FieldSample>,
    pub scales: BoundaryScales,
}

/// max_Γ|E⁺|, max_Γ|E⁰+E⁻|, max_Γ|H⁺|, max_Γ|H⁰+H⁻|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryScales(pub [f64; 4]);

/// Near-boundary handling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Band width as a fraction of the shortest panel's meridian length.
    pub near_band: f64,
    /// Evaluate flagged targets anyway (the volume rule subdivides panels
    /// adaptively near the target).
    pub evaluate_near: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            near_band: 0.25,
            evaluate_near: false,
        }
    }
}

/// Uniform nx × nz grid on [x0, x1] × [z0, z1].
pub fn meridian_grid(x: (f64, f64), z: (f64, f64), nx: usize, nz: usize) -> Vec<(f64, f64)> {
    let lin = |a: f64, b: f64, n: usize, i: usize| if n == 1 { 0.5 * (a + b) } else { a + (b - a) * i as f64 / (n - 1) as f64 };
    let mut pts = Vec::with_capacity(nx * nz);
    for j in 0..nz {
        for i in 0..nx {
            pts.push((lin(x.0, x.1, nx, i), lin(z.0, z.1, nz, j)));
        }
    }
    pts
}

/// Distance from (ρ, z) to the generating curve, by dense sampling.
pub fn distance_to_curve(mesh: &PanelMesh, rho: f64, z: f64) -> f64 {
    let (s0, s1) = mesh.curve.s_domain;
    let m = 4000;
    (0..=m)
        .map(|i| {
            let p = mesh.curve.eval(s0 + (s1 - s0) * i as f64 / m as f64);
            (p.rho - rho).hypot(p.z - z)
        })
        .fold(f64::INFINITY, f64::min)
}

fn shortest_panel(mesh: &PanelMesh) -> f64 {
    (0..mesh.n_panels())
        .map(|p| mesh.panel_nodes(p).map(|j| mesh.nodes[j].weight).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Boundary scales from the traces of a solved system.
pub fn boundary_scales(system: &AssembledSystem, h: &DiracDensity, f0: &DiracDensity) -> BoundaryScales {
    let kh = system.wavenumbers().khat();
    let tp = system.interior_trace(h);
    let tm = system.exterior_trace(h);
    let n = system.n_nodes();
    let mut m = [0.0f64; 4];
    for i in 0..n {
        let ep: Vec<C64> = (6..=8).map(|c| tp.component(c)[i]).collect();
        let hp: Vec<C64> = (2..=4).map(|c| tp.component(c)[i] * kh).collect();
        let et: Vec<C64> = (6..=8).map(|c| tm.component(c)[i] + f0.component(c)[i]).collect();
        let ht: Vec<C64> = (2..=4).map(|c| tm.component(c)[i] + f0.component(c)[i]).collect();
        m[0] = m[0].max(vec_norm(&ep));
        m[1] = m[1].max(vec_norm(&et));
        m[2] = m[2].max(vec_norm(&hp));
        m[3] = m[3].max(vec_norm(&ht));
    }
    BoundaryScales(m)
}

/// E±, H± at the targets from the (augmented) field representation.
pub fn evaluate_fields(
    system: &AssembledSystem,
    h: &DiracDensity,
    f0: &DiracDensity,
    targets: &[(f64, f64)],
    opts: &EvalOptions,
) -> Result<FieldSolution> {
    let mesh = &system.mesh;
    let wn = system.wavenumbers();
    let band = opts.near_band * shortest_panel(mesh);
    let info: Vec<(Region, bool)> = targets
        .par_iter()
        .map(|&(x, z)| {
            let rho = x.abs();
            let region = if mesh.curve.contains(rho, z) { Region::Interior } else { Region::Exterior };
            (region, distance_to_curve(mesh, rho, z) < band)
        })
        .collect();
    let gen_in = system.interior_generator(h);
    let gen_out = system.exterior_generator(h);
    let mut samples: Vec<Option<FieldSample>> = vec![None; targets.len()];
    for (region, kind, gen) in [
        (Region::Interior, KernelKind::Cauchy(wn.k_plus), &gen_in),
        (Region::Exterior, KernelKind::Cauchy(wn.k_minus), &gen_out),
    ] {
        let idx: Vec<usize> = (0..targets.len())
            .filter(|&i| info[i].0 == region && (opts.evaluate_near || !info[i].1))
            .collect();
        let pts: Vec<(f64, f64)> = idx.iter().map(|&i| (targets[i].0.abs(), targets[i].1)).collect();
        let vals = volume_cauchy(mesh, &[kind], &[gen], &pts);
        let hscale = match region {
            Region::Interior => wn.khat(),
            Region::Exterior => C64::new(1.0, 0.0),
        };
        for (&i, v) in idx.iter().zip(vals) {
            let f = v[0];
            // A point with x < 0 sits on the mirrored half-plane, where ρ̂
            // and θ̂ point the other way in Cartesian terms; components in
            // the local cylindrical frame are unchanged.
            samples[i] = Some(FieldSample {
                x: targets[i].0,
                z: targets[i].1,
                region,
                near: info[i].1,
                e: [f[5], f[6], f[7]],
                h: [f[1] * hscale, f[2] * hscale, f[3] * hscale],
                helmholtz: [f[0], f[4]],
            });
        }
    }
    let nan = C64::new(f64::NAN, f64::NAN);
    let samples = samples
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.unwrap_or(FieldSample {
                x: targets[i].0,
                z: targets[i].1,
                region: info[i].0,
                near: true,
                e: [nan; 3],
                h: [nan; 3],
                helmholtz: [nan; 2],
            })
        })
        .collect();
    Ok(FieldSolution {
        samples,
        scales: boundary_scales(system, h, f0),
    })
}

/// Digit count Y = −round(log₁₀ ε); `None` when the error is not defined.
pub fn digits(eps: f64) -> Option<i32> {
    if !eps.is_finite() {
        return None;
    }
    if eps <= 0.0 {
        return Some(16);
    }
    Some((-(eps.log10().round()) as i32).min(16))
}

/// Relative errors {E⁺, E⁻, H⁺, H⁻} of `sol` against `reference` on the
/// same targets, normalized by the boundary scales of `sol`. Near-boundary
/// targets are excluded.
pub fn relative_errors(sol: &FieldSolution, reference: &[FieldSample]) -> Result<[f64; 4]> {
    if sol.samples.len() != reference.len() {
        return Err(AxiError::Config("solutions are on different target sets".into()));
    }
    let mut err = [0.0f64; 4];
    for (a, b) in sol.samples.iter().zip(reference) {
        if a.near || b.near || a.region != b.region {
            continue;
        }
        let de: Vec<C64> = (0..3).map(|c| a.e[c] - b.e[c]).collect();
        let dh: Vec<C64> = (0..3).map(|c| a.h[c] - b.h[c]).collect();
        let (ie, ih) = match a.region {
            Region::Interior => (0, 2),
            Region::Exterior => (1, 3),
        };
        err[ie] = err[ie].max(vec_norm(&de));
        err[ih] = err[ih].max(vec_norm(&dh));
    }
    let mut out = [0.0; 4];
    for k in 0..4 {
        out[k] = if sol.scales.0[k] > 0.0 { err[k] / sol.scales.0[k] } else { f64::NAN };
    }
    Ok(out)
}

/// The four digit counts of `sol` against `reference`.
pub fn accuracy_digits(sol: &FieldSolution, reference: &[FieldSample]) -> Result<[Option<i32>; 4]> {
    Ok(relative_errors(sol, reference)?.map(digits))
}

/// Transmission-condition residuals on Γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpReport {
    /// max|ν×E⁺ − ν×(E⁰+E⁻)| / max|E⁰+E⁻|.
    pub tangential_e: f64,
    /// Same for H, with the factor k̂²/α = 1.
    pub tangential_h: f64,
    /// max over nodes with |ν·(E⁰+E⁻)| ≥ 0.1·max of |k̂²ν·E⁺/ν·(E⁰+E⁻) − 1|;
    /// `None` when the normal component vanishes (purely azimuthal E).
    pub normal_jump: Option<f64>,
    /// |∮ν·E⁻dΓ| / (|Γ|·max|E⁻|).
    pub flux_e_minus: f64,
    /// max|F₀|, |F₃| on both sides relative to the largest field trace.
    pub helmholtz: f64,
}

pub fn jump_checks(system: &AssembledSystem, h: &DiracDensity, f0: &DiracDensity) -> JumpReport {
    let kh = system.wavenumbers().khat();
    let tp = system.interior_trace(h);
    let tm = system.exterior_trace(h);
    let mesh = &system.mesh;
    let n = mesh.len();
    let mut tan_e = 0.0f64;
    let mut tan_h = 0.0f64;
    let mut scale_e = 0.0f64;
    let mut scale_h = 0.0f64;
    let mut max_nu = 0.0f64;
    let mut max_em = 0.0f64;
    let mut helm = 0.0f64;
    let mut field = 0.0f64;
    for i in 0..n {
        let tot = |c: usize| tm.component(c)[i] + f0.component(c)[i];
        for c in [7, 8] {
            tan_e = tan_e.max((tp.component(c)[i] - tot(c)).norm());
        }
        for c in [3, 4] {
            tan_h = tan_h.max((tp.component(c)[i] * kh - tot(c)).norm());
        }
        scale_e = scale_e.max(vec_norm(&[tot(6), tot(7), tot(8)]));
        scale_h = scale_h.max(vec_norm(&[tot(2), tot(3), tot(4)]));
        max_nu = max_nu.max(tot(6).norm());
        max_em = max_em.max(vec_norm(&[tm.component(6)[i], tm.component(7)[i], tm.component(8)[i]]));
        for c in [1, 5] {
            helm = helm.max(tp.component(c)[i].norm()).max(tm.component(c)[i].norm());
        }
        for c in [2, 3, 4, 6, 7, 8] {
            field = field.max(tp.component(c)[i].norm()).max(tm.component(c)[i].norm());
        }
    }
    let normal = (max_nu > 1e-12 * scale_e).then(|| {
        (0..n)
            .filter_map(|i| {
                let den = tm.component(6)[i] + f0.component(6)[i];
                (den.norm() >= 0.1 * max_nu).then(|| (kh * kh * tp.component(6)[i] / den - 1.0).norm())
            })
            .fold(0.0, f64::max)
    });
    let flux = mesh.surface_average(tm.component(6)).norm();
    JumpReport {
        tangential_e: tan_e / scale_e.max(f64::MIN_POSITIVE),
        tangential_h: tan_h / scale_h.max(f64::MIN_POSITIVE),
        normal_jump: normal,
        flux_e_minus: flux / max_em.max(f64::MIN_POSITIVE),
        helmholtz: helm / field.max(f64::MIN_POSITIVE),
    }
}

fn rows_of(op: &crate::blocks::BlockOperator, p: Parity, comps: &[usize], scale: C64) -> Array2<C64> {
    let blk = op.block(p);
    let pc = p.components();
    let parts: Vec<Array2<C64>> = comps
        .iter()
        .map(|c| {
            let a = pc.iter().position(|x| x == c).expect("component in parity group");
            blk.slice(s![a..;4, ..]).mapv(|v| v * scale)
        })
        .collect();
    let views: Vec<_> = parts.iter().map(|a| a.view()).collect();
    concatenate(Axis(0), &views).expect("equal widths")
}

/// Singular values of the map h ↦ ((k̂²/⟨σ⟩)E⁺|Γ, E⁻|Γ, H⁺|Γ, H⁻|Γ),
/// descending.
pub fn field_map_singular_values(system: &AssembledSystem) -> Result<Vec<f64>> {
    let n = system.n_nodes();
    let wn = system.wavenumbers();
    let kh = wn.khat();
    let one = C64::new(1.0, 0.0);
    // Hardy projections times the generators; each generator is a diagonal
    // scaling plus at most one rank-one term, applied without a product.
    let hp = system.cauchy.e_plus.hardy_matrix(crate::cauchy::Side::Plus);
    let mut tin = hp.diag_scaled(&[one; 8], &system.params.n_p);
    if let Some(t) = system.term(crate::dirac::AugmentationId::BcRN) {
        let mut e8 = DiracDensity::zeros(n);
        match &system.config.e8_profile {
            Some(p) => e8.component_mut(8).copy_from_slice(p),
            None => e8.component_mut(8).fill(one),
        }
        let s = C64::new(wn.sigma_bracket(), 0.0) / (kh * kh);
        tin.add_rank_one(&hp.apply(&e8.scaled(&[s; 8])), &t.c)?;
    }
    let hm = system.cauchy.e_minus.hardy_matrix(crate::cauchy::Side::Minus).scale(-one);
    let mut tout = hm.diag_scaled(&[one; 8], &system.params.p_p);
    if let Some(t) = system.term(crate::dirac::AugmentationId::BcRD) {
        tout.add_rank_one(&hm.apply(&DiracDensity::unit(n, 6)), &t.c)?;
    }
    let escale = kh * kh / wn.sigma_bracket();
    let mut sv = Vec::new();
    for p in Parity::BOTH {
        let (e_comps, h_comps): (&[usize], &[usize]) = match p {
            Parity::Tm => (&[6, 7], &[4]),
            Parity::Te => (&[8], &[2, 3]),
        };
        let blocks = [
            rows_of(&tin, p, e_comps, escale),
            rows_of(&tout, p, e_comps, one),
            rows_of(&tin, p, h_comps, kh),
            rows_of(&tout, p, h_comps, one),
        ];
        let views: Vec<_> = blocks.iter().map(|a| a.view()).collect();
        let m = concatenate(Axis(0), &views).expect("equal widths");
        let (_, s, _) = m.svd(false, false)?;
        sv.extend(s.iter().copied());
    }
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// σ_max/σ_min of the field map.
pub fn field_map_condition(system: &AssembledSystem) -> Result<f64> {
    let sv = field_map_singular_values(system)?;
    let lo = *sv.last().unwrap_or(&0.0);
    Ok(if lo > 0.0 { sv[0] / lo } else { f64::INFINITY })
}
