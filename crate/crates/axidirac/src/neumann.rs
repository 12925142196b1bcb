//! Neumann-type null spaces of genus-1 bodies: the weight function w for
//! the variant B Neumann augmentation, the superconductor and ordinary
//! conductor eigenfields, the d¹_N excitation diagnostic, and the interior
//! Helmholtz Neumann augmentation demo.

use crate::cauchy::{volume_cauchy, CauchyMatrix, NamedOp, Side};
use crate::density::DiracDensity;
use crate::dirac::Wavenumbers;
use crate::error::{AxiError, Result};
use crate::geometry::PanelMesh;
use crate::gmres::{gmres, GmresOptions};
use crate::kernel::KernelKind;
use crate::quad::gauss_legendre;
use crate::specfun::elliptic_ke;
use ndarray::{Array1, Array2};
use ndarray_linalg::{Factorize, Solve, SVD};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

fn require_genus1(mesh: &PanelMesh) -> Result<()> {
    match mesh.genus() {
        1 => Ok(()),
        g => Err(AxiError::Genus { expected: 1, found: g }),
    }
}

fn area_weights(mesh: &PanelMesh) -> Vec<f64> {
    mesh.nodes.iter().map(|n| n.area_weight()).collect()
}

fn static_cauchy(mesh: &PanelMesh) -> CauchyMatrix {
    CauchyMatrix::assemble_many(mesh, &[KernelKind::Cauchy(ZERO)]).remove(0)
}

/// A coaxial circular wire with unit current.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopSource {
    pub radius: f64,
    pub z0: f64,
}

impl LoopSource {
    /// The loop on the core circle of a genus-1 body, i.e. through the
    /// centre of its cross-section. Its exterior field circulates around
    /// the tube, so it is not a gradient in Ω₋.
    pub fn core_circle(mesh: &PanelMesh) -> Result<Self> {
        require_genus1(mesh)?;
        let (rho, z) = mesh.curve.center;
        if !mesh.curve.contains(rho, z) {
            return Err(AxiError::InvalidCurve("the cross-section centre lies outside the body".into()));
        }
        Ok(Self { radius: rho, z0: z })
    }

    /// Static magnetic field (H_ρ, H_z) of the loop.
    pub fn field(&self, rho: f64, z: f64) -> Result<[f64; 2]> {
        let a = self.radius;
        let rho = rho.abs();
        let zeta = z - self.z0;
        let sum = (a + rho).powi(2) + zeta * zeta;
        let diff = (a - rho).powi(2) + zeta * zeta;
        if diff == 0.0 {
            return Err(crate::error::domain("loop field", "the point lies on the wire"));
        }
        let (k, e) = elliptic_ke(4.0 * a * rho / sum)?;
        let c = 1.0 / (2.0 * PI * sum.sqrt());
        let hz = c * (k + (a * a - rho * rho - zeta * zeta) / diff * e);
        let hr = if rho == 0.0 {
            0.0
        } else {
            c * zeta / rho * (-k + (a * a + rho * rho + zeta * zeta) / diff * e)
        };
        Ok([hr, hz])
    }

    /// ∮H·dl around a meridian circle of radius `r` centred at `center`,
    /// by the trapezoidal rule.
    pub fn circulation(&self, center: (f64, f64), r: f64, n: usize) -> Result<f64> {
        let mut acc = 0.0;
        for i in 0..n {
            let t = 2.0 * PI * i as f64 / n as f64;
            let (s, c) = t.sin_cos();
            let h = self.field(center.0 + r * c, center.1 + r * s)?;
            acc += h[0] * (-s) + h[1] * c;
        }
        Ok(acc * 2.0 * PI * r / n as f64)
    }
}

/// The Neumann weight function with the diagnostics of its computation.
#[derive(Debug, Clone)]
pub struct WeightFunction {
    /// Nodal values, normalized so that ave∫w dΓ = 1.
    pub values: Vec<f64>,
    /// Factor the raw τ·H values were divided by.
    pub normalization: f64,
    pub gmres_iterations: usize,
    pub gmres_residual: f64,
    /// max|E₀g + g|/max|g| for the trace g = w e₃; zero for an exact
    /// exterior static trace.
    pub exterior_defect: f64,
    /// Largest |imaginary part| of the raw values relative to their size.
    pub imaginary_part: f64,
}

impl WeightFunction {
    pub fn average(&self, mesh: &PanelMesh) -> f64 {
        mesh.surface_average(&self.values)
    }
}

fn normalize_real(mesh: &PanelMesh, raw: &[C64]) -> Result<(Vec<f64>, f64, f64)> {
    let scale = raw.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(AxiError::InvalidWeight("the weight function vanishes".into()));
    }
    let imag = raw.iter().map(|v| v.im.abs()).fold(0.0, f64::max) / scale;
    let re: Vec<f64> = raw.iter().map(|v| v.re).collect();
    let ave = mesh.surface_average(&re);
    if ave == 0.0 {
        return Err(AxiError::InvalidWeight("the weight function has zero mean".into()));
    }
    let values: Vec<f64> = re.iter().map(|v| v / ave).collect();
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| **v <= 0.0) {
        return Err(AxiError::InvalidWeight(format!("w = {v:.3e} ≤ 0 at node {i}")));
    }
    Ok((values, ave, imag))
}

/// w = τ·H₀ + K₀^τψ with (I + K₀^ν)ψ = −ν·H₀ solved by GMRES, where H₀ is
/// the core-circle loop field, normalized to unit mean.
pub fn compute_weight(mesh: &PanelMesh) -> Result<WeightFunction> {
    let e0 = static_cauchy(mesh);
    weight_from_static(mesh, &e0)
}

/// As [`compute_weight`] with an already assembled E₀.
pub fn weight_from_static(mesh: &PanelMesh, e0: &CauchyMatrix) -> Result<WeightFunction> {
    require_genus1(mesh)?;
    let source = LoopSource::core_circle(mesh)?;
    let n = mesh.len();
    let aw = area_weights(mesh);
    let knu = e0.named_op(NamedOp::KNu, &aw);
    let ktau = e0.named_op(NamedOp::KTau, &aw);
    let mut nu_h = Vec::with_capacity(n);
    let mut tau_h = Vec::with_capacity(n);
    for nd in &mesh.nodes {
        let h = source.field(nd.rho, nd.z)?;
        nu_h.push(C64::new(-(nd.nu.0 * h[0] + nd.nu.1 * h[1]), 0.0));
        tau_h.push(C64::new(nd.tau.0 * h[0] + nd.tau.1 * h[1], 0.0));
    }
    let opts = GmresOptions {
        tol: 1e-14,
        ..GmresOptions::default()
    };
    let out = gmres(
        |x, y| {
            let kx = knu.dot(&ndarray::ArrayView1::from(x));
            for i in 0..n {
                y[i] = x[i] + kx[i];
            }
        },
        &nu_h,
        &opts,
    );
    if !out.converged {
        return Err(AxiError::Diagnostic(format!(
            "weight equation did not converge: residual {:.3e} after {} iterations",
            out.residual, out.iterations
        )));
    }
    let psi = Array1::from(out.x);
    let raw: Vec<C64> = (&Array1::from(tau_h) + &ktau.dot(&psi)).to_vec();
    let (values, normalization, imaginary_part) = normalize_real(mesh, &raw)?;
    let g = weight_trace(&values);
    let eg = e0.op.apply(&g);
    let exterior_defect = (&eg + &g).max_abs() / g.max_abs();
    Ok(WeightFunction {
        values,
        normalization,
        gmres_iterations: out.iterations,
        gmres_residual: out.residual,
        exterior_defect,
        imaginary_part,
    })
}

/// Trace with w in the τ·F₂ slot: the exterior Neumann eigenfield on Γ.
pub fn weight_trace(w: &[f64]) -> DiracDensity {
    let mut g = DiracDensity::zeros(w.len());
    for (v, x) in g.component_mut(3).iter_mut().zip(w) {
        *v = C64::new(*x, 0.0);
    }
    g
}

/// Null vector of `a` by inverse iteration (shift 0, at most 5 steps,
/// stopping when |a x|/|x| ≤ 1e-10); returns the vector and the final
/// Rayleigh residual.
pub fn inverse_iteration(a: &Array2<C64>, start: Array1<C64>) -> Result<(Array1<C64>, f64)> {
    let lu = a.factorize()?;
    let norm = |v: &Array1<C64>| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut x = start.mapv(|v| v / norm(&start));
    let mut res = norm(&a.dot(&x));
    for _ in 0..5 {
        if res <= 1e-10 {
            break;
        }
        let y = lu.solve(&x)?;
        x = y.mapv(|v| v / norm(&y));
        res = norm(&a.dot(&x));
    }
    Ok((x, res))
}

/// I + sign·𝐌₀ on tangential fields (τ, θ) in node-major order, with 𝐌₀ =
/// −E₀*(3:4, 3:4) discretized by its own Nyström rule from the adjoint
/// kernel (the weighted transpose of E₀ is accurate only weakly).
fn tangential_dipole_system(mesh: &PanelMesh, sign: f64) -> Array2<C64> {
    let n = mesh.len();
    let adj = crate::cauchy::assemble_adjoint_kinds(mesh, &[KernelKind::Cauchy(ZERO)]).remove(0);
    let mut a = Array2::<C64>::eye(2 * n);
    for (ia, ca) in [3usize, 4].into_iter().enumerate() {
        for (ib, cb) in [3usize, 4].into_iter().enumerate() {
            for ((i, j), v) in adj.component_block(ca, cb).indexed_iter() {
                a[[2 * i + ia, 2 * j + ib]] -= *v * sign;
            }
        }
    }
    a
}

/// The second route to w: the θ-component of the null vector f of
/// (I + 𝐌₀) on tangential fields (τ, θ), normalized to unit mean. Returns
/// the weight and the Rayleigh residual.
pub fn null_vector_weight(mesh: &PanelMesh) -> Result<(Vec<f64>, f64)> {
    require_genus1(mesh)?;
    let n = mesh.len();
    let a = tangential_dipole_system(mesh, 1.0);
    let start = Array1::from_shape_fn(2 * n, |i| if i % 2 == 1 { ONE } else { ZERO });
    let (f, res) = inverse_iteration(&a, start)?;
    let theta: Vec<C64> = (0..n).map(|i| f[2 * i + 1]).collect();
    // Rotate the arbitrary complex phase away before taking real parts.
    let pivot = theta.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap_or(ONE);
    let phase = pivot.conj() / pivot.norm();
    let raw: Vec<C64> = theta.iter().map(|v| v * phase).collect();
    let (values, _, _) = normalize_real(mesh, &raw)?;
    Ok((values, res))
}

/// max|a − b| / max|b|.
pub fn relative_deviation(a: &[f64], b: &[f64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    num / b.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// The d¹_N excitation of an incident trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Excitation {
    /// (k̂²/⟨σ⟩) ave∫(f⁰)₈ w dΓ.
    pub d: C64,
    /// |d| / max_Γ|f⁰|.
    pub ratio: f64,
}

pub fn excitation_diagnostic(mesh: &PanelMesh, f0: &DiracDensity, w: &[f64], wn: &Wavenumbers) -> Excitation {
    let kh = wn.khat();
    let prod: Vec<C64> = f0.component(8).iter().zip(w).map(|(f, w)| f * *w).collect();
    let d = kh * kh / wn.sigma_bracket() * mesh.surface_average(&prod);
    Excitation {
        d,
        ratio: d.norm() / f0.max_abs(),
    }
}

/// Static Neumann eigenfields of a genus-1 body on a meridian grid.
#[derive(Debug, Clone)]
pub struct Eigenfields {
    pub targets: Vec<(f64, f64)>,
    pub inside: Vec<bool>,
    /// Ordinary conductor: azimuthal eddy current J_θ (zero outside) and
    /// its magnetic field (H_ρ, H_z), scaled so that max|H| = 1.
    pub eddy_j: Vec<f64>,
    pub eddy_h: Vec<[f64; 2]>,
    /// Superconductor: exterior field (H_ρ, H_z) (zero inside), max|H| = 1,
    /// with the surface current density |J_s| = |w| at the nodes.
    pub super_h: Vec<[f64; 2]>,
    pub surface_current: Vec<f64>,
    pub diagnostics: EigenfieldDiagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenfieldDiagnostics {
    /// Rayleigh residual of the interior null vector.
    pub null_residual: f64,
    /// max|ν·J|/max|J| at the nodes.
    pub normal_j: f64,
    /// Deviation of the nodal θ·J from the least-squares fit c/ρ.
    pub fit_deviation: f64,
    /// max|ν·H|/max|H| at the nodes for the superconductor field.
    pub normal_h_super: f64,
    /// Factor J and the eddy H were divided by.
    pub eddy_scale: f64,
    /// c/eddy_scale, so that the returned J_θ = current_constant/ρ and the
    /// returned H is current_constant times the field of J_θ = 1/ρ.
    pub current_constant: f64,
}

/// The interior harmonic field of Ω₊: the null vector of (I − 𝐌₀), whose
/// τ-component is ν×J = θ·J, as a trace in the θ·F₁ slot. Returns the
/// trace and the Rayleigh residual.
pub fn interior_harmonic_trace(mesh: &PanelMesh) -> Result<(DiracDensity, f64)> {
    require_genus1(mesh)?;
    let n = mesh.len();
    let a = tangential_dipole_system(mesh, -1.0);
    let start = Array1::from_shape_fn(2 * n, |i| if i % 2 == 0 { ONE } else { ZERO });
    let (f, res) = inverse_iteration(&a, start)?;
    let tau: Vec<C64> = (0..n).map(|i| f[2 * i]).collect();
    let pivot = tau.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap_or(ONE);
    let phase = pivot.conj() / pivot.norm();
    let mut g = DiracDensity::zeros(n);
    for (v, t) in g.component_mut(8).iter_mut().zip(&tau) {
        *v = C64::new((t * phase).re, 0.0);
    }
    Ok((g, res))
}

/// Eigenfields of both conductor types. J = cθ̂/ρ is the interior harmonic
/// field; its magnetic field is H = −c ln ρ ẑ + H_h in Ω₊ and H_e in Ω₋,
/// where the curl-free parts are the static Cauchy integral of the jump
/// c ln ρ ẑ across Γ.
pub fn eigenfields(mesh: &PanelMesh, weight: &WeightFunction, targets: &[(f64, f64)]) -> Result<Eigenfields> {
    require_genus1(mesh)?;
    let e0 = static_cauchy(mesh);
    let (gj, null_residual) = interior_harmonic_trace(mesh)?;

    // Fit θ·J = c/ρ.
    let j: Vec<f64> = gj.component(8).iter().map(|v| v.re).collect();
    let inv: Vec<f64> = mesh.nodes.iter().map(|n| 1.0 / n.rho).collect();
    let c = j.iter().zip(&inv).map(|(a, b)| a * b).sum::<f64>() / inv.iter().map(|b| b * b).sum::<f64>();
    let fit: Vec<f64> = inv.iter().map(|b| c * b).collect();
    let fit_deviation = relative_deviation(&j, &fit);

    // Jump data for the eddy field.
    let n = mesh.len();
    let mut gh = DiracDensity::zeros(n);
    for (i, nd) in mesh.nodes.iter().enumerate() {
        let l = c * nd.rho.ln();
        gh.component_mut(2)[i] = C64::new(nd.nu.1 * l, 0.0);
        gh.component_mut(3)[i] = C64::new(nd.tau.1 * l, 0.0);
    }
    let tj = e0.hardy_project(Side::Plus, &gj);
    let jmax = tj.component(8).iter().map(|v| v.norm()).fold(0.0, f64::max);
    let normal_j = tj.component(6).iter().chain(tj.component(7)).map(|v| v.norm()).fold(0.0, f64::max) / jmax;

    let gs = weight_trace(&weight.values);
    let inside: Vec<bool> = targets.iter().map(|&(x, z)| mesh.curve.contains(x.abs(), z)).collect();
    let pts: Vec<(f64, f64)> = targets.iter().map(|&(x, z)| (x.abs(), z)).collect();
    let vals = volume_cauchy(mesh, &[KernelKind::Cauchy(ZERO)], &[&gj, &gh, &gs], &pts);

    let mut eddy_j = Vec::with_capacity(targets.len());
    let mut eddy_h = Vec::with_capacity(targets.len());
    let mut super_h = Vec::with_capacity(targets.len());
    for ((v, &ins), &(rho, _)) in vals.iter().zip(&inside).zip(&pts) {
        let hh = [v[1][1].re, v[1][2].re];
        if ins {
            eddy_j.push(v[0][7].re);
            eddy_h.push([hh[0], hh[1] - c * rho.ln()]);
            super_h.push([0.0, 0.0]);
        } else {
            eddy_j.push(0.0);
            eddy_h.push(hh);
            // F⁻ = −C g for an exterior trace g.
            super_h.push([-v[2][1].re, -v[2][2].re]);
        }
    }
    let hmax = |h: &[[f64; 2]]| h.iter().map(|v| v[0].hypot(v[1])).fold(0.0, f64::max);
    let se = hmax(&eddy_h);
    let ss = hmax(&super_h);
    if se == 0.0 || ss == 0.0 {
        return Err(AxiError::Diagnostic("eigenfield vanishes on the grid".into()));
    }
    for v in eddy_h.iter_mut() {
        *v = [v[0] / se, v[1] / se];
    }
    for v in eddy_j.iter_mut() {
        *v /= se;
    }
    for v in super_h.iter_mut() {
        *v = [v[0] / ss, v[1] / ss];
    }
    let ts = e0.hardy_project(Side::Minus, &gs);
    let hs = (2..=4).flat_map(|k| ts.component(k).iter()).map(|v| v.norm()).fold(0.0, f64::max);
    let normal_h_super = ts.component(2).iter().map(|v| v.norm()).fold(0.0, f64::max) / hs;
    Ok(Eigenfields {
        targets: targets.to_vec(),
        inside,
        eddy_j,
        eddy_h,
        super_h,
        surface_current: weight.values.iter().map(|v| v.abs()).collect(),
        diagnostics: EigenfieldDiagnostics {
            null_residual,
            normal_j,
            fit_deviation,
            normal_h_super,
            eddy_scale: se,
            current_constant: c / se,
        },
    })
}

/// Biot–Savart field of the azimuthal current density J_θ = 1/ρ filling
/// the body, by tensor quadrature over the cross-section in polar
/// coordinates about its centre (Gauss in the radius, trapezoidal in the
/// angle) with the loop formula doing the azimuthal integration. Accurate
/// for targets away from the body.
pub fn biot_savart_eddy(mesh: &PanelMesh, rho: f64, z: f64, n_r: usize, n_s: usize) -> Result<[f64; 2]> {
    require_genus1(mesh)?;
    let curve = &mesh.curve;
    let (rc, zc) = curve.center;
    let gl = gauss_legendre(n_r);
    let mut h = [0.0, 0.0];
    for i in 0..n_s {
        let s = 2.0 * PI * i as f64 / n_s as f64;
        let p = curve.eval(s);
        let big_r = (p.rho - rc).hypot(p.z - zc);
        let (ss, cs) = ((p.z - zc) / big_r, (p.rho - rc) / big_r);
        for (x, wq) in gl.nodes.iter().zip(&gl.weights) {
            let r = 0.5 * big_r * (x + 1.0);
            let (yr, yz) = (rc + r * cs, zc + r * ss);
            let jac = 0.5 * big_r * wq * r * (2.0 * PI / n_s as f64);
            let f = LoopSource { radius: yr, z0: yz }.field(rho, z)?;
            h[0] += f[0] * jac / yr;
            h[1] += f[1] * jac / yr;
        }
    }
    Ok(h)
}

/// One k of the interior Helmholtz Neumann demo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelmholtzDemoPoint {
    pub k: f64,
    /// Relative smallest singular values σ_min/σ_max.
    pub sigma_plain: f64,
    pub sigma_augmented: f64,
    /// max|w_k| (bounded as k → 0).
    pub weight_max: f64,
    /// |c_k h − (−(1/2k²))∫(h − K^ν_k h)dΓ| / |c_k h| on a fixed density.
    pub duality_gap: f64,
    /// c_k h of the solved system versus ∫_{Ω₊}u dx = −k⁻²∫g dΓ.
    pub functional_error: f64,
    pub gmres_iterations: usize,
}

/// Interior Neumann problem for Δu + k²u = 0 with data from u = j₀(k|x|):
/// compares I − K^ν_k with the augmented I − K^ν_k + b c_k, b = 1, where
/// c_k h = ∫h w_k dΓ and w_k = (K_0^{ν′}1 − K_k^{ν′}1)/(2k²) is evaluated
/// from the cancellation-free kernel (E_k − E₀)/(2k²).
pub fn helmholtz_neumann_demo(mesh: &PanelMesh, ks: &[f64]) -> Result<Vec<HelmholtzDemoPoint>> {
    if mesh.genus() != 0 {
        return Err(AxiError::Genus { expected: 0, found: mesh.genus() });
    }
    let n = mesh.len();
    let aw = area_weights(mesh);
    let ones = Array1::from_elem(n, ONE);
    let mut out = Vec::with_capacity(ks.len());
    for &k in ks {
        if !(k > 0.0 && k <= 1.0) {
            return Err(AxiError::Config(format!("demo wavenumber {k} outside (0, 1]")));
        }
        let kc = C64::new(k, 0.0);
        let mut ops = CauchyMatrix::assemble_many(mesh, &[KernelKind::Cauchy(kc), KernelKind::ScaledStaticDifference(kc)]).into_iter();
        let ek = ops.next().expect("assembled");
        let diff = ops.next().expect("assembled");
        let knu = ek.named_op(NamedOp::KNu, &aw);
        // K^{ν′} = −E(1,1), so w_k = [(E_k − E₀)/(2k²)](1,1)·1.
        let wk = diff.named_op(NamedOp::KNuPrime, &aw).dot(&ones).mapv(|v| -v);
        let weight_max = wk.iter().map(|v| v.norm()).fold(0.0, f64::max);

        let mut plain = Array2::<C64>::eye(n);
        plain -= &knu;
        let mut aug = plain.clone();
        for r in 0..n {
            for c in 0..n {
                aug[[r, c]] += wk[c] * aw[c];
            }
        }
        let rel_min = |m: &Array2<C64>| -> Result<f64> {
            let (_, s, _) = m.svd(false, false)?;
            Ok(s[s.len() - 1] / s[0])
        };

        // Two forms of c_k on a fixed smooth density.
        let probe = Array1::from_shape_fn(n, |i| C64::new(1.0 + 0.5 * mesh.nodes[i].z + 0.25 * mesh.nodes[i].rho.powi(2), 0.0));
        let form_w: C64 = (0..n).map(|i| probe[i] * wk[i] * aw[i]).sum();
        let ph = plain.dot(&probe);
        let form_int: C64 = -(0..n).map(|i| ph[i] * aw[i]).sum::<C64>() / (2.0 * k * k);
        let duality_gap = (form_w - form_int).norm() / form_w.norm();

        // g = ∂_ν j₀(k|x|) = −k j₁(k|x|) x̂·ν.
        let g: Array1<C64> = mesh
            .nodes
            .iter()
            .map(|nd| {
                let r = nd.rho.hypot(nd.z);
                let j1 = crate::specfun::spherical_bessel_j(1, C64::new(k * r, 0.0)).unwrap_or(ZERO);
                -k * j1 * ((nd.rho * nd.nu.0 + nd.z * nd.nu.1) / r)
            })
            .collect();
        let int_g: C64 = (0..n).map(|i| g[i] * aw[i]).sum();
        let rhs: Vec<C64> = (0..n).map(|i| 2.0 * g[i] - int_g / (k * k)).collect();
        let sol = gmres(
            |x, y| {
                let v = aug.dot(&ndarray::ArrayView1::from(x));
                y.copy_from_slice(v.as_slice().expect("contiguous"));
            },
            &rhs,
            &GmresOptions {
                tol: 1e-13,
                ..GmresOptions::default()
            },
        );
        let ck: C64 = (0..n).map(|i| sol.x[i] * wk[i] * aw[i]).sum();
        let want = -int_g / (k * k);
        out.push(HelmholtzDemoPoint {
            k,
            sigma_plain: rel_min(&plain)?,
            sigma_augmented: rel_min(&aug)?,
            weight_max,
            duality_gap,
            functional_error: (ck - want).norm() / want.norm(),
            gmres_iterations: sol.iterations,
        });
    }
    Ok(out)
}
