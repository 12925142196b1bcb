//! Axisymmetric incident fields and their eight-component traces.
//!
//! Field vectors are given in the cylindrical frame (ρ̂, ẑ, θ̂), the frame
//! used for volume evaluation throughout the crate.

use crate::density::DiracDensity;
use crate::error::{domain, Result};
use crate::geometry::PanelMesh;
use crate::specfun::{hankel1, spherical_bessel_j};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// (E, H) at a point, each as (ρ̂, ẑ, θ̂) components.
pub type FieldPair = ([C64; 3], [C64; 3]);

type CustomEval = dyn Fn(f64, f64) -> Result<FieldPair> + Send + Sync;

/// Incident field E⁰, H⁰ from sources in the exterior.
#[derive(Clone)]
pub enum IncidentField {
    /// The two lowest order axisymmetric spherical vector waves,
    /// E⁰ = G + k⁻¹∇×G, H⁰ = −iE⁰, G = √(3/8π) j₁(k|x|) ρ|x|⁻¹ θ̂.
    PartialWave { k: C64 },
    /// Field of a magnetized wire on the z-axis:
    /// E⁰ = i c H₁(kρ) θ̂, H⁰ = c H₀(kρ) ẑ with c = 1/|H₁(k)|.
    ZCoil { k: C64 },
    /// User-supplied evaluator.
    Custom { name: String, eval: Arc<CustomEval> },
}

impl fmt::Debug for IncidentField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IncidentField::PartialWave { k } => write!(f, "PartialWave {{ k: {k} }}"),
            IncidentField::ZCoil { k } => write!(f, "ZCoil {{ k: {k} }}"),
            IncidentField::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// Kind names accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncidentKind {
    PartialWave,
    ZCoil,
}

impl std::str::FromStr for IncidentKind {
    type Err = crate::error::AxiError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partial-wave" | "partial_wave" | "pw" => Ok(IncidentKind::PartialWave),
            "zcoil" | "z-coil" => Ok(IncidentKind::ZCoil),
            other => Err(crate::error::AxiError::Config(format!(
                "unknown incident field {other:?}; expected partial-wave or zcoil"
            ))),
        }
    }
}

impl IncidentField {
    pub fn new(kind: IncidentKind, k_minus: C64) -> Self {
        match kind {
            IncidentKind::PartialWave => IncidentField::PartialWave { k: k_minus },
            IncidentKind::ZCoil => IncidentField::ZCoil { k: k_minus },
        }
    }

    pub fn eval(&self, rho: f64, z: f64) -> Result<FieldPair> {
        match self {
            IncidentField::PartialWave { k } => partial_wave(*k, rho, z),
            IncidentField::ZCoil { k } => zcoil(*k, rho),
            IncidentField::Custom { eval, .. } => eval(rho, z),
        }
    }

    /// Trace (0, ν·H⁰, τ·H⁰, θ·H⁰, 0, ν·E⁰, τ·E⁰, θ·E⁰) at the mesh nodes.
    pub fn trace(&self, mesh: &PanelMesh) -> Result<DiracDensity> {
        let n = mesh.len();
        let mut f = DiracDensity::zeros(n);
        for (i, nd) in mesh.nodes.iter().enumerate() {
            let (e, h) = self.eval(nd.rho, nd.z)?;
            let t = trace_components(nd.nu, nd.tau, &e, &h);
            for c in 0..8 {
                f.component_mut(c + 1)[i] = t[c];
            }
        }
        Ok(f)
    }
}

/// Eight trace components from E and H in the cylindrical frame.
pub fn trace_components(nu: (f64, f64), tau: (f64, f64), e: &[C64; 3], h: &[C64; 3]) -> [C64; 8] {
    let zero = C64::new(0.0, 0.0);
    let dot = |v: (f64, f64), f: &[C64; 3]| f[0] * v.0 + f[1] * v.1;
    [zero, dot(nu, h), dot(tau, h), h[2], zero, dot(nu, e), dot(tau, e), e[2]]
}

/// j₁(x)/x and j₀(x) − j₁(x)/x, both regular at x = 0.
fn radial_factors(x: C64) -> Result<(C64, C64)> {
    if x.norm() < 1e-8 {
        let x2 = x * x;
        let q = C64::new(1.0 / 3.0, 0.0) - x2 / 30.0;
        let j0 = C64::new(1.0, 0.0) - x2 / 6.0;
        return Ok((q, j0 - q));
    }
    let q = spherical_bessel_j(1, x)? / x;
    Ok((q, spherical_bessel_j(0, x)? - q))
}

/// E⁰, H⁰ of the partial wave. With q = j₁(kr)/(kr), p = j₀(kr) − q and
/// the polar angle ϑ: E_ρ = c sinϑ cosϑ (2q − p), E_z = c(2q cos²ϑ +
/// p sin²ϑ), E_θ = c j₁(kr) sinϑ, c = √(3/8π).
pub fn partial_wave(k: C64, rho: f64, z: f64) -> Result<FieldPair> {
    let c = (3.0 / (8.0 * PI)).sqrt();
    let r = rho.hypot(z);
    let (s, co) = if r == 0.0 { (0.0, 1.0) } else { (rho / r, z / r) };
    let x = k * r;
    let (q, p) = radial_factors(x)?;
    let j1 = q * x;
    let e = [
        (2.0 * q - p) * (c * s * co),
        (2.0 * q * co * co + p * s * s) * c,
        j1 * (c * s),
    ];
    let h = e.map(|v| -I * v);
    Ok((e, h))
}

/// E⁰, H⁰ of the z-coil field; undefined on the axis.
pub fn zcoil(k: C64, rho: f64) -> Result<FieldPair> {
    let rho = rho.abs();
    if rho == 0.0 {
        return Err(domain("zcoil", "the field is singular on the z-axis"));
    }
    let c = 1.0 / hankel1(1, k)?.norm();
    let zero = C64::new(0.0, 0.0);
    let e = [zero, zero, I * c * hankel1(1, k * rho)?];
    let h = [zero, hankel1(0, k * rho)? * c, zero];
    Ok((e, h))
}

/// Curl of an axisymmetric field given by an evaluator, by central
/// differences with step `d`; used by tests and diagnostics.
pub fn fd_curl(f: impl Fn(f64, f64) -> [C64; 3], rho: f64, z: f64, d: f64) -> [C64; 3] {
    let dz = |g: &dyn Fn([C64; 3]) -> C64| (g(f(rho, z + d)) - g(f(rho, z - d))) / (2.0 * d);
    let drho = |g: &dyn Fn([C64; 3]) -> C64| (g(f(rho + d, z)) - g(f(rho - d, z))) / (2.0 * d);
    let a = f(rho, z);
    [
        -dz(&|v| v[2]),
        drho(&|v| v[2]) + a[2] / rho,
        dz(&|v| v[0]) - drho(&|v| v[1]),
    ]
}
