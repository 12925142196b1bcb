//! Separation-of-variables reference solution for the unit sphere hit by
//! the partial wave: only the l = 1, m = 0 spherical vector waves appear.
//!
//! With M_z = z(kr) sinϑ θ̂ and N_z = k⁻¹∇×M_z, the fields are
//! E⁰ = c(M_j + N_j), E⁻ = aM_h + bN_h, E⁺ = αM_j + βN_j (at k₊), and
//! H = −i(coefficient-swapped combination), times k̂ inside.

use crate::error::{domain, Result};
use crate::fields::{FieldSample, Region};
use crate::dirac::Wavenumbers;
use crate::specfun::{spherical_bessel_j, spherical_hankel1};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Radial data of one spherical wave at x = kr: z₁(x)/x and
/// D(x) = (x z₁)′/x = z₀ − z₁/x, plus z₁(x).
#[derive(Debug, Clone, Copy)]
struct Radial {
    z1: C64,
    z1_over_x: C64,
    d: C64,
}

fn radial_regular(x: C64) -> Result<Radial> {
    if x.norm() < 1e-6 {
        let x2 = x * x;
        let q = C64::new(1.0 / 3.0, 0.0) - x2 / 30.0;
        let j0 = C64::new(1.0, 0.0) - x2 / 6.0;
        return Ok(Radial { z1: q * x, z1_over_x: q, d: j0 - q });
    }
    let j1 = spherical_bessel_j(1, x)?;
    Ok(Radial {
        z1: j1,
        z1_over_x: j1 / x,
        d: spherical_bessel_j(0, x)? - j1 / x,
    })
}

fn radial_outgoing(x: C64) -> Result<Radial> {
    if x.norm() == 0.0 {
        return Err(domain("spherical_hankel1", "outgoing wave is singular at the origin"));
    }
    let h1 = spherical_hankel1(1, x)?;
    Ok(Radial {
        z1: h1,
        z1_over_x: h1 / x,
        d: spherical_hankel1(0, x)? - h1 / x,
    })
}

/// a·M + b·N at a point, in (ρ̂, ẑ, θ̂).
fn combine(a: C64, b: C64, r: &Radial, sin: f64, cos: f64) -> [C64; 3] {
    // N = r̂ 2(z/x)cosϑ − ϑ̂ sinϑ D, r̂ = (sinϑ, cosϑ), ϑ̂ = (cosϑ, −sinϑ).
    let nr = 2.0 * r.z1_over_x * cos;
    let nt = -r.d * sin;
    [
        b * (nr * sin + nt * cos),
        b * (nr * cos - nt * sin),
        a * r.z1 * sin,
    ]
}

/// Coefficients of the sphere solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MieSolution {
    pub wavenumbers: Wavenumbers,
    /// Incident amplitude √(3/8π).
    pub c: f64,
    /// Scattered M and N amplitudes.
    pub a: C64,
    pub b: C64,
    /// Interior M and N amplitudes.
    pub alpha: C64,
    pub beta: C64,
}

impl MieSolution {
    /// Solves the two 2×2 interface systems on the unit sphere:
    /// α j(x₊) = c j(x₋) + a h(x₋) and k̂α D_j(x₊) = c D_j(x₋) + a D_h(x₋),
    /// β D_j(x₊) = c D_j(x₋) + b D_h(x₋) and k̂β j(x₊) = c j(x₋) + b h(x₋).
    pub fn unit_sphere(wn: Wavenumbers) -> Result<Self> {
        let c = (3.0 / (8.0 * PI)).sqrt();
        let kh = wn.khat();
        let jp = radial_regular(wn.k_plus)?;
        let jm = radial_regular(wn.k_minus)?;
        let hm = radial_outgoing(wn.k_minus)?;
        // [u1 −v1; u2 −v2][coef_in; coef_out] = c [w1; w2]
        let solve = |u1: C64, v1: C64, w1: C64, u2: C64, v2: C64, w2: C64| -> Result<(C64, C64)> {
            let det = -u1 * v2 + v1 * u2;
            if det.norm() == 0.0 || !det.is_finite() {
                return Err(domain("mie", "interface system is singular"));
            }
            let x = (c * w1 * -v2 + v1 * c * w2) / det;
            let y = (u1 * c * w2 - c * w1 * u2) / det;
            Ok((x, y))
        };
        let (alpha, a) = solve(jp.z1, hm.z1, jm.z1, kh * jp.d, hm.d, jm.d)?;
        let (beta, b) = solve(jp.d, hm.d, jm.d, kh * jp.z1, hm.z1, jm.z1)?;
        Ok(Self { wavenumbers: wn, c, a, b, alpha, beta })
    }

    /// Region, E and H at (ρ, z); exterior values are the scattered fields.
    pub fn fields(&self, rho: f64, z: f64) -> Result<(Region, [C64; 3], [C64; 3])> {
        let rho = rho.abs();
        let r = rho.hypot(z);
        let (sin, cos) = if r == 0.0 { (0.0, 1.0) } else { (rho / r, z / r) };
        let wn = &self.wavenumbers;
        if r < 1.0 {
            let rad = radial_regular(wn.k_plus * r)?;
            let e = combine(self.alpha, self.beta, &rad, sin, cos);
            let h = combine(self.beta, self.alpha, &rad, sin, cos).map(|v| -I * wn.khat() * v);
            Ok((Region::Interior, e, h))
        } else {
            let rad = radial_outgoing(wn.k_minus * r)?;
            let e = combine(self.a, self.b, &rad, sin, cos);
            let h = combine(self.b, self.a, &rad, sin, cos).map(|v| -I * v);
            Ok((Region::Exterior, e, h))
        }
    }

    /// Reference samples on a target set in the signed meridian plane.
    pub fn samples(&self, targets: &[(f64, f64)]) -> Result<Vec<FieldSample>> {
        targets
            .iter()
            .map(|&(x, z)| {
                let (region, e, h) = self.fields(x, z)?;
                Ok(FieldSample {
                    x,
                    z,
                    region,
                    near: false,
                    e,
                    h,
                    helmholtz: [C64::new(0.0, 0.0); 2],
                })
            })
            .collect()
    }
}
