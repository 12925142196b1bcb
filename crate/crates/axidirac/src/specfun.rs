//! Special functions for complex arguments in the closed upper half-plane.
//!
//! Hankel functions of orders 0 and 1 use power series for |z| ≤ 2 and a
//! Laplace-type integral over (0, ∞) otherwise. Spherical Bessel and Hankel
//! functions of orders 0..=2 use closed forms, with a series for j_n near
//! the origin where the closed forms cancel.

use crate::error::{domain, Result};
use crate::quad::gauss_legendre;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Normalized Helmholtz fundamental solution Φ_k(r) = e^{ikr}/(2πr).
pub fn phi_k(k: C64, r: f64) -> Result<C64> {
    if !(r > 0.0) {
        return Err(domain("phi_k", format!("r must be positive, got {r}")));
    }
    Ok((I * k * r).exp() / (2.0 * PI * r))
}

fn check_upper(func: &'static str, z: C64) -> Result<()> {
    if !z.is_finite() {
        return Err(domain(func, "argument is not finite"));
    }
    if z.im < -1e-14 * z.norm() {
        return Err(domain(func, format!("Im z must be ≥ 0, got {z}")));
    }
    Ok(())
}

/// Hankel function of the first kind H_n^{(1)}(z), n ∈ {0, 1}.
pub fn hankel1(n: u32, z: C64) -> Result<C64> {
    check_upper("hankel1", z)?;
    if n > 1 {
        return Err(domain("hankel1", format!("order {n} not supported")));
    }
    if z == C64::new(0.0, 0.0) {
        return Err(domain("hankel1", "z = 0 is a singular point"));
    }
    if z.norm() <= 2.0 {
        let (j, y) = bessel_jy_series(n, z);
        Ok(j + I * y)
    } else {
        Ok(hankel1_laplace(n, z))
    }
}

/// J_n and Y_n by their ascending series, accurate for |z| ≲ 2.
fn bessel_jy_series(n: u32, z: C64) -> (C64, C64) {
    let q = -(z * z) / 4.0;
    let log_half = (z / 2.0).ln();
    match n {
        0 => {
            // J₀ = Σ q^m/(m!)², Y₀ = (2/π)[(ln(z/2)+γ)J₀ + Σ_{m≥1} H_m (−1)^{m+1}(z²/4)^m/(m!)²]
            let mut term = C64::new(1.0, 0.0);
            let mut j = term;
            let mut harm = 0.0;
            let mut ysum = C64::new(0.0, 0.0);
            for m in 1..60 {
                let mf = m as f64;
                term *= q / (mf * mf);
                harm += 1.0 / mf;
                j += term;
                ysum -= term * harm;
                if term.norm() < 1e-18 * j.norm().max(1e-300) {
                    break;
                }
            }
            let y = (2.0 / PI) * ((log_half + EULER_GAMMA) * j + ysum);
            (j, y)
        }
        _ => {
            // J₁ = (z/2) Σ q^m/(m!(m+1)!)
            // Y₁ = −2/(πz) + (2/π) ln(z/2) J₁ − (1/π) Σ (ψ(m+1)+ψ(m+2)) (z/2)^{2m+1} (−1)^m/(m!(m+1)!)
            let half = z / 2.0;
            let mut term = half;
            let mut j = term;
            let mut psi_m1 = -EULER_GAMMA;
            let mut psi_m2 = 1.0 - EULER_GAMMA;
            let mut ysum = term * (psi_m1 + psi_m2);
            for m in 1..60 {
                let mf = m as f64;
                term *= q / (mf * (mf + 1.0));
                psi_m1 += 1.0 / mf;
                psi_m2 += 1.0 / (mf + 1.0);
                j += term;
                ysum += term * (psi_m1 + psi_m2);
                if term.norm() < 1e-18 * j.norm().max(1e-300) {
                    break;
                }
            }
            let y = -2.0 / (PI * z) + (2.0 / PI) * log_half * j - ysum / PI;
            (j, y)
        }
    }
}

/// H_ν^{(1)}(z) = √(2/(πz)) e^{i(z−νπ/2−π/4)}/Γ(ν+½) ∫₀^∞ e^{−u} u^{ν−½} (1 + iu/(2z))^{ν−½} du,
/// with u = v² and a composite Gauss–Legendre rule on v ∈ [0, 6.5].
fn hankel1_laplace(n: u32, z: C64) -> C64 {
    let g = gauss_legendre(16);
    let panels = 13;
    let width = 6.5 / panels as f64;
    let scale = I / (2.0 * z);
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        for (x, w) in g.nodes.iter().zip(&g.weights) {
            let v = mid + 0.5 * width * x;
            let v2 = v * v;
            let root = (1.0 + scale * v2).sqrt();
            let f = if n == 0 {
                2.0 / root
            } else {
                2.0 * v2 * root
            };
            acc += f * (-v2).exp() * (w * 0.5 * width);
        }
    }
    let nu = n as f64;
    let gamma = if n == 0 { PI.sqrt() } else { 0.5 * PI.sqrt() };
    (2.0 / (PI * z)).sqrt() * (I * (z - nu * PI / 2.0 - PI / 4.0)).exp() * acc / gamma
}

/// Spherical Bessel function j_n(z), n ≤ 2.
pub fn spherical_bessel_j(n: u32, z: C64) -> Result<C64> {
    check_upper("spherical_bessel_j", z)?;
    if n > 2 {
        return Err(domain("spherical_bessel_j", format!("order {n} not supported")));
    }
    if z.norm() < 1.0 {
        return Ok(spherical_j_series(n, z));
    }
    let (s, c) = (z.sin(), z.cos());
    Ok(match n {
        0 => s / z,
        1 => s / (z * z) - c / z,
        _ => (3.0 / (z * z) - 1.0) * s / z - 3.0 * c / (z * z),
    })
}

/// j_n(z) = z^n/(2n+1)!! Σ_m (−z²/2)^m / (m! (2n+3)(2n+5)…(2n+2m+1)).
fn spherical_j_series(n: u32, z: C64) -> C64 {
    let mut dfact = 1.0;
    for k in 1..=n {
        dfact *= (2 * k + 1) as f64;
    }
    let q = -(z * z) / 2.0;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for m in 1..40 {
        term *= q / (m as f64 * (2 * n + 2 * m + 1) as f64);
        sum += term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    z.powu(n) / dfact * sum
}

/// Spherical Bessel function of the second kind y_n(z), n ≤ 2.
pub fn spherical_bessel_y(n: u32, z: C64) -> Result<C64> {
    check_upper("spherical_bessel_y", z)?;
    if z == C64::new(0.0, 0.0) {
        return Err(domain("spherical_bessel_y", "z = 0 is a singular point"));
    }
    let (s, c) = (z.sin(), z.cos());
    Ok(match n {
        0 => -c / z,
        1 => -c / (z * z) - s / z,
        2 => (1.0 - 3.0 / (z * z)) * c / z - 3.0 * s / (z * z),
        _ => return Err(domain("spherical_bessel_y", format!("order {n} not supported"))),
    })
}

/// Spherical Hankel function of the first kind h_n^{(1)}(z), n ≤ 2.
pub fn spherical_hankel1(n: u32, z: C64) -> Result<C64> {
    check_upper("spherical_hankel1", z)?;
    if z == C64::new(0.0, 0.0) {
        return Err(domain("spherical_hankel1", "z = 0 is a singular point"));
    }
    let e = (I * z).exp();
    Ok(match n {
        0 => -I * e / z,
        1 => -e * (z + I) / (z * z),
        2 => I * e * (z * z + 3.0 * I * z - 3.0) / (z * z * z),
        _ => return Err(domain("spherical_hankel1", format!("order {n} not supported"))),
    })
}

/// Complete elliptic integrals K(m) and E(m) with parameter m = k², via the
/// arithmetic–geometric mean.
pub fn elliptic_ke(m: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&m) {
        return Err(domain("elliptic_ke", format!("m must lie in [0, 1), got {m}")));
    }
    let mut a = 1.0;
    let mut b = (1.0 - m).sqrt();
    let mut c2_sum = 0.5 * m;
    let mut pow = 0.5;
    for _ in 0..60 {
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        c2_sum += pow * c * c;
        if c.abs() < 1e-17 * a {
            break;
        }
    }
    let k = PI / (2.0 * a);
    Ok((k, k * (1.0 - c2_sum)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{adaptive_gk, adaptive_gk_real};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    /// J_n(z) = (1/π)∫₀^π cos(nτ − z sin τ) dτ by the trapezoidal rule on the
    /// periodic extension.
    fn bessel_j_oracle(n: u32, z: C64) -> C64 {
        let m = 4000;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..m {
            let t = 2.0 * PI * (i as f64 + 0.5) / m as f64;
            acc += (n as f64 * t - z * t.sin()).cos();
        }
        acc / m as f64
    }

    /// Y_n(z) = (1/π)∫₀^π sin(z sin τ − nτ) dτ − (1/π)∫₀^∞ (e^{nt} + (−1)^n e^{−nt}) e^{−z sinh t} dt, Re z > 0.
    fn bessel_y_oracle(n: u32, z: C64) -> C64 {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let a = adaptive_gk(1, 0.0, PI, 1e-14, 1e-300, 2000, |t, out| {
            out[0] = (z * t.sin() - nf * t).sin();
        })[0];
        let tmax = (60.0 / z.re).asinh() + 1.0;
        let b = adaptive_gk(1, 0.0, tmax, 1e-14, 1e-300, 2000, |t, out| {
            out[0] = ((nf * t).exp() + sign * (-nf * t).exp()) * (-z * t.sinh()).exp();
        })[0];
        (a - b) / PI
    }

    #[test]
    fn phi_k_examples() {
        assert!((phi_k(c(0.0, 0.0), 1.0).unwrap() - 1.0 / (2.0 * PI)).norm() < 1e-16);
        let v = phi_k(c(0.0, 1.0), 1.0).unwrap();
        assert!((v - (-1.0f64).exp() / (2.0 * PI)).norm() < 1e-16);
        let k = c(1.0, 1.0);
        let direct = C64::from_polar((-0.5f64).exp(), 0.5) / PI;
        assert!(rel(phi_k(k, 0.5).unwrap(), direct) < 1e-15);
        assert!(phi_k(k, 0.0).is_err());
    }

    /// H_ν(z) = (2e^{−iνπ/2}/(πi)) ∫₀^∞ e^{iz cosh t} cosh(νt) dt for 0 < arg z < π.
    fn hankel_cosh_oracle(n: u32, z: C64) -> C64 {
        let tmax = (1.0 + 40.0 / z.im).acosh() + 0.2;
        let v = adaptive_gk(1, 0.0, tmax, 1e-14, 1e-300, 20000, |t, out| {
            out[0] = (I * z * t.cosh()).exp() * (n as f64 * t).cosh();
        })[0];
        2.0 * (-I * (n as f64) * PI / 2.0).exp() / (PI * I) * v
    }

    #[test]
    fn hankel_matches_integral_oracles() {
        let mut worst: f64 = 0.0;
        for &r in &[0.05, 0.7, 1.9, 2.1, 4.0, 11.0, 35.0, 100.0] {
            for &arg in &[0.0, 0.4, 0.8, 1.2, 1.5] {
                let z = C64::from_polar(r, arg);
                for n in 0..=1 {
                    let h = hankel1(n, z).unwrap();
                    let o = if arg == 0.0 {
                        bessel_j_oracle(n, z) + I * bessel_y_oracle(n, z)
                    } else {
                        hankel_cosh_oracle(n, z)
                    };
                    worst = worst.max(rel(h, o));
                }
            }
        }
        assert!(worst < 1e-12, "worst relative error {worst}");
    }

    #[test]
    fn hankel_on_imaginary_axis_matches_modified_bessel() {
        // H_n(iy) = 2/(π i^{n+1}) K_n(y), K_n(y) = ∫₀^∞ e^{−y cosh t} cosh(nt) dt.
        for &y in &[0.3, 1.5, 2.5, 8.0, 60.0, 100.0] {
            for n in 0..=1u32 {
                let tmax = (800.0f64 / y).ln().max(1.0) + 2.0;
                let kn = adaptive_gk_real(0.0, tmax, 1e-14, |t| {
                    (-y * t.cosh() + y).exp() * (n as f64 * t).cosh()
                }) * (-y).exp();
                let oracle = 2.0 / (PI * I.powu(n + 1)) * kn;
                assert!(rel(hankel1(n, c(0.0, y)).unwrap(), oracle) < 1e-12, "n={n} y={y}");
            }
        }
    }

    #[test]
    fn hankel_derivative_relation_holds_across_the_quadrant() {
        // H₀′ = −H₁, checked by central differences; this also ties the
        // series and integral branches together across |z| = 2.
        for &r in &[0.1, 1.0, 1.99, 2.01, 7.0, 50.0, 100.0] {
            for &arg in &[0.0, 0.5, 1.0, 1.5] {
                let z = C64::from_polar(r, arg);
                let h = 1e-5 * r.min(1.0);
                let d = (hankel1(0, z + h).unwrap() - hankel1(0, z - h).unwrap()) / (2.0 * h);
                let h1 = hankel1(1, z).unwrap();
                assert!(rel(-d, h1) < 1e-8, "z={z}");
            }
        }
    }

    #[test]
    fn real_part_of_h0_is_j0() {
        for &x in &[0.5, 1.0, 2.4048255576957728, 5.0, 30.0] {
            let h = hankel1(0, c(x, 0.0)).unwrap();
            assert!((h.re - bessel_j_oracle(0, c(x, 0.0)).re).abs() < 1e-13);
        }
        assert!(hankel1(0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn spherical_j1_over_z_tends_to_one_third() {
        let v = spherical_bessel_j(1, c(1e-8, 0.0)).unwrap() / 1e-8;
        assert!((v.re - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn spherical_wronskian() {
        for &x in &[0.3, 1.0, 4.5, 20.0] {
            let z = c(x, 0.0);
            let h = 1e-5;
            let j1 = spherical_bessel_j(1, z).unwrap();
            let y1 = spherical_bessel_y(1, z).unwrap();
            let dj = (spherical_bessel_j(1, z + h).unwrap() - spherical_bessel_j(1, z - h).unwrap()) / (2.0 * h);
            let dy = (spherical_bessel_y(1, z + h).unwrap() - spherical_bessel_y(1, z - h).unwrap()) / (2.0 * h);
            let w = j1 * dy - dj * y1;
            assert!((w.re * x * x - 1.0).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn spherical_functions_match_legendre_integral() {
        // j_n(z) = ½(−i)^n ∫_{−1}^{1} e^{izt} P_n(t) dt.
        let p = |n: u32, t: f64| match n {
            0 => 1.0,
            1 => t,
            _ => 1.5 * t * t - 0.5,
        };
        let mut worst: f64 = 0.0;
        // Below |z| ≈ 0.5 the oracle itself cancels; the series is checked
        // against its leading terms instead.
        for &r in &[0.5, 0.99, 1.01, 3.0, 17.0, 60.0] {
            for &arg in &[0.0, 0.7, 1.3, PI / 2.0] {
                let z = C64::from_polar(r, arg);
                for n in 0..=2u32 {
                    let integral = adaptive_gk(1, -1.0, 1.0, 1e-15, 1e-300, 4000, |t, out| {
                        out[0] = (I * z * t).exp() * p(n, t);
                    })[0];
                    let oracle = 0.5 * (-I).powu(n) * integral;
                    worst = worst.max(rel(spherical_bessel_j(n, z).unwrap(), oracle));
                }
            }
        }
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn spherical_j_small_argument_leading_terms() {
        for &z in &[c(1e-3, 0.0), c(3e-3, 4e-3), c(0.0, 1e-2)] {
            let z2 = z * z;
            let j0 = 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
            let j1 = z / 3.0 * (1.0 - z2 / 10.0 + z2 * z2 / 280.0);
            let j2 = z2 / 15.0 * (1.0 - z2 / 14.0 + z2 * z2 / 504.0);
            assert!(rel(spherical_bessel_j(0, z).unwrap(), j0) < 1e-15);
            assert!(rel(spherical_bessel_j(1, z).unwrap(), j1) < 1e-15);
            assert!(rel(spherical_bessel_j(2, z).unwrap(), j2) < 1e-15);
        }
    }

    #[test]
    fn spherical_hankel_is_j_plus_i_y() {
        for &z in &[c(0.7, 0.0), c(2.0, 1.0), c(10.0, 3.0)] {
            for n in 0..=2 {
                let h = spherical_hankel1(n, z).unwrap();
                let jy = spherical_bessel_j(n, z).unwrap() + I * spherical_bessel_y(n, z).unwrap();
                assert!(rel(h, jy) < 1e-13);
            }
        }
    }

    #[test]
    fn elliptic_limits_and_quadrature_oracle() {
        let (k, e) = elliptic_ke(0.0).unwrap();
        assert!((k - PI / 2.0).abs() < 1e-15 && (e - PI / 2.0).abs() < 1e-15);
        for &m in &[0.1, 0.5, 0.9, 0.999] {
            let (k, e) = elliptic_ke(m).unwrap();
            let ko = adaptive_gk_real(0.0, PI / 2.0, 1e-15, |t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt());
            let eo = adaptive_gk_real(0.0, PI / 2.0, 1e-15, |t| (1.0 - m * t.sin().powi(2)).sqrt());
            assert!((k - ko).abs() < 1e-13 * ko, "K({m})");
            assert!((e - eo).abs() < 1e-13 * eo, "E({m})");
        }
        let (k, e) = elliptic_ke(1.0 - 1e-12).unwrap();
        assert!(k > 14.0 && (e - 1.0).abs() < 1e-9);
        assert!(elliptic_ke(1.0).is_err());
    }
}
