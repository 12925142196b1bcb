//! Property-based checks of invariants that hold for every admissible input.

use axidirac::density::{DiracDensity, Parity};
use axidirac::dirac::{ParameterSet, Variant, Wavenumbers};
use axidirac::fields::{digits, Region};
use axidirac::geometry::{Closure, CurveKind, GeneratingCurve, PanelMesh, TrigSeries};
use axidirac::incident::partial_wave;
use axidirac::mie::MieSolution;
use axidirac::quad::gauss_legendre;
use axidirac::specfun::{elliptic_ke, spherical_bessel_j, spherical_bessel_y};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use std::f64::consts::PI;

/// 0 < k₋ ≪ |k₊| ≲ 50 with Im k₊ > 0.
fn regime() -> impl Strategy<Value = Wavenumbers> {
    (-2.0f64..1.7, -10.0f64..-1.0, 0.05f64..PI / 2.0).prop_map(|(lp, ratio, arg)| {
        let kp = 10f64.powf(lp);
        Wavenumbers::new(C64::new(kp * 10f64.powf(ratio), 0.0), C64::from_polar(kp, arg)).unwrap()
    })
}

fn norm3(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parameter_identity_holds_in_the_regime(wn in regime()) {
        for v in [Variant::A, Variant::AInf, Variant::B] {
            let d = ParameterSet::new(v, wn).unwrap().identity_defect();
            prop_assert!(d < 1e-14, "{v}: {d:e}");
        }
    }

    #[test]
    fn wavenumbers_below_the_real_axis_are_rejected(re in -10.0f64..10.0, im in -10.0f64..-1e-12) {
        let good = C64::new(1.0, 1.0);
        prop_assert!(Wavenumbers::new(C64::new(re, im), good).is_err());
        prop_assert!(Wavenumbers::new(good, C64::new(re, im)).is_err());
    }

    #[test]
    fn digit_count_rounds_the_exponent(x in 0.0f64..15.0) {
        let frac = x - x.floor();
        prop_assume!((frac - 0.5).abs() > 1e-6);
        prop_assert_eq!(digits(10f64.powf(-x)), Some(x.round() as i32));
    }

    #[test]
    fn parity_split_roundtrips(n in 1usize..12, seed in proptest::collection::vec(-1.0f64..1.0, 16 * 12)) {
        let data: Vec<C64> = (0..8 * n).map(|i| C64::new(seed[2 * i], seed[2 * i + 1])).collect();
        let h = DiracDensity::from_vec(n, data);
        let tm = h.parity_part(Parity::Tm);
        let te = h.parity_part(Parity::Te);
        prop_assert_eq!(DiracDensity::from_parts(n, &tm, &te), h.clone());
        // Components 1, 4, 6, 7 form the TM group.
        for c in [1, 4, 6, 7] {
            let mut only = DiracDensity::zeros(n);
            only.component_mut(c).copy_from_slice(h.component(c));
            prop_assert!(only.parity_part(Parity::Te).iter().all(|v| *v == C64::new(0.0, 0.0)));
        }
    }

    #[test]
    fn spherical_bessel_wronskian(r in 0.05f64..20.0, arg in 0.0f64..PI / 2.0) {
        let z = C64::from_polar(r, arg);
        prop_assume!(z.im <= 3.0);
        let j0 = spherical_bessel_j(0, z).unwrap();
        let j1 = spherical_bessel_j(1, z).unwrap();
        let y0 = spherical_bessel_y(0, z).unwrap();
        let y1 = spherical_bessel_y(1, z).unwrap();
        // f₁′ = f₀ − 2f₁/z.
        let dj1 = j0 - 2.0 * j1 / z;
        let dy1 = y0 - 2.0 * y1 / z;
        let w = j1 * dy1 - dj1 * y1;
        let want = 1.0 / (z * z);
        prop_assert!((w - want).norm() <= 1e-11 * want.norm(), "z = {z}: {w} vs {want}");
    }

    #[test]
    fn elliptic_integrals_satisfy_legendre_relation(m in 0.001f64..0.999) {
        let (k, e) = elliptic_ke(m).unwrap();
        let (kc, ec) = elliptic_ke(1.0 - m).unwrap();
        let defect = e * kc + ec * k - k * kc - PI / 2.0;
        prop_assert!(defect.abs() < 1e-13, "m = {m}: {defect:e}");
        prop_assert!(e <= PI / 2.0 && k >= PI / 2.0 && e >= 1.0);
    }

    #[test]
    fn gauss_legendre_is_exact_for_degree_2n_minus_1(
        n in prop::sample::select(vec![4usize, 8, 16, 32]),
        coeffs in proptest::collection::vec(-1.0f64..1.0, 64),
        a in -2.0f64..0.0,
        b in 0.5f64..3.0,
    ) {
        let deg = 2 * n - 1;
        let c = &coeffs[..=deg];
        let p = |x: f64| c.iter().rev().fold(0.0, |acc, ci| acc * x + ci);
        let exact: f64 = c
            .iter()
            .enumerate()
            .map(|(k, ci)| ci * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k as f64 + 1.0))
            .sum();
        let scale: f64 = c.iter().map(|v| v.abs()).sum::<f64>() * 3f64.powi(deg as i32 + 1);
        let got = gauss_legendre(n).integrate(a, b, p);
        prop_assert!((got - exact).abs() <= 1e-13 * scale, "n = {n}: {got} vs {exact}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sphere_area_is_4pi(panels in 8usize..24) {
        let m = PanelMesh::discretize(&GeneratingCurve::sphere(), panels, 16).unwrap();
        prop_assert!((m.area() - 4.0 * PI).abs() < 1e-12, "{panels}: {}", m.area());
    }

    #[test]
    fn frames_are_orthonormal_on_perturbed_tori(
        a in proptest::collection::vec(-0.04f64..0.04, 5),
        b in proptest::collection::vec(-0.04f64..0.04, 5),
        panels in 6usize..16,
    ) {
        let radius = TrigSeries { constant: 0.5, cos: a, sin: b };
        let curve = GeneratingCurve::from_series(CurveKind::Custom, Closure::ClosedLoop, (1.5, 0.0), radius).unwrap();
        let m = PanelMesh::discretize(&curve, panels, 16).unwrap();
        let orient = |n: &axidirac::geometry::Node| n.nu.0 * n.tau.1 - n.nu.1 * n.tau.0;
        let sign = orient(&m.nodes[0]).signum();
        let mut flux = 0.0;
        for n in &m.nodes {
            prop_assert!((n.nu.0.hypot(n.nu.1) - 1.0).abs() < 1e-14);
            prop_assert!((n.tau.0.hypot(n.tau.1) - 1.0).abs() < 1e-14);
            prop_assert!((n.nu.0 * n.tau.0 + n.nu.1 * n.tau.1).abs() < 1e-14);
            prop_assert_eq!(orient(n).signum(), sign);
            prop_assert!(n.weight > 0.0);
            flux += n.area_weight() * n.nu.1;
        }
        prop_assert!(flux.abs() < 1e-10 * m.area(), "flux {flux:e}");
    }

    #[test]
    fn mie_interface_conditions_hold(wn in regime()) {
        let sol = MieSolution::unit_sphere(wn).unwrap();
        let kh = wn.khat();
        let side = |s: f64, c: f64, region: Region| {
            let f = match region {
                Region::Interior => 1.0 - 1e-15,
                Region::Exterior => 1.0 + 1e-15,
            };
            let (r, e, h) = sol.fields(s * f, c * f).unwrap();
            assert_eq!(r, region);
            (e, h)
        };
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..16 {
            let (s, c) = (PI * (i as f64 + 0.5) / 16.0).sin_cos();
            let (ei, hi) = side(s, c, Region::Interior);
            let (es, hs) = side(s, c, Region::Exterior);
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
            scale = scale.max(norm3(&et)).max(norm3(&ht)).max(norm3(&ei)).max(norm3(&hi));
        }
        prop_assert!(worst <= 1e-10 * scale, "{wn:?}: {worst:e} vs scale {scale:e}");
    }

    #[test]
    fn mie_without_contrast_does_not_scatter(r in 0.05f64..5.0, arg in 0.0f64..PI / 2.0) {
        let k = C64::from_polar(r, arg);
        let sol = MieSolution::unit_sphere(Wavenumbers::new(k, k).unwrap()).unwrap();
        for (rho, z) in [(0.3, 0.2), (0.8, -0.5), (1.5, 0.7), (0.2, -2.0)] {
            let (region, e, h) = sol.fields(rho, z).unwrap();
            let (e0, h0) = partial_wave(k, rho, z).unwrap();
            let scale = norm3(&e0).max(norm3(&h0));
            let (de, dh): (Vec<C64>, Vec<C64>) = match region {
                Region::Interior => ((0..3).map(|i| e[i] - e0[i]).collect(), (0..3).map(|i| h[i] - h0[i]).collect()),
                Region::Exterior => (e.to_vec(), h.to_vec()),
            };
            prop_assert!(norm3(&de) <= 1e-10 * scale && norm3(&dh) <= 1e-10 * scale,
                "k = {k} at ({rho}, {z}): {:e} {:e}", norm3(&de), norm3(&dh));
        }
    }
}
