//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! A subset can be selected by number:
//! `cargo test --release -p axidirac --test acceptance -- 3 8`.
//! Criterion 7 reuses the solves of criteria 3 to 5, which then run too.

mod common;

use axidirac::cauchy::CauchyMatrix;
use axidirac::dirac::limit::{numerical_nullity, quasistatic_limit, StaticOperators};
use axidirac::dirac::{AssembledSystem, CauchyPair, ParameterSet, SystemConfig, Variant, Wavenumbers};
use axidirac::fields::{
    accuracy_digits, evaluate_fields, field_map_condition, jump_checks, meridian_grid, EvalOptions, FieldSolution,
    JumpReport,
};
use axidirac::geometry::{CurveKind, PanelMesh};
use axidirac::incident::{IncidentField, IncidentKind};
use axidirac::mie::MieSolution;
use axidirac::neumann::{
    compute_weight, eigenfields, excitation_diagnostic, helmholtz_neumann_demo, null_vector_weight, relative_deviation,
};
use axidirac::Result;
use common::{all_at_least, digits_str, mesh, smooth_density};
use num_complex::Complex64 as C64;
use rand::{rngs::StdRng, Rng, SeedableRng};
use std::f64::consts::PI;
use std::time::Instant;

/// Relative residual below which a stagnated GMRES run counts as converged.
const CONVERGED_RESIDUAL: f64 = 1e-12;

struct Verdict {
    pass: bool,
    detail: String,
}

/// Boundary diagnostics of one solve, kept for the invariant checks.
struct SolveRecord {
    label: String,
    /// The formulation represents this problem without a loss of digits.
    accurate: bool,
    converged: bool,
    jumps: JumpReport,
}

#[derive(Default)]
struct Context {
    solves: Vec<SolveRecord>,
}

struct Solved {
    fields: FieldSolution,
    iterations: usize,
}

fn grid() -> Vec<(f64, f64)> {
    meridian_grid((-2.0, 2.0), (-2.0, 2.0), 30, 30)
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn solve_and_record(
    ctx: &mut Context,
    label: &str,
    accurate: bool,
    sys: &AssembledSystem,
    inc: IncidentKind,
) -> Result<Solved> {
    let f0 = IncidentField::new(inc, sys.wavenumbers().k_minus).trace(&sys.mesh)?;
    let rep = sys.solve(&f0)?;
    let fields = evaluate_fields(sys, &rep.h, &f0, &grid(), &EvalOptions::default())?;
    ctx.solves.push(SolveRecord {
        label: label.to_string(),
        accurate,
        converged: rep.converged || rep.residual <= CONVERGED_RESIDUAL,
        jumps: jump_checks(sys, &rep.h, &f0),
    });
    Ok(Solved {
        fields,
        iterations: rep.iterations,
    })
}

/// Keeps only the Cauchy matrices of a system, freeing the rest.
fn into_pair(sys: AssembledSystem) -> CauchyPair {
    sys.cauchy
}

fn criterion_1() -> Result<Verdict> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        // 0 < k₋ ≪ |k₊| ≲ 50, Im k ≥ 0.
        let kp = 10f64.powf(rng.gen_range(-2.0..1.7));
        let km = kp * 10f64.powf(rng.gen_range(-10.0..-1.0));
        let arg = rng.gen_range(0.05..PI / 2.0);
        let wn = Wavenumbers::new(c(km, 0.0), C64::from_polar(kp, arg))?;
        for v in [Variant::A, Variant::AInf, Variant::B] {
            worst = worst.max(ParameterSet::new(v, wn)?.identity_defect());
        }
    }
    Ok(Verdict {
        pass: worst < 1e-14,
        detail: format!("max |P(rM'+M)P' - I| = {worst:.2e} over 50 pairs x 3 variants (< 1e-14)"),
    })
}

fn criterion_2() -> Result<Verdict> {
    let m = mesh(CurveKind::Sphere, 16);
    let h = smooth_density(&m, 0.3);
    let mut pass = true;
    let mut parts = Vec::new();
    for k in [c(0.0, 0.0), c(1e-4, 0.0), c(1.0, 1.0), c(10.0, 10.0)] {
        let d = CauchyMatrix::assemble(&m, k)?.idempotency_defect_on(&h);
        pass &= d <= 1e-6;
        parts.push(format!("k={k}: {d:.1e}"));
    }
    Ok(Verdict {
        pass,
        detail: format!("max|E²h - h|/max|h| on a smooth density (<= 1e-6): {}", parts.join(", ")),
    })
}

fn criterion_3(ctx: &mut Context) -> Result<Verdict> {
    let m = mesh(CurveKind::Sphere, 16);
    let targets = grid();
    let mut pass = true;
    let mut parts = Vec::new();
    for km in [1e-4, 1e-8] {
        let wn = Wavenumbers::new(c(km, 0.0), c(1.0, 1.0))?;
        let sys = AssembledSystem::build(&m, wn, SystemConfig::new(Variant::B), None)?;
        let s = solve_and_record(ctx, &format!("sphere B k-={km:e}"), true, &sys, IncidentKind::PartialWave)?;
        let mie = MieSolution::unit_sphere(wn)?.samples(&targets)?;
        let d = accuracy_digits(&s.fields, &mie)?;
        pass &= all_at_least(&d, 6);
        parts.push(format!("k-={km:e}: {} ({} it)", digits_str(&d), s.iterations));
    }
    Ok(Verdict {
        pass,
        detail: format!("B-aug0 vs Mie, digits >= 6: {}", parts.join("; ")),
    })
}

fn criterion_4(ctx: &mut Context) -> Result<Verdict> {
    let coarse = mesh(CurveKind::RotatedStarfish, 32);
    let fine = coarse.overresolve()?;
    let wn = Wavenumbers::new(c(1e-8, 0.0), c(1.0, 1.0))?;
    let pw = IncidentKind::PartialWave;
    let reference = {
        let sys = AssembledSystem::build(&fine, wn, SystemConfig::new(Variant::B), None)?;
        solve_and_record(ctx, "starfish B reference", true, &sys, pw)?.fields
    };
    let pair = CauchyPair::assemble(&coarse, &wn, false);
    let sys = AssembledSystem::from_cauchy(&coarse, wn, SystemConfig::new(Variant::B), pair, None)?;
    let b = solve_and_record(ctx, "starfish B", true, &sys, pw)?;
    let sys = AssembledSystem::from_cauchy(&coarse, wn, SystemConfig::new(Variant::AInf), into_pair(sys), None)?;
    let a = solve_and_record(ctx, "starfish Ainf", false, &sys, pw)?;
    let db = accuracy_digits(&b.fields, &reference.samples)?;
    let da = accuracy_digits(&a.fields, &reference.samples)?;
    let gap = match (db[0], da[0]) {
        (Some(x), Some(y)) => x - y,
        _ => i32::MIN,
    };
    Ok(Verdict {
        pass: all_at_least(&db, 6) && b.iterations <= 99 && gap >= 3,
        detail: format!(
            "B-aug0 {} in {} it (>= 6, <= 99 it); Ainf-aug {} in {} it, E+ gap {gap} (>= 3)",
            digits_str(&db),
            b.iterations,
            digits_str(&da),
            a.iterations
        ),
    })
}

fn criterion_5(ctx: &mut Context) -> Result<Verdict> {
    let coarse = mesh(CurveKind::StarfishTorus, 48);
    let fine = coarse.overresolve()?;
    let wc = compute_weight(&coarse)?.values;
    let wf = compute_weight(&fine)?.values;
    let hi = Wavenumbers::new(c(1e-8, 0.0), c(1.0, 1.0))?;
    let med = Wavenumbers::new(c(1e-8, 0.0), c(1e-4, 1e-4))?;
    let (pw, zc) = (IncidentKind::PartialWave, IncidentKind::ZCoil);
    let cfg = SystemConfig::new;

    // References on the finer mesh; each Cauchy pair is moved from one
    // system to the next rather than cloned.
    let sys = AssembledSystem::build(&fine, hi, cfg(Variant::B), Some(&wf))?;
    let ref_pw = solve_and_record(ctx, "torus B reference, partial wave", true, &sys, pw)?.fields;
    let sys = AssembledSystem::from_cauchy(&fine, hi, cfg(Variant::AInf), into_pair(sys), Some(&wf))?;
    let ref_zc = solve_and_record(ctx, "torus Ainf reference, z-coil", true, &sys, zc)?.fields;
    drop(sys);

    let sys = AssembledSystem::build(&coarse, hi, cfg(Variant::B), Some(&wc))?;
    let a = solve_and_record(ctx, "torus B, partial wave", true, &sys, pw)?;
    let cc = solve_and_record(ctx, "torus B, z-coil", false, &sys, zc)?;
    let sys = AssembledSystem::from_cauchy(&coarse, hi, cfg(Variant::AInf), into_pair(sys), Some(&wc))?;
    let b = solve_and_record(ctx, "torus Ainf, z-coil", true, &sys, zc)?;
    drop(sys);

    let sys = AssembledSystem::build(&fine, med, cfg(Variant::AInf), Some(&wf))?;
    let ref_med = solve_and_record(ctx, "torus Ainf reference, z-coil, medium", true, &sys, zc)?.fields;
    drop(sys);
    let sys = AssembledSystem::build(&coarse, med, cfg(Variant::AInf), Some(&wc))?;
    let d = solve_and_record(ctx, "torus Ainf, z-coil, medium", true, &sys, zc)?;
    drop(sys);

    let da = accuracy_digits(&a.fields, &ref_pw.samples)?;
    let db = accuracy_digits(&b.fields, &ref_zc.samples)?;
    let dc = accuracy_digits(&cc.fields, &ref_zc.samples)?;
    let dd = accuracy_digits(&d.fields, &ref_med.samples)?;
    let pass_a = all_at_least(&da, 6) && a.iterations <= 111;
    let pass_b = all_at_least(&db, 6) && b.iterations <= 72;
    let others = [dc[0], dc[2], dc[3]].iter().map(|v| v.unwrap_or(i32::MIN)).min().unwrap_or(i32::MIN);
    let gap_c = dc[1].map_or(i32::MIN, |e| others.saturating_sub(e));
    let pass_c = gap_c >= 3;
    let pass_d = all_at_least(&dd, 6) && d.iterations <= 48;
    Ok(Verdict {
        pass: pass_a && pass_b && pass_c && pass_d,
        detail: format!(
            "(a) B-aug1 pw {} {} it; (b) Ainf-aug z-coil {} {} it; (c) B-aug1 z-coil {} E- gap {gap_c}; (d) Ainf-aug medium {} {} it",
            digits_str(&da),
            a.iterations,
            digits_str(&db),
            b.iterations,
            digits_str(&dc),
            digits_str(&dd),
            d.iterations
        ),
    })
}

fn criterion_6() -> Result<Verdict> {
    let m = mesh(CurveKind::StarfishTorus, 48);
    let w = compute_weight(&m)?.values;
    let hi = Wavenumbers::new(c(1e-8, 0.0), c(1.0, 1.0))?;
    let med = Wavenumbers::new(c(1e-8, 0.0), c(1e-4, 1e-4))?;
    let cases = [
        ("partial wave", hi, IncidentKind::PartialWave, 0.4, 3.0),
        ("z-coil high", hi, IncidentKind::ZCoil, 6e7, 10.0),
        ("z-coil medium", med, IncidentKind::ZCoil, 4e7, 10.0),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, wn, inc, target, factor) in cases {
        let f0 = IncidentField::new(inc, wn.k_minus).trace(&m)?;
        let ratio = excitation_diagnostic(&m, &f0, &w, &wn).ratio;
        pass &= ratio >= target / factor && ratio <= target * factor;
        parts.push(format!("{name} {ratio:.3e} (target {target:e} x{factor})"));
    }
    Ok(Verdict {
        pass,
        detail: parts.join(", "),
    })
}

fn criterion_7(ctx: &Context) -> Verdict {
    let mut pass = !ctx.solves.is_empty();
    let mut flux = 0.0f64;
    let mut normal = 0.0f64;
    let mut helm = 0.0f64;
    let mut failures = Vec::new();
    for s in &ctx.solves {
        if !s.converged {
            continue;
        }
        flux = flux.max(s.jumps.flux_e_minus);
        if s.jumps.flux_e_minus > 1e-8 {
            failures.push(format!("{}: flux {:.1e}", s.label, s.jumps.flux_e_minus));
        }
        if !s.accurate {
            continue;
        }
        if let Some(nj) = s.jumps.normal_jump {
            normal = normal.max(nj);
            if nj > 1e-4 {
                failures.push(format!("{}: normal jump {nj:.1e}", s.label));
            }
        }
        helm = helm.max(s.jumps.helmholtz);
        if s.jumps.helmholtz > 1e-6 {
            failures.push(format!("{}: Helmholtz {:.1e}", s.label, s.jumps.helmholtz));
        }
    }
    pass &= failures.is_empty();
    let converged = ctx.solves.iter().filter(|s| s.converged).count();
    let mut detail = format!(
        "{converged}/{} solves converged; flux <= {flux:.1e} (1e-8); on accurate formulations normal jump <= {normal:.1e} (1e-4), Helmholtz <= {helm:.1e} (1e-6)",
        ctx.solves.len()
    );
    if !failures.is_empty() {
        detail += &format!("; failures: {}", failures.join(", "));
    }
    Verdict { pass, detail }
}

/// (nullity, ratio across the gap or σ_min/σ_max when the nullity is 0).
fn null_space(m: &PanelMesh, ops: &StaticOperators, v: Variant, t: f64, augment: bool, w: Option<&[f64]>) -> Result<(usize, f64)> {
    let sv = quasistatic_limit(v, m, ops, t, augment, w)?.singular_values()?;
    let k = numerical_nullity(&sv, 1e3);
    let n = sv.len();
    let ratio = if k == 0 { sv[n - 1] / sv[0] } else { sv[n - k - 1] / sv[n - k] };
    Ok((k, ratio))
}

fn criterion_8() -> Result<Verdict> {
    let sphere = mesh(CurveKind::Sphere, 8);
    let torus = mesh(CurveKind::StarfishTorus, 24);
    let w = compute_weight(&torus)?.values;
    let so = StaticOperators::assemble(&sphere);
    let to = StaticOperators::assemble(&torus);
    let mut pass = true;
    let mut parts = Vec::new();
    let cases: [(&str, &PanelMesh, &StaticOperators, Variant, f64, usize); 3] = [
        ("sphere Ainf", &sphere, &so, Variant::AInf, 1.0, 1),
        ("torus Ainf", &torus, &to, Variant::AInf, 1.0, 1),
        ("sphere B", &sphere, &so, Variant::B, 1e-6, 2),
    ];
    for (name, m, ops, v, t, want) in cases {
        let (k, gap) = null_space(m, ops, v, t, false, None)?;
        pass &= k == want && gap >= 1e3;
        parts.push(format!("{name} nullity {k} gap {gap:.1e}"));
    }
    let augmented: [(&str, &PanelMesh, &StaticOperators, Variant, f64, Option<&[f64]>); 4] = [
        ("sphere Ainf-aug", &sphere, &so, Variant::AInf, 1.0, None),
        ("torus Ainf-aug", &torus, &to, Variant::AInf, 1.0, None),
        ("sphere B-aug0", &sphere, &so, Variant::B, 1e-6, None),
        ("torus B-aug1", &torus, &to, Variant::B, 1e-6, Some(&w)),
    ];
    for (name, m, ops, v, t, w) in augmented {
        let (k, rel) = null_space(m, ops, v, t, true, w)?;
        pass &= k == 0 && rel >= 1e-3;
        parts.push(format!("{name} relative smin {rel:.1e}"));
    }
    Ok(Verdict {
        pass,
        detail: parts.join(", "),
    })
}

fn criterion_9() -> Result<Verdict> {
    let m = mesh(CurveKind::StarfishTorus, 16);
    let w = compute_weight(&m)?.values;
    let mut b_sys = Vec::new();
    let mut b_map = Vec::new();
    let mut a_map = Vec::new();
    for e in [-12, -10, -8, -6, -4, -2] {
        let wn = Wavenumbers::new(c(10f64.powi(e), 0.0), c(1.0, 1.0))?;
        let sys = AssembledSystem::build(&m, wn, SystemConfig::new(Variant::B), Some(&w))?;
        b_sys.push(sys.matrix.condition_number()?);
        b_map.push(field_map_condition(&sys)?);
        let sys = AssembledSystem::from_cauchy(&m, wn, SystemConfig::new(Variant::AInf), into_pair(sys), Some(&w))?;
        a_map.push(field_map_condition(&sys)?);
    }
    let spread = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(f64::INFINITY, f64::min);
    // k₋ increases along the sweep, so the A∞ condition must decrease.
    let monotone = a_map.windows(2).all(|p| p[1] < p[0]);
    let growth = a_map[0] / a_map[a_map.len() - 1];
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.1e}")).collect::<Vec<_>>().join(" ");
    Ok(Verdict {
        pass: spread(&b_sys) < 100.0 && spread(&b_map) < 100.0 && monotone && growth >= 1e4,
        detail: format!(
            "k- = 1e-12..1e-2: B-aug1 system [{}] field map [{}]; Ainf field map [{}] grows x{growth:.1e} (>= 1e4, monotone {monotone})",
            fmt(&b_sys),
            fmt(&b_map),
            fmt(&a_map)
        ),
    })
}

fn criterion_10() -> Result<Verdict> {
    let m = mesh(CurveKind::StarfishTorus, 48);
    let w = compute_weight(&m)?;
    let positive = w.values.iter().all(|v| *v > 0.0);
    let ave = (w.average(&m) - 1.0).abs();
    let (alt, _) = null_vector_weight(&m)?;
    let routes = relative_deviation(&alt, &w.values);

    // Five-point stencils at points inside and outside the body.
    let centers = [(1.0, 0.0), (1.2, 0.15), (0.8, -0.1), (2.2, 0.3), (0.3, 0.9), (1.0, 1.2)];
    let d = 1e-3;
    let pts: Vec<(f64, f64)> = centers
        .iter()
        .flat_map(|&(x, z)| [(x, z), (x + d, z), (x - d, z), (x, z + d), (x, z - d)])
        .collect();
    let ef = eigenfields(&m, &w, &pts)?;
    let jmax = ef.eddy_j.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut curl_err = 0.0f64;
    for i in 0..centers.len() {
        let h = |k: usize| ef.eddy_h[5 * i + k];
        // (∇×H)_θ = ∂_z H_ρ − ∂_ρ H_z.
        let curl = (h(3)[0] - h(4)[0]) / (2.0 * d) - (h(1)[1] - h(2)[1]) / (2.0 * d);
        curl_err = curl_err.max((curl - ef.eddy_j[5 * i]).abs() / jmax);
    }
    let normal_j = ef.diagnostics.normal_j;
    let pass = positive
        && ave <= 1e-12
        && routes <= 1e-6
        && w.gmres_iterations <= 60
        && normal_j <= 1e-6
        && curl_err <= 1e-3;
    Ok(Verdict {
        pass,
        detail: format!(
            "w > 0 {positive}, |ave w - 1| {ave:.1e}, routes {routes:.1e} (1e-6), GMRES {} it (<= 60), |nu.J|/|J| {normal_j:.1e} (1e-6), curl H - J {curl_err:.1e} (1e-3)",
            w.gmres_iterations
        ),
    })
}

fn criterion_11() -> Result<Verdict> {
    let m = mesh(CurveKind::Sphere, 6);
    let pts = helmholtz_neumann_demo(&m, &[1e-1, 1e-2, 1e-3])?;
    let aug: Vec<f64> = pts.iter().map(|p| p.sigma_augmented).collect();
    let plain: Vec<f64> = pts.iter().map(|p| p.sigma_plain).collect();
    let spread = aug.iter().cloned().fold(0.0, f64::max) / aug.iter().cloned().fold(f64::INFINITY, f64::min);
    let decays = plain.windows(2).all(|p| p[1] < p[0]);
    Ok(Verdict {
        pass: spread < 10.0 && decays,
        detail: format!(
            "k = 1e-1, 1e-2, 1e-3: augmented smin {:.2e} {:.2e} {:.2e} (spread x{spread:.2} < 10); plain {:.2e} {:.2e} {:.2e} (decreasing {decays})",
            aug[0], aug[1], aug[2], plain[0], plain[1], plain[2]
        ),
    })
}

fn main() {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wants = |k: usize| selected.is_empty() || selected.contains(&k) || ((3..=5).contains(&k) && selected.contains(&7));
    let titles = [
        "parameter identity",
        "Cauchy idempotency",
        "Mie ground truth",
        "genus-0 experiment",
        "genus-1 experiments",
        "excitation diagnostic",
        "physical invariants",
        "quasi-static null spaces",
        "conditioning contrast",
        "weight machinery",
        "Helmholtz Neumann demo",
    ];
    let mut ctx = Context::default();
    let mut failed = Vec::new();
    for (i, title) in titles.iter().enumerate() {
        let k = i + 1;
        if !wants(k) {
            continue;
        }
        let start = Instant::now();
        let outcome = match k {
            1 => criterion_1(),
            2 => criterion_2(),
            3 => criterion_3(&mut ctx),
            4 => criterion_4(&mut ctx),
            5 => criterion_5(&mut ctx),
            6 => criterion_6(),
            7 => Ok(criterion_7(&ctx)),
            8 => criterion_8(),
            9 => criterion_9(),
            10 => criterion_10(),
            _ => criterion_11(),
        };
        let v = outcome.unwrap_or_else(|e| Verdict {
            pass: false,
            detail: format!("error: {e}"),
        });
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {k:>2} [{tag}] {title}: {} ({:.0?})", v.detail, start.elapsed());
        if !v.pass {
            failed.push(k);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
