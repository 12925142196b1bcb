//! Mode-0 reduction of the Dirac–Cauchy kernel.
//!
//! The 3D Cauchy integral of a multivector density h is
//!
//! ```text
//!   E_k h(x) = p.v. ∫_Γ (u(x,y) + s(x,y)) (ν(y) h(y)) dΓ(y),
//!   u = e^{ikR}(1 − ikR)/(2πR³) (y − x),   s = ik e^{ikR}/(2πR),
//! ```
//!
//! with Clifford products. Expanding in the source frame (ν, τ, θ) at y and
//! projecting on the target frame (N, T, Q) at x gives an 8×8 kernel whose
//! entries are a_k(R)·(real geometric factor) or s_k(R)·(real geometric
//! factor). For axisymmetric data only the entries even in the azimuth φ
//! survive, and they split into two decoupled 4×4 groups (see
//! [`crate::density::Parity`]). Both groups are built from fourteen scalar
//! azimuthal integrals, computed here.

use crate::quad::gauss_legendre;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Number of azimuthal integrals per (target, source) pair.
pub const N_MODAL: usize = 14;

/// Azimuthal integrals, indices into a `[C64; N_MODAL]`.
///
/// With w = y − x, n, t the source normal and tangent, q the source azimuthal
/// direction, and N, T, Q the target frame:
/// a-type: w·n, w·t, N·w, T·w, Q·(w×n), Q·(w×t), N·(w×q), T·(w×q);
/// s-type: 1, N·n, T·n, N·t, T·t, Q·q.
pub mod idx {
    pub const WN: usize = 0;
    pub const WT: usize = 1;
    pub const NW: usize = 2;
    pub const TW: usize = 3;
    pub const QWN: usize = 4;
    pub const QWT: usize = 5;
    pub const NWQ: usize = 6;
    pub const TWQ: usize = 7;
    pub const S: usize = 8;
    pub const SNN: usize = 9;
    pub const STN: usize = 10;
    pub const SNT: usize = 11;
    pub const STT: usize = 12;
    pub const SQQ: usize = 13;
}

/// Radial kernel pair (a, s) entering the Cauchy kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    /// E_k.
    Cauchy(C64),
    /// E_{k1} − E_{k2} as one kernel, free of cancellation at small R.
    Difference(C64, C64),
    /// (E_k − E₀)/(2k²), bounded as k → 0.
    ScaledStaticDifference(C64),
    /// S-type entries with Φ₀ = 1/(2πR) in place of ikΦ_k; a-type entries zero.
    StaticSingleLayer,
}

impl KernelKind {
    /// Magnitude of the largest wavenumber involved, for oscillation control.
    pub fn wavenumber_scale(&self) -> f64 {
        match *self {
            KernelKind::Cauchy(k) | KernelKind::ScaledStaticDifference(k) => k.norm(),
            KernelKind::Difference(a, b) => a.norm().max(b.norm()),
            KernelKind::StaticSingleLayer => 0.0,
        }
    }

    /// (a(R), s(R)).
    #[inline]
    pub fn scalars(&self, r: f64) -> (C64, C64) {
        let inv = 1.0 / (2.0 * PI * r);
        let inv3 = inv / (r * r);
        match *self {
            KernelKind::Cauchy(k) => {
                if k == ZERO {
                    (C64::new(inv3, 0.0), ZERO)
                } else {
                    let z = I * k * r;
                    let e = z.exp();
                    (e * (1.0 - z) * inv3, I * k * e * inv)
                }
            }
            KernelKind::Difference(k1, k2) => {
                let z1 = I * k1 * r;
                let z2 = I * k2 * r;
                let a = (exp_one_minus_z_minus_one(z1) - exp_one_minus_z_minus_one(z2)) * inv3;
                let s = (I * k1 * z1.exp() - I * k2 * z2.exp()) * inv;
                (a, s)
            }
            KernelKind::ScaledStaticDifference(k) => {
                let z = I * k * r;
                let scale = 1.0 / (2.0 * k * k);
                (
                    exp_one_minus_z_minus_one(z) * inv3 * scale,
                    I * k * z.exp() * inv * scale,
                )
            }
            KernelKind::StaticSingleLayer => (ZERO, C64::new(inv, 0.0)),
        }
    }
}

/// e^z(1 − z) − 1 = −Σ_{n≥2} (n−1) zⁿ/n!, by series for small |z|.
#[inline]
pub fn exp_one_minus_z_minus_one(z: C64) -> C64 {
    if z.norm() < 0.5 {
        let mut term = z; // zⁿ/n! at n = 1
        let mut acc = ZERO;
        for n in 2..30 {
            term *= z / n as f64;
            let add = term * (n as f64 - 1.0);
            acc -= add;
            if add.norm() < 1e-18 * acc.norm() {
                break;
            }
        }
        acc
    } else {
        z.exp() * (1.0 - z) - 1.0
    }
}

/// Target point with its frame (N, T) in the meridian plane; Q = θ̂.
#[derive(Debug, Clone, Copy)]
pub struct TargetFrame {
    pub rho: f64,
    pub z: f64,
    pub n: (f64, f64),
    pub t: (f64, f64),
}

/// Source ring relative to the target: chord (Δρ, Δz) = y − x in the
/// meridian plane, source radius, source normal and tangent.
#[derive(Debug, Clone, Copy)]
pub struct SourceRing {
    pub drho: f64,
    pub dz: f64,
    pub rho: f64,
    pub nu: (f64, f64),
    pub tau: (f64, f64),
}

/// Accumulates ∫_{−π}^{π} (kernel factor) ρ′ dφ for each kind into `out`,
/// scaled by `weight`.
///
/// The azimuthal rule is a composite 16-point Gauss rule on [0, π] (the
/// integrands are even) with intervals that double in length away from
/// φ = 0, starting at the angular width d/√(ρρ′) of the near-singular peak,
/// and split further so that no interval spans more than a few wavelengths.
pub fn accumulate_modal(
    tgt: &TargetFrame,
    src: &SourceRing,
    kinds: &[KernelKind],
    weight: f64,
    out: &mut [[C64; N_MODAL]],
) {
    debug_assert_eq!(kinds.len(), out.len());
    let g = gauss_legendre(16);
    let d2 = src.drho * src.drho + src.dz * src.dz;
    let pp = tgt.rho * src.rho;
    let kscale = kinds.iter().fold(0.0f64, |m, k| m.max(k.wavenumber_scale()));
    let max_len = if kscale > 0.0 && pp > 0.0 {
        (3.0 / (kscale * pp.sqrt())).min(PI / 2.0)
    } else {
        PI / 2.0
    };
    let w0 = if pp > 0.0 { (d2 / pp).sqrt() } else { f64::INFINITY };
    let mut breaks = [0.0f64; 192];
    let mut nb = 1;
    let push_until = |end: f64, breaks: &mut [f64; 192], nb: &mut usize| {
        let start = breaks[*nb - 1];
        let pieces = ((end - start) / max_len).ceil().max(1.0) as usize;
        for p in 1..=pieces {
            if *nb < breaks.len() {
                breaks[*nb] = start + (end - start) * p as f64 / pieces as f64;
                *nb += 1;
            }
        }
    };
    let mut edge = w0;
    while edge < PI && nb < 128 {
        push_until(edge, &mut breaks, &mut nb);
        edge *= 2.0;
    }
    push_until(PI, &mut breaks, &mut nb);

    let (nr, nz) = src.nu;
    let (tr, tz) = src.tau;
    let (big_nr, big_nz) = tgt.n;
    let (big_tr, big_tz) = tgt.t;
    let dz = src.dz;
    for w in breaks[..nb].windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (x, gw) in g.nodes.iter().zip(&g.weights) {
            let phi = mid + half * x;
            let c = phi.cos();
            let sh = (0.5 * phi).sin();
            let one_minus_c = 2.0 * sh * sh;
            let r = (d2 + 4.0 * pp * sh * sh).sqrt();
            // ρ′ − ρ cos φ and ρ′ cos φ − ρ without cancellation.
            let radial_out = src.drho + tgt.rho * one_minus_c;
            let wx = src.drho - src.rho * one_minus_c;
            let f = [
                nr * radial_out + nz * dz,
                tr * radial_out + tz * dz,
                big_nr * wx + big_nz * dz,
                big_tr * wx + big_tz * dz,
                dz * nr * c - wx * nz,
                dz * tr * c - wx * tz,
                -big_nr * dz * c + big_nz * radial_out,
                -big_tr * dz * c + big_tz * radial_out,
            ];
            let h = [
                1.0,
                big_nr * nr * c + big_nz * nz,
                big_tr * nr * c + big_tz * nz,
                big_nr * tr * c + big_nz * tz,
                big_tr * tr * c + big_tz * tz,
                c,
            ];
            // Factor 2: the integrand is even in φ.
            let wq = weight * 2.0 * gw * half * src.rho;
            for (kind, acc) in kinds.iter().zip(out.iter_mut()) {
                let (ka, ks) = kind.scalars(r);
                let ka = ka * wq;
                let ks = ks * wq;
                for m in 0..8 {
                    acc[m] += ka * f[m];
                }
                for m in 0..6 {
                    acc[8 + m] += ks * h[m];
                }
            }
        }
    }
}

/// Mode-0 kernel blocks from the fourteen integrals. Rows and columns are in
/// the parity orderings TM = (1, 4, 6, 7) and TE = (2, 3, 5, 8) of the
/// density components.
#[inline]
pub fn blocks_from_integrals(v: &[C64; N_MODAL]) -> ([[C64; 4]; 4], [[C64; 4]; 4]) {
    use idx::*;
    let z = ZERO;
    // tm[row][col]
    let tm = [
        [v[WN], -v[WT], v[S], z],
        [v[QWN], -v[QWT], z, -v[SQQ]],
        [v[SNN], -v[SNT], v[NW], v[NWQ]],
        [v[STN], -v[STT], v[TW], v[TWQ]],
    ];
    let te = [
        [v[NW], v[NWQ], v[SNN], v[SNT]],
        [v[TW], v[TWQ], v[STN], v[STT]],
        [v[S], z, v[WN], v[WT]],
        [z, v[SQQ], -v[QWN], -v[QWT]],
    ];
    (tm, te)
}

/// Full 8×8 mode-0 kernel (component order 1..8) between two points,
/// excluding any Nyström weight. Entries that couple the two parity groups
/// are odd in φ and vanish.
pub fn modal_kernel_8x8(tgt: &TargetFrame, src: &SourceRing, kind: KernelKind) -> [[C64; 8]; 8] {
    let mut acc = [[ZERO; N_MODAL]];
    accumulate_modal(tgt, src, &[kind], 1.0, &mut acc);
    let (tm, te) = blocks_from_integrals(&acc[0]);
    let mut out = [[ZERO; 8]; 8];
    let tmc = crate::density::Parity::Tm.components();
    let tec = crate::density::Parity::Te.components();
    for a in 0..4 {
        for b in 0..4 {
            out[tmc[a] - 1][tmc[b] - 1] = tm[a][b];
            out[tec[a] - 1][tec[b] - 1] = te[a][b];
        }
    }
    out
}
