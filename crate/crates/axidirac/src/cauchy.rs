//! Nyström discretization of the mode-0 Cauchy integral E_k on a panel mesh,
//! its Hardy projections, named scalar operators, and the volume Cauchy
//! integral used for field evaluation.
//!
//! Quadrature, per target node x on panel P:
//! * panels that are neither P nor adjacent to it: the plain panel rule;
//! * P itself: the principal value is taken by pairing the points s ± r for
//!   r ∈ (0, c], c the distance from s to the nearer end of P, with r = c·v⁴
//!   and a 32-point Gauss rule in v; the rest of P is covered by intervals
//!   whose distance from s doubles;
//! * panels adjacent to P: the same doubling intervals from the shared end.
//!
//! Off-node density values come from barycentric interpolation on the
//! panel that holds them, so every rule reduces to weights on nodal values.

use crate::blocks::BlockOperator;
use crate::density::{DiracDensity, Parity};
use crate::error::{AxiError, Result};
use crate::geometry::{Closure, PanelMesh};
use crate::kernel::{accumulate_modal, blocks_from_integrals, KernelKind, SourceRing, TargetFrame, N_MODAL};
use crate::quad::gauss_legendre;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::io::{Read, Write};
use std::path::Path;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

type Modal = [C64; N_MODAL];

/// Assembles E for each kernel kind in one pass over the geometry.
pub fn assemble_kinds(mesh: &PanelMesh, kinds: &[KernelKind]) -> Vec<BlockOperator> {
    let n = mesh.len();
    let nk = kinds.len();
    let mut ops: Vec<BlockOperator> = (0..nk).map(|_| BlockOperator::zeros(n)).collect();
    let mut rows: Vec<Vec<&mut [C64]>> = (0..n).map(|_| Vec::with_capacity(2 * nk)).collect();
    for op in ops.iter_mut() {
        let BlockOperator { tm, te, .. } = op;
        let tm = tm.as_slice_mut().expect("standard layout");
        let te = te.as_slice_mut().expect("standard layout");
        for ((i, a), b) in tm.chunks_mut(16 * n).enumerate().zip(te.chunks_mut(16 * n)) {
            rows[i].push(a);
            rows[i].push(b);
        }
    }
    let asm = RowAssembler::new(mesh, kinds);
    rows.into_par_iter().enumerate().for_each(|(i, mut chunks)| {
        let acc = asm.boundary_row(i);
        for q in 0..nk {
            let (tm_rows, rest) = chunks.split_at_mut(2 * q + 1);
            let tm_rows = &mut tm_rows[2 * q];
            let te_rows = &mut rest[0];
            for j in 0..n {
                let (tm, te) = blocks_from_integrals(&acc[j * nk + q]);
                for a in 0..4 {
                    for b in 0..4 {
                        tm_rows[a * 4 * n + 4 * j + b] = tm[a][b];
                        te_rows[a * 4 * n + 4 * j + b] = te[a][b];
                    }
                }
            }
        }
    });
    ops
}

/// Nyström discretization of the real adjoint of E for each kind: the
/// kernel K(y, x)ᵀ with x the target node and y the integration variable,
/// integrated against dΓ(y) with the same singular rules as E. Unlike the
/// weighted transpose of the E matrix, its rows are accurate pointwise.
pub fn assemble_adjoint_kinds(mesh: &PanelMesh, kinds: &[KernelKind]) -> Vec<BlockOperator> {
    let n = mesh.len();
    let asm = RowAssembler {
        adjoint: true,
        ..RowAssembler::new(mesh, kinds)
    };
    let rows: Vec<Vec<Modal>> = (0..n).into_par_iter().map(|i| asm.boundary_row(i)).collect();
    let nk = kinds.len();
    (0..nk)
        .map(|q| {
            let mut op = BlockOperator::zeros(n);
            for (i, acc) in rows.iter().enumerate() {
                for j in 0..n {
                    let (tm, te) = blocks_from_integrals(&acc[j * nk + q]);
                    for a in 0..4 {
                        for b in 0..4 {
                            op.tm[[4 * i + a, 4 * j + b]] = tm[b][a];
                            op.te[[4 * i + a, 4 * j + b]] = te[b][a];
                        }
                    }
                }
            }
            op
        })
        .collect()
}

/// Per-target quadrature driver shared by boundary rows and volume points.
pub(crate) struct RowAssembler<'a> {
    mesh: &'a PanelMesh,
    kinds: &'a [KernelKind],
    period: Option<f64>,
    /// Evaluate K(y, x) instead of K(x, y) (boundary rows only).
    adjoint: bool,
}

impl<'a> RowAssembler<'a> {
    pub(crate) fn new(mesh: &'a PanelMesh, kinds: &'a [KernelKind]) -> Self {
        let (s0, s1) = mesh.curve.s_domain;
        let period = match mesh.curve.closure {
            Closure::ClosedLoop => Some(s1 - s0),
            Closure::AxisMeeting => None,
        };
        Self {
            mesh,
            kinds,
            period,
            adjoint: false,
        }
    }

    fn nk(&self) -> usize {
        self.kinds.len()
    }

    /// Ring at parameter s + h seen from the target at parameter s.
    fn ring(&self, s: f64, h: f64) -> (SourceRing, f64) {
        let (drho, dz) = self.mesh.curve.chord(s, h);
        let p = self.mesh.curve.eval(s + h);
        (
            SourceRing {
                drho,
                dz,
                rho: p.rho,
                nu: p.normal(),
                tau: p.tangent(),
            },
            p.speed(),
        )
    }

    /// Quadrature point at parameter s + h with parameter weight `w`,
    /// density interpolated on panel `p` whose parameter interval, shifted
    /// to be contiguous with s, is [lo, lo + 2·half].
    #[allow(clippy::too_many_arguments)]
    fn interpolated_point(
        &self,
        tgt: &TargetFrame,
        s: f64,
        h: f64,
        w: f64,
        p: usize,
        lo: f64,
        tmp: &mut [Modal],
        basis: &mut [f64],
        acc: &mut [Modal],
    ) {
        let (src, speed) = self.ring(s, h);
        for t in tmp.iter_mut() {
            *t = [ZERO; N_MODAL];
        }
        self.accumulate(tgt, &src, w * speed, tmp);
        let half = self.mesh.panels[p].half();
        let x = ((s + h) - lo) / half - 1.0;
        self.mesh.rule().lagrange_basis(x.clamp(-1.0, 1.0), basis);
        let nk = self.nk();
        for (jl, j) in self.mesh.panel_nodes(p).enumerate() {
            let l = basis[jl];
            if l == 0.0 {
                continue;
            }
            for q in 0..nk {
                let dst = &mut acc[j * nk + q];
                for m in 0..N_MODAL {
                    dst[m] += tmp[q][m] * l;
                }
            }
        }
    }

    /// Kernel integrals of the ring `src` seen from `tgt`, or, for the
    /// adjoint, of the ring through the target seen from the source point,
    /// rescaled to the source measure.
    fn accumulate(&self, tgt: &TargetFrame, src: &SourceRing, weight: f64, out: &mut [Modal]) {
        if !self.adjoint {
            accumulate_modal(tgt, src, self.kinds, weight, out);
            return;
        }
        let swapped_tgt = TargetFrame {
            rho: src.rho,
            z: tgt.z + src.dz,
            n: src.nu,
            t: src.tau,
        };
        let swapped_src = SourceRing {
            drho: -src.drho,
            dz: -src.dz,
            rho: tgt.rho,
            nu: tgt.n,
            tau: tgt.t,
        };
        accumulate_modal(&swapped_tgt, &swapped_src, self.kinds, weight * src.rho / tgt.rho, out);
    }

    /// Start of panel `p` shifted by a period so that it lies next to s.
    fn shifted_start(&self, p: usize, s: f64) -> f64 {
        let panel = self.mesh.panels[p];
        let mut lo = panel.a;
        if let Some(per) = self.period {
            let mid = panel.mid();
            let mut shift = 0.0;
            while mid + shift - s > 0.5 * per {
                shift -= per;
            }
            while mid + shift - s < -0.5 * per {
                shift += per;
            }
            lo += shift;
        }
        lo
    }

    /// Integrates over parameter distances [d0, d1] from s on one side
    /// (`dir` = ±1) with intervals whose distance from s doubles.
    #[allow(clippy::too_many_arguments)]
    fn graded_side(
        &self,
        tgt: &TargetFrame,
        s: f64,
        dir: f64,
        d0: f64,
        d1: f64,
        p: usize,
        lo: f64,
        tmp: &mut [Modal],
        basis: &mut [f64],
        acc: &mut [Modal],
    ) {
        let g = gauss_legendre(16);
        let mut a = d0;
        while a < d1 * (1.0 - 1e-15) {
            let b = (2.0 * a).min(d1);
            // Do not leave a sliver much shorter than its distance.
            let b = if d1 - b < 0.25 * (b - a) { d1 } else { b };
            let mid = 0.5 * (a + b);
            let hl = 0.5 * (b - a);
            for (x, w) in g.nodes.iter().zip(&g.weights) {
                let d = mid + hl * x;
                self.interpolated_point(tgt, s, dir * d, w * hl, p, lo, tmp, basis, acc);
            }
            a = b;
        }
    }

    /// Modal integrals for the boundary target node i, indexed j·nk + q.
    pub(crate) fn boundary_row(&self, i: usize) -> Vec<Modal> {
        let mesh = self.mesh;
        let n = mesh.len();
        let nk = self.nk();
        let node = mesh.nodes[i];
        let tgt = TargetFrame {
            rho: node.rho,
            z: node.z,
            n: node.nu,
            t: node.tau,
        };
        let mut acc = vec![[ZERO; N_MODAL]; n * nk];
        let mut tmp = vec![[ZERO; N_MODAL]; nk];
        let mut basis = vec![0.0; mesh.order];
        let own = node.panel;
        let (left, right) = mesh.neighbours(own);

        for (p, _) in mesh.panels.iter().enumerate() {
            if p == own || Some(p) == left || Some(p) == right {
                continue;
            }
            for j in mesh.panel_nodes(p) {
                let sj = mesh.nodes[j];
                let src = SourceRing {
                    drho: sj.rho - node.rho,
                    dz: sj.z - node.z,
                    rho: sj.rho,
                    nu: sj.nu,
                    tau: sj.tau,
                };
                self.accumulate(&tgt, &src, sj.weight, &mut acc[j * nk..(j + 1) * nk]);
            }
        }

        let s = node.s;
        let panel = mesh.panels[own];
        let lo = panel.a;
        let dl = s - panel.a;
        let dr = panel.b - s;
        let c = dl.min(dr);
        // Symmetric pairing removes the Hilbert-type part of the kernel.
        let g32 = gauss_legendre(32);
        for (x, w) in g32.nodes.iter().zip(&g32.weights) {
            let v = 0.5 * (x + 1.0);
            let r = c * v.powi(4);
            let wr = 0.5 * w * 4.0 * c * v.powi(3);
            for dir in [1.0, -1.0] {
                self.interpolated_point(&tgt, s, dir * r, wr, own, lo, &mut tmp, &mut basis, &mut acc);
            }
        }
        if dl > dr {
            self.graded_side(&tgt, s, -1.0, c, dl, own, lo, &mut tmp, &mut basis, &mut acc);
        } else if dr > dl {
            self.graded_side(&tgt, s, 1.0, c, dr, own, lo, &mut tmp, &mut basis, &mut acc);
        }

        for (nb, dir) in [(left, -1.0), (right, 1.0)] {
            let Some(p) = nb else { continue };
            if p == own {
                continue;
            }
            let lo_p = self.shifted_start(p, s);
            let len = 2.0 * mesh.panels[p].half();
            let (d0, d1) = if dir > 0.0 {
                (lo_p - s, lo_p + len - s)
            } else {
                (s - (lo_p + len), s - lo_p)
            };
            self.graded_side(&tgt, s, dir, d0, d1, p, lo_p, &mut tmp, &mut basis, &mut acc);
        }
        acc
    }

    /// Modal integrals at an off-surface point (ρ, z), target frame
    /// N = ρ̂, T = ẑ. Panels close to the point relative to their length are
    /// bisected recursively with interpolated density.
    pub(crate) fn volume_row(&self, rho: f64, z: f64) -> Vec<Modal> {
        let mesh = self.mesh;
        let nk = self.nk();
        let tgt = TargetFrame {
            rho,
            z,
            n: (1.0, 0.0),
            t: (0.0, 1.0),
        };
        let mut acc = vec![[ZERO; N_MODAL]; mesh.len() * nk];
        let mut tmp = vec![[ZERO; N_MODAL]; nk];
        let mut basis = vec![0.0; mesh.order];
        for (p, panel) in mesh.panels.iter().enumerate() {
            self.volume_interval(&tgt, p, panel.a, panel.b, 0, &mut tmp, &mut basis, &mut acc);
        }
        acc
    }

    #[allow(clippy::too_many_arguments)]
    fn volume_interval(
        &self,
        tgt: &TargetFrame,
        p: usize,
        a: f64,
        b: f64,
        depth: usize,
        tmp: &mut [Modal],
        basis: &mut [f64],
        acc: &mut [Modal],
    ) {
        let mesh = self.mesh;
        let g = gauss_legendre(16);
        let mid = 0.5 * (a + b);
        let hl = 0.5 * (b - a);
        // Meridian length of the interval and distance from the target.
        let mut len = 0.0;
        let mut dist = f64::INFINITY;
        let mut prev: Option<(f64, f64)> = None;
        for k in 0..=8 {
            let c = mesh.curve.eval(a + (b - a) * k as f64 / 8.0);
            dist = dist.min((c.rho - tgt.rho).hypot(c.z - tgt.z));
            if let Some((pr, pz)) = prev {
                len += (c.rho - pr).hypot(c.z - pz);
            }
            prev = Some((c.rho, c.z));
        }
        let whole = depth == 0;
        if dist < 1.2 * len && depth < 40 {
            self.volume_interval(tgt, p, a, mid, depth + 1, tmp, basis, acc);
            self.volume_interval(tgt, p, mid, b, depth + 1, tmp, basis, acc);
            return;
        }
        let nk = self.nk();
        if whole {
            for j in mesh.panel_nodes(p) {
                let sj = mesh.nodes[j];
                let src = SourceRing {
                    drho: sj.rho - tgt.rho,
                    dz: sj.z - tgt.z,
                    rho: sj.rho,
                    nu: sj.nu,
                    tau: sj.tau,
                };
                accumulate_modal(tgt, &src, self.kinds, sj.weight, &mut acc[j * nk..(j + 1) * nk]);
            }
            return;
        }
        let panel = mesh.panels[p];
        for (x, w) in g.nodes.iter().zip(&g.weights) {
            let t = mid + hl * x;
            let c = mesh.curve.eval(t);
            let src = SourceRing {
                drho: c.rho - tgt.rho,
                dz: c.z - tgt.z,
                rho: c.rho,
                nu: c.normal(),
                tau: c.tangent(),
            };
            for v in tmp.iter_mut() {
                *v = [ZERO; N_MODAL];
            }
            accumulate_modal(tgt, &src, self.kinds, w * hl * c.speed(), tmp);
            mesh.rule().lagrange_basis(panel.local(t).clamp(-1.0, 1.0), basis);
            for (jl, j) in mesh.panel_nodes(p).enumerate() {
                let l = basis[jl];
                for q in 0..nk {
                    for m in 0..N_MODAL {
                        acc[j * nk + q][m] += tmp[q][m] * l;
                    }
                }
            }
        }
    }
}

/// Applies one row of modal integrals (kind index q of nk) to a density:
/// the eight output components in the target frame.
pub(crate) fn contract_row(acc: &[Modal], nk: usize, q: usize, h: &DiracDensity) -> [C64; 8] {
    let mut out = [ZERO; 8];
    let tmc = Parity::Tm.components();
    let tec = Parity::Te.components();
    for j in 0..h.n_nodes() {
        let (tm, te) = blocks_from_integrals(&acc[j * nk + q]);
        for a in 0..4 {
            for b in 0..4 {
                out[tmc[a] - 1] += tm[a][b] * h.component(tmc[b])[j];
                out[tec[a] - 1] += te[a][b] * h.component(tec[b])[j];
            }
        }
    }
    out
}

/// Volume Cauchy integrals C h(x) = ½∫(u + s)(ν h) dΓ at points off Γ for
/// several kinds and densities. Returns, per point, one 8-vector per
/// (kind, density) pair in the cylindrical frame (ρ̂, ẑ, θ̂):
/// [F₀, ρ̂·F₂, ẑ·F₂, θ̂·F₂, F₃, ρ̂·F₁, ẑ·F₁, θ̂·F₁].
pub fn volume_cauchy(
    mesh: &PanelMesh,
    kinds: &[KernelKind],
    densities: &[&DiracDensity],
    points: &[(f64, f64)],
) -> Vec<Vec<[C64; 8]>> {
    let asm = RowAssembler::new(mesh, kinds);
    let nk = kinds.len();
    points
        .par_iter()
        .map(|&(rho, z)| {
            let acc = asm.volume_row(rho, z);
            let mut res = Vec::with_capacity(nk * densities.len());
            for q in 0..nk {
                for h in densities {
                    let mut v = contract_row(&acc, nk, q, h);
                    for x in v.iter_mut() {
                        *x *= 0.5;
                    }
                    res.push(v);
                }
            }
            res
        })
        .collect()
}

/// Sign selecting a Hardy projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Interior, (I + E)/2.
    Plus,
    /// Exterior, (I − E)/2.
    Minus,
}

/// Scalar operators read off the blocks of E.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedOp {
    /// Acoustic double layer K^{ν′} = −E(1,1).
    KNuPrime,
    /// Its real adjoint partner K^ν = −E(2,2).
    KNu,
    /// Real adjoint of the magnetic dipole operator on (τ, θ):
    /// 𝐌* = −E(3:4, 3:4).
    MStar,
    /// Magnetic dipole operator 𝐌, the real adjoint of 𝐌*.
    M,
    /// Scaled single layer ik·S = E(1,6).
    S,
    /// K^τ, K^ν with ν(x) replaced by τ(x): −E(7,6).
    KTau,
}

impl std::str::FromStr for NamedOp {
    type Err = AxiError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "K_nu_prime" => NamedOp::KNuPrime,
            "K_nu" => NamedOp::KNu,
            "M_star" => NamedOp::MStar,
            "M" => NamedOp::M,
            "S" => NamedOp::S,
            "K_tau" => NamedOp::KTau,
            other => return Err(AxiError::Config(format!("unknown operator name {other:?}"))),
        })
    }
}

/// Assembled E_k on a mesh.
#[derive(Debug, Clone)]
pub struct CauchyMatrix {
    pub kind: KernelKind,
    pub op: BlockOperator,
    pub mesh_fingerprint: u64,
}

impl CauchyMatrix {
    pub fn assemble(mesh: &PanelMesh, k: C64) -> Result<Self> {
        if k.im < 0.0 {
            return Err(AxiError::InvalidWavenumbers(format!("Im k < 0 for k = {k}")));
        }
        Ok(Self::assemble_many(mesh, &[KernelKind::Cauchy(k)]).remove(0))
    }

    /// Several kernels sharing one geometric pass.
    pub fn assemble_many(mesh: &PanelMesh, kinds: &[KernelKind]) -> Vec<Self> {
        let fp = mesh.fingerprint();
        assemble_kinds(mesh, kinds)
            .into_iter()
            .zip(kinds)
            .map(|(op, &kind)| Self {
                kind,
                op,
                mesh_fingerprint: fp,
            })
            .collect()
    }

    pub fn wavenumber(&self) -> C64 {
        match self.kind {
            KernelKind::Cauchy(k) | KernelKind::ScaledStaticDifference(k) => k,
            KernelKind::Difference(a, _) => a,
            KernelKind::StaticSingleLayer => ZERO,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.op.n_nodes()
    }

    /// max |E² − I|.
    pub fn idempotency_defect(&self) -> f64 {
        self.op.matmul(&self.op).identity_defect()
    }

    /// max |E²h − h| / max |h| for a given density.
    pub fn idempotency_defect_on(&self, h: &DiracDensity) -> f64 {
        let e2h = self.op.apply(&self.op.apply(h));
        (&e2h - h).max_abs() / h.max_abs()
    }

    /// Fails with a diagnostic when ‖E² − I‖ on `h` exceeds `tol`.
    pub fn check_idempotency(&self, h: &DiracDensity, tol: f64) -> Result<f64> {
        let d = self.idempotency_defect_on(h);
        if d > tol {
            return Err(AxiError::Diagnostic(format!(
                "Cauchy matrix at k = {} has |E²h − h| = {d:.3e} > {tol:.1e}",
                self.wavenumber()
            )));
        }
        Ok(d)
    }

    /// (I ± E)/2 as an operator.
    pub fn hardy_matrix(&self, side: Side) -> BlockOperator {
        let sign = match side {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        };
        let mut out = BlockOperator::identity(self.n_nodes()).scale(C64::new(0.5, 0.0));
        out.add_scaled(C64::new(0.5 * sign, 0.0), &self.op);
        out
    }

    /// (I ± E)h/2.
    pub fn hardy_project(&self, side: Side, h: &DiracDensity) -> DiracDensity {
        let eh = self.op.apply(h);
        let mut out = h.clone();
        let sign = match side {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        };
        out.axpy(C64::new(sign, 0.0), &eh);
        for v in out.as_mut_slice() {
            *v *= 0.5;
        }
        out
    }

    /// Standalone discretization of a named scalar operator: N×N, or 2N×2N
    /// in (τ, θ) node-major order for 𝐌 and 𝐌*. `area_weights` are the
    /// surface weights 2πρ·w used for real adjoints.
    pub fn named_op(&self, name: NamedOp, area_weights: &[f64]) -> ndarray::Array2<C64> {
        let n = self.n_nodes();
        let neg = C64::new(-1.0, 0.0);
        match name {
            NamedOp::KNuPrime => self.op.component_block(1, 1).mapv(|v| v * neg),
            NamedOp::KNu => self.op.component_block(2, 2).mapv(|v| v * neg),
            NamedOp::S => self.op.component_block(1, 6),
            NamedOp::KTau => self.op.component_block(7, 6).mapv(|v| v * neg),
            NamedOp::MStar | NamedOp::M => {
                let mut m = ndarray::Array2::zeros((2 * n, 2 * n));
                for (a, ca) in [3usize, 4].into_iter().enumerate() {
                    for (b, cb) in [3usize, 4].into_iter().enumerate() {
                        let blk = self.op.component_block(ca, cb);
                        for ((i, j), v) in blk.indexed_iter() {
                            m[[2 * i + a, 2 * j + b]] = -*v;
                        }
                    }
                }
                if name == NamedOp::M {
                    let w = |r: usize| area_weights[r / 2];
                    let mt = m.t().to_owned();
                    m = ndarray::Array2::from_shape_fn((2 * n, 2 * n), |(r, c)| mt[[r, c]] * (w(c) / w(r)));
                }
                m
            }
        }
    }

    /// Writes the dense 8N×8N matrix: a header line
    /// `axidirac-cauchy k_re k_im N fingerprint` followed by row-major
    /// little-endian (re, im) f64 pairs.
    pub fn write_dump(&self, path: &Path) -> Result<()> {
        let dense = self.op.to_dense();
        let k = self.wavenumber();
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(
            f,
            "axidirac-cauchy {:e} {:e} {} {:016x}",
            k.re,
            k.im,
            self.n_nodes(),
            self.mesh_fingerprint
        )?;
        for v in dense.iter() {
            f.write_all(&v.re.to_le_bytes())?;
            f.write_all(&v.im.to_le_bytes())?;
        }
        f.flush()?;
        Ok(())
    }

    /// Reads a dump written by [`Self::write_dump`]: (k, N, fingerprint,
    /// dense matrix).
    pub fn read_dump(path: &Path) -> Result<(C64, usize, u64, ndarray::Array2<C64>)> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        let nl = bytes
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| AxiError::Config("dump without header".into()))?;
        let header = std::str::from_utf8(&bytes[..nl]).map_err(|e| AxiError::Config(e.to_string()))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        let bad = || AxiError::Config(format!("malformed dump header {header:?}"));
        if f.len() != 5 || f[0] != "axidirac-cauchy" {
            return Err(bad());
        }
        let k = C64::new(f[1].parse().map_err(|_| bad())?, f[2].parse().map_err(|_| bad())?);
        let n: usize = f[3].parse().map_err(|_| bad())?;
        let fp = u64::from_str_radix(f[4], 16).map_err(|_| bad())?;
        let body = &bytes[nl + 1..];
        let dim = 8 * n;
        if body.len() != dim * dim * 16 {
            return Err(bad());
        }
        let vals: Vec<C64> = body
            .chunks_exact(16)
            .map(|c| {
                C64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        let m = ndarray::Array2::from_shape_vec((dim, dim), vals).map_err(|e| AxiError::Config(e.to_string()))?;
        Ok((k, n, fp, m))
    }
}
