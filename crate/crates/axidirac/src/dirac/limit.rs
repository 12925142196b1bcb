//! Quasi-static limits of I + G as k₋ → 0 with k₊k̂ held fixed.
//!
//! With k₊ → 0 as well, E_{k₋} → E₀ and E_{k₊} = E₀ + ik₊Ŝ + O(k₊²), where
//! Ŝ keeps only the single-layer-type entries with Φ₀. The parameter
//! products P_iN′_j·k₊ and N_iP′_j converge, so evaluating the printed
//! parameter sets (ξ = 1) at |k̂| = K ≫ 1 and |k₊k̂| = t gives the limit
//! matrix up to O(1/K).

use crate::blocks::BlockOperator;
use crate::error::Result;
use crate::geometry::PanelMesh;
use crate::kernel::KernelKind;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use super::augment::AugmentationInputs;
use super::params::{ParameterSet, Variant, Wavenumbers};
use super::system::augmentation_plan;

/// |k̂| used to realize the limit.
pub const LIMIT_KHAT: f64 = 1e8;

/// Static operators shared by all limits on one mesh.
#[derive(Debug, Clone)]
pub struct StaticOperators {
    /// E₀.
    pub e0: BlockOperator,
    /// Single-layer-type entries of E with Φ₀ (E_k ≈ E₀ + ik·s_hat).
    pub s_hat: BlockOperator,
}

impl StaticOperators {
    pub fn assemble(mesh: &PanelMesh) -> Self {
        let mut ops = crate::cauchy::assemble_kinds(
            mesh,
            &[KernelKind::Cauchy(C64::new(0.0, 0.0)), KernelKind::StaticSingleLayer],
        )
        .into_iter();
        Self {
            e0: ops.next().expect("assembled"),
            s_hat: ops.next().expect("assembled"),
        }
    }
}

/// Wavenumbers with |k̂| = LIMIT_KHAT, |k₊k̂| = t, arg k₊ = π/4, arg k₋ = 0
/// and ξ = 1.
pub fn limit_wavenumbers(t: f64) -> Result<Wavenumbers> {
    let kp = t / LIMIT_KHAT;
    let km = t / (LIMIT_KHAT * LIMIT_KHAT);
    Wavenumbers::with_delta(C64::new(km, 0.0), C64::from_polar(kp, PI / 4.0), 0.0)
}

/// The limit matrix, optionally with the variant's augmentations built
/// from the same limit operators. The genus-1 Neumann term needs the
/// weight; without it that term is left out.
pub fn quasistatic_limit(
    variant: Variant,
    mesh: &PanelMesh,
    ops: &StaticOperators,
    t: f64,
    augment: bool,
    weight: Option<&[f64]>,
) -> Result<BlockOperator> {
    let wn = limit_wavenumbers(t)?;
    let params = ParameterSet::new(variant, wn)?;
    let n = mesh.len();
    let i = C64::new(0.0, 1.0);
    let mut e_plus = ops.e0.clone();
    e_plus.add_scaled(i * wn.k_plus, &ops.s_hat);

    let mut m = BlockOperator::identity(n);
    m.add_scaled(C64::new(1.0, 0.0), &e_plus.diag_scaled(&params.p, &params.n_p));
    m.add_scaled(C64::new(-1.0, 0.0), &ops.e0.diag_scaled(&params.n, &params.p_p));
    if augment {
        // E₀ − E_{k₋} vanishes in the limit.
        let zero = BlockOperator::zeros(n);
        let inputs = AugmentationInputs {
            mesh,
            params: &params,
            e_plus: &e_plus,
            e_minus: &ops.e0,
            e_diff: Some(&zero),
            weight,
            e8_profile: None,
        };
        for id in augmentation_plan(variant, mesh.genus()) {
            use super::augment::AugmentationId::*;
            let term = match id {
                Bc1D => inputs.bc1_d(),
                BcRD => inputs.bcr_d(),
                Bc2D => inputs.bc2_d(),
                Bc1H => inputs.bc1_h(),
                Bc2H => inputs.bc2_h(),
                BcRN => inputs.bcr_n(),
                Bc1N if weight.is_none() => continue,
                Bc1N => inputs.bc1_n()?,
            };
            m.add_rank_one(&term.b, &term.c)?;
        }
    }
    Ok(m)
}

/// Numerical nullity of a descending singular value list: the number of
/// values below the largest jump of at least `gap` between neighbours,
/// provided those values are also small against the largest one.
pub fn numerical_nullity(sv: &[f64], gap: f64) -> usize {
    let mut best = 0;
    let mut best_ratio = gap;
    for k in 1..sv.len() {
        let lo = sv[k].max(f64::MIN_POSITIVE);
        let ratio = sv[k - 1] / lo;
        if ratio >= best_ratio && sv[k] < 1e-3 * sv[0] {
            best_ratio = ratio;
            best = sv.len() - k;
        }
    }
    best
}
