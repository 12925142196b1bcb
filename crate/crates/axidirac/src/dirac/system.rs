//! The assembled second-kind system (I + G + Σ b·c)h = 2Nf⁰ [+ b(d f⁰)],
//! its solution by GMRES, and the boundary traces of the represented fields.

use crate::blocks::BlockOperator;
use crate::cauchy::CauchyMatrix;
use crate::density::DiracDensity;
use crate::error::{AxiError, Result};
use crate::geometry::PanelMesh;
use crate::gmres::{gmres, GmresOptions};
use crate::kernel::KernelKind;
use num_complex::Complex64 as C64;
use std::time::{Duration, Instant};

use super::augment::{AugmentationId, AugmentationInputs, AugmentationTerm};
use super::params::{ParameterSet, Variant, Wavenumbers};

/// Choices that shape the system beyond the wavenumbers.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub variant: Variant,
    /// Add the variant's augmentations (A has none).
    pub augment: bool,
    /// Factor on the Helmholtz augmentation of variant B.
    pub chi: f64,
    pub gmres: GmresOptions,
    /// Nodal profile replacing the constant in component 8 of e₈.
    pub e8_profile: Option<Vec<C64>>,
}

impl SystemConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            augment: true,
            chi: 1.0,
            gmres: GmresOptions::default(),
            e8_profile: None,
        }
    }

    pub fn unaugmented(variant: Variant) -> Self {
        Self {
            augment: false,
            ..Self::new(variant)
        }
    }
}

/// Cauchy matrices a system is built from.
#[derive(Debug, Clone)]
pub struct CauchyPair {
    pub e_plus: CauchyMatrix,
    pub e_minus: CauchyMatrix,
    /// E₀ − E_{k₋}, needed only by the genus-1 Neumann augmentation.
    pub e_diff: Option<CauchyMatrix>,
}

impl CauchyPair {
    /// Assembles E_{k₊}, E_{k₋} (and E₀ − E_{k₋} if requested) in one pass.
    pub fn assemble(mesh: &PanelMesh, wn: &Wavenumbers, with_difference: bool) -> Self {
        let mut kinds = vec![KernelKind::Cauchy(wn.k_plus), KernelKind::Cauchy(wn.k_minus)];
        if with_difference {
            kinds.push(KernelKind::Difference(C64::new(0.0, 0.0), wn.k_minus));
        }
        let mut ms = CauchyMatrix::assemble_many(mesh, &kinds).into_iter();
        let e_plus = ms.next().expect("assembled");
        let e_minus = ms.next().expect("assembled");
        Self {
            e_plus,
            e_minus,
            e_diff: ms.next(),
        }
    }
}

/// Which augmentations a variant uses on a surface of given genus.
pub fn augmentation_plan(variant: Variant, genus: u8) -> Vec<AugmentationId> {
    use AugmentationId::*;
    match (variant, genus) {
        (Variant::A, _) => vec![],
        (Variant::AInf, _) => vec![Bc1D],
        (Variant::B, 0) => vec![BcRD, Bc2D, Bc1H],
        (Variant::B, _) => vec![BcRD, Bc2D, BcRN, Bc1N, Bc2H],
    }
}

/// Result of a solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub h: DiracDensity,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub stagnated: bool,
    pub wall: Duration,
}

/// Dense system ready for GMRES.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub mesh: PanelMesh,
    pub params: ParameterSet,
    pub config: SystemConfig,
    pub cauchy: CauchyPair,
    /// I + G + Σ b·c.
    pub matrix: BlockOperator,
    pub augmentations: Vec<AugmentationTerm>,
    pub genus: u8,
}

impl AssembledSystem {
    /// Assembles the Cauchy matrices and the system.
    pub fn build(mesh: &PanelMesh, wn: Wavenumbers, config: SystemConfig, weight: Option<&[f64]>) -> Result<Self> {
        let plan = if config.augment {
            augmentation_plan(config.variant, mesh.genus())
        } else {
            Vec::new()
        };
        let needs_diff = plan.contains(&AugmentationId::Bc1N);
        if needs_diff && weight.is_none() {
            return Err(AxiError::Config(
                "variant B on a genus-1 surface needs the Neumann weight function".into(),
            ));
        }
        let pair = CauchyPair::assemble(mesh, &wn, needs_diff);
        Self::from_cauchy(mesh, wn, config, pair, weight)
    }

    /// Builds the system from already assembled Cauchy matrices.
    pub fn from_cauchy(
        mesh: &PanelMesh,
        wn: Wavenumbers,
        config: SystemConfig,
        cauchy: CauchyPair,
        weight: Option<&[f64]>,
    ) -> Result<Self> {
        let fp = mesh.fingerprint();
        if cauchy.e_plus.mesh_fingerprint != fp || cauchy.e_minus.mesh_fingerprint != fp {
            return Err(AxiError::Config("Cauchy matrices were assembled on a different mesh".into()));
        }
        if cauchy.e_plus.wavenumber() != wn.k_plus || cauchy.e_minus.wavenumber() != wn.k_minus {
            return Err(AxiError::Config("Cauchy matrices do not match the wavenumbers".into()));
        }
        if let Some(w) = weight {
            if w.len() != mesh.len() {
                return Err(AxiError::Config("weight length differs from the node count".into()));
            }
        }
        let params = ParameterSet::new(config.variant, wn)?;
        let genus = mesh.genus();
        let n = mesh.len();

        // I + P E₊ N′ − N E₋ P′
        let mut matrix = BlockOperator::identity(n);
        matrix.add_scaled(C64::new(1.0, 0.0), &cauchy.e_plus.op.diag_scaled(&params.p, &params.n_p));
        matrix.add_scaled(C64::new(-1.0, 0.0), &cauchy.e_minus.op.diag_scaled(&params.n, &params.p_p));

        let plan = if config.augment {
            augmentation_plan(config.variant, genus)
        } else {
            Vec::new()
        };
        let inputs = AugmentationInputs {
            mesh,
            params: &params,
            e_plus: &cauchy.e_plus.op,
            e_minus: &cauchy.e_minus.op,
            e_diff: cauchy.e_diff.as_ref().map(|m| &m.op),
            weight,
            e8_profile: config.e8_profile.as_deref(),
        };
        let augmentations = build_terms(&inputs, &plan)?;
        for t in &augmentations {
            let chi = match t.id {
                AugmentationId::Bc1H | AugmentationId::Bc2H => config.chi,
                _ => 1.0,
            };
            if chi != 0.0 {
                let b = if chi == 1.0 { t.b.clone() } else { t.b.scaled(&[C64::new(chi, 0.0); 8]) };
                matrix.add_rank_one(&b, &t.c)?;
            }
        }
        Ok(Self {
            mesh: mesh.clone(),
            params,
            config,
            cauchy,
            matrix,
            augmentations,
            genus,
        })
    }

    pub fn wavenumbers(&self) -> Wavenumbers {
        self.params.wavenumbers
    }

    pub fn n_nodes(&self) -> usize {
        self.mesh.len()
    }

    pub fn term(&self, id: AugmentationId) -> Option<&AugmentationTerm> {
        self.augmentations.iter().find(|t| t.id == id)
    }

    /// 2Nf⁰ + Σ b(d f⁰).
    pub fn rhs(&self, f0: &DiracDensity) -> DiracDensity {
        let mut g = f0.scaled(&self.params.n);
        for z in g.as_mut_slice() {
            *z *= 2.0;
        }
        for t in &self.augmentations {
            if let Some(d) = &t.d {
                g.axpy(d.dot(f0), &t.b);
            }
        }
        g
    }

    /// d¹_N f⁰ when the Neumann augmentation is active.
    pub fn excitation(&self, f0: &DiracDensity) -> Option<C64> {
        self.term(AugmentationId::Bc1N).and_then(|t| t.d.as_ref()).map(|d| d.dot(f0))
    }

    /// Solves for h. The incident trace must have zero Helmholtz slots.
    pub fn solve(&self, f0: &DiracDensity) -> Result<SolveReport> {
        if f0.n_nodes() != self.n_nodes() {
            return Err(AxiError::Config("incident trace has the wrong node count".into()));
        }
        let scale = f0.max_abs();
        let helm = f0.component(1).iter().chain(f0.component(5)).fold(0.0f64, |m, z| m.max(z.norm()));
        if helm > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(AxiError::Config("incident trace is not Maxwell data: components 1 and 5 must vanish".into()));
        }
        let start = Instant::now();
        let g = self.rhs(f0);
        let n = self.n_nodes();
        let out = gmres(
            |v, y| {
                let hv = DiracDensity::from_vec(n, v.to_vec());
                y.copy_from_slice(self.matrix.apply(&hv).as_slice());
            },
            g.as_slice(),
            &self.config.gmres,
        );
        Ok(SolveReport {
            h: DiracDensity::from_vec(n, out.x),
            iterations: out.iterations,
            residual: out.residual,
            converged: out.converged,
            stagnated: out.stagnated,
            wall: start.elapsed(),
        })
    }

    /// Dense direct solve, for cross-checks.
    pub fn solve_direct(&self, f0: &DiracDensity) -> Result<DiracDensity> {
        use crate::density::Parity;
        use ndarray::Array1;
        use ndarray_linalg::Solve;
        let g = self.rhs(f0);
        let mut parts = Vec::new();
        for p in Parity::BOTH {
            let x = self.matrix.block(p).solve(&Array1::from(g.parity_part(p)))?;
            parts.push(x.to_vec());
        }
        Ok(DiracDensity::from_parts(self.n_nodes(), &parts[0], &parts[1]))
    }

    /// max |(system)h − rhs| / max |rhs|.
    pub fn relative_residual(&self, h: &DiracDensity, f0: &DiracDensity) -> f64 {
        let g = self.rhs(f0);
        (&self.matrix.apply(h) - &g).max_abs() / g.max_abs().max(f64::MIN_POSITIVE)
    }

    /// c^R_D h when active.
    pub fn c_rd(&self, h: &DiracDensity) -> C64 {
        self.term(AugmentationId::BcRD).map_or(C64::new(0.0, 0.0), |t| t.apply_c(h))
    }

    /// c^R_N h when active.
    pub fn c_rn(&self, h: &DiracDensity) -> C64 {
        self.term(AugmentationId::BcRN).map_or(C64::new(0.0, 0.0), |t| t.apply_c(h))
    }

    fn e8(&self) -> DiracDensity {
        let mut d = DiracDensity::zeros(self.n_nodes());
        match &self.config.e8_profile {
            Some(p) => d.component_mut(8).copy_from_slice(p),
            None => d.component_mut(8).fill(C64::new(1.0, 0.0)),
        }
        d
    }

    /// Density whose interior Cauchy integral is F⁺:
    /// N′h [+ (⟨σ⟩/k̂²) e₈ c^R_N h].
    pub fn interior_generator(&self, h: &DiracDensity) -> DiracDensity {
        let mut g = h.scaled(&self.params.n_p);
        if self.term(AugmentationId::BcRN).is_some() {
            let wn = self.wavenumbers();
            let kh = wn.khat();
            g.axpy(C64::new(wn.sigma_bracket(), 0.0) / (kh * kh) * self.c_rn(h), &self.e8());
        }
        g
    }

    /// Density whose exterior Cauchy integral is F⁻: P′h [+ e₆ c^R_D h].
    pub fn exterior_generator(&self, h: &DiracDensity) -> DiracDensity {
        let mut g = h.scaled(&self.params.p_p);
        if self.term(AugmentationId::BcRD).is_some() {
            g.axpy(self.c_rd(h), &DiracDensity::unit(self.n_nodes(), 6));
        }
        g
    }

    /// F⁺|_Γ = E⁺₊(interior generator).
    pub fn interior_trace(&self, h: &DiracDensity) -> DiracDensity {
        self.cauchy
            .e_plus
            .hardy_project(crate::cauchy::Side::Plus, &self.interior_generator(h))
    }

    /// F⁻|_Γ = −E⁻₋(exterior generator).
    pub fn exterior_trace(&self, h: &DiracDensity) -> DiracDensity {
        let mut t = self
            .cauchy
            .e_minus
            .hardy_project(crate::cauchy::Side::Minus, &self.exterior_generator(h));
        for z in t.as_mut_slice() {
            *z = -*z;
        }
        t
    }
}

fn build_terms(inputs: &AugmentationInputs<'_>, plan: &[AugmentationId]) -> Result<Vec<AugmentationTerm>> {
    plan.iter()
        .map(|id| match id {
            AugmentationId::Bc1D => Ok(inputs.bc1_d()),
            AugmentationId::BcRD => Ok(inputs.bcr_d()),
            AugmentationId::Bc2D => Ok(inputs.bc2_d()),
            AugmentationId::Bc1H => Ok(inputs.bc1_h()),
            AugmentationId::Bc2H => Ok(inputs.bc2_h()),
            AugmentationId::BcRN => Ok(inputs.bcr_n()),
            AugmentationId::Bc1N => inputs.bc1_n(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{GeneratingCurve, PanelMesh};
    use crate::incident::IncidentField;

    fn sphere() -> PanelMesh {
        PanelMesh::discretize(&GeneratingCurve::sphere(), 6, 16).unwrap()
    }

    fn wn() -> Wavenumbers {
        Wavenumbers::new(C64::new(1e-3, 0.0), C64::new(1.0, 1.0)).unwrap()
    }

    #[test]
    fn plans_follow_variant_and_genus() {
        use AugmentationId::*;
        assert!(augmentation_plan(Variant::A, 1).is_empty());
        assert_eq!(augmentation_plan(Variant::AInf, 0), vec![Bc1D]);
        assert_eq!(augmentation_plan(Variant::B, 0), vec![BcRD, Bc2D, Bc1H]);
        assert_eq!(augmentation_plan(Variant::B, 1), vec![BcRD, Bc2D, BcRN, Bc1N, Bc2H]);
    }

    #[test]
    fn gmres_agrees_with_the_direct_solve() {
        let mesh = sphere();
        for v in [Variant::A, Variant::AInf, Variant::B] {
            let sys = AssembledSystem::build(&mesh, wn(), SystemConfig::new(v), None).unwrap();
            let f0 = IncidentField::PartialWave { k: wn().k_minus }.trace(&mesh).unwrap();
            let it = sys.solve(&f0).unwrap();
            let direct = sys.solve_direct(&f0).unwrap();
            let err = (&it.h - &direct).max_abs() / direct.max_abs();
            assert!(err < 1e-10, "{v}: {err:e}");
            assert!(sys.relative_residual(&it.h, &f0) < 1e-10);
        }
    }

    #[test]
    fn genus_one_variant_b_needs_the_weight() {
        let torus = PanelMesh::discretize(&GeneratingCurve::starfish_torus(), 8, 16).unwrap();
        let err = AssembledSystem::build(&torus, wn(), SystemConfig::new(Variant::B), None);
        assert!(matches!(err, Err(AxiError::Config(_))));
    }

    #[test]
    fn solve_rejects_non_maxwell_data() {
        let mesh = sphere();
        let sys = AssembledSystem::build(&mesh, wn(), SystemConfig::new(Variant::AInf), None).unwrap();
        let mut f0 = IncidentField::PartialWave { k: wn().k_minus }.trace(&mesh).unwrap();
        f0.component_mut(1)[3] = C64::new(1.0, 0.0);
        assert!(sys.solve(&f0).is_err());
        assert!(sys.solve(&DiracDensity::zeros(3)).is_err());
    }

    #[test]
    fn traces_lie_in_their_hardy_spaces() {
        let mesh = sphere();
        let sys = AssembledSystem::build(&mesh, wn(), SystemConfig::new(Variant::B), None).unwrap();
        let f0 = IncidentField::PartialWave { k: wn().k_minus }.trace(&mesh).unwrap();
        let h = sys.solve(&f0).unwrap().h;
        let tp = sys.interior_trace(&h);
        let tm = sys.exterior_trace(&h);
        // E t = t inside, E t = −t outside.
        let dp = (&sys.cauchy.e_plus.op.apply(&tp) - &tp).max_abs() / tp.max_abs();
        let dm = (&sys.cauchy.e_minus.op.apply(&tm) + &tm).max_abs() / tm.max_abs();
        assert!(dp < 1e-8 && dm < 1e-8, "{dp:e} {dm:e}");
    }
}
