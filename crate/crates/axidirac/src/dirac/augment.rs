//! Finite-rank augmentation terms b·c (and the right-hand side functional d).
//!
//! Every functional c is a surface average of one component of some
//! operator applied to h. With u_j the density holding |Γ|⁻¹·(area weight)
//! in component j, ave∫(Xh)_j = u_j·(Xh) = (Xᵀu_j)·h, so each c becomes a
//! row vector after one transposed application.

use crate::blocks::BlockOperator;
use crate::density::DiracDensity;
use crate::error::{AxiError, Result};
use crate::geometry::PanelMesh;
use num_complex::Complex64 as C64;
use std::fmt;

use super::params::ParameterSet;

/// Which augmentation a term implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AugmentationId {
    /// Homogeneous (L), Dirichlet eigenfield, variant A∞.
    Bc1D,
    /// (R), adds the Dirichlet eigenfield to the exterior representation.
    BcRD,
    /// Homogeneous (L), Dirichlet eigenfield, variant B.
    Bc2D,
    /// Homogeneous (L), Helmholtz eigenfield, genus 0.
    Bc1H,
    /// Homogeneous (L), Helmholtz eigenfield adjusted to the Neumann (R) term.
    Bc2H,
    /// (R), adds the Neumann eigenfield to the interior representation.
    BcRN,
    /// Inhomogeneous (L), Neumann eigenfield.
    Bc1N,
}

impl fmt::Display for AugmentationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AugmentationId::Bc1D => "bc1_D",
            AugmentationId::BcRD => "bcR_D",
            AugmentationId::Bc2D => "bc2_D",
            AugmentationId::Bc1H => "bc1_H",
            AugmentationId::Bc2H => "bc2_H",
            AugmentationId::BcRN => "bcR_N",
            AugmentationId::Bc1N => "bc1_N",
        })
    }
}

/// One rank-one term b(c·h), with an optional data functional d.
#[derive(Debug, Clone)]
pub struct AugmentationTerm {
    pub id: AugmentationId,
    pub b: DiracDensity,
    pub c: DiracDensity,
    pub d: Option<DiracDensity>,
}

impl AugmentationTerm {
    pub fn apply_c(&self, h: &DiracDensity) -> C64 {
        self.c.dot(h)
    }
}

/// Operators the functionals are built from. `e_plus` and `e_minus` are
/// the Cauchy matrices at k₊ and k₋; `e_diff` is E₀ − E_{k₋}.
pub struct AugmentationInputs<'a> {
    pub mesh: &'a PanelMesh,
    pub params: &'a ParameterSet,
    pub e_plus: &'a BlockOperator,
    pub e_minus: &'a BlockOperator,
    pub e_diff: Option<&'a BlockOperator>,
    /// Neumann weight w at the nodes (genus 1, variant B).
    pub weight: Option<&'a [f64]>,
    /// Nodal profile of the component-8 slot of e₈; all ones by default.
    pub e8_profile: Option<&'a [C64]>,
}

/// u_j, scaled by an optional nodal weight.
pub fn averaging_density(mesh: &PanelMesh, component: usize, weight: Option<&[f64]>) -> DiracDensity {
    let n = mesh.len();
    let area = mesh.area();
    let mut u = DiracDensity::zeros(n);
    for (i, (v, nd)) in u.component_mut(component).iter_mut().zip(&mesh.nodes).enumerate() {
        let w = weight.map_or(1.0, |w| w[i]);
        *v = C64::new(nd.area_weight() * w / area, 0.0);
    }
    u
}

fn hardy_transpose(e: &BlockOperator, plus: bool, u: &DiracDensity) -> DiracDensity {
    // ((I ± E)/2)ᵀ u
    let mut v = e.apply_transpose(u);
    if !plus {
        for z in v.as_mut_slice() {
            *z = -*z;
        }
    }
    v.axpy(C64::new(1.0, 0.0), u);
    for z in v.as_mut_slice() {
        *z *= 0.5;
    }
    v
}

fn hardy_apply(e: &BlockOperator, plus: bool, h: &DiracDensity) -> DiracDensity {
    let mut v = e.apply(h);
    if !plus {
        for z in v.as_mut_slice() {
            *z = -*z;
        }
    }
    v.axpy(C64::new(1.0, 0.0), h);
    for z in v.as_mut_slice() {
        *z *= 0.5;
    }
    v
}

fn scaled_by(v: &DiracDensity, s: C64) -> DiracDensity {
    let mut out = v.clone();
    for z in out.as_mut_slice() {
        *z *= s;
    }
    out
}

impl AugmentationInputs<'_> {
    fn n(&self) -> usize {
        self.mesh.len()
    }

    fn e8(&self) -> DiracDensity {
        let mut d = DiracDensity::zeros(self.n());
        match self.e8_profile {
            Some(p) => d.component_mut(8).copy_from_slice(p),
            None => d.component_mut(8).fill(C64::new(1.0, 0.0)),
        }
        d
    }

    /// c¹_D h = ave(E⁻₋P′h)₆, b¹_D = e₆.
    pub fn bc1_d(&self) -> AugmentationTerm {
        let u6 = averaging_density(self.mesh, 6, None);
        let v = hardy_transpose(self.e_minus, false, &u6);
        AugmentationTerm {
            id: AugmentationId::Bc1D,
            b: DiracDensity::unit(self.n(), 6),
            c: v.scaled(&self.params.p_p),
            d: None,
        }
    }

    /// c^R_D h = ave h₆, b^R_D = 2N E⁻₋ e₆.
    pub fn bcr_d(&self) -> AugmentationTerm {
        let e6 = DiracDensity::unit(self.n(), 6);
        let b = scaled_by(&hardy_apply(self.e_minus, false, &e6).scaled(&self.params.n), C64::new(2.0, 0.0));
        AugmentationTerm {
            id: AugmentationId::BcRD,
            b,
            c: averaging_density(self.mesh, 6, None),
            d: None,
        }
    }

    /// c²_D h = ave(E⁻₋(P′h + e₆ c^R_D h))₆, b²_D = e₁.
    pub fn bc2_d(&self) -> AugmentationTerm {
        let u6 = averaging_density(self.mesh, 6, None);
        let v = hardy_transpose(self.e_minus, false, &u6);
        let mut c = v.scaled(&self.params.p_p);
        c.axpy(v.component_sum(6), &u6);
        AugmentationTerm {
            id: AugmentationId::Bc2D,
            b: DiracDensity::unit(self.n(), 1),
            c,
            d: None,
        }
    }

    /// c¹_H h = ave(E⁺₊ k̂N′h)₁, b¹_H = e₆.
    pub fn bc1_h(&self) -> AugmentationTerm {
        let kh = self.params.wavenumbers.khat();
        let u1 = averaging_density(self.mesh, 1, None);
        let v = hardy_transpose(self.e_plus, true, &u1);
        AugmentationTerm {
            id: AugmentationId::Bc1H,
            b: DiracDensity::unit(self.n(), 6),
            c: scaled_by(&v.scaled(&self.params.n_p), kh),
            d: None,
        }
    }

    /// c^R_N h = ave h₈, b^R_N = 2(⟨σ⟩/k̂²) P E⁺₊ e₈.
    pub fn bcr_n(&self) -> AugmentationTerm {
        let wn = self.params.wavenumbers;
        let kh = wn.khat();
        let s = C64::new(wn.sigma_bracket(), 0.0) / (kh * kh);
        let b = scaled_by(&hardy_apply(self.e_plus, true, &self.e8()).scaled(&self.params.p), 2.0 * s);
        AugmentationTerm {
            id: AugmentationId::BcRN,
            b,
            c: averaging_density(self.mesh, 8, None),
            d: None,
        }
    }

    /// c²_H h = ave(E⁺₊(k̂N′h + (⟨σ⟩/k̂) e₈ c^R_N h))₁, b²_H = e₆.
    pub fn bc2_h(&self) -> AugmentationTerm {
        let wn = self.params.wavenumbers;
        let kh = wn.khat();
        let u1 = averaging_density(self.mesh, 1, None);
        let v = hardy_transpose(self.e_plus, true, &u1);
        let mut c = scaled_by(&v.scaled(&self.params.n_p), kh);
        let e8v = self.e8().dot(&v);
        c.axpy(C64::new(wn.sigma_bracket(), 0.0) / kh * e8v, &averaging_density(self.mesh, 8, None));
        AugmentationTerm {
            id: AugmentationId::Bc2H,
            b: DiracDensity::unit(self.n(), 6),
            c,
            d: None,
        }
    }

    /// The regularized three-term c¹_N with weight w, b¹_N = e₈, and
    /// d¹_N f⁰ = (k̂²/⟨σ⟩) ave((f⁰)₈ w).
    pub fn bc1_n(&self) -> Result<AugmentationTerm> {
        let w = self
            .weight
            .ok_or_else(|| AxiError::Config("the Neumann augmentation needs the weight function w".into()))?;
        let e_diff = self
            .e_diff
            .ok_or_else(|| AxiError::Config("the Neumann augmentation needs the difference kernel E₀ − E_{k₋}".into()))?;
        let wn = self.params.wavenumbers;
        let kh = wn.khat();
        let scale = kh * kh / wn.sigma_bracket();
        let u8w = averaging_density(self.mesh, 8, Some(w));

        // ave(E⁺₊((k̂²/⟨σ⟩)N′ + e₈ c^R_N)h)₈ w
        let v = hardy_transpose(self.e_plus, true, &u8w);
        let mut c = scaled_by(&v.scaled(&self.params.n_p), scale);
        c.axpy(self.e8().dot(&v), &averaging_density(self.mesh, 8, None));

        // (k̂²/⟨σ⟩) ave(E⁻₋P′h_{1:5})₈ w
        let v = hardy_transpose(self.e_minus, false, &u8w).scaled(&self.params.p_p);
        c.axpy(scale, &v.restricted(&[1, 2, 3, 4, 5]));

        // (k̂²/⟨σ⟩) ave(½(E₀ − E₋)h_{7:8})₈ w
        let v = e_diff.apply_transpose(&u8w);
        c.axpy(0.5 * scale, &v.restricted(&[7, 8]));

        Ok(AugmentationTerm {
            id: AugmentationId::Bc1N,
            b: self.e8(),
            c,
            d: Some(scaled_by(&u8w, scale)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeneratingCurve;

    #[test]
    fn averaging_density_averages() {
        let mesh = PanelMesh::discretize(&GeneratingCurve::rotated_starfish(), 6, 16).unwrap();
        let u = averaging_density(&mesh, 8, None);
        let mut one = DiracDensity::zeros(mesh.len());
        one.component_mut(8).fill(C64::new(1.0, 0.0));
        assert!((u.dot(&one) - 1.0).norm() < 1e-13);
        // Other components are ignored.
        assert_eq!(u.dot(&DiracDensity::unit(mesh.len(), 6)), C64::new(0.0, 0.0));
        let w: Vec<f64> = mesh.nodes.iter().map(|n| 2.0 + n.z).collect();
        let uw = averaging_density(&mesh, 8, Some(&w));
        let want = mesh.surface_average(&w);
        assert!((uw.dot(&one) - want).norm() < 1e-13);
    }

    #[test]
    fn hardy_transpose_is_the_transpose_of_hardy_apply() {
        let mesh = PanelMesh::discretize(&GeneratingCurve::sphere(), 4, 16).unwrap();
        let e = crate::cauchy::CauchyMatrix::assemble(&mesh, C64::new(1.0, 1.0)).unwrap().op;
        let n = mesh.len();
        let mk = |s: f64| {
            DiracDensity::from_vec(n, (0..8 * n).map(|i| C64::new((s * i as f64).sin(), (0.3 * i as f64).cos())).collect())
        };
        let (a, b) = (mk(0.7), mk(1.3));
        for plus in [true, false] {
            let lhs = hardy_apply(&e, plus, &a).dot(&b);
            let rhs = a.dot(&hardy_transpose(&e, plus, &b));
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        }
    }
}
