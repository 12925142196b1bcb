//! Eight-component densities on the boundary and their parity split.
//!
//! Components, numbered 1..=8: F₀, ν·F₂, τ·F₂, θ·F₂, F₃, ν·F₁, τ·F₁, θ·F₁.
//! For Maxwell data F₁ = E and F₂ = H (up to the interior scale k̂).
//!
//! Under the reflection in a meridian plane, components 1, 4, 6, 7 of an
//! axisymmetric field are even and components 2, 3, 5, 8 are odd. The mode-0
//! Cauchy kernel only couples components of equal parity, which gives two
//! independent groups: TM = {1, 4, 6, 7} and TE = {2, 3, 5, 8}.

use num_complex::Complex64 as C64;

/// One of the two decoupled component groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// F₀, θ·F₂, ν·F₁, τ·F₁.
    Tm,
    /// ν·F₂, τ·F₂, F₃, θ·F₁.
    Te,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Tm, Parity::Te];

    /// Global component numbers (1-based) in block order.
    pub const fn components(self) -> [usize; 4] {
        match self {
            Parity::Tm => [1, 4, 6, 7],
            Parity::Te => [2, 3, 5, 8],
        }
    }

    /// Parity group and position inside the group of a component (1-based).
    pub fn locate(component: usize) -> (Parity, usize) {
        assert!((1..=8).contains(&component), "component {component} out of range");
        for p in Parity::BOTH {
            if let Some(pos) = p.components().iter().position(|&c| c == component) {
                return (p, pos);
            }
        }
        unreachable!()
    }
}

/// Eight complex values per node, stored component-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracDensity {
    n: usize,
    data: Vec<C64>,
}

impl DiracDensity {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C64::new(0.0, 0.0); 8 * n],
        }
    }

    /// e_c: the value 1 in component `c` at every node.
    pub fn unit(n: usize, component: usize) -> Self {
        let mut d = Self::zeros(n);
        d.component_mut(component).fill(C64::new(1.0, 0.0));
        d
    }

    pub fn from_vec(n: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), 8 * n, "density length must be 8N");
        Self { n, data }
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    /// Component `c` (1-based) at all nodes.
    pub fn component(&self, c: usize) -> &[C64] {
        &self.data[(c - 1) * self.n..c * self.n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [C64] {
        &mut self.data[(c - 1) * self.n..c * self.n]
    }

    /// The 4N values of one parity group, node-major: entry 4i + b is
    /// component `p.components()[b]` at node i.
    pub fn parity_part(&self, p: Parity) -> Vec<C64> {
        let n = self.n;
        let comps = p.components();
        let mut out = vec![C64::new(0.0, 0.0); 4 * n];
        for (b, c) in comps.into_iter().enumerate() {
            for (i, v) in self.component(c).iter().enumerate() {
                out[4 * i + b] = *v;
            }
        }
        out
    }

    pub fn set_parity_part(&mut self, p: Parity, values: &[C64]) {
        assert_eq!(values.len(), 4 * self.n);
        for (b, c) in p.components().into_iter().enumerate() {
            for (i, v) in self.component_mut(c).iter_mut().enumerate() {
                *v = values[4 * i + b];
            }
        }
    }

    pub fn from_parts(n: usize, tm: &[C64], te: &[C64]) -> Self {
        let mut d = Self::zeros(n);
        d.set_parity_part(Parity::Tm, tm);
        d.set_parity_part(Parity::Te, te);
        d
    }

    /// Copy with only the listed components kept.
    pub fn restricted(&self, keep: &[usize]) -> Self {
        let mut d = Self::zeros(self.n);
        for &c in keep {
            d.component_mut(c).copy_from_slice(self.component(c));
        }
        d
    }

    /// Componentwise scaling by an 8-vector of diagonal entries.
    pub fn scaled(&self, diag: &[C64; 8]) -> Self {
        let mut d = self.clone();
        for c in 1..=8 {
            for v in d.component_mut(c) {
                *v *= diag[c - 1];
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Bilinear pairing Σ uᵢvᵢ (no conjugation).
    pub fn dot(&self, other: &DiracDensity) -> C64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// Sum over nodes of one component.
    pub fn component_sum(&self, c: usize) -> C64 {
        self.component(c).iter().sum()
    }

    pub fn axpy(&mut self, alpha: C64, x: &DiracDensity) {
        for (a, b) in self.data.iter_mut().zip(&x.data) {
            *a += alpha * b;
        }
    }
}

impl std::ops::Add for &DiracDensity {
    type Output = DiracDensity;
    fn add(self, rhs: &DiracDensity) -> DiracDensity {
        let mut d = self.clone();
        d.axpy(C64::new(1.0, 0.0), rhs);
        d
    }
}

impl std::ops::Sub for &DiracDensity {
    type Output = DiracDensity;
    fn sub(self, rhs: &DiracDensity) -> DiracDensity {
        let mut d = self.clone();
        d.axpy(C64::new(-1.0, 0.0), rhs);
        d
    }
}
