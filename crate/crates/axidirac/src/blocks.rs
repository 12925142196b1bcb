//! Dense 8N×8N operators stored as their two decoupled parity blocks.
//!
//! Inside a block the unknowns are ordered node-major: row 4i + a is the
//! a-th component of the parity group at node i. This keeps the four rows
//! belonging to one target contiguous, which the row-parallel assembly uses.

use crate::density::{DiracDensity, Parity};
use crate::error::{AxiError, Result};
use ndarray::{s, Array1, Array2};
use ndarray_linalg::SVD;
use num_complex::Complex64 as C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    n: usize,
    pub tm: Array2<C64>,
    pub te: Array2<C64>,
}

impl BlockOperator {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            tm: Array2::zeros((4 * n, 4 * n)),
            te: Array2::zeros((4 * n, 4 * n)),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            tm: Array2::eye(4 * n),
            te: Array2::eye(4 * n),
        }
    }

    pub fn from_blocks(tm: Array2<C64>, te: Array2<C64>) -> Self {
        assert_eq!(tm.dim(), te.dim());
        assert_eq!(tm.nrows(), tm.ncols());
        assert_eq!(tm.nrows() % 4, 0);
        Self {
            n: tm.nrows() / 4,
            tm,
            te,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn block(&self, p: Parity) -> &Array2<C64> {
        match p {
            Parity::Tm => &self.tm,
            Parity::Te => &self.te,
        }
    }

    pub fn block_mut(&mut self, p: Parity) -> &mut Array2<C64> {
        match p {
            Parity::Tm => &mut self.tm,
            Parity::Te => &mut self.te,
        }
    }

    pub fn apply(&self, h: &DiracDensity) -> DiracDensity {
        assert_eq!(h.n_nodes(), self.n);
        let mut out = DiracDensity::zeros(self.n);
        for p in Parity::BOTH {
            let x = Array1::from(h.parity_part(p));
            let y = self.block(p).dot(&x);
            out.set_parity_part(p, y.as_slice().expect("contiguous"));
        }
        out
    }

    /// Aᵀh without conjugation; used to turn surface functionals of Ah into
    /// row vectors acting on h.
    pub fn apply_transpose(&self, h: &DiracDensity) -> DiracDensity {
        assert_eq!(h.n_nodes(), self.n);
        let mut out = DiracDensity::zeros(self.n);
        for p in Parity::BOTH {
            let x = Array1::from(h.parity_part(p));
            let y = self.block(p).t().dot(&x);
            out.set_parity_part(p, y.as_slice().expect("contiguous"));
        }
        out
    }

    pub fn matmul(&self, rhs: &BlockOperator) -> BlockOperator {
        BlockOperator {
            n: self.n,
            tm: self.tm.dot(&rhs.tm),
            te: self.te.dot(&rhs.te),
        }
    }

    pub fn scale(&self, alpha: C64) -> BlockOperator {
        BlockOperator {
            n: self.n,
            tm: self.tm.mapv(|v| v * alpha),
            te: self.te.mapv(|v| v * alpha),
        }
    }

    /// self + alpha·other.
    pub fn add_scaled(&mut self, alpha: C64, other: &BlockOperator) {
        self.tm.scaled_add(alpha, &other.tm);
        self.te.scaled_add(alpha, &other.te);
    }

    /// diag(left) · self · diag(right), with 8-vectors of per-component
    /// diagonal entries.
    pub fn diag_scaled(&self, left: &[C64; 8], right: &[C64; 8]) -> BlockOperator {
        let mut out = self.clone();
        for p in Parity::BOTH {
            let comps = p.components();
            let b = out.block_mut(p);
            for ((r, c), v) in b.indexed_iter_mut() {
                *v *= left[comps[r % 4] - 1] * right[comps[c % 4] - 1];
            }
        }
        out
    }

    /// N×N sub-block coupling component `col` into component `row`
    /// (1-based); zero when the components have different parity.
    pub fn component_block(&self, row: usize, col: usize) -> Array2<C64> {
        let (pr, a) = Parity::locate(row);
        let (pc, b) = Parity::locate(col);
        if pr != pc {
            return Array2::zeros((self.n, self.n));
        }
        self.block(pr).slice(s![a..;4, b..;4]).to_owned()
    }

    /// Largest entry magnitude coupling the `cols` components into the
    /// `rows` components (1-based).
    pub fn max_abs_between(&self, rows: &[usize], cols: &[usize]) -> f64 {
        let mut m: f64 = 0.0;
        for &r in rows {
            for &c in cols {
                m = m.max(self.component_block(r, c).iter().fold(0.0, |a, v| a.max(v.norm())));
            }
        }
        m
    }

    /// Adds b·cᵀ for densities b and c as an 8N-vector outer product. The
    /// product must not couple the two parity groups.
    pub fn add_rank_one(&mut self, b: &DiracDensity, c: &DiracDensity) -> Result<()> {
        let b_parts = [b.parity_part(Parity::Tm), b.parity_part(Parity::Te)];
        let c_parts = [c.parity_part(Parity::Tm), c.parity_part(Parity::Te)];
        let mass = |v: &[C64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let cross = mass(&b_parts[0]) * mass(&c_parts[1]) + mass(&b_parts[1]) * mass(&c_parts[0]);
        let diag = mass(&b_parts[0]) * mass(&c_parts[0]) + mass(&b_parts[1]) * mass(&c_parts[1]);
        if cross > 1e-12 * diag.max(f64::MIN_POSITIVE) {
            return Err(AxiError::Config(
                "rank-one term couples the two parity groups".into(),
            ));
        }
        for (i, p) in Parity::BOTH.into_iter().enumerate() {
            let blk = self.block_mut(p);
            for (r, bv) in b_parts[i].iter().enumerate() {
                if *bv == ZERO {
                    continue;
                }
                let mut row = blk.row_mut(r);
                for (x, cv) in row.iter_mut().zip(&c_parts[i]) {
                    *x += bv * cv;
                }
            }
        }
        Ok(())
    }

    /// Max entrywise |self − I|.
    pub fn identity_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for b in [&self.tm, &self.te] {
            for ((r, c), v) in b.indexed_iter() {
                let d = if r == c { *v - ONE } else { *v };
                m = m.max(d.norm());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.tm
            .iter()
            .chain(self.te.iter())
            .fold(0.0, |m, v| m.max(v.norm()))
    }

    /// All 8N singular values, descending.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        let mut all = Vec::with_capacity(8 * self.n);
        for b in [&self.tm, &self.te] {
            let (_, sv, _) = b.svd(false, false)?;
            all.extend(sv.iter().copied());
        }
        all.sort_by(|a, b| b.total_cmp(a));
        Ok(all)
    }

    /// Spectral condition number σ_max/σ_min.
    pub fn condition_number(&self) -> Result<f64> {
        let sv = self.singular_values()?;
        let last = *sv.last().unwrap_or(&0.0);
        Ok(if last > 0.0 { sv[0] / last } else { f64::INFINITY })
    }

    /// Dense 8N×8N matrix in component-major ordering (density layout).
    pub fn to_dense(&self) -> Array2<C64> {
        let n = self.n;
        let mut out = Array2::zeros((8 * n, 8 * n));
        for p in Parity::BOTH {
            let comps = p.components();
            for ((r, c), v) in self.block(p).indexed_iter() {
                let gr = (comps[r % 4] - 1) * n + r / 4;
                let gc = (comps[c % 4] - 1) * n + c / 4;
                out[[gr, gc]] = *v;
            }
        }
        out
    }
}
