//! Restart-free GMRES for dense complex systems.
//!
//! Modified Gram–Schmidt with one reorthogonalization pass and Givens
//! rotations on the Hessenberg matrix. Stops when the estimated relative
//! residual drops below the threshold, at the iteration cap, or when the
//! estimate stops decreasing (stagnation); in the last two cases the best
//! iterate seen so far is returned with `converged = false`.

use num_complex::Complex64 as C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Stopping controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    /// Threshold on the estimated relative residual ‖b − Ax‖/‖b‖.
    pub tol: f64,
    pub max_iter: usize,
    /// Iterations without a relative decrease of at least 1% in the
    /// residual estimate before stagnation is declared.
    pub stall_window: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self {
            tol: 2.2e-16,
            max_iter: 500,
            stall_window: 25,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GmresOutcome {
    pub x: Vec<C64>,
    /// Krylov dimension of the returned iterate.
    pub iterations: usize,
    /// Estimated relative residual at the returned iterate.
    pub residual: f64,
    pub converged: bool,
    /// Stopped because the residual estimate stopped decreasing.
    pub stagnated: bool,
    /// Estimated relative residual after each iteration, including any
    /// iterations past the returned (best) one.
    pub history: Vec<f64>,
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn cdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Solves A x = b from x₀ = 0 with `matvec` computing y = A v.
pub fn gmres(mut matvec: impl FnMut(&[C64], &mut [C64]), b: &[C64], opts: &GmresOptions) -> GmresOutcome {
    let n = b.len();
    let beta = norm(b);
    if beta == 0.0 {
        return GmresOutcome {
            x: vec![ZERO; n],
            iterations: 0,
            residual: 0.0,
            converged: true,
            stagnated: false,
            history: Vec::new(),
        };
    }
    let m = opts.max_iter.min(n).max(1);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m + 1);
    basis.push(b.iter().map(|v| v / beta).collect());
    // Column j of the rotated Hessenberg matrix holds j + 2 entries.
    let mut hess: Vec<Vec<C64>> = Vec::with_capacity(m);
    let mut cs: Vec<f64> = Vec::with_capacity(m);
    let mut sn: Vec<C64> = Vec::with_capacity(m);
    let mut g = vec![ZERO; m + 1];
    g[0] = C64::new(beta, 0.0);

    let mut history = Vec::new();
    let mut best = (0usize, 1.0f64);
    let mut last_improvement = 0usize;
    let mut stagnated = false;
    let mut lucky = false;
    let mut w = vec![ZERO; n];

    for j in 0..m {
        matvec(&basis[j], &mut w);
        let wnorm0 = norm(&w);
        let mut h = vec![ZERO; j + 2];
        for _pass in 0..2 {
            for (i, v) in basis.iter().enumerate() {
                let c = cdot(v, &w);
                h[i] += c;
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= c * vk;
                }
            }
        }
        let hn = norm(&w);
        h[j + 1] = C64::new(hn, 0.0);
        for i in 0..j {
            let t = cs[i] * h[i] + sn[i] * h[i + 1];
            h[i + 1] = -sn[i].conj() * h[i] + cs[i] * h[i + 1];
            h[i] = t;
        }
        let (c, s) = givens(h[j], h[j + 1]);
        h[j] = c * h[j] + s * h[j + 1];
        h[j + 1] = ZERO;
        g[j + 1] = -s.conj() * g[j];
        g[j] *= c;
        cs.push(c);
        sn.push(s);
        hess.push(h);

        let rel = g[j + 1].norm() / beta;
        history.push(rel);
        if rel < best.1 * 0.99 {
            last_improvement = j;
        }
        if rel <= best.1 {
            best = (j + 1, rel);
        }
        let breakdown = hn <= 1e-14 * wnorm0.max(f64::MIN_POSITIVE);
        if rel <= opts.tol || breakdown {
            lucky = breakdown;
            break;
        }
        if j + 1 - last_improvement > opts.stall_window {
            stagnated = true;
            break;
        }
        basis.push(w.iter().map(|v| v / hn).collect());
    }

    let k = best.0;
    let mut y = vec![ZERO; k];
    for i in (0..k).rev() {
        let mut acc = g[i];
        for l in i + 1..k {
            acc -= hess[l][i] * y[l];
        }
        y[i] = acc / hess[i][i];
    }
    let mut x = vec![ZERO; n];
    for (yi, v) in y.iter().zip(&basis) {
        for (xk, vk) in x.iter_mut().zip(v) {
            *xk += yi * vk;
        }
    }
    let converged = best.1 <= opts.tol || lucky;
    GmresOutcome {
        x,
        iterations: k,
        residual: best.1,
        converged,
        stagnated,
        history,
    }
}

/// Rotation (c, s) with c real such that [c s; −s̄ c]·[a; b] = [r; 0].
fn givens(a: C64, b: C64) -> (f64, C64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_matvec(a: &[Vec<C64>]) -> impl FnMut(&[C64], &mut [C64]) + '_ {
        move |v, out| {
            for (o, row) in out.iter_mut().zip(a) {
                *o = row.iter().zip(v).map(|(x, y)| x * y).sum();
            }
        }
    }

    #[test]
    fn zero_rhs_gives_zero_in_zero_iterations() {
        let a = vec![vec![C64::new(1.0, 0.0)]];
        let out = gmres(dense_matvec(&a), &[ZERO], &GmresOptions::default());
        assert_eq!(out.iterations, 0);
        assert!(out.converged);
        assert_eq!(out.x, vec![ZERO]);
    }

    #[test]
    fn solves_a_nonnormal_complex_system() {
        let n = 40;
        let a: Vec<Vec<C64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = if i == j { C64::new(2.0, 0.5) } else { ZERO };
                        d + C64::new(((i * 7 + j * 3) as f64).sin(), ((i + 2 * j) as f64).cos()) * (0.3 / n as f64)
                    })
                    .collect()
            })
            .collect();
        let x_true: Vec<C64> = (0..n).map(|i| C64::new(i as f64, 1.0 - i as f64 * 0.1)).collect();
        let mut b = vec![ZERO; n];
        dense_matvec(&a)(&x_true, &mut b);
        let out = gmres(dense_matvec(&a), &b, &GmresOptions { tol: 1e-13, ..Default::default() });
        assert!(out.converged, "{:?}", out.history);
        let err = out.x.iter().zip(&x_true).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "err {err}");
        assert!(out.history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    }

    #[test]
    fn cap_returns_best_iterate_unconverged() {
        // A cyclic shift needs n iterations; cap it earlier.
        let n = 30;
        let a: Vec<Vec<C64>> = (0..n)
            .map(|i| (0..n).map(|j| if j == (i + 1) % n { C64::new(1.0, 0.0) } else { ZERO }).collect())
            .collect();
        let mut b = vec![ZERO; n];
        b[0] = C64::new(1.0, 0.0);
        let out = gmres(dense_matvec(&a), &b, &GmresOptions { tol: 1e-14, max_iter: 10, stall_window: 100 });
        assert!(!out.converged);
        assert_eq!(out.iterations, 10);
    }
}
