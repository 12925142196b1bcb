//! Quadrature building blocks: Gauss–Legendre rules, barycentric Lagrange
//! interpolation on panel nodes, and an adaptive Gauss–Kronrod integrator
//! for vector-valued integrands.

use num_complex::Complex64 as C64;
use std::sync::OnceLock;

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Barycentric interpolation weights for the nodes.
    pub bary: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on P_n from Chebyshev initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        // Barycentric weights for Legendre points: (-1)^j sqrt((1-x_j^2) w_j).
        let bary = (0..n)
            .map(|j| {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                s * ((1.0 - nodes[j] * nodes[j]) * weights[j]).sqrt()
            })
            .collect();
        Self {
            nodes,
            weights,
            bary,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Lagrange basis values ℓ_j(x) at a point of [-1, 1].
    pub fn lagrange_basis(&self, x: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.len());
        for (j, &xj) in self.nodes.iter().enumerate() {
            if x == xj {
                out.fill(0.0);
                out[j] = 1.0;
                return;
            }
        }
        let mut denom = 0.0;
        for j in 0..self.len() {
            let t = self.bary[j] / (x - self.nodes[j]);
            out[j] = t;
            denom += t;
        }
        for v in out.iter_mut() {
            *v /= denom;
        }
    }

    /// Integrates f over [a, b].
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared rule of a given order, built once per order and kept for the
/// lifetime of the process.
pub fn gauss_legendre(n: usize) -> &'static GaussLegendre {
    use std::collections::HashMap;
    // Lock-free fast path for the orders used in inner loops.
    static G16: OnceLock<GaussLegendre> = OnceLock::new();
    static G32: OnceLock<GaussLegendre> = OnceLock::new();
    match n {
        16 => return G16.get_or_init(|| GaussLegendre::new(16)),
        32 => return G32.get_or_init(|| GaussLegendre::new(32)),
        _ => {}
    }
    use std::sync::Mutex;
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static GaussLegendre>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("quadrature cache poisoned");
    map.entry(n)
        .or_insert_with(|| Box::leak(Box::new(GaussLegendre::new(n))))
}

#[allow(clippy::excessive_precision)]
const GK_XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const GK_WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const GK_WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Adaptive Gauss–Kronrod (7/15) integration of a vector-valued complex
/// integrand over [a, b]. The integrand writes `dim` values into its output
/// slice. Terminates when the summed error estimate is below
/// `tol · max(|I|_∞, abs_floor)` or after `max_intervals` subdivisions.
pub fn adaptive_gk(
    dim: usize,
    a: f64,
    b: f64,
    tol: f64,
    abs_floor: f64,
    max_intervals: usize,
    mut f: impl FnMut(f64, &mut [C64]),
) -> Vec<C64> {
    struct Piece {
        a: f64,
        b: f64,
        val: Vec<C64>,
        err: f64,
    }
    let mut buf = vec![C64::new(0.0, 0.0); dim];
    let mut eval = |a: f64, b: f64, buf: &mut [C64]| -> (Vec<C64>, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut k = vec![C64::new(0.0, 0.0); dim];
        let mut g = vec![C64::new(0.0, 0.0); dim];
        f(c, buf);
        for d in 0..dim {
            k[d] += buf[d] * GK_WGK[7];
            g[d] += buf[d] * GK_WG[3];
        }
        for j in 0..7 {
            let x = h * GK_XGK[j];
            for sgn in [-1.0, 1.0] {
                f(c + sgn * x, buf);
                for d in 0..dim {
                    k[d] += buf[d] * GK_WGK[j];
                    if j % 2 == 1 {
                        g[d] += buf[d] * GK_WG[j / 2];
                    }
                }
            }
        }
        let mut err: f64 = 0.0;
        for d in 0..dim {
            k[d] *= h;
            g[d] *= h;
            err = err.max((k[d] - g[d]).norm());
        }
        (k, err)
    };
    let (v, e) = eval(a, b, &mut buf);
    let mut pieces = vec![Piece { a, b, val: v, err: e }];
    loop {
        let mut total = vec![C64::new(0.0, 0.0); dim];
        let mut err_sum = 0.0;
        for p in &pieces {
            for d in 0..dim {
                total[d] += p.val[d];
            }
            err_sum += p.err;
        }
        let scale = total.iter().fold(abs_floor, |m, z| m.max(z.norm()));
        if err_sum <= tol * scale || pieces.len() >= max_intervals {
            return total;
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, be), (i, p)| {
                if p.err > be {
                    (i, p.err)
                } else {
                    (bi, be)
                }
            });
        let p = pieces.swap_remove(idx);
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = eval(p.a, m, &mut buf);
        let (v2, e2) = eval(m, p.b, &mut buf);
        pieces.push(Piece {
            a: p.a,
            b: m,
            val: v1,
            err: e1,
        });
        pieces.push(Piece {
            a: m,
            b: p.b,
            val: v2,
            err: e2,
        });
    }
}

/// Real scalar convenience wrapper around [`adaptive_gk`].
pub fn adaptive_gk_real(a: f64, b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    adaptive_gk(1, a, b, tol, 1e-300, 4000, |x, out| {
        out[0] = C64::new(f(x), 0.0)
    })[0]
        .re
}
