//! Generating curves of axisymmetric surfaces and their panel discretization.
//!
//! A curve lives in the meridian half-plane with coordinates (ρ, z). Every
//! curve is written as centre + r(s)·(cos s, sin s), where r(s) is a short
//! trigonometric series. Genus-0 curves run over s ∈ [−π/2, π/2] from the
//! south pole to the north pole with their centre on the axis; genus-1
//! curves run over s ∈ [−π, π] and are closed. Both are counterclockwise in
//! the (ρ, z) plane, so the outward normal is (z′, −ρ′)/|γ′|.
//!
//! Frame convention at a point: ν outward normal, τ meridional tangent
//! (direction of increasing s), θ azimuthal, with ν = θ × τ.

use crate::error::{AxiError, Result};
use crate::quad::{gauss_legendre, GaussLegendre};
use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

/// Topology of the surface of revolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    /// Endpoints on the axis; the surface is a sphere topologically.
    AxisMeeting,
    /// Closed curve off the axis; the surface is a torus topologically.
    ClosedLoop,
}

impl Closure {
    pub fn genus(self) -> u8 {
        match self {
            Closure::AxisMeeting => 0,
            Closure::ClosedLoop => 1,
        }
    }
}

/// Named curves plus a custom trigonometric family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Sphere,
    RotatedStarfish,
    StarfishTorus,
    Custom,
}

impl std::str::FromStr for CurveKind {
    type Err = AxiError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(CurveKind::Sphere),
            "rotated-starfish" | "starfish" => Ok(CurveKind::RotatedStarfish),
            "starfish-torus" | "torus" => Ok(CurveKind::StarfishTorus),
            "custom" => Ok(CurveKind::Custom),
            other => Err(AxiError::Config(format!("unknown curve kind '{other}'"))),
        }
    }
}

/// Radius function r(s) = c₀ + Σ_j (a_j cos js + b_j sin js), j ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries {
    pub constant: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigSeries {
    /// Returns (r, r′, r″).
    fn eval(&self, s: f64) -> (f64, f64, f64) {
        let mut r = self.constant;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for (j, &a) in self.cos.iter().enumerate() {
            let m = (j + 1) as f64;
            let (sn, cs) = (m * s).sin_cos();
            r += a * cs;
            d1 -= a * m * sn;
            d2 -= a * m * m * cs;
        }
        for (j, &b) in self.sin.iter().enumerate() {
            let m = (j + 1) as f64;
            let (sn, cs) = (m * s).sin_cos();
            r += b * sn;
            d1 += b * m * cs;
            d2 -= b * m * m * sn;
        }
        (r, d1, d2)
    }
}

/// Position and derivatives of the curve at one parameter value.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub rho: f64,
    pub z: f64,
    pub drho: f64,
    pub dz: f64,
    pub d2rho: f64,
    pub d2z: f64,
}

impl CurvePoint {
    pub fn speed(&self) -> f64 {
        self.drho.hypot(self.dz)
    }
    /// Outward unit normal (ν_ρ, ν_z).
    pub fn normal(&self) -> (f64, f64) {
        let v = self.speed();
        (self.dz / v, -self.drho / v)
    }
    /// Unit meridional tangent (τ_ρ, τ_z).
    pub fn tangent(&self) -> (f64, f64) {
        let v = self.speed();
        (self.drho / v, self.dz / v)
    }
}

/// Generating curve of an axisymmetric surface.
#[derive(Clone)]
pub struct GeneratingCurve {
    pub kind: CurveKind,
    pub closure: Closure,
    pub center: (f64, f64),
    pub radius: TrigSeries,
    pub s_domain: (f64, f64),
    /// Dense polygon (closed along the axis for genus 0) for region tests.
    outline: Arc<Vec<(f64, f64)>>,
}

impl std::fmt::Debug for GeneratingCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeneratingCurve")
            .field("kind", &self.kind)
            .field("closure", &self.closure)
            .field("center", &self.center)
            .field("radius", &self.radius)
            .finish()
    }
}

impl GeneratingCurve {
    pub fn sphere() -> Self {
        Self::from_series(
            CurveKind::Sphere,
            Closure::AxisMeeting,
            (0.0, 0.0),
            TrigSeries {
                constant: 1.0,
                cos: vec![],
                sin: vec![],
            },
        )
        .expect("unit circle is a valid genus-0 curve")
    }

    /// (ρ, z) = (1 + 0.25 sin 5s)(cos s, sin s).
    pub fn rotated_starfish() -> Self {
        Self::from_series(
            CurveKind::RotatedStarfish,
            Closure::AxisMeeting,
            (0.0, 0.0),
            TrigSeries {
                constant: 1.0,
                cos: vec![],
                sin: vec![0.0, 0.0, 0.0, 0.0, 0.25],
            },
        )
        .expect("rotated starfish is a valid genus-0 curve")
    }

    /// (ρ, z) = (1, 0) + 0.5(1 + 0.25 sin 5s)(cos s, sin s).
    pub fn starfish_torus() -> Self {
        Self::from_series(
            CurveKind::StarfishTorus,
            Closure::ClosedLoop,
            (1.0, 0.0),
            TrigSeries {
                constant: 0.5,
                cos: vec![],
                sin: vec![0.0, 0.0, 0.0, 0.0, 0.125],
            },
        )
        .expect("starfish torus is a valid genus-1 curve")
    }

    pub fn build(kind: CurveKind) -> Result<Self> {
        match kind {
            CurveKind::Sphere => Ok(Self::sphere()),
            CurveKind::RotatedStarfish => Ok(Self::rotated_starfish()),
            CurveKind::StarfishTorus => Ok(Self::starfish_torus()),
            CurveKind::Custom => Err(AxiError::Config(
                "custom curves are built from a coefficient file".into(),
            )),
        }
    }

    /// Validates the closure invariants and builds the curve.
    pub fn from_series(
        kind: CurveKind,
        closure: Closure,
        center: (f64, f64),
        radius: TrigSeries,
    ) -> Result<Self> {
        let s_domain = match closure {
            Closure::AxisMeeting => (-PI / 2.0, PI / 2.0),
            Closure::ClosedLoop => (-PI, PI),
        };
        let mut curve = Self {
            kind,
            closure,
            center,
            radius,
            s_domain,
            outline: Arc::new(Vec::new()),
        };
        curve.validate()?;
        curve.outline = Arc::new(curve.build_polygon(8192));
        Ok(curve)
    }

    fn validate(&self) -> Result<()> {
        let (s0, s1) = self.s_domain;
        let samples = 2000;
        for i in 0..=samples {
            let s = s0 + (s1 - s0) * i as f64 / samples as f64;
            let p = self.eval(s);
            if !(p.speed() > 0.0) || !p.rho.is_finite() {
                return Err(AxiError::InvalidCurve(format!("degenerate point at s={s}")));
            }
            let interior = i > 0 && i < samples;
            if (self.closure == Closure::ClosedLoop || interior) && p.rho <= 0.0 {
                return Err(AxiError::InvalidCurve(format!(
                    "curve leaves the half-plane ρ > 0 at s={s}"
                )));
            }
        }
        if self.closure == Closure::AxisMeeting {
            if self.center.0.abs() > 1e-14 {
                return Err(AxiError::InvalidCurve(
                    "genus-0 curve endpoints must lie on the axis ρ = 0".into(),
                ));
            }
            for s in [s0, s1] {
                let p = self.eval(s);
                // A smooth surface of revolution meets its axis at right
                // angles, so the curve must leave the axis with dρ/ds ≠ 0.
                if p.drho.abs() < 1e-8 * p.speed() {
                    return Err(AxiError::InvalidCurve(
                        "genus-0 curve must cross the axis transversally".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn genus(&self) -> u8 {
        self.closure.genus()
    }

    pub fn eval(&self, s: f64) -> CurvePoint {
        let (r, r1, r2) = self.radius.eval(s);
        let (sn, cs) = s.sin_cos();
        CurvePoint {
            rho: self.center.0 + r * cs,
            z: self.center.1 + r * sn,
            drho: r1 * cs - r * sn,
            dz: r1 * sn + r * cs,
            d2rho: r2 * cs - 2.0 * r1 * sn - r * cs,
            d2z: r2 * sn + 2.0 * r1 * cs - r * sn,
        }
    }

    /// Chord γ(s + h) − γ(s) evaluated without cancellation, so that it keeps
    /// full relative accuracy even when s + h rounds to s.
    pub fn chord(&self, s: f64, h: f64) -> (f64, f64) {
        let half = 0.5 * h;
        let sh = half.sin();
        // r(s+h) − r(s) through sum-to-product identities.
        let mut dr = 0.0;
        for (j, &a) in self.radius.cos.iter().enumerate() {
            let m = (j + 1) as f64;
            dr -= 2.0 * a * (m * (s + half)).sin() * (m * half).sin();
        }
        for (j, &b) in self.radius.sin.iter().enumerate() {
            let m = (j + 1) as f64;
            dr += 2.0 * b * (m * (s + half)).cos() * (m * half).sin();
        }
        let r0 = self.radius.eval(s).0;
        let t = s + h;
        let (st, ct) = t.sin_cos();
        let dcos = -2.0 * (s + half).sin() * sh;
        let dsin = 2.0 * (s + half).cos() * sh;
        (dr * ct + r0 * dcos, dr * st + r0 * dsin)
    }

    /// Generalized diameter sup |x − y| over the solid, sampled on the
    /// surface: two rings at (ρ₁, z₁), (ρ₂, z₂) are at most
    /// √((ρ₁+ρ₂)² + (z₁−z₂)²) apart.
    pub fn diameter(&self) -> f64 {
        let n = 720;
        let (s0, s1) = self.s_domain;
        let pts: Vec<(f64, f64)> = (0..=n)
            .map(|i| {
                let p = self.eval(s0 + (s1 - s0) * i as f64 / n as f64);
                (p.rho, p.z)
            })
            .collect();
        let mut best: f64 = 0.0;
        for a in &pts {
            for b in &pts {
                best = best.max((a.0 + b.0).hypot(a.1 - b.1));
            }
        }
        best
    }

    /// Reads a custom curve from a key-value text file:
    ///
    /// ```text
    /// closure = genus1        # or genus0
    /// center = 1.0 0.0
    /// constant = 0.5
    /// cos = 0.0 0.05          # a_1 a_2 ...
    /// sin = 0.0 0.0 0.0 0.0 0.125
    /// ```
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut closure = None;
        let mut center = (0.0, 0.0);
        let mut constant = None;
        let mut cos = Vec::new();
        let mut sin = Vec::new();
        let floats = |v: &str| -> Result<Vec<f64>> {
            v.split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|e| AxiError::Config(format!("bad number '{t}': {e}")))
                })
                .collect()
        };
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| AxiError::Config(format!("expected key = value, got '{line}'")))?;
            let value = value.trim();
            match key.trim() {
                "closure" => {
                    closure = Some(match value {
                        "genus0" | "axis" => Closure::AxisMeeting,
                        "genus1" | "loop" => Closure::ClosedLoop,
                        other => return Err(AxiError::Config(format!("unknown closure '{other}'"))),
                    })
                }
                "center" => {
                    let v = floats(value)?;
                    if v.len() != 2 {
                        return Err(AxiError::Config("center needs two numbers".into()));
                    }
                    center = (v[0], v[1]);
                }
                "constant" => constant = Some(floats(value)?.first().copied().unwrap_or(0.0)),
                "cos" => cos = floats(value)?,
                "sin" => sin = floats(value)?,
                other => return Err(AxiError::Config(format!("unknown curve key '{other}'"))),
            }
        }
        let closure = closure.ok_or_else(|| AxiError::Config("missing closure".into()))?;
        let constant = constant.ok_or_else(|| AxiError::Config("missing constant".into()))?;
        Self::from_series(
            CurveKind::Custom,
            closure,
            center,
            TrigSeries { constant, cos, sin },
        )
    }

    /// Winding-number test in the meridian half-plane. Genus-0 curves are
    /// closed along the axis. Points with ρ < 0 are mirrored.
    pub fn contains(&self, rho: f64, z: f64) -> bool {
        let rho = rho.abs();
        let poly = &self.outline;
        let mut wn = 0i32;
        let m = poly.len();
        for i in 0..m {
            let (x0, y0) = poly[i];
            let (x1, y1) = poly[(i + 1) % m];
            let cross = (x1 - x0) * (z - y0) - (rho - x0) * (y1 - y0);
            if y0 <= z {
                if y1 > z && cross > 0.0 {
                    wn += 1;
                }
            } else if y1 <= z && cross < 0.0 {
                wn -= 1;
            }
        }
        wn != 0
    }

    fn build_polygon(&self, n: usize) -> Vec<(f64, f64)> {
        let (s0, s1) = self.s_domain;
        let mut pts: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let p = self.eval(s0 + (s1 - s0) * i as f64 / n as f64);
                (p.rho, p.z)
            })
            .collect();
        if self.closure == Closure::AxisMeeting {
            let p = self.eval(s1);
            pts.push((0.0, p.z));
        }
        pts
    }
}

/// One quadrature node with its frame.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub s: f64,
    pub rho: f64,
    pub z: f64,
    /// Outward normal (ν_ρ, ν_z).
    pub nu: (f64, f64),
    /// Meridional tangent (τ_ρ, τ_z).
    pub tau: (f64, f64),
    /// |γ′(s)|.
    pub speed: f64,
    /// Arclength weight: Gauss weight × half panel length × |γ′|.
    pub weight: f64,
    pub panel: usize,
}

impl Node {
    /// Surface weight including the 2πρ ring factor.
    pub fn area_weight(&self) -> f64 {
        2.0 * PI * self.rho * self.weight
    }
}

/// Parameter subinterval carrying one Gauss–Legendre panel.
#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
}

impl Panel {
    pub fn half(&self) -> f64 {
        0.5 * (self.b - self.a)
    }
    pub fn mid(&self) -> f64 {
        0.5 * (self.a + self.b)
    }
    /// Local coordinate in [-1, 1] of a parameter value.
    pub fn local(&self, s: f64) -> f64 {
        (s - self.mid()) / self.half()
    }
}

/// Composite Gauss–Legendre discretization of a generating curve.
#[derive(Debug, Clone)]
pub struct PanelMesh {
    pub curve: GeneratingCurve,
    pub panels: Vec<Panel>,
    pub order: usize,
    pub nodes: Vec<Node>,
}

impl PanelMesh {
    /// Uniform-in-s panels.
    pub fn discretize(curve: &GeneratingCurve, n_panels: usize, order: usize) -> Result<Self> {
        let (s0, s1) = curve.s_domain;
        let breaks: Vec<f64> = (0..=n_panels)
            .map(|i| s0 + (s1 - s0) * i as f64 / n_panels as f64)
            .collect();
        Self::from_breakpoints(curve, &breaks, order)
    }

    /// Panels between consecutive breakpoints; a hook for non-uniform
    /// refinement.
    pub fn from_breakpoints(curve: &GeneratingCurve, breaks: &[f64], order: usize) -> Result<Self> {
        let n_panels = breaks.len().saturating_sub(1);
        if n_panels < 4 {
            return Err(AxiError::InvalidMesh(format!(
                "need at least 4 panels, got {n_panels}"
            )));
        }
        if order != 16 && order != 32 {
            return Err(AxiError::InvalidMesh(format!(
                "panel order must be 16 or 32, got {order}"
            )));
        }
        let (s0, s1) = curve.s_domain;
        if (breaks[0] - s0).abs() > 1e-14 || (breaks[n_panels] - s1).abs() > 1e-14 {
            return Err(AxiError::InvalidMesh("breakpoints must span the curve".into()));
        }
        if breaks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(AxiError::InvalidMesh("breakpoints must increase".into()));
        }
        let rule = gauss_legendre(order);
        let panels: Vec<Panel> = breaks
            .windows(2)
            .map(|w| Panel { a: w[0], b: w[1] })
            .collect();
        let mut nodes = Vec::with_capacity(n_panels * order);
        for (ip, p) in panels.iter().enumerate() {
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let s = p.mid() + p.half() * x;
                let c = curve.eval(s);
                nodes.push(Node {
                    s,
                    rho: c.rho,
                    z: c.z,
                    nu: c.normal(),
                    tau: c.tangent(),
                    speed: c.speed(),
                    weight: w * p.half() * c.speed(),
                    panel: ip,
                });
            }
        }
        Ok(Self {
            curve: curve.clone(),
            panels,
            order,
            nodes,
        })
    }

    /// Same curve with ⌈1.5·n⌉ uniform panels.
    pub fn overresolve(&self) -> Result<Self> {
        let n = (3 * self.panels.len()).div_ceil(2);
        Self::discretize(&self.curve, n, self.order)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn n_panels(&self) -> usize {
        self.panels.len()
    }

    pub fn genus(&self) -> u8 {
        self.curve.genus()
    }

    pub fn rule(&self) -> &'static GaussLegendre {
        gauss_legendre(self.order)
    }

    /// Node index range of a panel.
    pub fn panel_nodes(&self, p: usize) -> std::ops::Range<usize> {
        p * self.order..(p + 1) * self.order
    }

    /// Panels that share an endpoint with `p` (wrapping for closed curves).
    pub fn neighbours(&self, p: usize) -> (Option<usize>, Option<usize>) {
        let n = self.panels.len();
        match self.curve.closure {
            Closure::ClosedLoop => (Some((p + n - 1) % n), Some((p + 1) % n)),
            Closure::AxisMeeting => (p.checked_sub(1), (p + 1 < n).then_some(p + 1)),
        }
    }

    /// Total surface area ∮ dΓ with the 2πρ factor.
    pub fn area(&self) -> f64 {
        self.nodes.iter().map(Node::area_weight).sum()
    }

    /// ∮ f dΓ / |Γ| for nodal values of f.
    pub fn surface_average<T>(&self, values: &[T]) -> T
    where
        T: Copy + std::iter::Sum<T> + std::ops::Mul<f64, Output = T> + std::ops::Div<f64, Output = T>,
    {
        let s: T = values
            .iter()
            .zip(&self.nodes)
            .map(|(v, n)| *v * n.area_weight())
            .sum();
        s / self.area()
    }

    /// Cheap content hash of the node set, used in matrix dump headers.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for n in &self.nodes {
            for v in [n.s, n.rho, n.z, n.weight] {
                h ^= v.to_bits();
                h = h.wrapping_mul(0x100000001b3);
            }
        }
        h
    }
}
