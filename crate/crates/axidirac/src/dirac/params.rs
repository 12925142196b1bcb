//! Wavenumbers and the diagonal parameter sets of the Dirac variants.

use crate::error::{AxiError, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Default tuning constant in ξ = 1 + iδ·arg k̂.
pub const DEFAULT_DELTA: f64 = 0.2 / PI;

/// Exterior and interior wavenumbers with the derived quantities every
/// parameter set is written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumbers {
    pub k_minus: C64,
    pub k_plus: C64,
    pub delta: f64,
}

impl Wavenumbers {
    pub fn new(k_minus: C64, k_plus: C64) -> Result<Self> {
        Self::with_delta(k_minus, k_plus, DEFAULT_DELTA)
    }

    pub fn with_delta(k_minus: C64, k_plus: C64, delta: f64) -> Result<Self> {
        for (name, k) in [("k_minus", k_minus), ("k_plus", k_plus)] {
            if !(k.re.is_finite() && k.im.is_finite()) {
                return Err(AxiError::InvalidWavenumbers(format!("{name} = {k} is not finite")));
            }
            if k.im < 0.0 {
                return Err(AxiError::InvalidWavenumbers(format!("{name} = {k} has negative imaginary part")));
            }
            if k.norm() == 0.0 {
                return Err(AxiError::InvalidWavenumbers(format!("{name} must be nonzero")));
            }
        }
        Ok(Self { k_minus, k_plus, delta })
    }

    /// Convenience constructor with arg k₋ = 0 and arg k₊ = π/4.
    pub fn eddy(k_minus: f64, k_plus_abs: f64) -> Result<Self> {
        Self::new(C64::new(k_minus, 0.0), C64::from_polar(k_plus_abs, PI / 4.0))
    }

    /// k̂ = k₊/k₋.
    pub fn khat(&self) -> C64 {
        self.k_plus / self.k_minus
    }

    /// k̂/|k̂|.
    pub fn a(&self) -> C64 {
        let kh = self.khat();
        kh / kh.norm()
    }

    pub fn xi(&self) -> C64 {
        C64::new(1.0, self.delta * self.khat().arg())
    }

    /// ⟨σ⟩ = 1 + |k₊k̂|.
    pub fn sigma_bracket(&self) -> f64 {
        1.0 + (self.k_plus * self.khat()).norm()
    }

    /// Regime advisories for a body of generalized diameter `l`: eddy
    /// current regime 0 < k₋L ≪ |k₊|L ≲ 50, and k̂ away from (0, ∞).
    pub fn advisories(&self, l: f64) -> Vec<String> {
        let mut out = Vec::new();
        let km = self.k_minus.norm() * l;
        let kp = self.k_plus.norm() * l;
        if km >= 0.1 * kp {
            out.push(format!("k₋L = {km:.3e} is not small compared with |k₊|L = {kp:.3e}"));
        }
        if kp > 50.0 {
            out.push(format!("|k₊|L = {kp:.3e} exceeds 50; skin depth under-resolved"));
        }
        if km > 1.0 {
            out.push(format!("k₋L = {km:.3e} is outside the low-frequency regime"));
        }
        let kh = self.khat();
        if kh.arg().abs() < 1e-3 {
            out.push(format!("k̂ = {kh} is close to the positive real axis"));
        }
        out
    }
}

/// Dirac BIE variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    A,
    AInf,
    B,
}

impl FromStr for Variant {
    type Err = AxiError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Variant::A),
            "ainf" | "a-inf" | "a_inf" | "a∞" => Ok(Variant::AInf),
            "b" => Ok(Variant::B),
            other => Err(AxiError::Config(format!("unknown variant {other:?}; expected A, Ainf or B"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::A => "A",
            Variant::AInf => "Ainf",
            Variant::B => "B",
        })
    }
}

/// Expands six slots [1, 2, 3:4, 5, 6, 7:8] to the eight components.
pub fn expand_slots(s: [C64; 6]) -> [C64; 8] {
    [s[0], s[1], s[2], s[2], s[3], s[4], s[5], s[5]]
}

/// Scalars and diagonal matrices of one variant at given wavenumbers.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSet {
    pub variant: Variant,
    pub wavenumbers: Wavenumbers,
    pub r: C64,
    pub beta: C64,
    pub gamma: C64,
    pub alpha_p: C64,
    pub beta_p: C64,
    pub gamma_p: C64,
    /// Jump matrix M (with α = k̂² for the physical transmission problem).
    pub m: [C64; 8],
    pub m_p: [C64; 8],
    pub p: [C64; 8],
    pub p_p: [C64; 8],
    pub n: [C64; 8],
    pub n_p: [C64; 8],
}

/// Identity tolerance checked at construction.
pub const IDENTITY_TOL: f64 = 1e-14;

impl ParameterSet {
    pub fn new(variant: Variant, wn: Wavenumbers) -> Result<Self> {
        let kh = wn.khat();
        if kh.im.abs() <= 1e-14 * kh.norm() && kh.re < 0.0 {
            return Err(AxiError::InvalidWavenumbers(format!(
                "k̂ = {kh} lies on the negative real axis"
            )));
        }
        let a = wn.a();
        let xi = wn.xi();
        let sig = C64::new(wn.sigma_bracket(), 0.0);
        let akh = kh.norm();
        let sq = kh.sqrt();
        let inv = |z: C64| ONE / z;
        let (r, beta, gamma, alpha_p, beta_p, gamma_p, p, p_p, n, n_p);
        match variant {
            Variant::A => {
                r = inv(kh);
                beta = xi;
                gamma = a;
                alpha_p = inv(kh);
                beta_p = inv(kh);
                gamma_p = a.conj();
                let ia = inv((ONE + a).sqrt());
                p_p = [ONE, sq * ia, sq, ONE, ONE, kh / (kh + 1.0)];
                p = [
                    xi / (inv(kh) + xi),
                    sq * ia,
                    sq / 2.0,
                    inv(ONE + a.conj()),
                    inv(ONE + inv(kh * kh)),
                    ONE,
                ];
                n = [inv(ONE + xi * kh), inv(sq) * ia, inv(2.0 * sq), inv(ONE + a), inv(ONE + kh * kh), ONE];
                n_p = [
                    ONE,
                    inv((ONE + a.conj()).sqrt()) / akh.sqrt(),
                    inv(sq),
                    ONE,
                    ONE,
                    inv(ONE + kh),
                ];
            }
            Variant::AInf => {
                r = inv(kh);
                beta = xi;
                gamma = a;
                alpha_p = inv(akh * kh);
                beta_p = a.conj();
                gamma_p = a.conj();
                let ac = a.conj();
                p = [
                    kh * kh / ((akh + inv(kh * xi)) * sig),
                    kh / ((ONE + a) * sig),
                    kh / (2.0 * sig),
                    inv(ONE + ac),
                    inv(ONE + inv(kh * kh)),
                    inv(ONE + ac),
                ];
                p_p = [sig / (kh * kh), sig, sig, ONE, ONE, ONE];
                n = [
                    kh * kh / ((akh * kh * xi + 1.0) * sig),
                    inv((ONE + a) * sig),
                    inv(2.0 * sig),
                    ac / (ONE + ac),
                    inv(ONE + kh * kh),
                    inv(ONE + ac),
                ];
                n_p = [sig / (a * kh), sig / akh, sig / kh, ONE, ONE, ac];
            }
            Variant::B => {
                r = inv(kh);
                beta = kh / (akh * akh);
                gamma = kh * kh / xi;
                alpha_p = inv(xi);
                beta_p = inv(kh);
                gamma_p = inv(xi);
                let ik2 = inv(kh * kh);
                p = [
                    inv(xi / kh + inv(a * a)),
                    kh / (xi + 1.0),
                    kh / 2.0,
                    (kh * kh / sig) / (ONE + xi * ik2),
                    (kh * kh / sig) / (xi + inv(kh)),
                    inv(ONE + xi * ik2),
                ];
                p_p = [ONE, ONE, ONE, sig * ik2, sig / kh, ONE];
                n = [
                    inv(ONE + xi * a * a / kh),
                    inv(xi + 1.0),
                    C64::new(0.5, 0.0),
                    (xi / sig) / (ONE + xi * ik2),
                    inv(sig) / (xi + inv(kh)),
                    inv(ONE + xi * ik2),
                ];
                n_p = [xi / kh, xi / kh, inv(kh), sig * ik2, xi * sig * ik2, xi * ik2];
            }
        }
        let alpha = kh * kh;
        let m = [kh / (alpha * beta), inv(kh), kh / alpha, inv(gamma), inv(alpha), ONE];
        let m_p = [inv(alpha_p), inv(gamma_p), ONE, kh, inv(kh * alpha_p * beta_p), inv(alpha_p * kh)];
        let set = Self {
            variant,
            wavenumbers: wn,
            r,
            beta,
            gamma,
            alpha_p,
            beta_p,
            gamma_p,
            m: expand_slots(m),
            m_p: expand_slots(m_p),
            p: expand_slots(p),
            p_p: expand_slots(p_p),
            n: expand_slots(n),
            n_p: expand_slots(n_p),
        };
        let defect = set.identity_defect();
        if !(defect < IDENTITY_TOL) {
            return Err(AxiError::Diagnostic(format!(
                "parameter identity P(rM′+M)P′ = I violated by {defect:.3e} for variant {variant} at k̂ = {kh}"
            )));
        }
        Ok(set)
    }

    /// max |P(rM′ + M)P′ − 1| over the eight diagonal entries.
    pub fn identity_defect(&self) -> f64 {
        (0..8)
            .map(|i| (self.p[i] * (self.r * self.m_p[i] + self.m[i]) * self.p_p[i] - 1.0).norm())
            .fold(0.0, f64::max)
    }

    /// Advisories specific to the variant (on top of the regime checks).
    pub fn advisories(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.variant == Variant::B && self.wavenumbers.khat().norm() < 1.0 {
            out.push(format!(
                "variant B is designed for |k̂| ≳ 1; got |k̂| = {:.3e}",
                self.wavenumbers.khat().norm()
            ));
        }
        out
    }
}
