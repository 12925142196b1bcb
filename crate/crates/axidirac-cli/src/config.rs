//! Key-value run configuration. Each command starts from its own defaults,
//! then applies a config file, then `--set key=value` and the named flags.

use crate::error::{CliError, CliResult};
use axidirac::dirac::{Variant, Wavenumbers};
use axidirac::geometry::{CurveKind, GeneratingCurve, PanelMesh};
use axidirac::incident::IncidentKind;
use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Flat string map; values are parsed on access so that errors name the key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn with_defaults(defaults: &[(&str, &str)]) -> Self {
        let mut m = Self::default();
        for (k, v) in defaults {
            m.set(k, v);
        }
        m
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(normalize_key(key), value.trim().to_string());
    }

    /// Lines `key = value`; `#` starts a comment.
    pub fn merge_text(&mut self, text: &str) -> CliResult<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value, got {line:?}", no + 1)))?;
            self.set(k.trim(), v);
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        self.merge_text(&text)
    }

    /// `key=value` as given to `--set`.
    pub fn merge_assignment(&mut self, arg: &str) -> CliResult<()> {
        let (k, v) = arg
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set expects key=value, got {arg:?}")))?;
        self.set(k.trim(), v);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(&normalize_key(key)).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> CliResult<&str> {
        self.get(key).ok_or_else(|| CliError::Config(format!("missing key {key:?}")))
    }

    pub fn parse<T: FromStr>(&self, key: &str) -> CliResult<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.require(key)?;
        raw.parse().map_err(|e| CliError::Config(format!("{key} = {raw:?}: {e}")))
    }

    pub fn complex(&self, key: &str) -> CliResult<C64> {
        let raw = self.require(key)?;
        parse_complex(raw).map_err(|e| CliError::Config(format!("{key}: {e}")))
    }

    pub fn flag(&self, key: &str) -> CliResult<bool> {
        match self.require(key)?.to_ascii_lowercase().as_str() {
            "1" | "true" | "yes" | "on" => Ok(true),
            "0" | "false" | "no" | "off" => Ok(false),
            other => Err(CliError::Config(format!("{key} = {other:?} is not a boolean"))),
        }
    }

    /// Comma or whitespace separated list.
    pub fn list(&self, key: &str) -> CliResult<Vec<String>> {
        Ok(self
            .require(key)?
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect())
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }
}

fn normalize_key(k: &str) -> String {
    k.trim().replace('-', "_").to_ascii_lowercase()
}

/// Parses `1.5`, `2i`, `1+i`, `1e-4-3e-4i` or `re,im`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("bad number {p:?} in {s:?}: {e}"));
    if let Some((re, im)) = t.split_once(',') {
        return Ok(C64::new(num(re)?, num(im)?));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(C64::new(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    // The sign separating the parts is not the leading one and not an exponent sign.
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let coeff = |p: &str| match p {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => num(p),
    };
    match split {
        Some(p) => Ok(C64::new(num(&body[..p])?, coeff(&body[p..])?)),
        None => Ok(C64::new(0.0, coeff(body)?)),
    }
}

/// Where the reference fields for the digit counts come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    /// Mie series for the unit sphere with the partial wave, else an
    /// overresolved solve.
    Auto,
    Mie,
    Overresolve,
    None,
}

impl FromStr for ReferenceKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Self::Auto),
            "mie" => Ok(Self::Mie),
            "overresolve" | "overresolved" => Ok(Self::Overresolve),
            "none" => Ok(Self::None),
            other => Err(format!("unknown reference {other:?}; expected auto, mie, overresolve or none")),
        }
    }
}

impl ReferenceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Auto => "auto",
            Self::Mie => "mie",
            Self::Overresolve => "overresolve",
            Self::None => "none",
        }
    }
}

/// Geometry and discretization.
#[derive(Debug, Clone)]
pub struct MeshSpec {
    pub geometry: String,
    pub curve_file: Option<PathBuf>,
    pub panels: usize,
    pub order: usize,
}

impl MeshSpec {
    pub fn from_config(c: &ConfigMap) -> CliResult<Self> {
        Ok(Self {
            geometry: c.require("geometry")?.to_string(),
            curve_file: c.get("curve_file").filter(|s| !s.is_empty()).map(PathBuf::from),
            panels: c.parse("panels")?,
            order: c.parse("order")?,
        })
    }

    pub fn curve(&self) -> CliResult<GeneratingCurve> {
        let kind: CurveKind = self.geometry.parse()?;
        Ok(match (kind, &self.curve_file) {
            (CurveKind::Custom, Some(path)) => GeneratingCurve::from_file(path)?,
            (CurveKind::Custom, None) => {
                return Err(CliError::Config("geometry = custom needs curve_file".into()));
            }
            (kind, _) => GeneratingCurve::build(kind)?,
        })
    }

    pub fn mesh(&self) -> CliResult<PanelMesh> {
        Ok(PanelMesh::discretize(&self.curve()?, self.panels, self.order)?)
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self.geometry.parse(), Ok(CurveKind::Sphere))
    }
}

/// Everything a single transmission solve needs besides the wavenumbers.
#[derive(Debug, Clone)]
pub struct SolveSpec {
    pub mesh: MeshSpec,
    pub variant: Variant,
    pub augment: bool,
    pub incident: IncidentKind,
    pub reference: ReferenceKind,
    pub grid: GridSpec,
    pub gmres_tol: f64,
    pub gmres_max_iter: usize,
}

impl SolveSpec {
    pub fn from_config(c: &ConfigMap) -> CliResult<Self> {
        Ok(Self {
            mesh: MeshSpec::from_config(c)?,
            variant: c.parse("variant")?,
            augment: c.flag("augment")?,
            incident: c.parse("incident")?,
            reference: c.parse("reference")?,
            grid: GridSpec::from_config(c)?,
            gmres_tol: c.parse("gmres_tol")?,
            gmres_max_iter: c.parse("gmres_max_iter")?,
        })
    }

    /// The reference actually used.
    pub fn resolved_reference(&self) -> ReferenceKind {
        match self.reference {
            ReferenceKind::Auto if self.mesh.is_sphere() && self.incident == IncidentKind::PartialWave => {
                ReferenceKind::Mie
            }
            ReferenceKind::Auto => ReferenceKind::Overresolve,
            other => other,
        }
    }
}

/// Uniform meridian grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x: (f64, f64),
    pub z: (f64, f64),
    pub nx: usize,
    pub nz: usize,
}

impl GridSpec {
    pub fn from_config(c: &ConfigMap) -> CliResult<Self> {
        let g = Self {
            x: (c.parse("x_min")?, c.parse("x_max")?),
            z: (c.parse("z_min")?, c.parse("z_max")?),
            nx: c.parse("grid_nx")?,
            nz: c.parse("grid_nz")?,
        };
        if g.nx == 0 || g.nz == 0 || !(g.x.0 < g.x.1) || !(g.z.0 < g.z.1) {
            return Err(CliError::Config(format!("degenerate grid {g:?}")));
        }
        Ok(g)
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        axidirac::fields::meridian_grid(self.x, self.z, self.nx, self.nz)
    }
}

pub fn wavenumbers(c: &ConfigMap) -> CliResult<Wavenumbers> {
    Ok(Wavenumbers::new(c.complex("k_minus")?, c.complex("k_plus")?)?)
}

/// Defaults shared by every solving command: a single solve on the unit
/// sphere finishes in seconds.
pub const SOLVE_DEFAULTS: &[(&str, &str)] = &[
    ("geometry", "sphere"),
    ("panels", "16"),
    ("order", "16"),
    ("variant", "B"),
    ("augment", "true"),
    ("incident", "partial-wave"),
    ("k_minus", "1e-4"),
    ("k_plus", "1+1i"),
    ("reference", "auto"),
    ("x_min", "-2"),
    ("x_max", "2"),
    ("z_min", "-2"),
    ("z_max", "2"),
    ("grid_nx", "30"),
    ("grid_nz", "30"),
    ("gmres_tol", "2.2e-16"),
    ("gmres_max_iter", "400"),
    ("name", "run"),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let cases = [
            ("1.5", C64::new(1.5, 0.0)),
            ("2i", C64::new(0.0, 2.0)),
            ("-i", C64::new(0.0, -1.0)),
            ("1+i", C64::new(1.0, 1.0)),
            ("1e-4-3e-4i", C64::new(1e-4, -3e-4)),
            ("1e+2+1E-2j", C64::new(100.0, 0.01)),
            ("10, 10", C64::new(10.0, 10.0)),
            ("-2 + 3 i", C64::new(-2.0, 3.0)),
        ];
        for (s, want) in cases {
            assert_eq!(parse_complex(s).unwrap(), want, "{s}");
        }
        assert!(parse_complex("1+xi").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn later_sources_override_earlier_ones() {
        let mut c = ConfigMap::with_defaults(&[("panels", "8"), ("variant", "B")]);
        c.merge_text("# comment\npanels = 12  # trailing\n\nk-minus = 1e-8\n").unwrap();
        c.merge_assignment("variant=Ainf").unwrap();
        assert_eq!(c.get("panels"), Some("12"));
        assert_eq!(c.get("k_minus"), Some("1e-8"));
        assert_eq!(c.parse::<Variant>("variant").unwrap(), Variant::AInf);
        assert!(c.merge_text("no equals sign").is_err());
        assert!(c.merge_assignment("novalue").is_err());
    }

    #[test]
    fn auto_reference_follows_the_problem() {
        let mut c = ConfigMap::with_defaults(SOLVE_DEFAULTS);
        assert_eq!(SolveSpec::from_config(&c).unwrap().resolved_reference(), ReferenceKind::Mie);
        c.set("incident", "zcoil");
        assert_eq!(SolveSpec::from_config(&c).unwrap().resolved_reference(), ReferenceKind::Overresolve);
        c.set("geometry", "torus");
        c.set("incident", "pw");
        assert_eq!(SolveSpec::from_config(&c).unwrap().resolved_reference(), ReferenceKind::Overresolve);
    }

    #[test]
    fn bad_values_name_their_key() {
        let mut c = ConfigMap::with_defaults(SOLVE_DEFAULTS);
        c.set("panels", "many");
        let e = SolveSpec::from_config(&c).unwrap_err().to_string();
        assert!(e.contains("panels"), "{e}");
        c.set("panels", "8");
        c.set("x_max", "-3");
        assert!(SolveSpec::from_config(&c).is_err());
    }
}
