//! Artifacts: CSV tables, PGM/PPM rasters and the JSON-lines run log.

use crate::error::{io_at, CliResult};
use axidirac::fields::FieldSample;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::PathBuf;

/// Environment variable naming the default output root.
pub const OUTPUT_ROOT_VAR: &str = "AXIDIRAC_OUTPUT";

/// Number of accurate digits every field should reach at the default
/// desk-scale resolutions. Production-size meshes reach about 13.
pub const TARGET_DIGITS: i32 = 6;

pub fn banner(command: &str) -> String {
    format!("axidirac {command}: desk-scale accuracy target is at least {TARGET_DIGITS} digits per field")
}

/// Output directory; created on first use.
#[derive(Debug, Clone)]
pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    pub fn new(root: PathBuf) -> CliResult<Self> {
        fs::create_dir_all(&root).map_err(io_at(&root))?;
        Ok(Self { root })
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.root.join(file)
    }

    /// Appends one record to `runs.jsonl`.
    pub fn log(&self, record: &RunRecord) -> CliResult<()> {
        let path = self.path("runs.jsonl");
        let mut f = OpenOptions::new().create(true).append(true).open(&path).map_err(io_at(&path))?;
        let line = serde_json::to_string(record)?;
        writeln!(f, "{line}").map_err(io_at(&path))?;
        Ok(())
    }

    pub fn csv(&self, file: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<PathBuf> {
        let path = self.path(file);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush().map_err(io_at(&path))?;
        Ok(path)
    }

    pub fn raster(&self, file: &str, raster: &Raster) -> CliResult<PathBuf> {
        let path = self.path(file);
        fs::write(&path, raster.encode()).map_err(io_at(&path))?;
        Ok(path)
    }
}

/// One entry of the run log. Every table value can be recomputed from the
/// inputs recorded here.
#[derive(Debug, Clone, Serialize, Default)]
pub struct RunRecord {
    pub command: String,
    pub name: String,
    /// The merged configuration the run used.
    pub config: std::collections::BTreeMap<String, String>,
    pub geometry: String,
    pub panels: usize,
    pub order: usize,
    pub nodes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub augmented: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_minus: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_plus: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub incident: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveStats>,
    /// Accurate digits of E⁺, E⁻, H⁺, H⁻.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digits: Option<[Option<i32>; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_errors: Option<[f64; 4]>,
    pub target_digits: i32,
    pub advisories: Vec<String>,
    /// Command specific diagnostics.
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
    pub wall_seconds: WallTimes,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize, Default, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub stagnated: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Default, PartialEq)]
pub struct WallTimes {
    pub assemble: f64,
    pub solve: f64,
    pub evaluate: f64,
    pub reference: f64,
    pub total: f64,
}

pub fn complex_pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// Shortest representation that parses back to the same f64.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

pub const FIELD_HEADER: [&str; 16] = [
    "x", "z", "region", "near", "re_e_rho", "im_e_rho", "re_e_z", "im_e_z", "re_e_theta", "im_e_theta", "re_h_rho",
    "im_h_rho", "re_h_z", "im_h_z", "re_h_theta", "im_h_theta",
];

/// x, z, region, near flag and Re/Im of the six field components. Exterior
/// rows hold the scattered field.
pub fn field_row(s: &FieldSample) -> Vec<String> {
    let mut row = vec![num(s.x), num(s.z), s.region.as_str().to_string(), (s.near as u8).to_string()];
    for v in s.e.iter().chain(&s.h) {
        row.push(num(v.re));
        row.push(num(v.im));
    }
    row
}

/// Row-major image, top row first.
#[derive(Debug, Clone, PartialEq)]
pub enum Raster {
    /// 8-bit grayscale.
    Gray { width: usize, height: usize, pixels: Vec<u8> },
    /// 8-bit RGB.
    Rgb { width: usize, height: usize, pixels: Vec<[u8; 3]> },
}

impl Raster {
    /// Binary PGM or PPM.
    pub fn encode(&self) -> Vec<u8> {
        match self {
            Raster::Gray { width, height, pixels } => {
                let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
                out.extend_from_slice(pixels);
                out
            }
            Raster::Rgb { width, height, pixels } => {
                let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
                out.extend(pixels.iter().flatten());
                out
            }
        }
    }

    /// |v| on an nx × nz grid stored z-major with z increasing (the
    /// meridian grid order), scaled so that the largest finite value is
    /// white. Non-finite values are black.
    pub fn magnitude(values: &[f64], nx: usize, nz: usize) -> Self {
        assert_eq!(values.len(), nx * nz);
        let top = values.iter().filter(|v| v.is_finite()).fold(0.0f64, |a, v| a.max(v.abs()));
        let pixels = flip_rows(values, nx, nz)
            .map(|v| if v.is_finite() && top > 0.0 { (255.0 * v.abs() / top).round() as u8 } else { 0 })
            .collect();
        Raster::Gray {
            width: nx,
            height: nz,
            pixels,
        }
    }

    /// Signed values on a blue, white, red scale symmetric about zero.
    /// Non-finite values are black.
    pub fn signed(values: &[f64], nx: usize, nz: usize) -> Self {
        assert_eq!(values.len(), nx * nz);
        let top = values.iter().filter(|v| v.is_finite()).fold(0.0f64, |a, v| a.max(v.abs()));
        let pixels = flip_rows(values, nx, nz)
            .map(|v| {
                if !v.is_finite() {
                    return [0, 0, 0];
                }
                let t = if top > 0.0 { v / top } else { 0.0 };
                let fade = (255.0 * (1.0 - t.abs())).round() as u8;
                if t >= 0.0 {
                    [255, fade, fade]
                } else {
                    [fade, fade, 255]
                }
            })
            .collect();
        Raster::Rgb {
            width: nx,
            height: nz,
            pixels,
        }
    }
}

fn flip_rows(values: &[f64], nx: usize, nz: usize) -> impl Iterator<Item = f64> + '_ {
    (0..nz).rev().flat_map(move |j| values[j * nx..(j + 1) * nx].iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_puts_high_z_on_top() {
        // z-major, z increasing: row 0 is the bottom.
        let r = Raster::magnitude(&[0.0, 1.0, 2.0, f64::NAN], 2, 2);
        let bytes = r.encode();
        assert!(bytes.starts_with(b"P5\n2 2\n255\n"));
        assert_eq!(&bytes[bytes.len() - 4..], &[255, 0, 0, 128]);
    }

    #[test]
    fn ppm_is_white_at_zero() {
        let r = Raster::signed(&[-1.0, 0.0, 1.0], 3, 1);
        let bytes = r.encode();
        assert!(bytes.starts_with(b"P6\n3 1\n255\n"));
        assert_eq!(&bytes[bytes.len() - 9..], &[0, 0, 255, 255, 255, 255, 255, 0, 0]);
    }

    #[test]
    fn numbers_roundtrip() {
        for v in [0.1, -1e-300, 123456.789, std::f64::consts::PI] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }
}
