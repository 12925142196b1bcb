pub mod cond;
pub mod neumann;
pub mod solve;

use crate::config::{ConfigMap, MeshSpec};
use crate::output::{OutputDir, RunRecord, TARGET_DIGITS};

/// Merged configuration and output location of one command.
pub struct Invocation {
    pub config: ConfigMap,
    pub out: OutputDir,
    pub deterministic: bool,
}

pub fn base_record(command: &str, config: &ConfigMap, mesh: &MeshSpec) -> RunRecord {
    RunRecord {
        command: command.to_string(),
        name: config.get("name").unwrap_or(command).to_string(),
        config: config.entries().clone(),
        geometry: mesh.geometry.clone(),
        panels: mesh.panels,
        order: mesh.order,
        target_digits: TARGET_DIGITS,
        ..RunRecord::default()
    }
}
