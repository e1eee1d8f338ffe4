//! JSON run configuration, flat `--set key=value` overrides, resolution
//! into core objects, and the run manifest.
//!
//! Every command reads one JSON file. A manifest written by a previous run
//! embeds the fully resolved configuration and is itself accepted as a
//! configuration file, so any run can be reproduced from its manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use polarforge_core::polar::PolarCodeSpec;
use polarforge_core::product::{AlphaSchedule, ProductCodeSpec, SoftMode};
use polarforge_core::scl::DetachRule;
use polarforge_core::escl::{EsclConfig, EsclSoftRule};
use polarforge_core::sim::StopRule;

use crate::files;

/// Fallback component-code pair built with the plain polar construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FallbackCodeConfig {
    pub n1: usize,
    pub k1: usize,
    pub n2: usize,
    pub k2: usize,
    #[serde(default = "default_design_snr")]
    pub design_ebn0_db: f64,
}

fn default_design_snr() -> f64 {
    2.3
}

/// Component-code source: precoding-matrix files or the fallback
/// construction. A single `row_matrix` with no `col_matrix` means a square
/// product of that code.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_matrix: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_matrix: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<FallbackCodeConfig>,
}

impl CodeConfig {
    pub fn resolve(&self, base_dir: &Path) -> Result<ProductCodeSpec> {
        if let Some(row_path) = &self.row_matrix {
            let row = files::load_code(&resolve_path(base_dir, row_path))?;
            let col = match &self.col_matrix {
                Some(col_path) => files::load_code(&resolve_path(base_dir, col_path))?,
                None => row.clone(),
            };
            return Ok(ProductCodeSpec::new(
                std::sync::Arc::new(row),
                std::sync::Arc::new(col),
            ));
        }
        if self.col_matrix.is_some() {
            bail!("col_matrix given without row_matrix");
        }
        let fb = self
            .fallback
            .as_ref()
            .context("code config needs matrix paths or a fallback block")?;
        let row = PolarCodeSpec::plain(fb.n1, fb.k1, fb.design_ebn0_db)?;
        let col = if (fb.n2, fb.k2) == (fb.n1, fb.k1) {
            row.clone()
        } else {
            PolarCodeSpec::plain(fb.n2, fb.k2, fb.design_ebn0_db)?
        };
        Ok(ProductCodeSpec::new(
            std::sync::Arc::new(row),
            std::sync::Arc::new(col),
        ))
    }
}

fn resolve_path(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Soft-output generator selection.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SoftModeConfig {
    Pyndiah,
    Soscl,
}

impl From<SoftModeConfig> for SoftMode {
    fn from(m: SoftModeConfig) -> SoftMode {
        match m {
            SoftModeConfig::Pyndiah => SoftMode::Pyndiah,
            SoftModeConfig::Soscl => SoftMode::Soscl,
        }
    }
}

/// Where the scaling coefficients come from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlphaSourceConfig {
    File { path: PathBuf },
    Constant { value: f64 },
}

impl AlphaSourceConfig {
    pub fn resolve(&self, base_dir: &Path) -> Result<AlphaSchedule> {
        match self {
            AlphaSourceConfig::File { path } => {
                files::load_alpha_csv(&resolve_path(base_dir, path))
            }
            AlphaSourceConfig::Constant { value } => Ok(AlphaSchedule::constant(*value)?),
        }
    }
}

fn default_alpha_source() -> AlphaSourceConfig {
    AlphaSourceConfig::Constant { value: 0.5 }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopConfig {
    #[serde(default = "default_min_frame_errors")]
    pub min_frame_errors: u64,
    #[serde(default = "default_max_frames")]
    pub max_frames: u64,
}

fn default_min_frame_errors() -> u64 {
    100
}

fn default_max_frames() -> u64 {
    10_000_000
}

impl Default for StopConfig {
    fn default() -> Self {
        StopConfig {
            min_frame_errors: default_min_frame_errors(),
            max_frames: default_max_frames(),
        }
    }
}

impl From<StopConfig> for StopRule {
    fn from(s: StopConfig) -> StopRule {
        StopRule {
            min_frame_errors: s.min_frame_errors,
            max_frames: s.max_frames,
        }
    }
}

fn default_list_size() -> usize {
    8
}

fn default_soft_mode() -> SoftModeConfig {
    SoftModeConfig::Soscl
}

fn default_max_half_iterations() -> usize {
    20
}

fn default_batch_size() -> u64 {
    256
}

/// Configuration for `cer`, `encode`, and `decode` (the latter two ignore
/// the campaign-only fields).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CerConfig {
    pub code: CodeConfig,
    #[serde(default = "default_list_size")]
    pub list_size: usize,
    #[serde(default = "default_soft_mode")]
    pub soft_mode: SoftModeConfig,
    #[serde(default = "default_alpha_source")]
    pub alphas: AlphaSourceConfig,
    #[serde(default)]
    pub snr_db: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_half_iterations")]
    pub max_half_iterations: usize,
    #[serde(default)]
    pub stop: StopConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default = "default_batch_size")]
    pub batch_size: u64,
}

fn default_min_initial_samples() -> usize {
    100_000
}

fn default_true() -> bool {
    true
}

/// Configuration for the scaling-coefficient training command.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphasConfig {
    pub code: CodeConfig,
    #[serde(default = "default_list_size")]
    pub list_size: usize,
    #[serde(default = "default_soft_mode")]
    pub soft_mode: SoftModeConfig,
    pub train_ebn0_db: f64,
    /// Number of training words; default sizes the initial population to
    /// at least one million samples per half iteration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_words: Option<usize>,
    #[serde(default = "default_max_half_iterations")]
    pub max_half_iterations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_min_initial_samples")]
    pub min_initial_samples: usize,
    /// Drop words whose hard decision became a valid product codeword, so
    /// later coefficients train on the message distribution the deployed
    /// decoder actually sees.
    #[serde(default = "default_true")]
    pub exclude_early_stopped: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn default_tol_db() -> f64 {
    0.02
}

fn default_de_samples() -> usize {
    100_000
}

fn default_de_half_iterations() -> usize {
    50
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum DetachRuleConfig {
    Neutral,
    PassThrough,
}

impl From<DetachRuleConfig> for DetachRule {
    fn from(r: DetachRuleConfig) -> DetachRule {
        match r {
            DetachRuleConfig::Neutral => DetachRule::Neutral,
            DetachRuleConfig::PassThrough => DetachRule::PassThrough,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum EsclSoftRuleConfig {
    ListRatio,
    CodebookCorrected,
}

impl From<EsclSoftRuleConfig> for EsclSoftRule {
    fn from(r: EsclSoftRuleConfig) -> EsclSoftRule {
        match r {
            EsclSoftRuleConfig::ListRatio => EsclSoftRule::ListRatio,
            EsclSoftRuleConfig::CodebookCorrected => EsclSoftRule::CodebookCorrected,
        }
    }
}

fn default_detach_rule() -> DetachRuleConfig {
    DetachRuleConfig::Neutral
}

fn default_escl_soft() -> EsclSoftRuleConfig {
    EsclSoftRuleConfig::ListRatio
}

/// Configuration for the decoding-threshold command.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdConfig {
    pub code: CodeConfig,
    #[serde(default = "default_list_size")]
    pub list_size: usize,
    #[serde(default = "default_alpha_source")]
    pub alphas: AlphaSourceConfig,
    pub snr_lo_db: f64,
    pub snr_hi_db: f64,
    #[serde(default = "default_tol_db")]
    pub tol_db: f64,
    #[serde(default = "default_de_samples")]
    pub n_samples: usize,
    #[serde(default = "default_de_half_iterations")]
    pub max_half_iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_detach_rule")]
    pub detach_rule: DetachRuleConfig,
    #[serde(default = "default_escl_soft")]
    pub escl_soft: EsclSoftRuleConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl ThresholdConfig {
    pub fn escl_config(&self) -> EsclConfig {
        EsclConfig {
            detach: self.detach_rule.into(),
            soft: self.escl_soft.into(),
        }
    }
}

/// Load a config file, honoring manifest replay and `key=value` overrides,
/// and return both the typed config and the resolved JSON.
pub fn load_config<T: DeserializeOwned>(path: &Path, overrides: &[String]) -> Result<(T, Value)> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut value: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    // A manifest embeds the resolved config it ran with.
    if let Some(inner) = value.get("resolved_config") {
        value = inner.clone();
    }
    for ov in overrides {
        apply_override(&mut value, ov)?;
    }
    let typed: T = serde_json::from_value(value.clone())
        .with_context(|| format!("interpreting {}", path.display()))?;
    Ok((typed, value))
}

/// Apply one `dotted.path=value` override onto a JSON document. The value
/// parses as JSON when possible and falls back to a bare string.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .with_context(|| format!("override {assignment:?} is not key=value"))?;
    let parsed: Value = serde_json::from_str(raw).unwrap_or(Value::String(raw.to_string()));
    let mut node = doc;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if !node.is_object() {
            *node = Value::Object(serde_json::Map::new());
        }
        let map = node.as_object_mut().expect("just ensured object");
        if i + 1 == parts.len() {
            map.insert(part.to_string(), parsed);
            return Ok(());
        }
        node = map
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(serde_json::Map::new()));
    }
    unreachable!("override paths are non-empty")
}

/// Run manifest: everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub resolved_config: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, resolved_config: Value, outputs: Vec<String>) -> Self {
        Manifest {
            command: command.to_string(),
            version: crate::version_string(),
            resolved_config,
            outputs,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text).with_context(|| format!("writing manifest {}", path.display()))?;
        Ok(())
    }
}
