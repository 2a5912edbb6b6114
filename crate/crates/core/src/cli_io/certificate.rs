use serde::{Deserialize, Serialize};

use super::format::{ElementJson, Entry};
use crate::criteria::CriterionReport;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Gauge,
    Isotopy,
    ObstructionCycle,
    CriterionReport,
}

/// Self-contained evidence for a verdict on one problem file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub tool_version: String,
    pub problem_hash: String,
    pub field: String,
    pub weight_cap: usize,
    pub truncation: usize,
    pub payload: serde_json::Value,
}

/// An isotopy `f` with `f·φ_t` vanishing in weights `2..=n+1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugePayload {
    pub isotopy: ElementJson,
}

/// An ∞-isotopy `f: φ_t ⇝ ψ` together with `ψ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotopyPayload {
    pub isotopy: ElementJson,
    pub trivialized: ElementJson,
}

/// Truncated class representative: twist and cycle as `ħ`-series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstructionPayload {
    pub delta: usize,
    pub twist: Vec<ElementJson>,
    pub cycle: Vec<ElementJson>,
    pub rank: usize,
    pub augmented_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionParams {
    pub criterion: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub automorphism: Vec<Entry>,
    #[serde(default)]
    pub cross_check: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionPayload {
    pub params: CriterionParams,
    pub report: CriterionReport,
}
