//! Experiment configs: the schema every run is validated against and hashed
//! from. A config fully determines the structured result given the seed.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: CommandSpec,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

impl ExperimentConfig {
    /// Canonical JSON of the config (field order fixed by the schema).
    pub fn canonical_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let bytes = serde_json::to_vec(&self.canonical_json()).expect("config serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn command_name(&self) -> &'static str {
        match &self.command {
            CommandSpec::Sample(_) => "sample",
            CommandSpec::BuildDistinguisher(_) => "build-distinguisher",
            CommandSpec::MeasureSuccess(_) => "measure-success",
            CommandSpec::CheckRobust(_) => "check-robust",
            CommandSpec::FindSunflower(_) => "find-sunflower",
            CommandSpec::Closure(_) => "closure",
            CommandSpec::Approximate(_) => "approximate",
            CommandSpec::CompareProcesses(_) => "compare-processes",
            CommandSpec::VerifyLemma(_) => "verify-lemma",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "command", content = "parameters", rename_all = "kebab-case")]
pub enum CommandSpec {
    Sample(SampleParams),
    BuildDistinguisher(BuildDistinguisherParams),
    MeasureSuccess(MeasureSuccessParams),
    CheckRobust(CheckRobustParams),
    FindSunflower(FindSunflowerParams),
    Closure(ClosureParams),
    Approximate(ApproximateParams),
    CompareProcesses(CompareProcessesParams),
    VerifyLemma(VerifyLemmaParams),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DistKind {
    Neg,
    Pos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Mc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleParams {
    pub dist: DistKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildDistinguisherParams {
    pub n: usize,
    pub alpha: usize,
    pub beta: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit_out: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSuccessParams {
    pub n: usize,
    pub alpha: usize,
    pub beta: usize,
    pub trials: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Explicit construction override; all three must be given together.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRobustParams {
    /// Path to a FAMILY-format file.
    pub family: String,
    pub p: f64,
    pub eps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FindSunflowerParams {
    pub family: String,
    pub k: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureParams {
    pub family: String,
    pub p: f64,
    pub eps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_trials: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproximateParams {
    /// Path to a MONO v1 circuit file.
    pub circuit: String,
    /// Inner compression: "id", "trim", or "full" (default).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub icomp: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_out: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareProcessesParams {
    pub family: String,
    /// "left", "square", "link", or a path to a lifting JSON file.
    pub lifting: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    /// 1-based column core for the link lifting.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core: Option<Vec<usize>>,
    pub p: f64,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    /// Verify the full interpolation chain (exact mode only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyLemmaParams {
    /// "erdos-rado", "sunflower-rcs", "rs-implies-rcs", "lemma33-bridge",
    /// or "comparison-chain".
    pub lemma: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub families: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifting: Option<String>,
}
