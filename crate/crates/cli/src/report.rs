//! Report envelope and serialization helpers.
//!
//! Every floating-point value is rendered as a decimal string with 17
//! significant digits, so reports are byte-stable across platforms and
//! re-parse to the exact same f64.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits; round-trips exactly through `str::parse::<f64>()`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> Option<String> {
    x.map(fmt_f64)
}

#[derive(Serialize, Deserialize, PartialEq, Debug, Default)]
pub struct Diagnostics {
    pub notes: Vec<String>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct Report<C, R> {
    pub schema: u32,
    pub command: String,
    pub config: C,
    pub results: R,
    pub diagnostics: Diagnostics,
}

impl<C: Serialize, R: Serialize> Report<C, R> {
    pub fn new(command: &str, config: C, results: R, notes: Vec<String>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            config,
            results,
            diagnostics: Diagnostics { notes },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

/// Echo of the resolved model parameters.
#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct ParamsEcho {
    pub d: u32,
    pub coupling: String,
    pub beta: String,
    pub theta: String,
}

impl ParamsEcho {
    pub fn from(params: &cayley_ising::ModelParams) -> Self {
        Self {
            d: params.d(),
            coupling: fmt_f64(params.coupling()),
            beta: fmt_f64(params.beta()),
            theta: fmt_f64(params.theta()),
        }
    }
}

/// Echo of the field profile a command ran with.
#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct ProfileEcho {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct FixedPointRow {
    pub b: String,
    pub psi_prime: String,
    pub stability: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct CriticalConfig {
    pub params: ParamsEcho,
    pub h_request: String,
    pub h: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct CriticalResults {
    pub beta_c: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_c: Option<String>,
    pub subcritical: bool,
    pub case: String,
    pub fixed_points: Vec<FixedPointRow>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct GapRow {
    pub probe: usize,
    pub depth: usize,
    pub b_plus: String,
    pub b_minus: String,
    pub gap: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct ConditionEcho {
    pub verdict: String,
    pub numeric_verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic_verdict: Option<String>,
    pub sums: Vec<(usize, String)>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct ClassifyConfigEcho {
    pub params: ParamsEcho,
    pub profile: ProfileEcho,
    pub depths: Vec<usize>,
    pub probes: Vec<usize>,
    pub tau_gap: String,
    pub tau_uniq: String,
    pub condition_horizons: Vec<usize>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct ClassifyResults {
    pub verdict: String,
    pub route: String,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_minus_ref: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_plus_ref: Option<String>,
    pub gap_trace: Vec<GapRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionEcho>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct SweepConfigEcho {
    pub params: ParamsEcho,
    pub gammas: Vec<String>,
    pub depths: Vec<usize>,
    pub probes: Vec<usize>,
    pub tau_gap: String,
    pub tau_uniq: String,
    pub condition_horizons: Vec<usize>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct SweepRow {
    pub gamma: String,
    pub verdict: String,
    pub route: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_sum_final: Option<(usize, String)>,
    pub final_gaps: Vec<(usize, String)>,
    pub gap_trace: Vec<GapRow>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct SweepResults {
    pub rows: Vec<SweepRow>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct IterateConfig {
    pub params: ParamsEcho,
    pub profile: ProfileEcho,
    pub from_depth: usize,
    pub to_depth: usize,
    pub seed: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct IterateResults {
    pub values: Vec<(usize, String)>,
    pub max_relative_residual: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct ConditionSumConfig {
    pub family: ProfileEcho,
    pub horizon: usize,
    pub tail_from: usize,
    pub horizons: Vec<usize>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct ConditionSumResults {
    pub sum: String,
    pub lower_bound: String,
    pub upper_bound: String,
    pub tail_sum: String,
    pub classification: ConditionEcho,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct VerifyConfig {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<String>,
    pub root_field: String,
    pub residual_tolerance: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct VerifyCaseRow {
    pub d: u32,
    pub depth: u32,
    pub beta: String,
    pub boundary: String,
    pub profile: String,
    pub derived_boundary: String,
    pub residual: String,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct VerifyResults {
    pub cases: Vec<VerifyCaseRow>,
    pub max_residual: String,
    pub all_pass: bool,
}

/// Minimal CSV writer: fields here never contain commas or quotes.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
