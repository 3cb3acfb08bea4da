//! Versioned JSON reports.
//!
//! Every document carries a top-level `schema` field. Numbers are integers
//! only; exact probabilities are emitted as `"numerator/denominator"` strings.

use serde::{Deserialize, Serialize};

use crate::amp::to_bitstring;
use crate::discriminator::{Decision, DiscriminationReport};
use crate::oracle::OracleKind;
use crate::verifier::{CensusReport, PermVerdict};

pub const RUN_SCHEMA: &str = "phaseperm.run/1";
pub const VERIFY_SCHEMA: &str = "phaseperm.verify/1";
pub const CENSUS_SCHEMA: &str = "phaseperm.census/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunJson {
    pub schema: String,
    pub n: usize,
    #[serde(rename = "L")]
    pub designated: usize,
    /// Qubit-1-first bitstring of the input basis state.
    pub input: String,
    pub initial_bit: u8,
    pub decision: Decision,
    pub outcome: u8,
    /// Probability of measuring qubit `L` as 1.
    pub marginal: String,
    pub deterministic: bool,
    pub queries: usize,
    pub hadamards: usize,
    pub register_amplitudes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampled_outcome: Option<u8>,
}

impl RunJson {
    pub fn new(r: &DiscriminationReport, sampled_outcome: Option<u8>) -> Self {
        RunJson {
            schema: RUN_SCHEMA.to_string(),
            n: r.n,
            designated: r.designated,
            input: to_bitstring(r.n, r.input),
            initial_bit: r.initial_bit,
            decision: r.decision,
            outcome: r.outcome_bit,
            marginal: r.marginal.to_string(),
            deterministic: r.deterministic,
            queries: r.queries_used,
            hadamards: r.hadamards_used,
            register_amplitudes: r.register_amplitudes,
            sampled_outcome,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub input: String,
    pub variant: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub schema: String,
    pub n: usize,
    #[serde(rename = "L")]
    pub designated: usize,
    pub classification: String,
    pub commutes_with_bitflip: bool,
    pub witness: Option<WitnessJson>,
}

impl VerifyJson {
    pub fn new(n: usize, l: usize, verdict: &PermVerdict, commuting: bool) -> Self {
        VerifyJson {
            schema: VERIFY_SCHEMA.to_string(),
            n,
            designated: l,
            classification: verdict.classification.as_str().to_string(),
            commutes_with_bitflip: commuting,
            witness: verdict.witness.map(|w| WitnessJson {
                input: to_bitstring(n, w.input),
                variant: OracleKind::as_str(w.variant).to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusJson {
    pub schema: String,
    pub n: usize,
    #[serde(rename = "L")]
    pub designated: usize,
    /// `"exhaustive"` or `"sampled"`.
    pub mode: String,
    pub seed: Option<u64>,
    pub total: u64,
    pub uniformly_correct: u64,
    pub commuting: u64,
    pub nondeterministic: u64,
    pub deterministic_wrong: u64,
    pub correct_not_commuting: u64,
    pub commuting_not_correct: u64,
    pub sets_identical: bool,
    pub first_mismatch: Option<u64>,
    pub workers: usize,
    pub runtime_ms: u64,
}

impl CensusJson {
    pub fn new(r: &CensusReport) -> Self {
        CensusJson {
            schema: CENSUS_SCHEMA.to_string(),
            n: r.n,
            designated: r.designated,
            mode: if r.is_sampled() {
                "sampled"
            } else {
                "exhaustive"
            }
            .to_string(),
            seed: r.sample_seed,
            total: r.total_permutations,
            uniformly_correct: r.uniformly_correct_count,
            commuting: r.commuting_count,
            nondeterministic: r.nondeterministic_count,
            deterministic_wrong: r.deterministic_wrong_count,
            correct_not_commuting: r.correct_not_commuting,
            commuting_not_correct: r.commuting_not_correct,
            sets_identical: r.sets_identical,
            first_mismatch: r.first_mismatch,
            workers: r.workers,
            runtime_ms: r.runtime.as_millis() as u64,
        }
    }
}

pub fn run_report_json(r: &DiscriminationReport, sampled_outcome: Option<u8>) -> String {
    to_json(&RunJson::new(r, sampled_outcome))
}

pub fn verify_report_json(n: usize, l: usize, verdict: &PermVerdict, commuting: bool) -> String {
    to_json(&VerifyJson::new(n, l, verdict, commuting))
}

pub fn census_report_json(r: &CensusReport) -> String {
    to_json(&CensusJson::new(r))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report types serialize infallibly")
}
