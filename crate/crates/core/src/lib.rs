//! Exact simulation and brute-force verification of one-query discrimination
//! between a basis-state permutation oracle `U1` and the same permutation with
//! a sign flip conditioned on a designated input qubit `U2`.
//!
//! - [`amp`]: integer amplitude tables with a shared `2^(-h/2)` scale.
//! - [`oracle`]: permutations, sign masks, oracles and sealed query-counting handles.
//! - [`discriminator`]: the Hadamard / oracle / Hadamard / measure pipeline.
//! - [`verifier`]: dense-matrix cross-checks, per-permutation verdicts and censuses.
//! - [`spec_file`], [`render`], [`report`]: oracle files, circuit art and JSON reports.
//!
//! Qubits are labelled `1..=n` with qubit 1 the most significant index bit.

pub mod amp;
pub mod discriminator;
pub mod error;
pub mod oracle;
pub mod par;
pub mod render;
pub mod report;
pub mod spec_file;
pub mod verifier;

pub use amp::{bitdot, Marginal, StateVector};
pub use discriminator::{decide, run, Decision, DiscriminationReport};
pub use error::{Error, Result};
pub use oracle::{
    BlackBoxHandle, DiagonalSignMask, OracleKind, Permutation, SignedPermutationOracle,
};
pub use render::render_circuit_ascii;
pub use spec_file::{parse_oracle_spec, serialize_oracle, OracleSpecDoc};
pub use verifier::{
    census, census_sampled, exhaustive_check, CensusOptions, CensusReport, PermVerdict,
};
