//! Brute-force cross-checks and whole-group censuses.
//!
//! [`exhaustive_check`] runs the discriminator on every basis input against
//! both sealed variants of one permutation. [`census`] does that for every
//! permutation of `0..2^n` in Lehmer rank order and compares the set of
//! uniformly correct permutations with the set commuting with the qubit-`L`
//! flip. [`census_sampled`] does the same on seeded random permutations when
//! the full group is too large.

use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::amp::{check_label, check_qubits, StateVector};
use crate::discriminator::{self, Decision};
use crate::error::{Error, Result};
use crate::oracle::{factorial, OracleKind, Permutation, SignedPermutationOracle};
use crate::par;

/// Largest register for dense matrix cross-checks.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Largest `n` for which the full permutation group is enumerated.
pub const MAX_EXHAUSTIVE_QUBITS: usize = 3;

/// Dense `2^n x 2^n` matrix of a signed permutation oracle, row `k`, column `j`.
pub fn dense_matrix(o: &SignedPermutationOracle) -> Result<Vec<Vec<i64>>> {
    let n = o.num_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::resource(format!(
            "dense matrices are limited to {MAX_DENSE_QUBITS} qubits"
        )));
    }
    let dim = 1usize << n;
    let mut m = vec![vec![0i64; dim]; dim];
    for (j, (&k, &s)) in o.perm().images().iter().zip(o.mask().signs()).enumerate() {
        m[k][j] = s as i64;
    }
    Ok(m)
}

/// Reference oracle application by dense matrix-vector product.
pub fn brute_matrix_apply(o: &SignedPermutationOracle, s: &StateVector) -> Result<StateVector> {
    if s.num_qubits() != o.num_qubits() {
        return Err(Error::domain("oracle and state sizes differ"));
    }
    let m = dense_matrix(o)?;
    let out: Vec<i64> = m
        .iter()
        .map(|row| row.iter().zip(s.coeffs()).map(|(a, b)| a * b).sum())
        .collect();
    StateVector::from_coeffs(s.num_qubits(), s.half_power(), out)
}

/// Checks `M * M^T == I` on the dense matrix.
pub fn check_oracle_unitary(o: &SignedPermutationOracle) -> Result<bool> {
    let m = dense_matrix(o)?;
    let dim = m.len();
    for r in 0..dim {
        for c in 0..dim {
            let dot: i64 = (0..dim).map(|k| m[r][k] * m[c][k]).sum();
            if dot != i64::from(r == c) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    UniformlyCorrect,
    /// Some input gives a marginal strictly between 0 and 1.
    Nondeterministic,
    /// Every run is certain, but at least one decision is wrong.
    DeterministicWrong,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::UniformlyCorrect => "UNIFORMLY_CORRECT",
            Classification::Nondeterministic => "NONDETERMINISTIC",
            Classification::DeterministicWrong => "DETERMINISTIC_WRONG",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The `(input, sealed variant)` pair that exposed a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Witness {
    pub input: usize,
    pub variant: OracleKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermVerdict {
    pub rank: Option<u64>,
    pub classification: Classification,
    pub witness: Option<Witness>,
}

impl PermVerdict {
    pub fn is_uniformly_correct(&self) -> bool {
        self.classification == Classification::UniformlyCorrect
    }
}

/// Runs the discriminator for every input and both variants of `perm`.
///
/// Variants are scanned `U1` then `U2`, inputs in ascending order; the witness
/// is the first failing pair of the reported class. Ground truth is the
/// variant this function sealed, never anything read back from the handle.
pub fn exhaustive_check(perm: &Permutation, l: usize) -> Result<PermVerdict> {
    let n = perm.num_qubits();
    check_label(n, l)?;
    let variants = [
        (
            OracleKind::U1,
            Decision::U1,
            SignedPermutationOracle::make_u1(perm.clone()),
        ),
        (
            OracleKind::U2,
            Decision::U2,
            SignedPermutationOracle::make_u2(perm.clone(), l)?,
        ),
    ];
    let mut first_wrong = None;
    for (kind, truth, oracle) in &variants {
        for i in 0..1usize << n {
            let mut handle = oracle.clone().seal();
            let report = discriminator::run(&mut handle, l, i)?;
            let witness = Witness {
                input: i,
                variant: *kind,
            };
            if !report.deterministic {
                return Ok(PermVerdict {
                    rank: None,
                    classification: Classification::Nondeterministic,
                    witness: Some(witness),
                });
            }
            if report.decision != *truth && first_wrong.is_none() {
                first_wrong = Some(witness);
            }
        }
    }
    Ok(PermVerdict {
        rank: None,
        classification: if first_wrong.is_some() {
            Classification::DeterministicWrong
        } else {
            Classification::UniformlyCorrect
        },
        witness: first_wrong,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusOptions {
    pub workers: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            workers: par::default_workers(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub n: usize,
    pub designated: usize,
    pub total_permutations: u64,
    pub uniformly_correct_count: u64,
    pub commuting_count: u64,
    pub nondeterministic_count: u64,
    pub deterministic_wrong_count: u64,
    /// Uniformly correct permutations that do not commute with the flip.
    pub correct_not_commuting: u64,
    /// Commuting permutations that are not uniformly correct.
    pub commuting_not_correct: u64,
    pub sets_identical: bool,
    /// Lowest rank (or sample index) where the two sets disagree.
    pub first_mismatch: Option<u64>,
    /// `Some(seed)` for a sampled census.
    pub sample_seed: Option<u64>,
    pub workers: usize,
    pub runtime: Duration,
}

impl CensusReport {
    pub fn is_sampled(&self) -> bool {
        self.sample_seed.is_some()
    }
}

/// `(2^(n-1))! * 2^(2^(n-1))`, the size of the commuting class.
pub fn commuting_class_size(n: usize) -> u64 {
    let half = 1usize << (n - 1);
    factorial(half) << half
}

#[derive(Default)]
struct Tally {
    total: u64,
    correct: u64,
    commuting: u64,
    nondeterministic: u64,
    deterministic_wrong: u64,
    correct_not_commuting: u64,
    commuting_not_correct: u64,
    first_mismatch: Option<u64>,
}

impl Tally {
    fn record(&mut self, index: u64, perm: &Permutation, l: usize) -> Result<()> {
        let verdict = exhaustive_check(perm, l)?;
        let commuting = perm.commutes_with_bitflip(l)?;
        let correct = verdict.is_uniformly_correct();
        self.total += 1;
        self.correct += u64::from(correct);
        self.commuting += u64::from(commuting);
        match verdict.classification {
            Classification::Nondeterministic => self.nondeterministic += 1,
            Classification::DeterministicWrong => self.deterministic_wrong += 1,
            Classification::UniformlyCorrect => {}
        }
        if correct != commuting {
            if correct {
                self.correct_not_commuting += 1;
            } else {
                self.commuting_not_correct += 1;
            }
            self.first_mismatch.get_or_insert(index);
        }
        Ok(())
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.correct += other.correct;
        self.commuting += other.commuting;
        self.nondeterministic += other.nondeterministic;
        self.deterministic_wrong += other.deterministic_wrong;
        self.correct_not_commuting += other.correct_not_commuting;
        self.commuting_not_correct += other.commuting_not_correct;
        self.first_mismatch = match (self.first_mismatch, other.first_mismatch) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    fn into_report(
        self,
        n: usize,
        l: usize,
        sample_seed: Option<u64>,
        workers: usize,
        runtime: Duration,
    ) -> CensusReport {
        CensusReport {
            n,
            designated: l,
            total_permutations: self.total,
            uniformly_correct_count: self.correct,
            commuting_count: self.commuting,
            nondeterministic_count: self.nondeterministic,
            deterministic_wrong_count: self.deterministic_wrong,
            correct_not_commuting: self.correct_not_commuting,
            commuting_not_correct: self.commuting_not_correct,
            sets_identical: self.first_mismatch.is_none(),
            first_mismatch: self.first_mismatch,
            sample_seed,
            workers,
            runtime,
        }
    }
}

fn merge_all(parts: Vec<Result<Tally>>) -> Result<Tally> {
    parts
        .into_iter()
        .try_fold(Tally::default(), |acc, part| Ok(acc.merge(part?)))
}

/// Classifies every permutation of `0..2^n` (`n <= 3`).
pub fn census(n: usize, l: usize, opts: CensusOptions) -> Result<CensusReport> {
    check_qubits(n)?;
    check_label(n, l)?;
    if n > MAX_EXHAUSTIVE_QUBITS {
        return Err(Error::resource(format!(
            "full census is limited to n <= {MAX_EXHAUSTIVE_QUBITS}; use sampling for n = {n}"
        )));
    }
    let start = Instant::now();
    let total = factorial(1 << n);
    let parts = par::map_ranges(total, opts.workers, |ranks| {
        let mut tally = Tally::default();
        for rank in ranks {
            let perm = Permutation::from_lehmer_rank(n, rank)?;
            tally.record(rank, &perm, l)?;
        }
        Ok(tally)
    });
    let tally = merge_all(parts)?;
    Ok(tally.into_report(n, l, None, opts.workers, start.elapsed()))
}

/// Classifies `samples` seeded uniform permutations of `0..2^n`.
///
/// Sample `k` is drawn from ChaCha8 stream `k` under `seed`, so the result is
/// the same for any worker count.
pub fn census_sampled(
    n: usize,
    l: usize,
    samples: u64,
    seed: u64,
    opts: CensusOptions,
) -> Result<CensusReport> {
    check_qubits(n)?;
    check_label(n, l)?;
    let start = Instant::now();
    let parts = par::map_ranges(samples, opts.workers, |indices| {
        let mut tally = Tally::default();
        for k in indices {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let perm = Permutation::random_with(n, &mut rng)?;
            tally.record(k, &perm, l)?;
        }
        Ok(tally)
    });
    let tally = merge_all(parts)?;
    Ok(tally.into_report(n, l, Some(seed), opts.workers, start.elapsed()))
}
