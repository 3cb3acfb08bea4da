//! One-query discrimination between the plain permutation oracle and its
//! qubit-conditioned signed twin.
//!
//! The pipeline prepares `|i>`, applies `H` to every qubit, queries the sealed
//! oracle once, applies `H` to qubit `L`, and reads the exact marginal of
//! qubit `L`. Finding qubit `L` in its initial value means `U1`; finding it
//! flipped means `U2`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::amp::{check_label, qubit_bit, Marginal, StateVector};
use crate::error::{Error, Result};
use crate::oracle::BlackBoxHandle;

/// Which promised oracle the measurement points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    U1,
    U2,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::U1 => "U1",
            Decision::U2 => "U2",
        })
    }
}

/// `U1` iff the measured bit equals the initial bit of qubit `L`.
pub fn decide(outcome_bit: u8, initial_bit: u8) -> Decision {
    if outcome_bit == initial_bit {
        Decision::U1
    } else {
        Decision::U2
    }
}

/// Outcome and resource accounting of a single discrimination run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminationReport {
    pub n: usize,
    pub designated: usize,
    pub input: usize,
    /// Value of qubit `L` in the input basis state.
    pub initial_bit: u8,
    /// The certain outcome, or the more likely one (0 on a tie) when not deterministic.
    pub outcome_bit: u8,
    pub decision: Decision,
    /// Exact probability of measuring qubit `L` as 1, taken on the canonical final state.
    pub marginal: Marginal,
    pub deterministic: bool,
    pub queries_used: usize,
    pub hadamards_used: usize,
    /// Amplitudes held by the register; `2^n` when no ancilla was allocated.
    pub register_amplitudes: usize,
}

/// The single `2^n` register a run operates on, with a gate tally.
struct Register {
    state: StateVector,
    hadamards: usize,
}

impl Register {
    fn prepare(n: usize, i: usize) -> Result<Self> {
        Ok(Register {
            state: StateVector::basis_state(n, i)?,
            hadamards: 0,
        })
    }

    fn hadamard_all(mut self) -> Result<Self> {
        self.hadamards += self.state.num_qubits();
        self.state = self.state.hadamard_layer()?;
        Ok(self)
    }

    fn hadamard(mut self, l: usize) -> Result<Self> {
        self.hadamards += 1;
        self.state = self.state.hadamard_single(l)?;
        Ok(self)
    }

    fn query(mut self, handle: &mut BlackBoxHandle) -> Result<Self> {
        self.state = handle.apply(self.state)?;
        Ok(self)
    }
}

/// Runs the discrimination procedure on a fresh handle.
pub fn run(handle: &mut BlackBoxHandle, l: usize, i: usize) -> Result<DiscriminationReport> {
    run_observed(handle, l, i, |_| {})
}

/// [`run`], handing the state just before the final Hadamard to `observe`.
pub fn run_observed(
    handle: &mut BlackBoxHandle,
    l: usize,
    i: usize,
    observe: impl FnOnce(&StateVector),
) -> Result<DiscriminationReport> {
    let n = handle.num_qubits();
    check_label(n, l)?;
    if handle.query_count() != 0 {
        return Err(Error::Protocol(format!(
            "handle already queried {} time(s); a run needs a fresh handle",
            handle.query_count()
        )));
    }
    let reg = Register::prepare(n, i)?.hadamard_all()?.query(handle)?;
    observe(&reg.state);
    let reg = reg.hadamard(l)?;

    let register_amplitudes = reg.state.dim();
    let hadamards_used = reg.hadamards;
    let final_state = reg.state.canonicalize();
    let marginal = final_state.marginal_one(l)?;
    let deterministic = marginal.is_deterministic();
    let outcome_bit = u8::from(2 * marginal.numerator > marginal.denominator());
    let initial_bit = qubit_bit(n, l, i);

    Ok(DiscriminationReport {
        n,
        designated: l,
        input: i,
        initial_bit,
        outcome_bit,
        decision: decide(outcome_bit, initial_bit),
        marginal,
        deterministic,
        queries_used: handle.query_count(),
        hadamards_used,
        register_amplitudes,
    })
}
