//! Exact amplitude arithmetic.
//!
//! Every amplitude reachable from a basis state under Hadamard gates and signed
//! permutations is an integer multiple of `2^(-h/2)` for a shared half-power `h`.
//! [`StateVector`] stores those integers directly, so no floating point is
//! involved and every equality and measurement predicate is exact.
//!
//! Qubits are labelled `1..=n`, most-significant first: qubit `l` is bit
//! position `n - l` of a basis index, so the index `0b01` on two qubits is
//! `|x1=0, x2=1>`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest half-power a state may carry; keeps `2^h` and every squared coefficient inside 64 bits.
pub const MAX_HALF_POWER: u32 = 62;

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 24;

/// Parity of the bitwise AND of two basis indices.
#[inline]
pub fn bitdot(i: usize, j: usize) -> u8 {
    ((i & j).count_ones() & 1) as u8
}

/// Bitmask of qubit `l` in an `n`-qubit basis index.
#[inline]
pub fn qubit_mask(n: usize, l: usize) -> usize {
    debug_assert!((1..=n).contains(&l));
    1 << (n - l)
}

/// Value (0 or 1) of qubit `l` in basis index `i`.
#[inline]
pub fn qubit_bit(n: usize, l: usize, i: usize) -> u8 {
    u8::from(i & qubit_mask(n, l) != 0)
}

/// Basis index as a qubit-1-first bitstring, e.g. `(2, 1)` -> `"01"`.
pub fn to_bitstring(n: usize, i: usize) -> String {
    (1..=n)
        .map(|l| if qubit_bit(n, l, i) == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`to_bitstring`]: returns `(n, index)`.
pub fn parse_bitstring(bits: &str) -> Result<(usize, usize)> {
    let n = bits.chars().count();
    check_qubits(n)?;
    bits.chars()
        .try_fold(0usize, |acc, ch| match ch {
            '0' => Ok(acc << 1),
            '1' => Ok((acc << 1) | 1),
            other => Err(Error::domain(format!(
                "bitstring may only contain 0 and 1, found `{other}`"
            ))),
        })
        .map(|i| (n, i))
}

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("qubit count must be at least 1"));
    }
    if n > MAX_QUBITS {
        return Err(Error::resource(format!(
            "{n} qubits exceeds the {MAX_QUBITS}-qubit state limit"
        )));
    }
    Ok(())
}

pub(crate) fn check_label(n: usize, l: usize) -> Result<()> {
    if (1..=n).contains(&l) {
        Ok(())
    } else {
        Err(Error::domain(format!("qubit label {l} outside 1..={n}")))
    }
}

/// Exact probability `numerator / 2^half_power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Marginal {
    pub numerator: u64,
    pub half_power: u32,
}

impl Marginal {
    pub fn denominator(&self) -> u64 {
        1u64 << self.half_power
    }

    /// True when the outcome is certain either way.
    pub fn is_deterministic(&self) -> bool {
        self.numerator == 0 || self.numerator == self.denominator()
    }

    /// Probability of the complementary outcome.
    pub fn complement(&self) -> Marginal {
        Marginal {
            numerator: self.denominator() - self.numerator,
            half_power: self.half_power,
        }
    }
}

impl fmt::Display for Marginal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator())
    }
}

/// An `n`-qubit pure state `2^(-h/2) * sum_k coeffs[k] |k>`.
///
/// Gate methods consume the state and hand back the same buffer, so a pipeline
/// only ever holds one `2^n` table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateVector {
    n: usize,
    h: u32,
    coeffs: Vec<i64>,
}

impl StateVector {
    /// The computational basis state `|i>`.
    pub fn basis_state(n: usize, i: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if i >= dim {
            return Err(Error::domain(format!(
                "basis index {i} out of range for {n} qubits"
            )));
        }
        let mut coeffs = vec![0; dim];
        coeffs[i] = 1;
        Ok(StateVector { n, h: 0, coeffs })
    }

    /// Builds a state from raw parts, checking length and normalization.
    pub fn from_coeffs(n: usize, h: u32, coeffs: Vec<i64>) -> Result<Self> {
        check_qubits(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::domain(format!(
                "expected {} coefficients for {n} qubits, got {}",
                1usize << n,
                coeffs.len()
            )));
        }
        if h > MAX_HALF_POWER {
            return Err(Error::resource(format!(
                "half-power {h} exceeds {MAX_HALF_POWER}"
            )));
        }
        let norm = coeffs
            .iter()
            .try_fold(0u128, |acc, &c| {
                let sq = (c as i128).checked_mul(c as i128)? as u128;
                acc.checked_add(sq)
            })
            .ok_or_else(|| Error::resource("coefficient norm overflow"))?;
        if norm != 1u128 << h {
            return Err(Error::domain(format!(
                "coefficients are not normalized: sum of squares {norm} != 2^{h}"
            )));
        }
        Ok(StateVector { n, h, coeffs })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn half_power(&self) -> u32 {
        self.h
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// `sum_k coeffs[k]^2`; equals `2^h` for every valid state.
    pub fn norm_squared(&self) -> u128 {
        self.coeffs
            .iter()
            .map(|&c| (c as i128 * c as i128) as u128)
            .sum()
    }

    fn bump_half_power(&mut self, by: u32) -> Result<()> {
        let h = self.h + by;
        if h > MAX_HALF_POWER {
            return Err(Error::resource(format!(
                "half-power would reach {h}, beyond the 64-bit limit of {MAX_HALF_POWER}"
            )));
        }
        self.h = h;
        Ok(())
    }

    // One butterfly pass over the bit at `stride`.
    fn butterfly(&mut self, stride: usize) {
        for block in self.coeffs.chunks_exact_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
    }

    /// `H` on every qubit, as `n` in-place butterfly passes.
    pub fn hadamard_layer(mut self) -> Result<Self> {
        self.bump_half_power(self.n as u32)?;
        for l in 1..=self.n {
            self.butterfly(qubit_mask(self.n, l));
        }
        Ok(self)
    }

    /// `H` on qubit `l` only.
    pub fn hadamard_single(mut self, l: usize) -> Result<Self> {
        check_label(self.n, l)?;
        self.bump_half_power(1)?;
        self.butterfly(qubit_mask(self.n, l));
        Ok(self)
    }

    /// Splits the coefficient table on qubit `l`: `a` holds the entries whose
    /// qubit-`l` bit is 0, `b` those whose bit is 1, both in ascending index order.
    pub fn split_on_qubit(&self, l: usize) -> Result<(Vec<i64>, Vec<i64>)> {
        check_label(self.n, l)?;
        let mask = qubit_mask(self.n, l);
        let half = self.dim() / 2;
        let mut a = Vec::with_capacity(half);
        let mut b = Vec::with_capacity(half);
        for (k, &c) in self.coeffs.iter().enumerate() {
            if k & mask == 0 {
                a.push(c);
            } else {
                b.push(c);
            }
        }
        Ok((a, b))
    }

    /// Exact probability of measuring qubit `l` as 1.
    pub fn marginal_one(&self, l: usize) -> Result<Marginal> {
        check_label(self.n, l)?;
        let mask = qubit_mask(self.n, l);
        let numerator = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| k & mask != 0)
            .map(|(_, &c)| (c * c) as u64)
            .sum();
        Ok(Marginal {
            numerator,
            half_power: self.h,
        })
    }

    /// Removes common factors of two: while `h >= 2` and every coefficient is
    /// even, halves all coefficients and lowers `h` by 2.
    pub fn canonicalize(mut self) -> Self {
        while self.h >= 2 && self.coeffs.iter().all(|c| c & 1 == 0) {
            for c in &mut self.coeffs {
                *c /= 2;
            }
            self.h -= 2;
        }
        self
    }

    pub fn is_canonical(&self) -> bool {
        self.h < 2 || self.coeffs.iter().any(|c| c & 1 != 0)
    }

    /// Negates every coefficient.
    pub fn negated(mut self) -> Self {
        for c in &mut self.coeffs {
            *c = -*c;
        }
        self
    }

    /// Exact physical equality, optionally ignoring a global factor of -1.
    pub fn states_equal(&self, other: &StateVector, up_to_global_sign: bool) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::domain(format!(
                "cannot compare a {}-qubit state with a {}-qubit state",
                self.n, other.n
            )));
        }
        let a = self.clone().canonicalize();
        let b = other.clone().canonicalize();
        if a.h != b.h {
            return Ok(false);
        }
        if a.coeffs == b.coeffs {
            return Ok(true);
        }
        Ok(up_to_global_sign && a.coeffs.iter().zip(&b.coeffs).all(|(x, y)| *x == -*y))
    }

    /// Draws a measurement outcome for qubit `l` from its exact marginal.
    ///
    /// The same seed always yields the same bit.
    pub fn sample_qubit(&self, l: usize, seed: u64) -> Result<u8> {
        let p = self.marginal_one(l)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = rng.random_range(0..p.denominator());
        Ok(u8::from(draw < p.numerator))
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [i64] {
        &mut self.coeffs
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^(-{}/2) * [", self.h)?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}
