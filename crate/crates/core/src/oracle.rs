//! Signed permutation oracles: the plain permutation `U1`, the same permutation
//! with a sign flip conditioned on the designated input qubit `U2`, and general
//! diagonal `±1` masks.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amp::{check_label, check_qubits, qubit_mask, StateVector};
use crate::error::{Error, Result};

/// Largest table for which Lehmer ranks fit in a `u64` (20! < 2^63).
pub const MAX_RANKED_LEN: usize = 20;

/// A bijection on the `2^n` basis indices; `images[j] = k` means `|j> -> |k>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    n: usize,
    images: Vec<usize>,
}

/// Explains why a table is not a bijection.
pub(crate) fn bijection_violation(dim: usize, images: &[usize]) -> Option<String> {
    if images.len() != dim {
        return Some(format!("expected {dim} images, got {}", images.len()));
    }
    let mut seen = vec![false; dim];
    for (j, &k) in images.iter().enumerate() {
        if k >= dim {
            return Some(format!("image {k} of index {j} is outside 0..{dim}"));
        }
        if seen[k] {
            return Some(format!("value {k} repeated (not a bijection)"));
        }
        seen[k] = true;
    }
    None
}

impl Permutation {
    pub fn new(n: usize, images: Vec<usize>) -> Result<Self> {
        check_qubits(n)?;
        if let Some(why) = bijection_violation(1 << n, &images) {
            return Err(Error::domain(why));
        }
        Ok(Permutation { n, images })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(Permutation {
            n,
            images: (0..1 << n).collect(),
        })
    }

    /// XOR of every index with the bit of qubit `l` (the `X` gate on qubit `l`).
    pub fn bitflip(n: usize, l: usize) -> Result<Self> {
        check_qubits(n)?;
        check_label(n, l)?;
        let e = qubit_mask(n, l);
        Ok(Permutation {
            n,
            images: (0..1 << n).map(|j| j ^ e).collect(),
        })
    }

    /// Exchanges the bits of qubits `a` and `b` (the `SWAP` gate).
    pub fn swap_qubits(n: usize, a: usize, b: usize) -> Result<Self> {
        check_qubits(n)?;
        check_label(n, a)?;
        check_label(n, b)?;
        let (ma, mb) = (qubit_mask(n, a), qubit_mask(n, b));
        let images = (0..1usize << n)
            .map(|j| {
                let differ = ((j & ma) != 0) != ((j & mb) != 0);
                if differ {
                    j ^ ma ^ mb
                } else {
                    j
                }
            })
            .collect();
        Ok(Permutation { n, images })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn image(&self, j: usize) -> usize {
        self.images[j]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &k)| j == k)
    }

    /// `compose(p, q)` applies `q` first, then `p`: `j -> p(q(j))`.
    pub fn compose(p: &Permutation, q: &Permutation) -> Result<Self> {
        if p.n != q.n {
            return Err(Error::domain(
                "cannot compose permutations of different sizes",
            ));
        }
        Ok(Permutation {
            n: p.n,
            images: q.images.iter().map(|&k| p.images[k]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.dim()];
        for (j, &k) in self.images.iter().enumerate() {
            images[k] = j;
        }
        Permutation { n: self.n, images }
    }

    /// True iff `pi(j ^ e_l) == pi(j) ^ e_l` for every `j`.
    pub fn commutes_with_bitflip(&self, l: usize) -> Result<bool> {
        check_label(self.n, l)?;
        let e = qubit_mask(self.n, l);
        Ok(self
            .images
            .iter()
            .enumerate()
            .all(|(j, &k)| self.images[j ^ e] == k ^ e))
    }

    /// Seeded uniform permutation (Fisher-Yates).
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        Self::random_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn random_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_qubits(n)?;
        let mut images: Vec<usize> = (0..1 << n).collect();
        images.shuffle(rng);
        Ok(Permutation { n, images })
    }

    /// Seeded uniform draw from the permutations commuting with the qubit-`l` flip.
    pub fn random_commuting(n: usize, l: usize, seed: u64) -> Result<Self> {
        Self::random_commuting_with(n, l, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Permutes the pair classes `{j, j ^ e_l}` and flips the qubit-`l` bit
    /// inside each class by an independent coin.
    pub fn random_commuting_with<R: Rng + ?Sized>(n: usize, l: usize, rng: &mut R) -> Result<Self> {
        check_qubits(n)?;
        check_label(n, l)?;
        let classes = 1usize << (n - 1);
        let mut sigma: Vec<usize> = (0..classes).collect();
        sigma.shuffle(rng);
        let tau: Vec<bool> = (0..classes).map(|_| rng.random()).collect();
        Ok(Self::from_class_map(n, l, &sigma, &tau))
    }

    /// Builds `pi(j) = rep(sigma[class(j)], bit_l(j) ^ tau[class(j)])`.
    pub(crate) fn from_class_map(n: usize, l: usize, sigma: &[usize], tau: &[bool]) -> Self {
        let pos = n - l;
        let low = (1usize << pos) - 1;
        let class_of = |j: usize| ((j >> (pos + 1)) << pos) | (j & low);
        let member = |c: usize, bit: usize| ((c >> pos) << (pos + 1)) | (bit << pos) | (c & low);
        let images = (0..1usize << n)
            .map(|j| {
                let c = class_of(j);
                let bit = (j >> pos) & 1;
                member(sigma[c], bit ^ usize::from(tau[c]))
            })
            .collect();
        Permutation { n, images }
    }

    /// The permutation of `0..2^n` with the given lexicographic (Lehmer) rank.
    pub fn from_lehmer_rank(n: usize, rank: u64) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if dim > MAX_RANKED_LEN {
            return Err(Error::resource(format!(
                "Lehmer ranks are limited to {MAX_RANKED_LEN} elements, got {dim}"
            )));
        }
        let total = factorial(dim);
        if rank >= total {
            return Err(Error::domain(format!(
                "rank {rank} out of range for {dim}! = {total}"
            )));
        }
        let mut pool: Vec<usize> = (0..dim).collect();
        let mut images = Vec::with_capacity(dim);
        let mut rest = rank;
        for pos in 0..dim {
            let f = factorial(dim - 1 - pos);
            let digit = (rest / f) as usize;
            rest %= f;
            images.push(pool.remove(digit));
        }
        Ok(Permutation { n, images })
    }

    /// Lexicographic rank of this permutation among all of `S_{2^n}`.
    pub fn lehmer_rank(&self) -> Result<u64> {
        let dim = self.dim();
        if dim > MAX_RANKED_LEN {
            return Err(Error::resource(format!(
                "Lehmer ranks are limited to {MAX_RANKED_LEN} elements, got {dim}"
            )));
        }
        let mut rank = 0u64;
        for (pos, &k) in self.images.iter().enumerate() {
            let smaller_later = self.images[pos + 1..].iter().filter(|&&x| x < k).count() as u64;
            rank += smaller_later * factorial(dim - 1 - pos);
        }
        Ok(rank)
    }
}

pub fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, k) in self.images.iter().enumerate() {
            if j > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

/// A diagonal of `±1` signs indexed by input basis state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalSignMask {
    n: usize,
    signs: Vec<i8>,
}

impl DiagonalSignMask {
    pub fn new(n: usize, signs: Vec<i8>) -> Result<Self> {
        check_qubits(n)?;
        if signs.len() != 1 << n {
            return Err(Error::domain(format!(
                "expected {} mask entries, got {}",
                1usize << n,
                signs.len()
            )));
        }
        if let Some(bad) = signs.iter().find(|s| !matches!(s, 1 | -1)) {
            return Err(Error::domain(format!("mask entry {bad} is not +1 or -1")));
        }
        Ok(DiagonalSignMask { n, signs })
    }

    pub fn all_plus(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(DiagonalSignMask {
            n,
            signs: vec![1; 1 << n],
        })
    }

    /// `(-1)^{x_l}`: -1 exactly on indices whose qubit-`l` bit is 1.
    pub fn qubit_parity(n: usize, l: usize) -> Result<Self> {
        check_qubits(n)?;
        check_label(n, l)?;
        let e = qubit_mask(n, l);
        Ok(DiagonalSignMask {
            n,
            signs: (0..1usize << n)
                .map(|j| if j & e == 0 { 1 } else { -1 })
                .collect(),
        })
    }

    pub fn random(n: usize, seed: u64) -> Result<Self> {
        check_qubits(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(DiagonalSignMask {
            n,
            signs: (0..1 << n)
                .map(|_| if rng.random() { 1 } else { -1 })
                .collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_all_plus(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }
}

/// Which member of the promise an oracle is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OracleKind {
    U1,
    U2,
    General,
}

impl OracleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleKind::U1 => "U1",
            OracleKind::U2 => "U2",
            OracleKind::General => "GENERAL",
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U1" => Ok(OracleKind::U1),
            "U2" => Ok(OracleKind::U2),
            "GENERAL" => Ok(OracleKind::General),
            other => Err(Error::domain(format!(
                "unknown variant `{other}` (expected U1, U2 or GENERAL)"
            ))),
        }
    }
}

/// `|j> -> mask[j] |perm(j)>`: the sign is read off the input index, then the
/// basis state is permuted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutationOracle {
    perm: Permutation,
    mask: DiagonalSignMask,
    kind: OracleKind,
    designated: Option<usize>,
}

impl SignedPermutationOracle {
    /// The plain permutation oracle.
    pub fn make_u1(perm: Permutation) -> Self {
        let mask = DiagonalSignMask {
            n: perm.n,
            signs: vec![1; perm.dim()],
        };
        SignedPermutationOracle {
            perm,
            mask,
            kind: OracleKind::U1,
            designated: None,
        }
    }

    /// The permutation preceded by `(-1)^{x_l}` on the input label.
    pub fn make_u2(perm: Permutation, l: usize) -> Result<Self> {
        let mask = DiagonalSignMask::qubit_parity(perm.n, l)?;
        Ok(SignedPermutationOracle {
            perm,
            mask,
            kind: OracleKind::U2,
            designated: Some(l),
        })
    }

    pub fn general(perm: Permutation, mask: DiagonalSignMask) -> Result<Self> {
        if mask.n != perm.n {
            return Err(Error::domain("mask and permutation sizes differ"));
        }
        Ok(SignedPermutationOracle {
            perm,
            mask,
            kind: OracleKind::General,
            designated: None,
        })
    }

    /// Attaches the designated qubit `L` to a `U1` or `GENERAL` oracle.
    /// A `U2` oracle already carries one and only accepts the same label.
    pub fn with_designated(mut self, l: usize) -> Result<Self> {
        check_label(self.perm.n, l)?;
        match (self.kind, self.designated) {
            (OracleKind::U2, Some(existing)) if existing != l => Err(Error::domain(format!(
                "U2 oracle is conditioned on qubit {existing}, not {l}"
            ))),
            _ => {
                self.designated = Some(l);
                Ok(self)
            }
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.perm.n
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn mask(&self) -> &DiagonalSignMask {
        &self.mask
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn designated(&self) -> Option<usize> {
        self.designated
    }

    /// Applies the oracle in place: `out[perm(j)] = mask[j] * in[j]`, `h` unchanged.
    pub fn apply(&self, mut state: StateVector) -> Result<StateVector> {
        if state.num_qubits() != self.perm.n {
            return Err(Error::domain(format!(
                "{}-qubit oracle applied to a {}-qubit state",
                self.perm.n,
                state.num_qubits()
            )));
        }
        let coeffs = state.coeffs_mut();
        for (c, &s) in coeffs.iter_mut().zip(&self.mask.signs) {
            *c *= s as i64;
        }
        // Walk each cycle of the permutation once, carrying the displaced value.
        let images = &self.perm.images;
        let mut placed = vec![false; images.len()];
        for start in 0..images.len() {
            if placed[start] {
                continue;
            }
            let mut carry = coeffs[start];
            let mut k = images[start];
            while k != start {
                std::mem::swap(&mut carry, &mut coeffs[k]);
                placed[k] = true;
                k = images[k];
            }
            coeffs[start] = carry;
            placed[start] = true;
        }
        Ok(state)
    }

    /// Hides the oracle behind a query-counting handle.
    pub fn seal(self) -> BlackBoxHandle {
        BlackBoxHandle {
            oracle: self,
            queries: 0,
        }
    }
}

/// A sealed oracle: only its width and its action on states are reachable,
/// and every application is counted.
pub struct BlackBoxHandle {
    oracle: SignedPermutationOracle,
    queries: usize,
}

impl BlackBoxHandle {
    pub fn num_qubits(&self) -> usize {
        self.oracle.num_qubits()
    }

    pub fn query_count(&self) -> usize {
        self.queries
    }

    pub fn apply(&mut self, state: StateVector) -> Result<StateVector> {
        let out = self.oracle.apply(state)?;
        self.queries += 1;
        Ok(out)
    }
}

impl fmt::Debug for BlackBoxHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlackBoxHandle")
            .field("n", &self.num_qubits())
            .field("queries", &self.queries)
            .finish_non_exhaustive()
    }
}
