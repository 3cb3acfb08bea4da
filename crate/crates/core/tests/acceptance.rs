//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the table.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use phaseperm::amp::qubit_bit;
use phaseperm::discriminator::{run, Decision, DiscriminationReport};
use phaseperm::oracle::{
    factorial, DiagonalSignMask, OracleKind, Permutation, SignedPermutationOracle,
};
use phaseperm::spec_file::OracleSpecDoc;
use phaseperm::verifier::{
    brute_matrix_apply, census, commuting_class_size, exhaustive_check, CensusOptions,
    Classification, Witness,
};
use phaseperm::StateVector;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:?}, limit {limit:?}"))
    }
}

/// Resource accounting gathered from every run in criteria 2 and 3.
#[derive(Default)]
struct RunLedger {
    runs: u64,
    bad_queries: u64,
    bad_hadamards: u64,
    bad_register: u64,
}

impl RunLedger {
    fn record(&mut self, r: &DiscriminationReport, handle_queries: usize) {
        self.runs += 1;
        if r.queries_used != 1 || handle_queries != 1 {
            self.bad_queries += 1;
        }
        if r.hadamards_used != r.n + 1 {
            self.bad_hadamards += 1;
        }
        if r.register_amplitudes != 1 << r.n {
            self.bad_register += 1;
        }
    }
}

/// Runs both sealed variants of `perm` on `inputs`; every run must be certain and right.
fn certain_on(
    perm: &Permutation,
    l: usize,
    inputs: &[usize],
    ledger: &mut RunLedger,
) -> Result<(), String> {
    let sealed = [
        (Decision::U1, SignedPermutationOracle::make_u1(perm.clone())),
        (
            Decision::U2,
            SignedPermutationOracle::make_u2(perm.clone(), l).map_err(|e| e.to_string())?,
        ),
    ];
    for (truth, oracle) in &sealed {
        for &i in inputs {
            let mut handle = oracle.clone().seal();
            let r = run(&mut handle, l, i).map_err(|e| e.to_string())?;
            ledger.record(&r, handle.query_count());
            let exact =
                r.marginal.numerator == 0 || r.marginal.numerator == r.marginal.denominator();
            ensure!(
                r.deterministic && exact && r.decision == *truth,
                "perm [{perm}] L={l} i={i} sealed {truth}: decision {} marginal {}",
                r.decision,
                r.marginal
            );
        }
    }
    Ok(())
}

fn ac1_worked_example() -> Check {
    let start = Instant::now();
    for n in 1..=3usize {
        for l in 1..=n {
            let u2 =
                SignedPermutationOracle::make_u2(Permutation::identity(n).unwrap(), l).unwrap();
            for j in 0..1usize << n {
                let out = u2.apply(StateVector::basis_state(n, j).unwrap()).unwrap();
                let sign = if qubit_bit(n, l, j) == 1 { -1 } else { 1 };
                let mut expected = vec![0i64; 1 << n];
                expected[j] = sign;
                ensure!(
                    out.coeffs() == expected.as_slice(),
                    "n={n} L={l} j={j}: {out}"
                );
            }
        }
    }
    // The worked example counts qubit 1 from the right; with qubit 1 leftmost
    // the same qubit is L=2 on two qubits.
    let id2 = Permutation::identity(2).unwrap();
    let u1 = SignedPermutationOracle::make_u1(id2.clone());
    let u2 = SignedPermutationOracle::make_u2(id2, 2).unwrap();
    let ket = |i| StateVector::basis_state(2, i).unwrap();
    ensure!(u1.apply(ket(0b01)).unwrap() == ket(0b01), "U1|01> != |01>");
    ensure!(
        u2.apply(ket(0b01)).unwrap() == ket(0b01).negated(),
        "U2|01> != -|01>"
    );
    ensure!(u1.apply(ket(0b00)).unwrap() == ket(0b00), "U1|00> != |00>");
    ensure!(u2.apply(ket(0b00)).unwrap() == ket(0b00), "U2|00> != |00>");
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_millis(1), "worked example")?;
    Ok(format!(
        "U2(id,L) = diag((-1)^x_L) for n<=3; U2|01> = -|01> at L=2 ({elapsed:?})"
    ))
}

fn ac2_exhaustive_certainty(ledger: &mut RunLedger) -> Check {
    let start = Instant::now();
    let mut summary = Vec::new();
    for n in 1..=3usize {
        let inputs: Vec<usize> = (0..1 << n).collect();
        for l in 1..=n {
            let mut class = 0u64;
            for rank in 0..factorial(1 << n) {
                let p = Permutation::from_lehmer_rank(n, rank).unwrap();
                if !p.commutes_with_bitflip(l).unwrap() {
                    continue;
                }
                class += 1;
                certain_on(&p, l, &inputs, ledger)?;
            }
            let expected = [0, 2, 8, 384][n];
            ensure!(
                class == expected,
                "n={n} L={l}: {class} commuting permutations, expected {expected}"
            );
            summary.push(format!("n{n}L{l}:{class}"));
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10), "exhaustive certainty")?;
    Ok(format!("{} ({elapsed:?})", summary.join(" ")))
}

fn ac3_randomized_certainty(ledger: &mut RunLedger) -> Check {
    let start = Instant::now();
    let mut perms = 0;
    for n in [4usize, 5] {
        // n = 5 has 32 basis inputs, so every input is covered rather than 64 draws.
        let inputs: Vec<usize> = (0..1 << n).collect();
        for l in 1..=n {
            for seed in 0..100u64 {
                let p = Permutation::random_commuting(n, l, seed * 1000 + l as u64).unwrap();
                ensure!(
                    p.commutes_with_bitflip(l).unwrap(),
                    "generator broke the promise"
                );
                certain_on(&p, l, &inputs, ledger)?;
                perms += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60), "randomized certainty")?;
    Ok(format!(
        "{perms} commuting permutations at n=4,5, all L, all inputs ({elapsed:?})"
    ))
}

fn ac4_resources(ledger: &RunLedger) -> Check {
    ensure!(ledger.runs > 0, "no runs recorded");
    ensure!(
        ledger.bad_queries == 0,
        "{} runs used != 1 query",
        ledger.bad_queries
    );
    ensure!(
        ledger.bad_hadamards == 0,
        "{} runs used != n+1 Hadamards",
        ledger.bad_hadamards
    );
    ensure!(
        ledger.bad_register == 0,
        "{} runs held more than 2^n amplitudes",
        ledger.bad_register
    );
    Ok(format!(
        "{} runs: 1 query, n+1 Hadamards, 2^n amplitudes each",
        ledger.runs
    ))
}

fn ac5_census() -> Check {
    let single = CensusOptions { workers: 1 };
    let start = Instant::now();
    let mut single_time = Duration::ZERO;
    let mut detail = Vec::new();
    let cases = [(2usize, 1usize), (3, 1), (3, 2), (3, 3)];
    for (n, l) in cases {
        let r = census(n, l, single).map_err(|e| e.to_string())?;
        single_time += r.runtime;
        let closed = commuting_class_size(n);
        ensure!(
            r.total_permutations == factorial(1 << n),
            "n={n}: total {}",
            r.total_permutations
        );
        ensure!(
            r.uniformly_correct_count == closed && r.commuting_count == closed,
            "n={n} L={l}: correct {} commuting {} closed form {closed}",
            r.uniformly_correct_count,
            r.commuting_count
        );
        ensure!(
            r.sets_identical,
            "n={n} L={l}: sets differ at rank {:?}",
            r.first_mismatch
        );
        detail.push(format!(
            "({n},{l}) {}/{}",
            r.uniformly_correct_count, r.total_permutations
        ));
    }
    within(
        start.elapsed(),
        Duration::from_secs(60),
        "single-threaded census",
    )?;

    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .max(2);
    let multi = CensusOptions { workers };
    let mut multi_time = Duration::ZERO;
    for (n, l) in cases {
        let a = census(n, l, single).unwrap();
        let b = census(n, l, multi).map_err(|e| e.to_string())?;
        multi_time += b.runtime;
        ensure!(
            (
                a.uniformly_correct_count,
                a.commuting_count,
                a.nondeterministic_count,
                a.first_mismatch
            ) == (
                b.uniformly_correct_count,
                b.commuting_count,
                b.nondeterministic_count,
                b.first_mismatch
            ),
            "census ({n},{l}) differs between 1 and {workers} workers"
        );
    }
    Ok(format!(
        "{}; 1 worker {single_time:?}, {workers} workers {multi_time:?} (speedup x{:.2})",
        detail.join(", "),
        single_time.as_secs_f64() / multi_time.as_secs_f64().max(1e-9)
    ))
}

/// Integer matrices scaled by sqrt(2) per Hadamard factor.
fn kron(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![0; ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for m in 0..rb {
                    out[i * rb + k][j * rb + m] = a[i][j] * b[k][m];
                }
            }
        }
    }
    out
}

fn matvec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn ac6_negative_control() -> Check {
    // Dense reference: H1 * SWAP * (H (x) H) |01>, qubit 1 = left tensor factor.
    let h = vec![vec![1, 1], vec![1, -1]];
    let id = vec![vec![1, 0], vec![0, 1]];
    let swap = vec![
        vec![1, 0, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 0, 1],
    ];
    let psi = matvec(
        &kron(&h, &id),
        &matvec(&swap, &matvec(&kron(&h, &h), &[0, 1, 0, 0])),
    );
    let p_one: i64 = psi[2] * psi[2] + psi[3] * psi[3];
    let norm: i64 = psi.iter().map(|c| c * c).sum();
    ensure!(
        p_one == norm,
        "dense reference predicts P(q1=1) = {p_one}/{norm}"
    );

    let start = Instant::now();
    let swap_perm = Permutation::swap_qubits(2, 1, 2).unwrap();
    let mut handle = SignedPermutationOracle::make_u1(swap_perm.clone()).seal();
    let r = run(&mut handle, 1, 0b01).map_err(|e| e.to_string())?;
    let verdict = exhaustive_check(&swap_perm, 1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(
        r.deterministic && r.outcome_bit == 1 && r.decision == Decision::U2,
        "run disagrees with dense reference"
    );
    ensure!(
        verdict.classification != Classification::UniformlyCorrect,
        "SWAP classified uniformly correct"
    );
    ensure!(
        verdict.witness
            == Some(Witness {
                input: 0b01,
                variant: OracleKind::U1
            }),
        "witness {:?}",
        verdict.witness
    );
    within(elapsed, Duration::from_millis(1), "negative control")?;
    Ok(format!(
        "SWAP(q1,q2) {} with witness (|01>, U1) ({elapsed:?})",
        verdict.classification
    ))
}

fn ac7_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let random_state = |rng: &mut ChaCha8Rng, max_n: usize, steps: usize| {
        let n = rng.random_range(1..=max_n);
        let mut s = StateVector::basis_state(n, rng.random_range(0..1 << n)).unwrap();
        for _ in 0..steps {
            s = match rng.random_range(0..4) {
                0 => s.hadamard_layer().unwrap(),
                1 => s.hadamard_single(rng.random_range(1..=n)).unwrap(),
                2 => random_oracle(rng, n).apply(s).unwrap(),
                _ => s.canonicalize(),
            };
        }
        s
    };

    // Normalization after every operation.
    let mut ops = 0u64;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=5usize);
        let mut s = StateVector::basis_state(n, rng.random_range(0..1 << n)).unwrap();
        ensure!(
            s.norm_squared() == 1 << s.half_power(),
            "basis state not normalized"
        );
        for _ in 0..rng.random_range(1..=10) {
            s = match rng.random_range(0..4) {
                0 => s.hadamard_layer().unwrap(),
                1 => s.hadamard_single(rng.random_range(1..=n)).unwrap(),
                2 => random_oracle(&mut rng, n).apply(s).unwrap(),
                _ => s.canonicalize(),
            };
            ops += 1;
            ensure!(
                s.norm_squared() == 1u128 << s.half_power(),
                "normalization broken: {s}"
            );
        }
    }

    // Involution and layer composition.
    for _ in 0..2_000 {
        let s = random_state(&mut rng, 6, 4);
        let n = s.num_qubits();
        for l in 1..=n {
            let twice = s
                .clone()
                .hadamard_single(l)
                .unwrap()
                .hadamard_single(l)
                .unwrap();
            ensure!(
                twice.canonicalize() == s.clone().canonicalize(),
                "HH != I on qubit {l}"
            );
        }
        if n <= 5 {
            let mut order: Vec<usize> = (1..=n).collect();
            for k in (1..n).rev() {
                order.swap(k, rng.random_range(0..=k));
            }
            let singles = order
                .iter()
                .fold(s.clone(), |acc, &l| acc.hadamard_single(l).unwrap());
            ensure!(
                s.clone()
                    .hadamard_layer()
                    .unwrap()
                    .states_equal(&singles, false)
                    .unwrap(),
                "layer != singles in order {order:?}"
            );
        }
    }

    // Differential check against dense matrices.
    for _ in 0..1_000 {
        let s = random_state(&mut rng, 4, 3);
        let o = random_oracle(&mut rng, s.num_qubits());
        ensure!(
            o.apply(s.clone()).unwrap() == brute_matrix_apply(&o, &s).unwrap(),
            "apply differs from dense product"
        );
    }

    // Spec corpus round trip.
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files = 0;
    for entry in fs::read_dir(&dir).map_err(|e| e.to_string())? {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let doc = OracleSpecDoc::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let again = OracleSpecDoc::parse(&doc.serialize()).map_err(|e| e.to_string())?;
        ensure!(
            again == doc && again.serialize() == doc.serialize(),
            "{} does not round-trip",
            path.display()
        );
        files += 1;
    }
    ensure!(files >= 20, "corpus has only {files} files");
    Ok(format!(
        "{ops} ops normalized, 2000 involution/layer states, 1000 dense pairs, {files} spec files"
    ))
}

fn random_oracle(rng: &mut ChaCha8Rng, n: usize) -> SignedPermutationOracle {
    let perm = Permutation::random_with(n, rng).unwrap();
    match rng.random_range(0..3) {
        0 => SignedPermutationOracle::make_u1(perm),
        1 => SignedPermutationOracle::make_u2(perm, rng.random_range(1..=n)).unwrap(),
        _ => SignedPermutationOracle::general(
            perm,
            DiagonalSignMask::random(n, rng.random()).unwrap(),
        )
        .unwrap(),
    }
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_phaseperm"))
        .args(args)
        .output()
        .unwrap()
}

fn sorted_keys(text: &[u8]) -> Result<Vec<String>, String> {
    let v: Value = serde_json::from_slice(text).map_err(|e| e.to_string())?;
    let mut keys: Vec<String> = v
        .as_object()
        .ok_or("not an object")?
        .keys()
        .cloned()
        .collect();
    keys.sort();
    Ok(keys)
}

fn ac8_cli_contract() -> Check {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests");
    let show = cli(&["show", "--n", "3", "--L", "3"]);
    let golden = fs::read(root.join("golden/show_n3_L3.txt")).unwrap();
    ensure!(
        show.status.success() && show.stdout == golden,
        "show --n 3 --L 3 differs from golden"
    );

    let oracle = root.join("corpus/17_identity_u2.oracle");
    let run_out = cli(&[
        "run",
        "--oracle",
        oracle.to_str().unwrap(),
        "--input",
        "01",
        "--json",
    ]);
    let run_keys = sorted_keys(&run_out.stdout)?;
    let expected_run = [
        "L",
        "decision",
        "deterministic",
        "hadamards",
        "initial_bit",
        "input",
        "marginal",
        "n",
        "outcome",
        "queries",
        "register_amplitudes",
        "schema",
    ];
    ensure!(run_keys == expected_run, "run schema keys {run_keys:?}");

    let census_out = cli(&["census", "--n", "2", "--L", "1", "--json"]);
    let census_keys = sorted_keys(&census_out.stdout)?;
    let expected_census = [
        "L",
        "commuting",
        "commuting_not_correct",
        "correct_not_commuting",
        "deterministic_wrong",
        "first_mismatch",
        "mode",
        "n",
        "nondeterministic",
        "runtime_ms",
        "schema",
        "seed",
        "sets_identical",
        "total",
        "uniformly_correct",
        "workers",
    ];
    ensure!(
        census_keys == expected_census,
        "census schema keys {census_keys:?}"
    );

    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let repeated = write("rep.oracle", "n 2\nvariant U1\nperm 0 1 1 3\n");
    let syntax = write("syn.oracle", "n 2\nvariant X\nperm 0 1 2 3\n");
    let table: Vec<(Vec<&str>, i32)> = vec![
        (vec!["show", "--n", "2", "--L", "1"], 0),
        (vec!["bogus"], 2),
        (vec!["verify", "--oracle", &syntax, "--L", "1"], 2),
        (vec!["verify", "--oracle", &repeated, "--L", "1"], 3),
        (vec!["census", "--n", "4", "--L", "1"], 4),
    ];
    for (args, code) in &table {
        let got = cli(args).status.code();
        ensure!(
            got == Some(*code),
            "{args:?} exited {got:?}, expected {code}"
        );
    }
    Ok(format!(
        "golden show, run/census schemas, {} exit codes",
        table.len()
    ))
}

#[test]
fn acceptance() {
    let mut ledger = RunLedger::default();
    let mut results: Vec<(&str, Check)> = Vec::new();
    let mut guarded = |id: &'static str, f: &mut dyn FnMut() -> Check| {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        results.push((id, outcome));
    };
    guarded(
        "AC1 worked example (U2 sign convention)",
        &mut ac1_worked_example,
    );
    guarded("AC2 certainty, exhaustive n<=3", &mut || {
        ac2_exhaustive_certainty(&mut ledger)
    });
    guarded("AC3 certainty, randomized n=4,5", &mut || {
        ac3_randomized_certainty(&mut ledger)
    });
    guarded("AC4 one query, n+1 Hadamards, no ancilla", &mut || {
        ac4_resources(&ledger)
    });
    guarded("AC5 census delimits the promise class", &mut ac5_census);
    guarded("AC6 SWAP negative control", &mut ac6_negative_control);
    guarded("AC7 property suites", &mut ac7_properties);
    guarded("AC8 CLI contract", &mut ac8_cli_contract);

    let mut failed = 0;
    for (id, outcome) in &results {
        match outcome {
            Ok(detail) => println!("[PASS] {id}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id}: {why}");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
