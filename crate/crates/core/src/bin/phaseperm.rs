use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use phaseperm::amp::{parse_bitstring, to_bitstring};
use phaseperm::discriminator;
use phaseperm::oracle::{Permutation, SignedPermutationOracle};
use phaseperm::par;
use phaseperm::render::render_circuit_ascii;
use phaseperm::report;
use phaseperm::spec_file::OracleSpecDoc;
use phaseperm::verifier::{self, CensusOptions};
use phaseperm::{Error, Result};

/// Exact one-query discrimination of signed permutation oracles.
#[derive(Parser)]
#[command(name = "phaseperm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the discriminator once against a sealed oracle file.
    Run {
        #[arg(long)]
        oracle: PathBuf,
        /// Input basis state, qubit 1 first (e.g. "01" means x1=0, x2=1).
        #[arg(long)]
        input: String,
        /// Designated qubit, when the oracle file has no `L` line.
        #[arg(long = "L", value_name = "K")]
        designated: Option<usize>,
        #[arg(long)]
        json: bool,
        /// Also draw a simulated measurement from the exact marginal.
        #[arg(long)]
        sample: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classify the file's permutation over every input and both variants.
    Verify {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long = "L", value_name = "K")]
        designated: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Classify every permutation of 2^n basis states (or a seeded sample).
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long = "L", value_name = "K")]
        designated: usize,
        /// Classify COUNT seeded random permutations instead of the full group.
        #[arg(long, value_name = "COUNT")]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Write a seeded oracle spec file to stdout.
    MakeOracle {
        #[arg(long)]
        n: usize,
        #[arg(long = "L", value_name = "K")]
        designated: usize,
        #[arg(long, value_enum)]
        variant: Variant,
        /// Draw the permutation from those commuting with the qubit-L flip.
        #[arg(long)]
        commuting: bool,
        #[arg(long)]
        seed: u64,
    },
    /// Draw the circuit.
    Show {
        #[arg(long)]
        n: usize,
        #[arg(long = "L", value_name = "K")]
        designated: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    #[value(name = "U1")]
    U1,
    #[value(name = "U2")]
    U2,
}

fn load_oracle(path: &Path, designated: Option<usize>) -> Result<(SignedPermutationOracle, usize)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    let oracle = OracleSpecDoc::parse(&text)?.to_oracle()?;
    let l = match (oracle.designated(), designated) {
        (Some(file), Some(arg)) if file != arg => {
            return Err(Error::Domain(format!(
                "--L {arg} disagrees with L {file} in {}",
                path.display()
            )))
        }
        (Some(l), _) | (None, Some(l)) => l,
        (None, None) => {
            return Err(Error::Domain(format!(
                "{} has no `L` line; pass --L",
                path.display()
            )))
        }
    };
    let oracle = oracle.with_designated(l)?;
    Ok((oracle, l))
}

fn cmd_run(
    oracle: &Path,
    input: &str,
    designated: Option<usize>,
    json: bool,
    sample: bool,
    seed: u64,
) -> Result<()> {
    let (oracle, l) = load_oracle(oracle, designated)?;
    let n = oracle.num_qubits();
    let (width, i) = parse_bitstring(input)?;
    if width != n {
        return Err(Error::Domain(format!(
            "--input has {width} bits but the oracle acts on {n} qubits"
        )));
    }
    let mut handle = oracle.seal();
    let mut before_last_h = None;
    let r = discriminator::run_observed(&mut handle, l, i, |s| {
        if sample {
            before_last_h = Some(s.clone());
        }
    })?;
    let sampled = match before_last_h {
        Some(s) => Some(s.hadamard_single(l)?.sample_qubit(l, seed)?),
        None => None,
    };
    if json {
        println!("{}", report::run_report_json(&r, sampled));
    } else {
        println!(
            "input      |{}>  (x{l} = {})",
            to_bitstring(n, i),
            r.initial_bit
        );
        println!("P(q{l} = 1)  {}", r.marginal);
        println!(
            "outcome    {}{}",
            r.outcome_bit,
            if r.deterministic {
                ""
            } else {
                "  (not deterministic)"
            }
        );
        if let Some(bit) = sampled {
            println!("sampled    {bit}  (seed {seed})");
        }
        println!("decision   {}", r.decision);
        println!("queries    {}", r.queries_used);
        println!("hadamards  {}", r.hadamards_used);
    }
    Ok(())
}

fn cmd_verify(oracle: &Path, designated: Option<usize>, json: bool) -> Result<()> {
    let (oracle, l) = load_oracle(oracle, designated)?;
    let n = oracle.num_qubits();
    let verdict = verifier::exhaustive_check(oracle.perm(), l)?;
    let commuting = oracle.perm().commutes_with_bitflip(l)?;
    if json {
        println!("{}", report::verify_report_json(n, l, &verdict, commuting));
    } else {
        println!("classification  {}", verdict.classification);
        println!(
            "commutes with X on q{l}  {}",
            if commuting { "yes" } else { "no" }
        );
        if let Some(w) = verdict.witness {
            println!(
                "witness  input |{}> sealed as {}",
                to_bitstring(n, w.input),
                w.variant
            );
        }
    }
    Ok(())
}

fn cmd_census(
    n: usize,
    l: usize,
    sample: Option<u64>,
    seed: u64,
    workers: Option<usize>,
    json: bool,
) -> Result<()> {
    let opts = CensusOptions {
        workers: workers.unwrap_or_else(par::default_workers).max(1),
    };
    let r = match sample {
        Some(count) => verifier::census_sampled(n, l, count, seed, opts)?,
        None => verifier::census(n, l, opts)?,
    };
    if json {
        println!("{}", report::census_report_json(&r));
    } else {
        let mode = match r.sample_seed {
            Some(seed) => format!("sampled, seed {seed}"),
            None => "exhaustive".to_string(),
        };
        println!("census n={n} L={l} ({mode})");
        println!("permutations         {}", r.total_permutations);
        println!("uniformly correct    {}", r.uniformly_correct_count);
        println!("commuting with X_L   {}", r.commuting_count);
        println!("nondeterministic     {}", r.nondeterministic_count);
        println!("deterministic wrong  {}", r.deterministic_wrong_count);
        println!("sets identical       {}", r.sets_identical);
        if !r.is_sampled() {
            println!("closed form          {}", verifier::commuting_class_size(n));
        }
        println!(
            "runtime              {} ms on {} worker(s)",
            r.runtime.as_millis(),
            r.workers
        );
    }
    Ok(())
}

fn cmd_make_oracle(n: usize, l: usize, variant: Variant, commuting: bool, seed: u64) -> Result<()> {
    let perm = if commuting {
        Permutation::random_commuting(n, l, seed)?
    } else {
        Permutation::random(n, seed)?
    };
    let oracle = match variant {
        Variant::U1 => SignedPermutationOracle::make_u1(perm).with_designated(l)?,
        Variant::U2 => SignedPermutationOracle::make_u2(perm, l)?,
    };
    print!(
        "{}",
        OracleSpecDoc::from_oracle(&oracle, Some(seed)).serialize()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            oracle,
            input,
            designated,
            json,
            sample,
            seed,
        } => cmd_run(&oracle, &input, designated, json, sample, seed),
        Command::Verify {
            oracle,
            designated,
            json,
        } => cmd_verify(&oracle, designated, json),
        Command::Census {
            n,
            designated,
            sample,
            seed,
            workers,
            json,
        } => cmd_census(n, designated, sample, seed, workers, json),
        Command::MakeOracle {
            n,
            designated,
            variant,
            commuting,
            seed,
        } => cmd_make_oracle(n, designated, variant, commuting, seed),
        Command::Show { n, designated } => {
            render_circuit_ascii(n, designated).map(|art| print!("{art}"))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
