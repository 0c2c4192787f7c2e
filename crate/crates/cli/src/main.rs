//! `ieal`: encrypt and decrypt PGM images, print key-space tables, and run
//! the attacks.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};

use ieal::attacks::{
    brute_force, cpa_full, cpa_query_bound, cycle_attack, dictionary_stats, kpa, timing_attack,
    AttackError, AttackReport, ExactMatch, PlaintextScorer, SimulatedOracle, SimulatedTimingOracle,
    Smoothness, TimingOracle, WallClockOracle,
};
use ieal::image_io::{load_pgm, save_pgm};
use ieal::keyspace::key_space_size;
use ieal::{decrypt, encrypt, Key};

#[derive(Parser)]
#[command(
    name = "ieal",
    version,
    about = "Arnold/Lucas image cipher and its cryptanalysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt a P5 PGM image.
    Encrypt(CryptArgs),
    /// Decrypt a P5 PGM image.
    Decrypt(CryptArgs),
    /// Print key-space or keystream dictionary tables.
    Report(ReportArgs),
    /// Run an attack.
    #[command(subcommand)]
    Attack(AttackCommand),
}

#[derive(Args)]
struct CryptArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long = "out", value_name = "FILE")]
    output: PathBuf,
    /// Rounds and keystream offset, as `T,S`.
    #[arg(long, value_name = "T,S", value_parser = parse_key)]
    key: Key,
}

#[derive(Args)]
#[command(group(ArgGroup::new("table").required(true).multiple(true).args(["keyspace", "dictionary"])))]
struct ReportArgs {
    /// Image sizes to tabulate.
    #[arg(long, value_name = "N1,N2,...", value_delimiter = ',')]
    keyspace: Vec<u64>,
    /// Distribution of offset dictionary sizes for the first keystream byte.
    #[arg(long)]
    dictionary: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct OutputArgs {
    /// Print `key=value` lines instead of the text summary.
    #[arg(long)]
    kv: bool,
}

#[derive(Subcommand)]
enum AttackCommand {
    /// Exhaustive search over every canonical key.
    Brute {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long = "out", value_name = "FILE")]
        output: Option<PathBuf>,
        /// Worker threads; 0 uses all available cores.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// `smoothness`, or `match:FILE` to count mismatches against a reference.
        #[arg(long, default_value = "smoothness")]
        scorer: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Re-encrypt the ciphertext until it comes back.
    Cycle {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long = "out", value_name = "FILE")]
        output: Option<PathBuf>,
        /// Hidden key of the simulated encryption oracle.
        #[arg(long, value_name = "T,S", value_parser = parse_key)]
        key_oracle: Key,
        #[arg(long, value_name = "M")]
        max_steps: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Chosen-plaintext recovery of the mask and the permutation.
    Cpa {
        #[arg(long, value_name = "T,S", value_parser = parse_key)]
        key_oracle: Key,
        #[arg(long, value_name = "N")]
        size: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Known-plaintext recovery from one plaintext/ciphertext pair.
    Kpa {
        #[arg(long, value_name = "FILE")]
        plain: PathBuf,
        #[arg(long, value_name = "FILE")]
        cipher: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Estimate the round count from encryption times.
    Timing {
        #[arg(long, value_name = "T,S", value_parser = parse_key)]
        key_oracle: Key,
        /// Image side lengths to time.
        #[arg(long, value_name = "N1,N2,...", value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Relative noise of the simulated timer.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Time real round-by-round encryptions instead of the simulated timer.
        #[arg(long)]
        wall_clock: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn parse_key(s: &str) -> Result<Key, String> {
    let (t, o) = s
        .split_once(',')
        .ok_or_else(|| format!("expected T,S but got `{s}`"))?;
    let number = |v: &str| {
        v.trim()
            .parse::<u64>()
            .map_err(|e| format!("`{v}` in `{s}`: {e}"))
    };
    Ok(Key::new(number(t)?, number(o)?))
}

// Per-pixel cost of the simulated timer, in seconds.
const SIMULATED_PIXEL_COST: f64 = 2e-9;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            // bad inputs are usage errors; an attack that ran and came up empty is not
            match err.downcast_ref::<AttackError>() {
                Some(AttackError::Input(_)) | None => ExitCode::from(2),
                Some(_) => ExitCode::from(1),
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Encrypt(a) => {
            let plain = load_pgm(&a.input)?;
            save_pgm(&a.output, &encrypt(&plain, a.key))?;
        }
        Command::Decrypt(a) => {
            let cipher = load_pgm(&a.input)?;
            save_pgm(&a.output, &decrypt(&cipher, a.key))?;
        }
        Command::Report(a) => {
            if !a.keyspace.is_empty() {
                print_keyspace(&a.keyspace, a.csv)?;
            }
            if a.dictionary {
                print_dictionary(a.csv);
            }
        }
        Command::Attack(attack) => run_attack(attack)?,
    }
    Ok(())
}

fn print_keyspace(sizes: &[u64], csv: bool) -> Result<()> {
    if csv {
        println!("N,case,m,m_bound,key_space,log2_key_space,weak_probability");
    }
    for &n in sizes {
        let r = key_space_size(n).with_context(|| format!("key space for N={n}"))?;
        let m_bound = *r.bound_size.numer() as f64 / *r.bound_size.denom() as f64 / 384.0;
        if csv {
            println!(
                "{},{},{},{:.2},{},{:.2},{}",
                r.size,
                r.bound_case,
                r.period,
                m_bound,
                r.key_space_size,
                r.log2_size(),
                r.weak_key_probability
            );
        } else {
            let space = format!(
                "m={} Ks={} (~2^{:.2})",
                r.period,
                r.key_space_size,
                r.log2_size()
            );
            println!(
                "N={:<6} {:<8} {:<32} m_bound={:<9.2} weak={}",
                r.size, r.bound_case, space, m_bound, r.weak_key_probability
            );
        }
    }
    Ok(())
}

fn print_dictionary(csv: bool) {
    let rows = dictionary_stats();
    if csv {
        println!("dictionary_size,positions,probability");
        for r in rows {
            println!("{},{},{}", r.size, r.positions, r.probability());
        }
        return;
    }
    println!("{:>4}  {:>9}  {:>6}  ~pr", "|D|", "positions", "pr");
    for r in rows {
        let pr = r.probability();
        println!(
            "{:>4}  {:>9}  {:>6}  {:.4}",
            r.size,
            r.positions,
            pr.to_string(),
            *pr.numer() as f64 / *pr.denom() as f64
        );
    }
}

fn emit(report: &AttackReport, out: &OutputArgs) {
    if out.kv {
        print!("{}", report.to_kv(false));
    } else {
        print!("{}", report.to_text());
    }
    eprintln!("elapsed_ms={:.3}", report.elapsed_ms());
}

fn save_plaintext(report: &AttackReport, path: Option<&Path>) -> Result<()> {
    if let (Some(path), Some(plain)) = (path, &report.recovered_plaintext) {
        save_pgm(path, plain)?;
    }
    Ok(())
}

fn run_attack(command: AttackCommand) -> Result<()> {
    match command {
        AttackCommand::Brute {
            input,
            output,
            workers,
            scorer,
            out,
        } => {
            let cipher = load_pgm(&input)?;
            let scorer: Box<dyn PlaintextScorer> = match scorer.as_str() {
                "smoothness" => Box::new(Smoothness),
                other => match other.strip_prefix("match:") {
                    Some(file) => Box::new(ExactMatch(load_pgm(file)?)),
                    None => bail!("unknown scorer `{other}`; use smoothness or match:FILE"),
                },
            };
            let report = brute_force(&cipher, scorer.as_ref(), workers)?;
            emit(&report, &out);
            save_plaintext(&report, output.as_deref())?;
        }
        AttackCommand::Cycle {
            input,
            output,
            key_oracle,
            max_steps,
            out,
        } => {
            let cipher = load_pgm(&input)?;
            let mut oracle = SimulatedOracle::new(key_oracle);
            let report = cycle_attack(&mut oracle, &cipher, max_steps)?;
            emit(&report, &out);
            save_plaintext(&report, output.as_deref())?;
        }
        AttackCommand::Cpa {
            key_oracle,
            size,
            out,
        } => {
            let mut oracle = SimulatedOracle::new(key_oracle);
            let outcome = cpa_full(&mut oracle, size)?;
            emit(&outcome.report, &out);
            let perm = outcome.decryptor.permutation();
            let fixed = perm.iter().enumerate().filter(|&(k, &d)| k == d).count();
            if out.kv {
                println!("fixed_points={fixed}");
            } else {
                println!("permutation: {} pixels, {fixed} fixed", perm.len());
                println!("query bound: {}", cpa_query_bound(size));
            }
        }
        AttackCommand::Kpa { plain, cipher, out } => {
            let plain = load_pgm(&plain)?;
            let cipher = load_pgm(&cipher)?;
            emit(&kpa(&plain, &cipher)?, &out);
        }
        AttackCommand::Timing {
            key_oracle,
            sizes,
            noise,
            seed,
            wall_clock,
            out,
        } => {
            if !(0.0..1.0).contains(&noise) {
                bail!("--noise must be in [0, 1)");
            }
            let reference_key = Key::new(0, 0);
            let (mut target, mut reference): (Box<dyn TimingOracle>, Box<dyn TimingOracle>) =
                if wall_clock {
                    (
                        Box::new(WallClockOracle::new(key_oracle, 5)),
                        Box::new(WallClockOracle::new(reference_key, 5)),
                    )
                } else {
                    let sim = |key, seed| {
                        SimulatedTimingOracle::new(key, SIMULATED_PIXEL_COST, noise, seed)
                    };
                    (
                        Box::new(sim(key_oracle, seed)),
                        Box::new(sim(reference_key, seed.wrapping_add(1))),
                    )
                };
            let (report, _) = timing_attack(target.as_mut(), reference.as_mut(), 0, &sizes)?;
            emit(&report, &out);
        }
    }
    Ok(())
}
