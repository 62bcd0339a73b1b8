use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lexsafe_core::expand::{expand_to_explicit, expansion_col_index, expansion_row_index};
use lexsafe_core::explicit::{is_nash, solve_pm1_explicit, tightness_witness, DEFAULT_TIGHT_LIMIT};
use lexsafe_core::instance::{expansion_to_instance, InstanceFile, ParsedInstance};
use lexsafe_core::lex::{certify_ne, lexsafe_ne};
use lexsafe_core::oracle::Player;
use lexsafe_core::outcomes::{OutcomeSet, Pm1Partition};
use lexsafe_core::prefs::Preference;
use lexsafe_core::report::{solve_to_report, verify_report, SolveReport};
use lexsafe_core::Error;

/// Lexicographically safe Nash equilibria of tight two-person game forms.
#[derive(Parser)]
#[command(name = "lexsafe", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlayerArg {
    Alice,
    Bob,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the lexsafe equilibrium boxes of an instance
    Solve {
        instance: PathBuf,
        /// Which player's box to compute
        #[arg(long, value_enum, default_value = "both")]
        player: PlayerArg,
        /// Locate each confirmation step by binary search (query counts
        /// change; results do not)
        #[arg(long)]
        dichotomy: bool,
    },
    /// Solve one ±1 game: Alice prefers the listed outcomes, Bob the rest
    Pm1 {
        instance: PathBuf,
        /// Comma-separated outcome labels of Alice's set
        #[arg(long, value_delimiter = ',')]
        omega_a: Vec<String>,
    },
    /// Check tightness (explicit forms directly, other backends via their
    /// expansion) and print a witness partition when it fails
    Tight {
        instance: PathBuf,
        #[arg(long)]
        limit_expansion: Option<u64>,
    },
    /// Expand the oracle to its explicit normal form, printed as a
    /// re-ingestible instance file
    Expand {
        instance: PathBuf,
        #[arg(long)]
        limit_expansion: Option<u64>,
    },
    /// Re-check a solve report against a freshly parsed instance
    Verify {
        report: PathBuf,
        instance: PathBuf,
    },
    /// Randomized cross-validation of the backend against its expansion
    Selfcheck {
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long)]
        limit_expansion: Option<u64>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NotTight { .. } => 3,
        Error::SizeLimitExceeded { .. } => 4,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

fn load_instance(path: &PathBuf) -> Result<ParsedInstance, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInstance(format!("cannot read {}: {e}", path.display())))?;
    InstanceFile::from_json(&text)?.parse()
}

fn labels_json(labels: &[String], set: &OutcomeSet) -> serde_json::Value {
    serde_json::Value::Array(
        set.iter()
            .map(|i| serde_json::Value::String(labels[i].clone()))
            .collect(),
    )
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Solve {
            instance,
            player,
            dichotomy,
        } => {
            let mut parsed = load_instance(&instance)?;
            parsed.options.dichotomy |= dichotomy;
            let report = solve_to_report(
                &parsed,
                player != PlayerArg::Bob,
                player != PlayerArg::Alice,
            )?;
            println!("{}", report.to_json());
            Ok(())
        }
        Command::Pm1 { instance, omega_a } => {
            let parsed = load_instance(&instance)?;
            let oracle = &parsed.oracle;
            let mut alice = OutcomeSet::empty(oracle.outcome_count());
            for label in &omega_a {
                match oracle.index_of_label(label) {
                    Some(i) => alice.insert(i),
                    None => {
                        return Err(Error::InvalidInstance(format!(
                            "unknown outcome label {label:?}"
                        )))
                    }
                }
            }
            let part = Pm1Partition::from_alice(alice);
            let res = oracle.solve_pm1(&part)?;
            let out = serde_json::json!({
                "winner": res.winner,
                "strategy": res.strategy,
                "queries_used": res.queries_used,
                "labels": oracle.labels(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(())
        }
        Command::Tight {
            instance,
            limit_expansion,
        } => {
            let parsed = load_instance(&instance)?;
            let limit = limit_expansion.or(parsed.options.expansion_limit);
            let form = expand_to_explicit(&parsed.oracle, limit)?;
            let tight_limit = parsed.options.tight_limit.unwrap_or(DEFAULT_TIGHT_LIMIT);
            let witness = tightness_witness(&form, tight_limit)?;
            let out = match &witness {
                None => serde_json::json!({ "tight": true }),
                Some(part) => serde_json::json!({
                    "tight": false,
                    "witness_omega_a": labels_json(parsed.oracle.labels(), part.alice()),
                    "witness_omega_b": labels_json(parsed.oracle.labels(), part.bob()),
                }),
            };
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(())
        }
        Command::Expand {
            instance,
            limit_expansion,
        } => {
            let text = fs::read_to_string(&instance).map_err(|e| {
                Error::InvalidInstance(format!("cannot read {}: {e}", instance.display()))
            })?;
            let file = InstanceFile::from_json(&text)?;
            let parsed = file.parse()?;
            let limit = limit_expansion.or(parsed.options.expansion_limit);
            let form = expand_to_explicit(&parsed.oracle, limit)?;
            let out = expansion_to_instance(
                &form,
                parsed.oracle.labels(),
                file.preferences.as_ref(),
            );
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(())
        }
        Command::Verify { report, instance } => {
            let parsed = load_instance(&instance)?;
            let text = fs::read_to_string(&report).map_err(|e| {
                Error::InvalidInstance(format!("cannot read {}: {e}", report.display()))
            })?;
            let report = SolveReport::from_json(&text)?;
            let problems = verify_report(&report, &parsed)?;
            if problems.is_empty() {
                println!("report verifies");
                Ok(())
            } else {
                for p in &problems {
                    eprintln!("verification failed: {p}");
                }
                Err(Error::Internal(format!(
                    "{} verification problem(s)",
                    problems.len()
                )))
            }
        }
        Command::Selfcheck {
            instance,
            seed,
            trials,
            limit_expansion,
        } => {
            let parsed = load_instance(&instance)?;
            let limit = limit_expansion.or(parsed.options.expansion_limit);
            selfcheck(&parsed, seed, trials, limit)
        }
    }
}

/// Cross-validates the backend solver against the brute-force reference on
/// random partitions, and the equilibrium engine against the Nash
/// definition in the expansion on random preference pairs.
fn selfcheck(
    parsed: &ParsedInstance,
    seed: u64,
    trials: u32,
    limit: Option<u64>,
) -> Result<(), Error> {
    let oracle = &parsed.oracle;
    let form = expand_to_explicit(oracle, limit)?;
    let p = oracle.outcome_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u32;
    for trial in 0..trials {
        let mut alice = OutcomeSet::empty(p);
        for i in 0..p {
            if rng.gen_bool(0.5) {
                alice.insert(i);
            }
        }
        let part = Pm1Partition::from_alice(alice);
        let ours = oracle.solve_pm1(&part)?;
        let reference = solve_pm1_explicit(&form, &part)?;
        if ours.winner != reference.winner {
            eprintln!("trial {trial}: winner mismatch on {:?}", part.alice());
            failures += 1;
        }
    }
    for trial in 0..trials {
        let mut order_a: Vec<usize> = (0..p).collect();
        let mut order_b: Vec<usize> = (0..p).collect();
        order_a.shuffle(&mut rng);
        order_b.shuffle(&mut rng);
        let pref_a = Preference::new(order_a, p).unwrap();
        let pref_b = Preference::new(order_b, p).unwrap();
        for player in [Player::Alice, Player::Bob] {
            let (own, other) = match player {
                Player::Alice => (&pref_a, &pref_b),
                Player::Bob => (&pref_b, &pref_a),
            };
            let ne = lexsafe_ne(oracle, own, other, player, false)?;
            let row = expansion_row_index(oracle, &ne.x_strategy)?;
            let col = expansion_col_index(oracle, &ne.y_strategy)?;
            if !certify_ne(&ne, &pref_a, &pref_b) || !is_nash(&form, &pref_a, &pref_b, row, col)
            {
                eprintln!("trial {trial}: lexsafe record is not an equilibrium");
                failures += 1;
            }
        }
    }
    if failures == 0 {
        println!(
            "selfcheck passed: {trials} partition trials and {trials} preference trials"
        );
        Ok(())
    } else {
        Err(Error::Internal(format!("{failures} selfcheck failure(s)")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
