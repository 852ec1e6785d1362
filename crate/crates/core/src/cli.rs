//! Command-line front end: verification suites, campaigns, per-game
//! classical/quantum optimization, histogram CSVs, and OpenQASM export.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bell::{build_bell, expectation};
use crate::catalog;
use crate::circuit::{strategy_circuit, to_qasm};
use crate::classical::{best_classical, DeterministicStrategy};
use crate::game::GameSpec;
use crate::optimize::{optimize_strategy, strategy_from_angles, OptimizeConfig};
use crate::quantum::{make_epr, win_probability};
use crate::search::{run_campaign, CampaignConfig, Resource};
use crate::verify;

const EXIT_OK: i32 = 0;
const EXIT_FAILURE: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "qgame",
    about = "CHSH-like nonlocal binary games: enumeration, classical brute force, \
             quantum strategy optimization, Bell/Mermin operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct CommonOpts {
    /// Master seed for the optimizer
    #[arg(long)]
    seed: Option<u64>,
    /// Random restarts per optimization
    #[arg(long)]
    restarts: Option<usize>,
    /// Objective evaluations per restart
    #[arg(long)]
    max_evals: Option<usize>,
    /// Convergence tolerance on the objective spread
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads (default 1 for reproducible timing)
    #[arg(long)]
    threads: Option<usize>,
    /// Config file with key=value lines (flags override file values)
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite and print pass/fail per assertion
    Verify {
        /// One of: counts, table1..table5, bell, t1, t2, correspondence
        suite: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Enumerate every game of the given arity and optimize each resource
    Search {
        #[arg(long)]
        arity: u8,
        /// Resource states (repeatable): epr, ghz, w, ghz-j
        #[arg(long, required = true)]
        resource: Vec<Resource>,
        /// JSONL result sink; resumes if the file already exists
        #[arg(long)]
        out: PathBuf,
        /// Skip seeding with the published witness angle sets
        #[arg(long)]
        no_witness_seeds: bool,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Exact classical optimum of one game
    Classical {
        /// Game equation, e.g. "x*y = a^b"
        #[arg(long)]
        game: String,
        #[arg(long)]
        arity: u8,
    },
    /// Optimize the quantum strategy of one game on a fixed resource
    Optimize {
        #[arg(long)]
        game: String,
        #[arg(long)]
        arity: u8,
        #[arg(long)]
        resource: Resource,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Per-question win-rate CSV (exact probabilities, not shots)
    Histogram {
        #[arg(long)]
        game: String,
        #[arg(long)]
        arity: u8,
        /// Strategy source: "classical" or a resource name (epr, ghz, w, ghz-j)
        #[arg(long)]
        source: String,
        /// Explicit witness angles (comma-separated, 6n values); otherwise
        /// the strategy is optimized
        #[arg(long)]
        angles: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Export the strategy circuit for one question as OpenQASM 2.0
    ExportQasm {
        #[arg(long)]
        game: String,
        #[arg(long)]
        arity: u8,
        /// ghz or w (the resources with a preparation circuit)
        #[arg(long)]
        resource: Resource,
        /// Question bit-string, e.g. 111
        #[arg(long)]
        question: String,
        #[arg(long)]
        angles: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Print the Bell operator and its expectation on EPR
    Bell,
}

fn parse_config_file(path: &Path, opts: &mut CommonOpts) -> Result<(), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), idx + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let parse_err = |e| format!("{}:{}: bad value for {key}: {e}", path.display(), idx + 1);
        // Flags override the file, so only fill unset fields.
        match key {
            "seed" => {
                if opts.seed.is_none() {
                    opts.seed = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?);
                }
            }
            "restarts" => {
                if opts.restarts.is_none() {
                    opts.restarts = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?);
                }
            }
            "max_evals" | "max-evals" => {
                if opts.max_evals.is_none() {
                    opts.max_evals = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?);
                }
            }
            "tol" => {
                if opts.tol.is_none() {
                    opts.tol = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?);
                }
            }
            "threads" => {
                if opts.threads.is_none() {
                    opts.threads = Some(value.parse().map_err(|e| parse_err(format!("{e}")))?);
                }
            }
            other => return Err(format!("{}: unknown key `{other}`", path.display())),
        }
    }
    Ok(())
}

fn resolve_opts(mut opts: CommonOpts) -> Result<OptimizeConfig, String> {
    if let Some(path) = opts.config.clone() {
        parse_config_file(&path, &mut opts)?;
    }
    let defaults = OptimizeConfig::default();
    let config = OptimizeConfig {
        restarts: opts.restarts.unwrap_or(defaults.restarts),
        max_evals: opts.max_evals.unwrap_or(defaults.max_evals),
        tolerance: opts.tol.unwrap_or(defaults.tolerance),
        seed: opts.seed.unwrap_or(defaults.seed),
    };
    config.validate()?;

    let threads = opts.threads.unwrap_or(1);
    if threads == 0 {
        return Err("threads must be >= 1".into());
    }
    // Single-threaded by default; ignore the error if a pool already exists.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(config)
}

fn parse_angles(text: &str, expected: usize) -> Result<Vec<f64>, String> {
    let angles: Result<Vec<f64>, _> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect();
    let angles = angles.map_err(|e| format!("bad angle list: {e}"))?;
    if angles.len() != expected {
        return Err(format!(
            "expected {expected} angles, got {}",
            angles.len()
        ));
    }
    Ok(angles)
}

fn parse_question(text: &str, n: u8) -> Result<u16, String> {
    if text.len() != n as usize || !text.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(format!("question must be a {n}-bit string of 0s and 1s"));
    }
    Ok(u16::from_str_radix(text, 2).unwrap())
}

fn print_results(results: &[verify::CheckResult]) -> i32 {
    for r in results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status} {} ({})", r.name, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "{} passed, {} failed",
        results.len() - failed,
        failed
    );
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn classical_histogram(game: &GameSpec, strategy: &DeterministicStrategy) -> Vec<(u16, f64)> {
    (0..1u16 << game.n())
        .map(|q| {
            let win = game.win_idx(q, strategy.respond(q));
            (q, if win { 1.0 } else { 0.0 })
        })
        .collect()
}

fn write_histogram(path: &Path, n: u8, rows: &[(u16, f64)]) -> Result<(), String> {
    let mut csv = String::from("question,win_rate\n");
    let mut total = 0.0;
    for (q, p) in rows {
        csv.push_str(&format!("{:0width$b},{p:.12}\n", q, width = n as usize));
        total += p;
    }
    csv.push_str(&format!("average,{:.12}\n", total / rows.len() as f64));
    fs::write(path, csv).map_err(|e| format!("{}: {e}", path.display()))
}

fn execute(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Verify { suite, opts } => {
            let optimize = resolve_opts(opts)?;
            let config = CampaignConfig {
                optimize,
                witness_seeded: true,
            };
            match verify::run_suite(&suite, &config) {
                Some(results) => Ok(print_results(&results)),
                None => Err(format!(
                    "unknown suite `{suite}`; expected one of {}",
                    verify::SUITE_IDS.join(", ")
                )),
            }
        }
        Command::Search {
            arity,
            resource,
            out,
            no_witness_seeds,
            opts,
        } => {
            let optimize = resolve_opts(opts)?;
            let config = CampaignConfig {
                optimize,
                witness_seeded: !no_witness_seeds,
            };
            let records = run_campaign(arity, &resource, &config, Some(&out))
                .map_err(|e| e.to_string())?;
            println!("{} records in {}", records.len(), out.display());
            Ok(EXIT_OK)
        }
        Command::Classical { game, arity } => {
            let game = GameSpec::parse(&game, arity).map_err(|e| e.to_string())?;
            let (value, witnesses) = best_classical(&game);
            println!("game: {}", game.render());
            println!("best classical value: {value}");
            println!("witness strategies: {}", witnesses.len());
            for w in &witnesses {
                let answers: Vec<String> = (0..arity)
                    .map(|i| {
                        format!(
                            "h{}=({},{})",
                            i + 1,
                            w.answer(i, false) as u8,
                            w.answer(i, true) as u8
                        )
                    })
                    .collect();
                println!("  code {:>4} {}", w.code(), answers.join(" "));
            }
            Ok(EXIT_OK)
        }
        Command::Optimize {
            game,
            arity,
            resource,
            opts,
        } => {
            let optimize = resolve_opts(opts)?;
            let game = GameSpec::parse(&game, arity).map_err(|e| e.to_string())?;
            let state = resource.state(arity).map_err(|e| e.to_string())?;
            let result =
                optimize_strategy(&game, &state, &optimize).map_err(|e| e.to_string())?;
            println!("game: {}", game.render());
            println!("resource: {}", resource.name());
            println!("best quantum value: {:.6}", result.best_value);
            let rendered: Vec<String> =
                result.best_angles.iter().map(|a| format!("{a:.6}")).collect();
            println!("angles: {}", rendered.join(","));
            Ok(EXIT_OK)
        }
        Command::Histogram {
            game,
            arity,
            source,
            angles,
            out,
            opts,
        } => {
            let optimize = resolve_opts(opts)?;
            let game = GameSpec::parse(&game, arity).map_err(|e| e.to_string())?;
            let rows = if source == "classical" {
                let (_, witnesses) = best_classical(&game);
                classical_histogram(&game, &witnesses[0])
            } else {
                let resource: Resource = source.parse()?;
                let state = resource.state(arity).map_err(|e| e.to_string())?;
                let angle_values = match angles {
                    Some(text) => parse_angles(&text, 6 * arity as usize)?,
                    None => {
                        optimize_strategy(&game, &state, &optimize)
                            .map_err(|e| e.to_string())?
                            .best_angles
                    }
                };
                let strat =
                    strategy_from_angles(&state, &angle_values).map_err(|e| e.to_string())?;
                crate::circuit::question_histogram(&game, &strat).map_err(|e| e.to_string())?
            };
            write_histogram(&out, arity, &rows)?;
            println!("wrote {}", out.display());
            Ok(EXIT_OK)
        }
        Command::ExportQasm {
            game,
            arity,
            resource,
            question,
            angles,
            out,
            opts,
        } => {
            let optimize = resolve_opts(opts)?;
            let game = GameSpec::parse(&game, arity).map_err(|e| e.to_string())?;
            let question = parse_question(&question, arity)?;
            let angle_values = match angles {
                Some(text) => parse_angles(&text, 6 * arity as usize)?,
                None => {
                    let state = resource.state(arity).map_err(|e| e.to_string())?;
                    optimize_strategy(&game, &state, &optimize)
                        .map_err(|e| e.to_string())?
                        .best_angles
                }
            };
            let gates = strategy_circuit(resource, arity, &angle_values, question)
                .map_err(|e| e.to_string())?;
            fs::write(&out, to_qasm(arity, &gates))
                .map_err(|e| format!("{}: {e}", out.display()))?;
            println!("wrote {}", out.display());
            Ok(EXIT_OK)
        }
        Command::Bell => {
            let bell = build_bell();
            let value = expectation(&bell, &make_epr()).map_err(|e| e.to_string())?;
            println!("B = {bell}");
            println!("<B> on EPR = {value:.12} (2*sqrt(2) = {:.12})", 2f64.sqrt() * 2.0);

            let game = catalog::chsh_game();
            let strat = strategy_from_angles(&make_epr(), &catalog::chsh_witness_angles())
                .map_err(|e| e.to_string())?;
            let p = win_probability(&game, &strat).map_err(|e| e.to_string())?;
            println!("CHSH witness win probability = {p:.12}");
            Ok(EXIT_OK)
        }
    }
}

/// CLI entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            EXIT_USAGE
        }
    }
}
