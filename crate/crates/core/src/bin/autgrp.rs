//! Command-line front end: reports, classification, spectra, DOT output,
//! relator checks, fixture verification and dual machines.

use autgrp::fixtures::{verify_fixtures, FixtureSet, Outcome};
use autgrp::mealy::Automaton;
use autgrp::report::{report, run_classification, Budgets};
use autgrp::spectra::{histogram_csv, operator_matrix, schreier_level_graph, spectrum_csv, symmetric_spectrum};
use autgrp::words::{parse_vertex, GenWord};
use autgrp::contraction::{nucleus_search, tile_graph, NucleusOutcome};
use autgrp::dot;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "autgrp", version, about = "analysis of three-state binary automaton groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis report for one automaton number
    Report {
        n: u64,
        /// deepest level for the level-quotient orders
        #[arg(long, default_value_t = 8)]
        level: usize,
        /// growth radius
        #[arg(long, default_value_t = 5)]
        radius: usize,
        /// spectrum level attached to the report (level 9 is opt-in)
        #[arg(long, default_value_t = 7)]
        spectrum_level: usize,
        /// write the report as JSON to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Symmetry classification of all 5832 automata
    Classify {
        /// write a CSV of automaton,representative rows
        #[arg(long)]
        out: Option<PathBuf>,
        /// worker threads (overrides AUTGRP_JOBS)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Spectrum of the symmetrized level operator, written as CSV
    Spectrum {
        n: u64,
        #[arg(long)]
        level: usize,
        /// write raw eigenvalues instead of the histogram
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// DOT renderings of the Moore diagram, Schreier graph, or tile graph
    Dot {
        #[command(subcommand)]
        what: DotTarget,
    },
    /// Check whether a word is a relator of the automaton group
    CheckRelator { n: u64, word: String },
    /// Fixture verification
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
    /// Dual automaton (states and letters exchanged), as a wreath recursion
    Dual { n: u64 },
    /// Act on a vertex: image and section of a word
    Act { n: u64, word: String, vertex: String },
}

#[derive(Subcommand)]
enum DotTarget {
    Moore {
        n: u64,
    },
    Schreier {
        n: u64,
        #[arg(long, default_value_t = 3)]
        level: usize,
    },
    Tile {
        n: u64,
        #[arg(long, default_value_t = 3)]
        level: usize,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    /// Recompute every fact in a fixture file; exit 1 on any failure
    Verify { path: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Report {
            n,
            level,
            radius,
            spectrum_level,
            json,
        } => {
            let budgets = Budgets {
                level,
                radius,
                spectrum_level,
                ..Budgets::default()
            };
            let r = report(n, &budgets)?;
            if let Some(path) = json {
                std::fs::write(&path, r.to_json())?;
                println!("wrote {}", path.display());
            } else {
                print!("{}", r.to_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { out, jobs } => {
            init_workers(jobs);
            let (table, summary) = run_classification(1_000);
            println!("classes: {}", summary.class_count);
            println!(
                "classes reduced below three states: {}",
                summary.reduced_below_three
            );
            println!(
                "range 1..=729 -> class {}",
                summary.low_range_representative
            );
            println!(
                "range 5104..=5832 -> class {}",
                summary.high_range_representative
            );
            println!(
                "class representatives finite within cap 1000: {}",
                summary
                    .finite_class_orders
                    .iter()
                    .map(|(rep, order)| format!("{rep} (order {order})"))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            if let Some(path) = out {
                let mut csv = String::from("automaton,representative\n");
                for n in 1..=5832u64 {
                    csv.push_str(&format!("{n},{}\n", table.representative(n)));
                }
                std::fs::write(&path, csv)?;
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectrum { n, level, raw, out } => {
            let aut = Automaton::decode_number(n)?;
            let m = operator_matrix(&aut, level, true)?;
            let result = symmetric_spectrum(
                &m.to_dense(),
                m.dim,
                autgrp::spectra::DEFAULT_SPECTRUM_TOL,
                autgrp::spectra::DEFAULT_HISTOGRAM_BINS,
            )?;
            let csv = if raw {
                spectrum_csv(&result)
            } else {
                histogram_csv(&result)
            };
            std::fs::write(&out, csv)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Dot { what } => {
            match what {
                DotTarget::Moore { n } => {
                    let aut = Automaton::decode_number(n)?;
                    print!("{}", dot::moore_dot(&aut));
                }
                DotTarget::Schreier { n, level } => {
                    let aut = Automaton::decode_number(n)?;
                    let graph = schreier_level_graph(&aut, level)?;
                    print!("{}", dot::schreier_dot(&aut, &graph));
                }
                DotTarget::Tile { n, level } => {
                    let aut = Automaton::decode_number(n)?;
                    match nucleus_search(&aut, 512, 24) {
                        NucleusOutcome::Found(nucleus) => {
                            let graph = tile_graph(&nucleus, level)?;
                            print!("{}", dot::tile_dot(&aut, &graph));
                        }
                        NucleusOutcome::Unknown => {
                            eprintln!("error: no nucleus found within caps; tile graph undefined");
                            return Ok(ExitCode::from(1));
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckRelator { n, word } => {
            let aut = Automaton::decode_number(n)?;
            let w = GenWord::parse(&aut, &word)?;
            if w.is_identity() {
                println!("relator: {word} = 1 in G_{n}");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("not a relator: {word} acts nontrivially in G_{n}");
                Ok(ExitCode::from(1))
            }
        }
        Command::Fixtures { action } => match action {
            FixturesAction::Verify { path } => {
                let set = FixtureSet::load(&path)?;
                let verdicts = verify_fixtures(&set, &Budgets::default());
                let mut fails = 0usize;
                let mut skips = 0usize;
                for v in &verdicts {
                    match &v.outcome {
                        Outcome::Pass => println!("PASS {}", v.fact),
                        Outcome::Fail { computed } => {
                            fails += 1;
                            println!("FAIL {} (computed: {computed})", v.fact);
                        }
                        Outcome::Skipped { reason } => {
                            skips += 1;
                            println!("SKIP {} ({reason})", v.fact);
                        }
                    }
                }
                println!(
                    "{} facts: {} passed, {fails} failed, {skips} skipped",
                    verdicts.len(),
                    verdicts.len() - fails - skips
                );
                Ok(if fails == 0 {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                })
            }
        },
        Command::Dual { n } => {
            let aut = Automaton::decode_number(n)?;
            match aut.dual() {
                Some(dual) => {
                    println!("{dual}");
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("not invertible: the dual of {n} is not an automaton");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Act { n, word, vertex } => {
            let aut = Automaton::decode_number(n)?;
            let w = GenWord::parse(&aut, &word)?;
            let v = parse_vertex(&vertex, aut.alphabet())?;
            let image: String = w.act(&v).iter().map(|x| char::from(b'0' + x)).collect();
            println!("{word}({vertex}) = {image}");
            println!("section at {vertex}: {}", w.section(&v));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn init_workers(jobs: Option<usize>) {
    let count = jobs.or_else(|| {
        std::env::var("AUTGRP_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(count) = count {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(count.max(1))
            .build_global();
    }
}
