//! Command-line front end for the forestfas library.
//!
//! Exit codes: 0 for success or a yes answer, 1 for a validation failure or
//! a no answer, 2 for usage, I/O and parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use forestfas::assignment::{decode, encode, satisfies};
use forestfas::io::{
    format_decoded, parse_dimacs, read_assignment, read_ordering, read_tournament, write_ordering,
    write_roles, write_tournament,
};
use forestfas::magic::{magic_tournament, verify_unique_tree_ordering};
use forestfas::reduction::{reduce, ReducedTournament};
use forestfas::solver::{
    clique_number, dichromatic_number, exhaustive_oracle, find_class_ordering_with, ClassPredicate,
    SearchOptions,
};
use forestfas::{CnfInstance, Tournament};

#[derive(Parser, Debug)]
#[command(
    name = "forestfas",
    version,
    about = "Forest feedback arc sets in tournaments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a 3-CNF formula into a tournament with a forest-ordering iff
    /// the formula is satisfiable.
    Reduce {
        /// DIMACS CNF input with exactly three literals per clause.
        #[arg(long)]
        cnf: PathBuf,
        /// Tournament file to write.
        #[arg(long)]
        out: PathBuf,
        /// Also write the construction order of the vertices.
        #[arg(long)]
        emit_order: Option<PathBuf>,
        /// Also write the role of every vertex as `index<TAB>label` lines.
        #[arg(long)]
        emit_roles: Option<PathBuf>,
        /// Append a `labels` section to the tournament file.
        #[arg(long)]
        labels: bool,
    },
    /// Turn a satisfying assignment into a forest-ordering of the reduced
    /// tournament.
    Encode {
        /// DIMACS CNF input.
        #[arg(long)]
        cnf: PathBuf,
        /// Assignment file with one `<var> 0|1` line per variable.
        #[arg(long)]
        assignment: PathBuf,
        /// Ordering file to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover and check the assignment carried by a forest-ordering of the
    /// reduced tournament; prints `v<i>=true|false` lines.
    Decode {
        /// DIMACS CNF input.
        #[arg(long)]
        cnf: PathBuf,
        /// Ordering file (vertex indices or role labels).
        #[arg(long)]
        ordering: PathBuf,
    },
    /// Decide whether the tournament has an ordering whose backedge graph
    /// lies in the given class. Exit 0 for yes, 1 for no.
    Solve {
        /// Tournament file.
        #[arg(long)]
        tournament: PathBuf,
        /// Graph class: forest, tree, bipartite or clique<k>.
        #[arg(long)]
        class: ClassPredicate,
        /// Enumerate every ordering instead of searching (at most 10 vertices).
        #[arg(long)]
        oracle: bool,
        /// Write the lexicographically smallest accepted ordering here.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Worker threads for the search (0 uses all cores).
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Disable prefix pruning.
        #[arg(long)]
        no_prune: bool,
    },
    /// Print the vertex and arc counts of a tournament.
    Stats {
        /// Tournament file.
        #[arg(long)]
        tournament: PathBuf,
    },
    /// Check over all permutations that a tournament has exactly one
    /// forest-ordering, the identity, and that it yields a spanning tree.
    MagicVerify {
        /// Tournament file; defaults to the built-in eight-vertex tournament.
        #[arg(long)]
        tournament: Option<PathBuf>,
    },
    /// Dichromatic number by brute force over orderings (at most 8 vertices).
    Dic {
        /// Tournament file.
        #[arg(long)]
        tournament: PathBuf,
    },
    /// Tournament clique number by brute force over orderings (at most 8 vertices).
    Omega {
        /// Tournament file.
        #[arg(long)]
        tournament: PathBuf,
    },
}

/// Outcome of a subcommand that ran to completion.
enum Status {
    Success,
    Rejected,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_cnf(path: &Path) -> Result<CnfInstance> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_dimacs(&bytes).with_context(|| format!("{}", path.display()))
}

fn load_tournament(path: &Path) -> Result<Tournament> {
    let text = read_text(path)?;
    Ok(read_tournament(&text)
        .with_context(|| format!("{}", path.display()))?
        .tournament)
}

fn load_reduction(path: &Path) -> Result<ReducedTournament> {
    let instance = load_cnf(path)?;
    reduce(&instance).context("reduction failed")
}

fn run(command: Command) -> Result<Status> {
    match command {
        Command::Reduce {
            cnf,
            out,
            emit_order,
            emit_roles,
            labels,
        } => {
            let r = load_reduction(&cnf)?;
            let roles = labels.then(|| r.roles());
            write_text(&out, &write_tournament(r.tournament(), roles))?;
            if let Some(path) = emit_order {
                write_text(&path, &write_ordering(r.star_order()))?;
            }
            if let Some(path) = emit_roles {
                write_text(&path, &write_roles(r.roles()))?;
            }
            Ok(Status::Success)
        }
        Command::Encode {
            cnf,
            assignment,
            out,
        } => {
            let r = load_reduction(&cnf)?;
            let text = read_text(&assignment)?;
            let nu = read_assignment(&text, r.instance().num_vars())
                .with_context(|| format!("{}", assignment.display()))?;
            if !satisfies(r.instance(), &nu) {
                eprintln!("error: the assignment does not satisfy the formula");
                return Ok(Status::Rejected);
            }
            let ord = encode(&r, &nu)?;
            write_text(&out, &write_ordering(&ord))?;
            Ok(Status::Success)
        }
        Command::Decode { cnf, ordering } => {
            let r = load_reduction(&cnf)?;
            let labels: Vec<String> = (0..r.roles().len()).map(|v| r.roles().label(v)).collect();
            let text = read_text(&ordering)?;
            let ord = read_ordering(&text, r.tournament().len(), Some(&labels))
                .with_context(|| format!("{}", ordering.display()))?;
            match decode(&r, &ord) {
                Ok(nu) => {
                    print!("{}", format_decoded(&nu));
                    Ok(Status::Success)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(Status::Rejected)
                }
            }
        }
        Command::Solve {
            tournament,
            class,
            oracle,
            witness,
            workers,
            no_prune,
        } => {
            let t = load_tournament(&tournament)?;
            let outcome = if oracle {
                exhaustive_oracle(&t, class)?
            } else {
                let opts = SearchOptions {
                    pruning: !no_prune,
                    workers,
                };
                find_class_ordering_with(&t, class, opts)
            };
            println!("class: {class}");
            println!("answer: {}", if outcome.decision { "yes" } else { "no" });
            println!("nodes: {}", outcome.stats.nodes);
            println!("prunes: {}", outcome.stats.prunes);
            println!("leaves: {}", outcome.stats.leaves);
            if let Some(ord) = &outcome.witness {
                print!("witness: {}", write_ordering(ord));
                if let Some(path) = witness {
                    write_text(&path, &write_ordering(ord))?;
                }
            }
            Ok(if outcome.decision {
                Status::Success
            } else {
                Status::Rejected
            })
        }
        Command::Stats { tournament } => {
            let t = load_tournament(&tournament)?;
            println!("vertices: {}", t.len());
            println!("arcs: {}", t.arc_count());
            Ok(Status::Success)
        }
        Command::MagicVerify { tournament } => {
            let t = match tournament {
                Some(path) => load_tournament(&path)?,
                None => magic_tournament(),
            };
            let report = verify_unique_tree_ordering(&t)?;
            println!("{report}");
            Ok(if report.passed {
                Status::Success
            } else {
                Status::Rejected
            })
        }
        Command::Dic { tournament } => {
            let t = load_tournament(&tournament)?;
            println!("dic: {}", dichromatic_number(&t)?);
            Ok(Status::Success)
        }
        Command::Omega { tournament } => {
            let t = load_tournament(&tournament)?;
            println!("omega: {}", clique_number(&t)?);
            Ok(Status::Success)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Rejected) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
