//! Command dispatch for the `spe` binary.
//!
//! Every command prints one [`ResultDocument`] as JSON on standard output and
//! maps failures to stable exit codes: 0 success, 2 rejection with a witness,
//! 3 unsupported, 4 input error, 5 resource cap, 1 internal error.

pub mod document;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::arena::{classify_all, classify_outcome_set, expand_with_cap, ExpandedArena};
use crate::error::{Error, Result};
use crate::oracle::{self, SearchMode, DEFAULT_CAP};
use crate::prefs::{check_partition, find_spe_killer, interval_partition};
use crate::profiles::{deviation_outcomes, pareto_violation, spe_violation};
use crate::solver::{construction, match_po_pattern, solve, SolveMode, SolveOptions};

pub use document::*;

#[derive(Debug, Parser)]
#[command(name = "spe", version, about = "Subgame perfect equilibria on finite game arenas")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    GpSpe,
    Spe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleModeArg {
    Ne,
    Spe,
    GpSpe,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Preference kinds, killer and interval partition.
    Analyze { game: PathBuf },
    /// Build an equilibrium certificate.
    Solve {
        game: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Include the transformation trace.
        #[arg(long)]
        trace: bool,
        /// Cap on engine steps.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Check a profile, or the certificate in a `solve` result, against the game.
    Verify {
        game: PathBuf,
        profile: PathBuf,
        #[arg(long, value_enum, default_value = "spe")]
        mode: ModeArg,
    },
    /// Topological class of each outcome set.
    Classify {
        game: PathBuf,
        #[arg(long)]
        outcome: Option<String>,
    },
    /// Exhaustive search over positional or bounded-memory profiles.
    Oracle {
        game: PathBuf,
        #[arg(long, value_enum, default_value = "spe")]
        mode: OracleModeArg,
        #[arg(long)]
        memory: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Check the built-in counterexample corpus.
    Corpus {
        /// Also run seeded random solver/oracle agreement checks.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Reads a path, `-` meaning standard input.
fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Error::input(format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
    }
}

fn load(path: &Path) -> Result<(Game, ExpandedArena)> {
    let game = parse_game(&read_input(path)?)?;
    let expanded = expand_with_cap(&game.arena, crate::arena::DEFAULT_STATE_CAP)?;
    Ok((game, expanded))
}

fn error_verdict(e: &Error) -> Verdict {
    match e {
        Error::Input(_) => Verdict::InputError,
        Error::Precondition(_) => Verdict::PreconditionFailed,
        Error::Killer(_) => Verdict::Rejected,
        Error::Unsupported(_) => Verdict::Unsupported,
        Error::Resource(_) => Verdict::ResourceExceeded,
        Error::Internal(_) => Verdict::InternalError,
    }
}

struct Outcome {
    code: i32,
    verdict: Verdict,
    witness: Option<Witness>,
    trace: Option<Vec<crate::solver::TransformationRecord>>,
    message: Option<String>,
}

impl Outcome {
    fn ok(verdict: Verdict, witness: Witness) -> Self {
        Outcome { code: 0, verdict, witness: Some(witness), trace: None, message: None }
    }
}

fn analyze(path: &Path) -> Result<Outcome> {
    let (game, _) = load(path)?;
    let prefs = &game.prefs;
    let killer = find_spe_killer(prefs).map(|w| KillerDocument::new(&w, prefs));
    let (partition, partition_note) = match interval_partition(prefs) {
        Ok(p) => {
            let valid = check_partition(prefs, &p);
            let blocks = p
                .blocks
                .iter()
                .map(|b| b.iter().map(|&o| prefs.outcomes.name(o).to_string()).collect())
                .collect();
            (Some(PartitionDocument { blocks, orientation: p.orientation, valid }), None)
        }
        Err(e) => (None, Some(e.to_string())),
    };
    let doc = AnalysisDocument {
        kinds: prefs.relations.iter().map(|r| r.kind).collect(),
        killer,
        partition,
        partition_note,
        po_pattern: match_po_pattern(prefs).is_some(),
        solver: serde_json::to_value(construction(prefs))
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default(),
    };
    Ok(Outcome::ok(Verdict::Ok, Witness::Analysis(doc)))
}

fn solve_cmd(path: &Path, mode: Option<ModeArg>, trace: bool, cap: Option<usize>) -> Result<Outcome> {
    let (game, expanded) = load(path)?;
    let options = SolveOptions {
        mode: match mode {
            Some(ModeArg::GpSpe) => Some(SolveMode::GpSpe),
            Some(ModeArg::Spe) => Some(SolveMode::Spe),
            None => None,
        },
        step_cap: cap,
    };
    match solve(&expanded, &game.prefs, &options) {
        Ok(cert) => {
            let doc = CertificateDocument::new(&expanded, &game.prefs, &cert);
            let mut out = Outcome::ok(Verdict::Solved, Witness::Certificate(doc));
            out.trace = trace.then_some(cert.trace);
            Ok(out)
        }
        Err(Error::Killer(w)) => Ok(Outcome {
            code: 2,
            verdict: Verdict::Rejected,
            witness: Some(Witness::Killer(KillerDocument::new(&w, &game.prefs))),
            trace: None,
            message: Some("the preferences contain the SPE killer".into()),
        }),
        Err(e) => Err(e),
    }
}

/// Accepts a bare profile document or a `solve` result carrying a certificate.
fn read_profile(text: &str) -> Result<ProfileDocument> {
    if let Ok(p) = serde_json::from_str::<ProfileDocument>(text) {
        return Ok(p);
    }
    match serde_json::from_str::<ResultDocument>(text) {
        Ok(ResultDocument { witness: Some(Witness::Certificate(c)), .. }) => Ok(c.profile),
        Ok(_) => Err(Error::input("result document carries no certificate")),
        Err(e) => Err(Error::input(format!("profile is neither a profile nor a solve result: {e}"))),
    }
}

fn verify(game_path: &Path, profile_path: &Path, mode: ModeArg) -> Result<Outcome> {
    let (game, expanded) = load(game_path)?;
    let prefs = &game.prefs;
    let profile = read_profile(&read_input(profile_path)?)?.to_profile(&expanded)?;
    if let Some(d) = spe_violation(&expanded, &profile, prefs) {
        let better = crate::prefs::bits(deviation_outcomes(&expanded, &profile, d.state, d.player))
            .filter(|&o| prefs.prefers(d.player, d.induced, o))
            .map(|o| prefs.outcomes.name(o).to_string())
            .collect();
        let doc = DeviationDocument {
            state: expanded.state_label(d.state),
            player: prefs.players[d.player].clone(),
            induced: prefs.outcomes.name(d.induced).to_string(),
            better,
        };
        return Ok(Outcome {
            code: 2,
            verdict: Verdict::Violated,
            witness: Some(Witness::Deviation(doc)),
            trace: None,
            message: Some("a player profitably deviates in some subgame".into()),
        });
    }
    if mode == ModeArg::GpSpe {
        if let Some(v) = pareto_violation(&expanded, &profile, prefs) {
            return Ok(Outcome {
                code: 2,
                verdict: Verdict::Violated,
                witness: None,
                trace: None,
                message: Some(format!(
                    "outcome {} is not Pareto-optimal at {}",
                    prefs.outcomes.name(v.induced),
                    expanded.state_label(v.state)
                )),
            });
        }
    }
    Ok(Outcome { code: 0, verdict: Verdict::Holds, witness: None, trace: None, message: None })
}

fn classify(path: &Path, outcome: Option<&str>) -> Result<Outcome> {
    let (game, expanded) = load(path)?;
    let prefs = &game.prefs;
    let classes = match outcome {
        Some(name) => {
            let o = prefs.outcomes.id(name).ok_or_else(|| Error::input(format!("unknown outcome `{name}`")))?;
            vec![classify_outcome_set(&expanded, o)]
        }
        None => classify_all(&expanded),
    };
    let outcomes = classes.iter().map(|c| ClassificationDocument::new(&expanded, prefs, c)).collect();
    Ok(Outcome::ok(Verdict::Ok, Witness::Classification { outcomes }))
}

fn oracle_cmd(path: &Path, mode: OracleModeArg, memory: Option<usize>, cap: u64) -> Result<Outcome> {
    let (game, expanded) = load(path)?;
    let mode = match mode {
        OracleModeArg::Ne => SearchMode::Ne,
        OracleModeArg::Spe => SearchMode::Spe,
        OracleModeArg::GpSpe => SearchMode::GpSpe,
    };
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let report = oracle::search(&name, &expanded, &game.prefs, mode, memory, cap)?;
    Ok(Outcome::ok(Verdict::Ok, Witness::Report(report)))
}

fn corpus(seed: Option<u64>) -> Result<Outcome> {
    let mut results = oracle::run_corpus()?;
    if let Some(seed) = seed {
        results.extend(oracle::random_agreement_checks(seed, 50)?);
    }
    let passed = results.iter().all(|r| r.passed);
    Ok(Outcome {
        code: if passed { 0 } else { 1 },
        verdict: if passed { Verdict::Passed } else { Verdict::Failed },
        witness: Some(Witness::Corpus { results }),
        trace: None,
        message: None,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze { .. } => "analyze",
        Command::Solve { .. } => "solve",
        Command::Verify { .. } => "verify",
        Command::Classify { .. } => "classify",
        Command::Oracle { .. } => "oracle",
        Command::Corpus { .. } => "corpus",
    }
}

/// Runs one command; returns the exit code and the result document.
pub fn execute(cli: &Cli) -> (i32, ResultDocument) {
    let start = Instant::now();
    let result = match &cli.command {
        Command::Analyze { game } => analyze(game),
        Command::Solve { game, mode, trace, cap } => solve_cmd(game, *mode, *trace, *cap),
        Command::Verify { game, profile, mode } => verify(game, profile, *mode),
        Command::Classify { game, outcome } => classify(game, outcome.as_deref()),
        Command::Oracle { game, mode, memory, cap } => oracle_cmd(game, *mode, *memory, *cap),
        Command::Corpus { seed } => corpus(*seed),
    };
    let out = result.unwrap_or_else(|e| Outcome {
        code: e.exit_code(),
        verdict: error_verdict(&e),
        witness: None,
        trace: None,
        message: Some(e.to_string()),
    });
    let doc = ResultDocument {
        command: command_name(&cli.command).to_string(),
        verdict: out.verdict,
        witness: out.witness,
        trace: out.trace,
        message: out.message,
        timing_us: start.elapsed().as_micros() as u64,
    };
    (out.code, doc)
}

/// Parses arguments and runs; returns the exit code, standard output and standard error.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => {
            let (code, doc) = execute(&cli);
            (code, doc.to_json(), String::new())
        }
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, text, String::new()),
                _ => (Error::input("").exit_code(), String::new(), text),
            }
        }
    }
}
