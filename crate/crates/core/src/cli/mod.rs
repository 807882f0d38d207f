//! Command-line front end. Every library operation is reachable from exactly
//! one subcommand (see [`DISPATCH`]); output is deterministic text.
//!
//! Exit codes: `0` success or passing check, `1` failing check or
//! computational failure, `2` input error.

mod dmod_cmd;
mod gtop_cmd;
mod space_cmd;
mod tower_cmd;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::relation::{FiniteSet, Subset};

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// An input error: unreadable file, parse error or violated precondition.
#[derive(Debug)]
pub struct InputError(String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<crate::Error> for InputError {
    fn from(e: crate::Error) -> Self {
        InputError(e.to_string())
    }
}

impl InputError {
    pub(crate) fn new(msg: impl Into<String>) -> Self {
        InputError(msg.into())
    }
}

/// `Ok(true)`: success; `Ok(false)`: the requested check failed.
pub(crate) type CmdResult = std::result::Result<bool, InputError>;

pub(crate) fn read(path: &Path) -> std::result::Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// Parses `a,b`, `{a,b}` or an empty string into a subset of `base`.
pub(crate) fn parse_set(base: &FiniteSet, text: &str) -> std::result::Result<Subset, InputError> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut s = Subset::with_capacity(base.size());
    for label in inner.split(',').map(str::trim).filter(|l| !l.is_empty()) {
        s.insert(base.index_of(label)?);
    }
    Ok(s)
}

#[derive(Parser, Debug)]
#[command(name = "unisheaf", version, about = "Finite uniform structures, covering towers and irregularity indices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Axiom report for the entourages, coverings and opens of a space file.
    Check { file: PathBuf },
    /// Translate between entourage bases and covering families.
    Convert(ConvertArgs),
    /// Derived proximity or topology of a (quasi-)uniformity.
    Derive(DeriveArgs),
    /// Pervin quasi-uniformity of the topology in a space file.
    Pervin { file: PathBuf },
    /// Künzi quasi-uniformity of the topology in a space file.
    Kunzi { file: PathBuf },
    /// Hausdorff quotient of a uniformity.
    Quotient { file: PathBuf },
    /// Star of a block with respect to a covering of the space file.
    Star {
        file: PathBuf,
        /// Index of the covering (0-based, in file order).
        #[arg(long, default_value_t = 0)]
        covering: usize,
        #[arg(long)]
        block: String,
    },
    /// Nearness and ν-neighbourhood of two subsets under the derived proximity.
    Near {
        file: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Uniform continuity of a map between two spaces.
    Continuity {
        source: PathBuf,
        target: PathBuf,
        /// Assignments `x=y,...` covering every source label.
        #[arg(long)]
        map: String,
    },
    /// Precompactness with a finite witness.
    Precompact { file: PathBuf },
    /// Canonical or precompact bornology.
    Bornology {
        file: PathBuf,
        #[arg(long)]
        precompact: bool,
    },
    /// Smirnov proximity of a dense subspace (`open` and `dense` lines).
    Smirnov { file: PathBuf },
    /// Relation algebra on the entourage lines of a space file.
    #[command(subcommand)]
    Relation(RelationCmd),
    /// Towers of coverings.
    #[command(subcommand)]
    Tower(tower_cmd::TowerCmd),
    /// Uniform G-topology of a dense pair.
    #[command(subcommand)]
    Gtop(gtop_cmd::GtopCmd),
    /// Differential operators.
    #[command(subcommand)]
    Dmod(dmod_cmd::DmodCmd),
    /// Built-in acceptance corpus.
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

#[derive(Args, Debug)]
struct ConvertArgs {
    file: PathBuf,
    #[arg(long, conflicts_with = "tukey_to_weil", required_unless_present = "tukey_to_weil")]
    weil_to_tukey: bool,
    #[arg(long)]
    tukey_to_weil: bool,
}

#[derive(Args, Debug)]
struct DeriveArgs {
    file: PathBuf,
    #[arg(long, conflicts_with = "topology", required_unless_present = "topology")]
    proximity: bool,
    #[arg(long)]
    topology: bool,
}

#[derive(Subcommand, Debug)]
enum RelationCmd {
    /// First entourage, then the second.
    Compose { file: PathBuf },
    /// Inverse of the first entourage.
    Inverse { file: PathBuf },
    /// Image of a subset under the first entourage.
    Image {
        file: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// `E^n(Z)` for the first entourage.
    Iterate {
        file: PathBuf,
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(long)]
        set: String,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCmd {
    /// Run the acceptance criteria and print one line per criterion.
    Run {
        /// Cap on the size of exhaustively enumerated structures.
        #[arg(long)]
        exhaustive_size: Option<usize>,
        /// Seed for the randomized corpora.
        #[arg(long, default_value_t = crate::corpus::DEFAULT_SEED)]
        seed: u64,
        /// Run a single criterion.
        #[arg(long)]
        only: Option<usize>,
    },
}

/// Operation name → subcommand path. Each operation appears once.
pub const DISPATCH: &[(&str, &str)] = &[
    ("relation::compose", "relation compose"),
    ("relation::inverse", "relation inverse"),
    ("relation::image", "relation image"),
    ("relation::iterate", "relation iterate"),
    ("quniform::check_quniformity", "check"),
    ("quniform::is_tukey_family", "check"),
    ("topology::from_opens", "check"),
    ("quniform::weil_to_tukey", "convert"),
    ("quniform::tukey_to_weil", "convert"),
    ("quniform::proximity_from", "derive"),
    ("quniform::topology_from", "derive"),
    ("quniform::star", "star"),
    ("quniform::nu_neighborhood", "near"),
    ("quniform::pervin", "pervin"),
    ("quniform::kunzi", "kunzi"),
    ("quniform::hausdorff_quotient", "quotient"),
    ("quniform::is_uniformly_continuous", "continuity"),
    ("quniform::is_precompact", "precompact"),
    ("quniform::canonical_bornology", "bornology"),
    ("quniform::precompact_bornology", "bornology"),
    ("quniform::smirnov_proximity", "smirnov"),
    ("tower::make_tower", "tower build"),
    ("tower::enumerate_threads", "tower threads"),
    ("tower::is_uniform_covering", "tower uniform-cover"),
    ("tower::is_tukey_at_depth", "tower tukey"),
    ("tower::check_uniform_continuity", "tower continuity"),
    ("tower::bornology_at_depth", "tower bornology"),
    ("gtop::u_check", "gtop ucheck"),
    ("gtop::check_l7", "gtop l7"),
    ("gtop::uniform_g_topology", "gtop groth"),
    ("gtop::check_grothendieck", "gtop groth"),
    ("gtop::sheaf_cohomology", "gtop cohomology"),
    ("gtop::cech_cohomology", "gtop cech"),
    ("dmod::to_delta_form", "dmod delta"),
    ("dmod::newton_polygon", "dmod polygon"),
    ("dmod::irregularity", "dmod irregularity"),
    ("dmod::deligne_chi", "dmod chi"),
    ("dmod::derham_oracle", "dmod oracle"),
    ("dmod::index_report", "dmod report"),
    ("corpus::run", "corpus run"),
];

/// Whether `path` (space-separated) names a subcommand.
pub fn is_subcommand(path: &str) -> bool {
    let mut cmd = <Cli as clap::CommandFactory>::command();
    for part in path.split_whitespace() {
        match cmd.find_subcommand(part) {
            Some(c) => cmd = c.clone(),
            None => return false,
        }
    }
    true
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut out = String::new();
    let result = dispatch(cli.command, &mut out);
    match result {
        Ok(ok) => Outcome { code: if ok { 0 } else { 1 }, stdout: out, stderr: String::new() },
        Err(e) => Outcome { code: 2, stdout: out, stderr: format!("error: {e}\n") },
    }
}

fn dispatch(command: Command, out: &mut String) -> CmdResult {
    use space_cmd as s;
    match command {
        Command::Check { file } => s::check(&file, out),
        Command::Convert(a) => s::convert(&a.file, a.weil_to_tukey, out),
        Command::Derive(a) => s::derive(&a.file, a.proximity, out),
        Command::Pervin { file } => s::pervin_kunzi(&file, false, out),
        Command::Kunzi { file } => s::pervin_kunzi(&file, true, out),
        Command::Quotient { file } => s::quotient(&file, out),
        Command::Star { file, covering, block } => s::star(&file, covering, &block, out),
        Command::Near { file, a, b } => s::near(&file, &a, &b, out),
        Command::Continuity { source, target, map } => s::continuity(&source, &target, &map, out),
        Command::Precompact { file } => s::precompact(&file, out),
        Command::Bornology { file, precompact } => s::bornology(&file, precompact, out),
        Command::Smirnov { file } => s::smirnov(&file, out),
        Command::Relation(cmd) => match cmd {
            RelationCmd::Compose { file } => s::relation(&file, s::RelOp::Compose, out),
            RelationCmd::Inverse { file } => s::relation(&file, s::RelOp::Inverse, out),
            RelationCmd::Image { file, set } => s::relation(&file, s::RelOp::Image(set), out),
            RelationCmd::Iterate { file, n, set } => s::relation(&file, s::RelOp::Iterate(n, set), out),
        },
        Command::Tower(cmd) => tower_cmd::run(cmd, out),
        Command::Gtop(cmd) => gtop_cmd::run(cmd, out),
        Command::Dmod(cmd) => dmod_cmd::run(cmd, out),
        Command::Corpus(CorpusCmd::Run { exhaustive_size, seed, only }) => {
            let opts = crate::corpus::Options { exhaustive_size, seed, only };
            let results = crate::corpus::run(&opts).map_err(InputError::from)?;
            for r in &results {
                out.push_str(&r.line());
                out.push('\n');
            }
            Ok(results.iter().all(|r| r.pass))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch_table_is_consistent() {
        let mut ops: Vec<&str> = DISPATCH.iter().map(|d| d.0).collect();
        ops.sort_unstable();
        ops.dedup();
        assert_eq!(ops.len(), DISPATCH.len(), "an operation is listed twice");
        for (op, path) in DISPATCH {
            assert!(is_subcommand(path), "{op} → {path}");
        }
        assert!(!is_subcommand("tower frobnicate"));
    }

    #[test]
    fn parse_sets() {
        let b = FiniteSet::new(["a", "b", "c"]).unwrap();
        assert_eq!(parse_set(&b, "{a,c}").unwrap().ones().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(parse_set(&b, " b ").unwrap().ones().collect::<Vec<_>>(), vec![1]);
        assert!(parse_set(&b, "").unwrap().is_clear());
        assert!(parse_set(&b, "d").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let o = run(["unisheaf", "check"]);
        assert_eq!(o.code, 2);
        let o = run(["unisheaf", "dmod", "chi", "x.op", "--bogus"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("--bogus"));
        assert_eq!(run(["unisheaf", "--help"]).code, 0);
    }
}
