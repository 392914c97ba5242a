use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::Failure;

/// Finite computations around quasi-Boolean pro-2 groups.
///
/// Every command writes one JSON document. Exit status is 0 on success
/// (including obstructed or unmatched verdicts), 1 on a domain error and 2 on
/// malformed input; errors are reported as JSON on stderr.
#[derive(Parser, Debug)]
#[command(name = "quasibool", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Top cohomological degree.
    #[arg(long, global = true, default_value_t = 3)]
    pub nmax: usize,
    /// Exponent bound for kernel nilpotency.
    #[arg(long, global = true, default_value_t = 4)]
    pub nilbound: usize,
    /// Bound `k` on the `2^k`-th powers used for surjectivity.
    #[arg(long, global = true, default_value_t = 2)]
    pub powbound: usize,
    /// Number of tower stages.
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for independent subtasks; output order is unaffected.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

pub const MAX_NMAX: usize = 8;
pub const MAX_DEPTH: usize = 7;
pub const MAX_NILBOUND: usize = 16;
pub const MAX_POWBOUND: usize = 4;
pub const MAX_JOBS: usize = 64;

impl Opts {
    fn validate(&self) -> Result<(), Failure> {
        let checks = [
            ("nmax", self.nmax, 0, MAX_NMAX),
            ("depth", self.depth, 1, MAX_DEPTH),
            ("nilbound", self.nilbound, 1, MAX_NILBOUND),
            ("powbound", self.powbound, 0, MAX_POWBOUND),
            ("jobs", self.jobs, 1, MAX_JOBS),
        ];
        for (name, value, lo, hi) in checks {
            if value < lo || value > hi {
                return Err(Failure::validation("option", format!("--{name} = {value} is outside {lo}..={hi}")));
            }
        }
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Boolean rings and finite spaces.
    #[command(subcommand)]
    Stone(StoneCmd),
    /// Finite principal bundles.
    #[command(subcommand)]
    Bundle(BundleCmd),
    /// Table groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Words in free products of copies of Z and Z/2.
    #[command(subcommand)]
    Word(WordCmd),
    /// Mod-2 group cohomology.
    #[command(subcommand)]
    Coh(CohCmd),
    /// Embedding problems.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Connected-sum algebras and presentations.
    #[command(subcommand)]
    Reconstruct(ReconstructCmd),
}

#[derive(Subcommand, Debug)]
pub enum StoneCmd {
    Atoms { ring: PathBuf },
    Spec { ring: PathBuf },
    /// σ and β checks; β is checked on `--space` or on the spectrum of the ring.
    Dual {
        ring: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
    },
    Complete { space: PathBuf },
    /// Refines a clopen cover given as a JSON list of point lists.
    Refine { space: PathBuf, cover: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum BundleCmd {
    Section { bundle: PathBuf },
    Quotient {
        bundle: PathBuf,
        /// Elements of a normal subgroup, comma separated.
        #[arg(long, value_delimiter = ',')]
        normal: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    Info { group: PathBuf },
    Quotient {
        group: PathBuf,
        #[arg(long, value_delimiter = ',')]
        normal: Vec<usize>,
    },
    /// Sylow 2-subgroup of the source of a hom onto a 2-group, with a
    /// conjugate of `--element` inside it.
    Sylow {
        hom: PathBuf,
        #[arg(long)]
        element: Option<usize>,
    },
    /// Writes a named group, e.g. `D8`, `Q8`, `Z4xZ2`, `F2^3`, `Pauli`.
    Builtin { name: String },
}

#[derive(Subcommand, Debug)]
pub enum WordCmd {
    Normalize { presentation: PathBuf, word: String },
    Eval {
        presentation: PathBuf,
        group: PathBuf,
        images: PathBuf,
        word: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum CohCmd {
    /// Dimensions of `Hⁿ` and ranks of the free resolution.
    Basis { group: PathBuf },
    /// The cup-product snapshot up to `--nmax`.
    Cup { group: PathBuf },
    /// Matrices of the map induced by a hom, from target to source cohomology.
    Restrict { hom: PathBuf },
    /// Bounded F-isomorphism report, in `--degree` or every degree up to `--nmax`.
    Quillen {
        group: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Involution profiles of one class (`--class` as 0/1 coordinates) or of every class.
    Profile {
        group: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        class: Option<String>,
    },
    /// Stable inflation along the quotient tower of a presentation.
    Tower { presentation: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum EmbedCmd {
    Classify { problem: PathBuf },
    Reduce { problem: PathBuf },
    Obstruct { problem: PathBuf },
    /// Uses the lifting data of the file when present.
    Solve { problem: PathBuf },
    /// Writes the problem back with canonical lifting data.
    Liftdata { problem: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum ReconstructCmd {
    Decompose { snapshot: PathBuf },
    Classify { snapshot: PathBuf },
    Run {
        snapshot: PathBuf,
        /// Also compare with the tower of the presentation at this depth.
        #[arg(long)]
        verify_depth: Option<usize>,
    },
    /// Build, scramble with `--seed`, decompose and rebuild.
    Roundtrip {
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        dimb: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let f = Failure::validation("usage", e.to_string().trim_end().to_string());
            eprintln!("{}", serde_json::to_string_pretty(&f.to_json()).expect("JSON values serialize"));
            return ExitCode::from(f.exit_code());
        }
        Err(e) => e.exit(),
    };
    let result = cli.opts.validate().and_then(|()| commands::run(&cli.command, &cli.opts));
    let text = match result {
        Ok(value) => serde_json::to_string_pretty(&value).expect("JSON values serialize"),
        Err(f) => {
            eprintln!("{}", serde_json::to_string_pretty(&f.to_json()).expect("JSON values serialize"));
            return ExitCode::from(f.exit_code());
        }
    };
    match &cli.opts.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                let f = Failure::domain("io", format!("cannot write {}: {e}", path.display()));
                eprintln!("{}", f.to_json());
                return ExitCode::from(f.exit_code());
            }
        }
        None => {
            // a closed pipe downstream is not an error of ours
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{text}").and_then(|()| out.flush());
        }
    }
    ExitCode::SUCCESS
}
