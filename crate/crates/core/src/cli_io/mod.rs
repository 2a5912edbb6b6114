//! Problem files, certificates and the `gform` command surface.

mod certificate;
mod commands;
mod format;
mod problem;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use certificate::{
    Certificate, CertificateKind, CriterionParams, CriterionPayload, GaugePayload, IsotopyPayload, ObstructionPayload,
    TOOL_VERSION,
};
pub use commands::verify_certificate;
pub use format::{
    entries_to_map, entries_to_tensor, map_to_entries, nums_to_scalar, scalar_to_nums, tensor_to_entries, to_json_text,
    ElementJson,
    Entry, Num,
};
pub use problem::{
    canonical_hash, load, parse_problem, parse_problem_str, ContractionSpec, CooperadSpec, FieldSpec, InlineCooperad,
    ParsedProblem, Problem, ProblemFile, AS_KOSZUL,
};

/// Primes with a compiled field implementation.
pub const SUPPORTED_PRIMES: &[u64] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 97, 101, 997, 65521];

/// Environment variable consulted for the weight cap when neither flag nor file sets one.
pub const WEIGHT_CAP_ENV: &str = "GFORM_WEIGHT_CAP";

#[derive(Debug, Parser)]
#[command(name = "gform", version, about = "Obstruction classes and gauge formality of A-infinity and Ω𝒞-algebra structures")]
pub struct Cli {
    /// Q or Fp:<p>.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Weight cap of the truncated cooperad.
    #[arg(long, global = true)]
    pub weight_cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionKind {
    Purity,
    AutLift,
    Spectrum,
    Intrinsic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks the Maurer-Cartan equation of the input structure.
    CheckMc { file: PathBuf },
    /// Prints the transferred structure on homology as a problem file.
    Transfer {
        file: PathBuf,
        /// Contraction file with `homology_degrees`, `i`, `p`, `h`.
        #[arg(long)]
        contraction: Option<PathBuf>,
    },
    /// Truncated obstruction class of the transferred structure.
    Class {
        file: PathBuf,
        #[arg(long)]
        truncation: usize,
    },
    /// Decides gauge n-formality, or full formality with --full.
    Formality {
        file: PathBuf,
        #[arg(long, required_unless_present = "full")]
        truncation: Option<usize>,
        #[arg(long)]
        full: bool,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Builds an ∞-isotopy killing weights 2..=n+1.
    Trivialize {
        file: PathBuf,
        #[arg(long)]
        truncation: usize,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Sufficient criteria on homology.
    Criteria {
        #[arg(value_enum)]
        kind: CriterionKind,
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        truncation: usize,
        /// Unit α of the grading automorphism.
        #[arg(long, default_value = "2")]
        alpha: String,
        /// Non-zero rational ϑ, as `p` or `p/q`.
        #[arg(long, default_value = "1")]
        theta: String,
        /// JSON list of `[row, col, num, den]` for u on homology; defaults to the problem's `automorphism`.
        #[arg(long)]
        automorphism: Option<PathBuf>,
        /// Also run the obstruction decider.
        #[arg(long)]
        cross_check: bool,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Re-checks a certificate against its problem file.
    Verify { problem: PathBuf, cert: PathBuf },
}

/// Exit code with what goes to stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub(crate) fn new(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn error(msg: String) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: msg }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Outcome::new(0, text) } else { Outcome::error(text) };
        }
    };
    match commands::run(&cli) {
        Ok(o) => o,
        Err(e) => Outcome::error(format!("error: {e}\n")),
    }
}
