use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::CliError;

#[derive(Parser, Debug)]
#[command(name = "pzk", version, about = "Constraint detectors, zero-knowledge protocols and their audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Constraint basis of the partial-sum Reed-Muller code on a query set.
    DetectSrm(DetectSrmArgs),
    /// Constraint basis of a Reed-Solomon code with its proximity proof.
    DetectBsrs(DetectBsrsArgs),
    /// Zero-knowledge sumcheck.
    Sumcheck(SumcheckArgs),
    /// Zero-knowledge proof of a #3SAT count.
    Sharp3sat(Sharp3satArgs),
    /// Masked Reed-Solomon proximity proof.
    #[command(alias = "mask-rs")]
    Mask(MaskArgs),
    /// Randomizable linear-algebraic CSP on the toy Reed-Solomon family.
    Lacsp(LacspArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Honest,
    Cheat,
    Simulate,
    #[value(name = "audit-exact")]
    AuditExact,
    #[value(name = "audit-chi2")]
    AuditChi2,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Honest => "honest",
            Mode::Cheat => "cheat",
            Mode::Simulate => "simulate",
            Mode::AuditExact => "audit-exact",
            Mode::AuditChi2 => "audit-chi2",
        }
    }
}

/// Flags shared by the protocol commands.
#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "honest")]
    pub mode: Mode,
    /// Verifier: `honest` or the name of a malicious strategy.
    #[arg(long, default_value = "honest")]
    pub verifier: String,
    /// Seed for every randomized mode.
    #[arg(long, env = "PZK_SEED")]
    pub seed: Option<u64>,
    /// Number of seeded runs (defaults: 1 for honest, 2000 for cheat).
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0.001)]
    pub alpha: f64,
    /// Path cap of the exact audit.
    #[arg(long, default_value_t = 4_000_000)]
    pub max_paths: u64,
    /// Worker threads for sweeps and chi-square audits.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// JSON report path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV path for the sweep row of honest and cheat runs.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

impl RunArgs {
    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| CliError::Usage(format!("--seed or PZK_SEED is required in {} mode", self.mode.name())))
    }

    pub fn trials(&self) -> u64 {
        self.trials.unwrap_or(if self.mode == Mode::Cheat { 2000 } else { 1 })
    }

    pub fn honest_verifier(&self) -> bool {
        self.verifier == "honest"
    }
}

/// Passes of the honest zero-knowledge sumcheck verifier.
#[derive(Args, Debug, Clone, Copy)]
pub struct VerifierReps {
    /// Lines read by the individual-degree test.
    #[arg(long)]
    pub ldt_reps: Option<usize>,
    /// Self-correction attempts at the final point.
    #[arg(long)]
    pub sc_trials: Option<usize>,
}

#[derive(Args, Debug)]
pub struct DetectSrmArgs {
    /// Field: a prime `q` or `2^e`.
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long = "H", value_delimiter = ',', default_value = "0,1")]
    pub h: Vec<String>,
    /// JSON array of query points, each an array of at most `m` elements.
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DetectBsrsArgs {
    /// Extension degree of the binary field.
    #[arg(long, default_value_t = 4)]
    pub e: u32,
    #[arg(long = "dimL")]
    pub dim_l: usize,
    #[arg(long, default_value_t = 1)]
    pub mu: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// JSON array of positions in the concatenated word.
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SumcheckArgs {
    /// `F = 1 + 2X` over F_5 with `H = {0, 1}`.
    #[arg(long, conflicts_with_all = ["instance", "field"])]
    pub micro: bool,
    /// Instance JSON `{field, m, d, H, v, poly: {terms: [{exp, coeff}]}}`.
    #[arg(long, conflicts_with = "field")]
    pub instance: Option<PathBuf>,
    /// Prime field of a random instance.
    #[arg(long)]
    pub field: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Seed of the random instance polynomial.
    #[arg(long, default_value_t = 0)]
    pub poly_seed: u64,
    /// Claimed sum (defaults to the true sum, or the true sum plus one in
    /// cheat mode).
    #[arg(long)]
    pub claim: Option<u64>,
    #[command(flatten)]
    pub reps: VerifierReps,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct Sharp3satArgs {
    /// DIMACS file.
    #[arg(long, conflicts_with = "random_n")]
    pub cnf: Option<PathBuf>,
    /// Number of variables of a random formula.
    #[arg(long, requires = "random_c")]
    pub random_n: Option<usize>,
    /// Number of clauses of a random formula.
    #[arg(long)]
    pub random_c: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub formula_seed: u64,
    /// Claimed number of satisfying assignments (defaults to the true count,
    /// or an off-by-one count in cheat mode).
    #[arg(long)]
    pub count: Option<u64>,
    /// Skip the `3cn/q < 1/2` check, for exact audits on tiny formulas.
    #[arg(long)]
    pub unchecked: bool,
    #[command(flatten)]
    pub reps: VerifierReps,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct MaskArgs {
    #[arg(long, default_value_t = 4)]
    pub e: u32,
    #[arg(long = "dimL", default_value_t = 3)]
    pub dim_l: usize,
    #[arg(long, default_value_t = 2)]
    pub mu: usize,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// Passes of the row/column test.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Fraction of corrupted positions of the word in cheat mode.
    #[arg(long, default_value_t = 0.375)]
    pub delta: f64,
    /// Seed of the random codeword used as input.
    #[arg(long, default_value_t = 0)]
    pub word_seed: u64,
    /// JSON array with the input word.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct LacspArgs {
    /// The `F_5`, `l = 4`, `d = 2` instance.
    #[arg(long)]
    pub micro: bool,
    #[arg(long, default_value_t = 17)]
    pub field: u64,
    #[arg(long, default_value_t = 16)]
    pub ell: usize,
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    /// Interpolation-tester passes per component.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Fraction of corrupted positions of `w0` in cheat mode.
    #[arg(long, default_value_t = 0.125)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub word_seed: u64,
    /// JSON array with `w0`.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
}
