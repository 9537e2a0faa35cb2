use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "abelaut",
    version,
    about = "Finite p-groups whose automorphisms are all central"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for GL(n, p) searches (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Upper bound on |GL(n, p)| for a single search.
    #[arg(long, global = true, env = "ABELAUT_BUDGET", hide_env_values = true)]
    gl_budget: Option<u128>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trivial automorphism triples.
    #[command(subcommand)]
    Tat(TatCommand),
    /// Build and analyze groups.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Automorphism certificates.
    #[command(subcommand)]
    Aut(AutCommand),
    /// Build all four groups from one triple and check every expected property.
    PaperCheck(CheckArgs),
}

#[derive(Subcommand, Debug)]
enum TatCommand {
    /// Random search for a triple.
    Search(SearchArgs),
    /// Check conditions (1)-(4) for a triple file.
    Verify(InputArgs),
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    /// Build a group from a triple file.
    Build(BuildArgs),
    /// Report subgroup orders and lattice relations of a group file.
    Analyze(InputArgs),
}

#[derive(Subcommand, Debug)]
enum AutCommand {
    /// Certify Aut(G) = Aut_c(G) and determine its structure.
    Verify(InputArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub k_dim: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Number of candidates whose centralizer is computed.
    #[arg(long, default_value_t = 500)]
    pub budget: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BuildArgs {
    /// Triple file.
    #[arg(long)]
    pub input: PathBuf,
    /// special, zurek, central_product or extension.
    #[arg(long)]
    pub construction: String,
    /// Height of y in the extension.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 3)]
    pub p: u32,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub k_dim: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub budget: u32,
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    /// Use this triple instead of searching.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Context::new(cli.format, cli.workers, cli.gl_budget);
    let result = match cli.command {
        Command::Tat(TatCommand::Search(a)) => commands::tat_search(&ctx, &a),
        Command::Tat(TatCommand::Verify(a)) => commands::tat_verify(&ctx, &a),
        Command::Group(GroupCommand::Build(a)) => commands::group_build(&ctx, &a),
        Command::Group(GroupCommand::Analyze(a)) => commands::group_analyze(&ctx, &a),
        Command::Aut(AutCommand::Verify(a)) => commands::aut_verify(&ctx, &a),
        Command::PaperCheck(a) => commands::check_all(&ctx, &a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("abelaut: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
