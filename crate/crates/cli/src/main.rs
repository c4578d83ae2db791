mod commands;
mod input;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sheafbn::exactalg::RingSpec;

/// Local systems, quasicoherators and asphericity on finite simplicial complexes.
#[derive(Parser, Debug)]
#[command(name = "sheafbn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simplicial homology in every degree.
    Homology(Common),
    /// Edge-path presentation of the fundamental group at vertex 0.
    Pi1(Common),
    /// Universal cover (needs a finite group).
    Cover(Common),
    /// Cohomology of a cellular sheaf (constant unless --sheaf/--rep).
    SheafCohomology(SheafCmd),
    /// Twisted cohomology H^i(X, L_rho) of a representation.
    RepCohomology(RepCmd),
    /// Group cohomology H^i(pi_1, E), bar resolution or Fox calculus.
    GroupCohomology(RepCmd),
    /// R^i Qc of a sheaf with the deck action where available.
    Qc(SheafCmd),
    /// Asphericity verdict.
    Aspherical(Common),
    /// Combined report on the three equivalent conditions.
    BnCheck(BnCmd),
    /// E_2 page H^p(G, H^q(universal cover)) with per-degree checks.
    E2Page(E2Cmd),
}

#[derive(Args, Debug)]
pub struct Common {
    /// Complex file: {"vertices": n, "maximal_simplices": [[...], ...]}.
    #[arg(long, group = "space", required = true)]
    pub complex: Option<std::path::PathBuf>,
    /// A shipped complex: circle, sphere, rp2, torus, wedge, cylinder, cone, point.
    #[arg(long, group = "space")]
    pub fixture: Option<String>,
    /// Z, Q or Z/p.
    #[arg(long, default_value = "Z")]
    pub ring: RingSpec,
    /// Coset budget for enumerations.
    #[arg(long, env = "SHEAFBN_BUDGET", default_value_t = sheafbn::bncheck::DEFAULT_BUDGET)]
    pub budget: usize,
    /// Cap on cochain-group ranks in the bar resolution.
    #[arg(long, env = "SHEAFBN_SIZE_CAP", default_value_t = sheafbn::groupcoh::DEFAULT_SIZE_CAP)]
    pub size_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SheafCmd {
    #[command(flatten)]
    pub common: Common,
    /// Cellular sheaf file.
    #[arg(long, conflicts_with = "rep")]
    pub sheaf: Option<std::path::PathBuf>,
    /// Representation file; its local system is used.
    #[arg(long)]
    pub rep: Option<std::path::PathBuf>,
    /// Rank of the constant sheaf used otherwise.
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
    /// A single degree instead of all.
    #[arg(long)]
    pub degree: Option<i64>,
}

#[derive(Args, Debug)]
pub struct RepCmd {
    #[command(flatten)]
    pub common: Common,
    /// Representation file; the trivial rank-1 representation otherwise.
    #[arg(long)]
    pub rep: Option<std::path::PathBuf>,
    /// A single degree instead of 0..=max-degree.
    #[arg(long)]
    pub degree: Option<i64>,
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
}

#[derive(Args, Debug)]
pub struct BnCmd {
    #[command(flatten)]
    pub common: Common,
    /// Sample representation, `ID=PATH` or `PATH` (repeatable). Defaults
    /// to the trivial rank-1 representation.
    #[arg(long)]
    pub rep: Vec<String>,
    /// Sample locally constant sheaf, `ID=PATH` or `PATH` (repeatable).
    #[arg(long)]
    pub sheaf: Vec<String>,
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
}

#[derive(Args, Debug)]
pub struct E2Cmd {
    #[command(flatten)]
    pub sheaf: SheafCmd,
    #[arg(long, default_value_t = 2)]
    pub pmax: usize,
    #[arg(long, default_value_t = 2)]
    pub qmax: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub mod exit {
    pub const USAGE: u8 = 1;
    pub const INCONSISTENT: u8 = 2;
    pub const INPUT: u8 = 3;
    pub const BUDGET: u8 = 4;
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli.command) {
        Ok(out) => {
            println!("{}", out.body);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("sheafbn: {e}");
            ExitCode::from(e.code())
        }
    }
}
