mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use genpi_core::algebra::Builtin;
use genpi_core::codim::Budget;
use genpi_core::waction::Preset;
use genpi_core::Error;

/// Exact computations with W-algebras, generalized identities and
/// generalized codimensions.
#[derive(Parser, Debug)]
#[command(name = "genpi", version)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Row limit for evaluation matrices (default: GENPI_MAX_ROWS or 2000000).
    #[arg(long, global = true, value_parser = positive_u128)]
    max_rows: Option<u128>,
    /// Largest degree accepted by codim commands.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    max_degree: u32,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Inspect and validate algebras.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Multiplier algebra M(A).
    #[command(subcommand)]
    Multiplier(MultiplierCmd),
    /// Radical, Wedderburn-Malcev decomposition and PI-exponent.
    #[command(subcommand)]
    Structure(StructureCmd),
    /// W-actions given by presets or action files.
    #[command(subcommand)]
    Action(ActionCmd),
    /// Generalized polynomials.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Generalized codimensions and identities.
    #[command(subcommand)]
    Codim(CodimCmd),
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Dimension, basis, unit and basic invariants.
    Info { algebra: AlgebraArg },
    /// Load the algebra and check associativity and the claimed unit.
    Validate { algebra: AlgebraArg },
}

#[derive(Subcommand, Debug)]
enum MultiplierCmd {
    /// Compute M(A), the map μ and permutability.
    Compute { algebra: AlgebraArg },
}

#[derive(Subcommand, Debug)]
enum StructureCmd {
    /// Jacobson radical and its powers.
    Radical { algebra: AlgebraArg },
    /// Wedderburn-Malcev decomposition A = B + J.
    Wm { algebra: AlgebraArg },
    /// PI-exponent from the block structure.
    Exponent { algebra: AlgebraArg },
}

#[derive(Subcommand, Debug)]
enum ActionCmd {
    /// Validate an action and report its invariants.
    Validate { action: ActionArg },
    /// Semidirect product of the image of W with A.
    Semidirect { action: ActionArg },
    /// Action of the semisimple part of the image of W.
    SsPart { action: ActionArg },
}

#[derive(Subcommand, Debug)]
enum PolyCmd {
    /// Decide whether a generalized polynomial is an identity.
    Check { action: ActionArg, polynomial: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Inner,
    Strict,
}

#[derive(Subcommand, Debug)]
enum CodimCmd {
    /// Generalized codimension c_n.
    Compute {
        action: ActionArg,
        #[arg(short, long)]
        n: usize,
    },
    /// Basis of the multilinear identities of degree n.
    Kernel {
        action: ActionArg,
        #[arg(short, long)]
        n: usize,
    },
    /// Check that the generators produce every multilinear identity of degree ≤ n.
    VerifyGens {
        action: ActionArg,
        #[arg(short, long)]
        n: usize,
        /// Generator (repeatable).
        #[arg(short, long = "gen", required = true)]
        generators: Vec<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Inner)]
        mode: ModeArg,
    },
    /// Whether every identity of A (degree ≤ n) is an identity of B.
    Contains {
        a: ActionArg,
        b: ActionArg,
        #[arg(short, long)]
        n: usize,
    },
    /// Codimension of the E^(k) action, stabilized in the truncation.
    Grassmann {
        #[arg(short, long)]
        k: usize,
        #[arg(short, long)]
        n: usize,
    },
    /// Codimensions for n = 1..max with ratios and n-th roots.
    Growth {
        action: ActionArg,
        #[arg(long)]
        max: usize,
    },
}

/// A builtin algebra name or a JSON file.
#[derive(Clone, Debug)]
pub enum AlgebraArg {
    Name(String),
    Path(PathBuf),
}

impl FromStr for AlgebraArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.ends_with(".json") || std::path::Path::new(s).is_file() {
            return Ok(AlgebraArg::Path(s.into()));
        }
        Builtin::from_str(s).map(|_| AlgebraArg::Name(s.into())).map_err(|e| e.to_string())
    }
}

/// A preset name or an action JSON file.
#[derive(Clone, Debug)]
pub enum ActionArg {
    Preset(String),
    Path(PathBuf),
}

impl FromStr for ActionArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.ends_with(".json") || std::path::Path::new(s).is_file() {
            return Ok(ActionArg::Path(s.into()));
        }
        Preset::from_str(s).map(|_| ActionArg::Preset(s.into())).map_err(|e| e.to_string())
    }
}

fn positive_u128(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err("expected a positive integer".into()),
    }
}

pub struct Config {
    pub budget: Budget,
    pub max_degree: usize,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DimensionMismatch { .. } => "DimensionMismatch",
        Error::NotAssociative(..) => "NotAssociative",
        Error::BadUnit(_) => "BadUnit",
        Error::UnsupportedName(_) => "UnsupportedName",
        Error::ParentMismatch => "ParentMismatch",
        Error::NotMultiplier { .. } => "NotMultiplier",
        Error::NotHomomorphism(..) => "NotHomomorphism",
        Error::NotPermutable(..) => "NotPermutable",
        Error::UnitMismatch => "UnitMismatch",
        Error::NotClosed(_) => "NotClosed",
        Error::NotSplit(_) => "NotSplit",
        Error::Parse { .. } => "Parse",
        Error::UnknownCoefficient(_) => "UnknownCoefficient",
        Error::UnassignedVariable(_) => "UnassignedVariable",
        Error::BudgetExceeded { .. } => "BudgetExceeded",
        Error::BasisMismatch(_) => "BasisMismatch",
        Error::Invalid(_) => "Invalid",
        Error::Internal(_) => "Internal",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = Config {
        budget: cli.max_rows.map(|r| Budget { max_rows: r }).unwrap_or_else(Budget::from_env),
        max_degree: cli.max_degree as usize,
    };
    let (name, result) = commands::run(&cli.cmd, &config);
    match result {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            match report.verdict {
                Some(false) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            if cli.json {
                let v = serde_json::json!({
                    "command": name,
                    "error": { "kind": error_kind(&e), "message": e.to_string() },
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("valid JSON"));
            } else {
                eprintln!("error: {e}");
            }
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
