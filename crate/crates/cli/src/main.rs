mod bench;
mod generate;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tnf_core::error::TnfError;
use tnf_core::linalg::RankPolicy;
use tnf_core::polyring::{parse_system, BasisKind};
use tnf_core::rootfind::CokernelMethod;
use tnf_core::solver::{solve, BasisSelect, ColumnMode, PathChoice, SolveConfig};

#[derive(Parser)]
#[command(name = "tnf", version, about = "Solve zero-dimensional polynomial systems with truncated normal forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Generic,
    Nongeneric,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum CokernelArg {
    Direct,
    Dbd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColumnsArg {
    Full,
    Fm,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisSelectArg {
    Qr,
    Svd,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum BasisArg {
    Monomial,
    Chebyshev,
}

impl From<BasisArg> for BasisKind {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Monomial => BasisKind::Monomial,
            BasisArg::Chebyshev => BasisKind::Chebyshev,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum GenKind {
    Random,
    Synthetic,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the system in a JSON file and print the roots as JSON.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        path: PathArg,
        #[arg(long, value_enum, default_value = "direct")]
        cokernel: CokernelArg,
        #[arg(long, value_enum, default_value = "full")]
        columns: ColumnsArg,
        #[arg(long = "basis-select", value_enum, default_value = "qr")]
        basis_select: BasisSelectArg,
        /// Degree of W' for the non-generic path; searched automatically if omitted.
        #[arg(long)]
        rho: Option<usize>,
        #[arg(long, env = "TNF_SEED", default_value_t = 0)]
        seed: u64,
        /// Polish every root with up to three Newton steps.
        #[arg(long)]
        refine: bool,
        /// Relative singular value threshold for rank decisions.
        #[arg(long = "tol-rank")]
        tol_rank: Option<f64>,
        /// Residual above which pencil candidates are discarded.
        #[arg(long = "tol-filter", default_value_t = 1e-4)]
        tol_filter: f64,
        /// Number of roots expected on the generic path (default: Bezout number).
        #[arg(long)]
        delta: Option<usize>,
        /// Solve in random orthogonal coordinates.
        #[arg(long = "random-coords")]
        random_coords: bool,
        /// Record stage timings in the output.
        #[arg(long)]
        timings: bool,
        /// Write the resultant matrix as row-major little-endian complex128.
        #[arg(long = "dump-resultant")]
        dump_resultant: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a test system (and, for synthetic systems, its roots).
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, env = "TNF_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "monomial")]
        basis: BasisArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the known roots of a synthetic system.
        #[arg(long = "roots-out")]
        roots_out: Option<PathBuf>,
    },
    /// Time solver variants over a grid of (n, d) and print CSV.
    Bench {
        /// Grid such as "2:5-15,3:2-4" (n:d or n:dmin-dmax, comma separated).
        #[arg(long, default_value = "")]
        grid: String,
        /// Comma separated subset of tnf, fm, dbd.
        #[arg(long, default_value = "tnf,fm,dbd")]
        variants: String,
        #[arg(long, env = "TNF_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Process exit code for a solver error.
fn exit_code(e: &TnfError) -> u8 {
    match e {
        TnfError::RankAmbiguous { .. } => 2,
        e if e.is_condition_violation() => 3,
        _ => 1,
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), TnfError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{}", text),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), TnfError> {
    match cli.command {
        Command::Solve {
            input,
            path,
            cokernel,
            columns,
            basis_select,
            rho,
            seed,
            refine,
            tol_rank,
            tol_filter,
            delta,
            random_coords,
            timings,
            dump_resultant,
            out,
        } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| TnfError::Parse(format!("{}: {}", input.display(), e)))?;
            let system = parse_system(&text)?;
            let config = SolveConfig {
                path: match path {
                    PathArg::Generic => PathChoice::Generic,
                    PathArg::Nongeneric => PathChoice::Nongeneric,
                    PathArg::Auto => PathChoice::Auto,
                },
                cokernel: match cokernel {
                    CokernelArg::Direct => CokernelMethod::Direct,
                    CokernelArg::Dbd => CokernelMethod::Dbd,
                },
                columns: match columns {
                    ColumnsArg::Full => ColumnMode::Full,
                    ColumnsArg::Fm => ColumnMode::Fm,
                },
                basis_select: match basis_select {
                    BasisSelectArg::Qr => BasisSelect::Qr,
                    BasisSelectArg::Svd => BasisSelect::Svd,
                },
                rho,
                seed,
                refine,
                policy: RankPolicy {
                    relative: tol_rank,
                    ..RankPolicy::default()
                },
                filter_residual: tol_filter,
                delta,
                random_coordinates: random_coords,
                max_basis_dim: None,
                keep_resultant: dump_resultant.is_some(),
            };
            let solution = solve(&system, &config)?;
            for w in &solution.meta.warnings {
                eprintln!("warning: {}", w);
            }
            if let (Some(p), Some(m)) = (&dump_resultant, &solution.resultant) {
                std::fs::write(p, report::row_major_bytes(m))?;
            }
            let json = report::solution_json(&solution, timings);
            write_output(&out, &json)
        }
        Command::Gen {
            kind,
            n,
            d,
            seed,
            basis,
            out,
            roots_out,
        } => {
            let (system_json, roots_json) = generate::generate(kind, n, d, seed, basis.into())?;
            write_output(&out, &system_json)?;
            match (roots_json, roots_out) {
                (Some(r), Some(p)) => std::fs::write(p, r)?,
                (None, Some(_)) => {
                    return Err(TnfError::InvalidInput(
                        "only synthetic systems have known roots".into(),
                    ))
                }
                _ => {}
            }
            Ok(())
        }
        Command::Bench {
            grid,
            variants,
            seed,
            out,
        } => {
            let cells = bench::parse_grid(&grid)?;
            let variants = bench::parse_variants(&variants)?;
            let csv = bench::run(&cells, &variants, seed)?;
            write_output(&out, &csv)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code(&e))
        }
    }
}
