use std::process::ExitCode;

use artin_tcp::GroupParams;
use artin_tcp_cli::bench::{bench, default_grid, BenchOp};
use artin_tcp_cli::selftest::selftest;
use artin_tcp_cli::{
    cp_query, eq_query, nf_query, orbit_query, tcp_phi_query, tcp_query, translate_query, CliError, QueryResult,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "artin-tcp", version, about = "Twisted conjugacy in odd dihedral Artin groups <x, y | x^2 = y^m>")]
struct Cli {
    /// Odd m >= 3.
    #[arg(long, global = true, default_value_t = 3, allow_negative_numbers = true)]
    m: i64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print (and re-verify) witnesses.
    #[arg(long, global = true)]
    witness: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geodesic, Garside and central normal forms.
    Nf { word: String },
    /// Word problem.
    Eq { u: String, v: String },
    /// Conjugacy problem.
    Cp { u: String, v: String },
    /// Twisted conjugacy for φ: x ↦ x⁻¹, y ↦ y⁻¹.
    TcpPhi { u: String, v: String },
    /// Twisted conjugacy for an automorphism given as "IMX;IMY".
    Tcp {
        u: String,
        v: String,
        #[arg(long)]
        auto: String,
    },
    /// Orbit problem for the subgroup generated by the given automorphisms.
    Orbit {
        u: String,
        v: String,
        #[arg(long = "auto", required = true)]
        autos: Vec<String>,
    },
    /// Rewrites a word over a, b (A, B inverses) into x, y.
    Translate { word: String },
    /// Oracle agreement report.
    Selftest {
        #[arg(long, default_value_t = 6)]
        ball: u32,
        #[arg(long = "witness-len", default_value_t = 8)]
        witness_len: u32,
        #[arg(long, default_value_t = 3)]
        pairs: u32,
    },
    /// Doubling-ratio timings.
    Bench {
        #[arg(long, default_value = "nf")]
        op: BenchOp,
        /// Comma-separated lengths; defaults to 15625..1000000 by doubling.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

fn emit(result: &QueryResult, json: bool) {
    if json {
        println!("{}", serde_json::to_string(result).expect("query results serialize"));
    } else {
        println!("{}", result.to_text());
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let p = GroupParams::new(cli.m)?;
    let w = cli.witness;
    let result = match cli.command {
        Command::Nf { word } => nf_query(&word, p)?,
        Command::Eq { u, v } => eq_query(&u, &v, p)?,
        Command::Cp { u, v } => cp_query(&u, &v, p, w)?,
        Command::TcpPhi { u, v } => tcp_phi_query(&u, &v, p, w)?,
        Command::Tcp { u, v, auto } => tcp_query(&u, &v, &auto, p, w)?,
        Command::Orbit { u, v, autos } => orbit_query(&u, &v, &autos, p, w)?,
        Command::Translate { word } => translate_query(&word, p)?,
        Command::Selftest { ball, witness_len, pairs } => {
            let report = selftest(p, ball, witness_len, pairs);
            if cli.json {
                println!("{}", serde_json::to_string(&report).expect("reports serialize"));
            } else {
                println!("{report}");
            }
            return Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::Bench { op, grid, seed, reps } => {
            let grid = if grid.is_empty() { default_grid() } else { grid };
            let report = bench(op, &grid, p, seed, reps);
            if cli.json {
                println!("{}", serde_json::to_string(&report).expect("reports serialize"));
            } else {
                println!("{report}");
            }
            return Ok(ExitCode::SUCCESS);
        }
    };
    emit(&result, cli.json);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // The core asserts its own witnesses; a failed assertion is a verification failure.
    let outcome = std::panic::catch_unwind(|| run(cli));
    match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(4),
    }
}
