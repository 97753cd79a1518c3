// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


//! `wmatch`: solve, generate, verify and benchmark weighted perfect
//! matchings.

mod bench;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wmatch_core::generate::Family;
use wmatch_core::SolveError;

#[derive(Parser, Debug)]
#[command(name = "wmatch", version, about = "Exact maximum-weight perfect matching")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a DIMACS instance.
    Solve(SolveArgs),
    /// Write a generated instance in DIMACS format.
    Gen(GenArgs),
    /// Brute-force optimum for small instances.
    Oracle {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check a certificate against its graph.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Time the solvers over a suite and append CSV rows.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Liquidationist,
    Hybrid,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Liquidationist => "liquidationist",
            Algo::Hybrid => "hybrid",
        }
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value = "hybrid")]
    pub algo: Algo,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub tau: Option<usize>,
    /// Verify certificates at every scale boundary.
    #[arg(long)]
    pub check_invariants: bool,
    /// Print the search event trace to stderr.
    #[arg(long)]
    pub trace: bool,
    /// Write the run report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write the final dual certificate as JSON.
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, default_value = "random-gnm")]
    pub generator: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    /// Weight bound N.
    #[arg(long = "max-weight", short = 'N', default_value_t = 100)]
    pub max_weight: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Plant a random perfect matching.
    #[arg(long)]
    pub perfect: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated `family:n:m:N:seed` items, or `scaling`.
    #[arg(long, default_value = "scaling")]
    pub suite: String,
    #[arg(long, default_value_t = 3)]
    pub repeat: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,
    #[arg(long)]
    pub tau: Option<usize>,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Violation(String),
    Infeasible(String),
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Failure {
        match e {
            SolveError::Infeasible(s) => Failure::Infeasible(s),
            SolveError::Violation(s) => Failure::Violation(s),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let res = match cli.cmd {
        Command::Solve(a) => commands::solve(&a),
        Command::Gen(a) => commands::gen(&a),
        Command::Oracle { input } => commands::oracle(&input),
        Command::Verify { cert, graph } => commands::verify(&cert, graph.as_deref()),
        Command::Bench(a) => bench::run(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse(s)) => {
            eprintln!("error: {}", s);
            ExitCode::from(1)
        }
        Err(Failure::Violation(s)) => {
            eprintln!("violation: {}", s);
            ExitCode::from(2)
        }
        Err(Failure::Infeasible(s)) => {
            eprintln!("infeasible: {}", s);
            ExitCode::from(3)
        }
    }
}
