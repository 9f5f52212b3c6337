//! Restarted inertial dynamics toolkit.
//!
//! Subcommands: `theory` (closed-form restart constants), `continuous`
//! (ODE simulation with restart events), `discrete` (the inertial
//! gradient algorithm), `kernel` (kernel regularized learning runs).
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

mod cmd_continuous;
mod cmd_discrete;
mod cmd_kernel;
mod cmd_theory;
mod config;
mod suite;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "inertial-restart", version, about = "Restarted inertial dynamics: theory constants, ODE simulation, discrete algorithm, kernel learning benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every closed-form restart constant for one parameter tuple
    Theory(cmd_theory::TheoryArgs),
    /// Integrate the restarted dynamics and fit the decay rate
    Continuous(cmd_continuous::ContinuousArgs),
    /// Run the discrete inertial gradient algorithm across restart rules
    Discrete(cmd_discrete::DiscreteArgs),
    /// Sketched kernel logistic / multinomial regression runs
    Kernel(cmd_kernel::KernelArgs),
}

/// Failures carry their intended exit code.
pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }
}

impl From<inertial_restart::Error> for Failure {
    fn from(e: inertial_restart::Error) -> Self {
        match e {
            inertial_restart::Error::InvalidArgument(msg) => Failure::Usage(msg),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Theory(args) => cmd_theory::run(args),
        Command::Continuous(args) => cmd_continuous::run(args),
        Command::Discrete(args) => cmd_discrete::run(args),
        Command::Kernel(args) => cmd_kernel::run(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("usage error: {msg}"),
                Failure::Runtime(msg) => eprintln!("error: {msg}"),
            }
            std::process::exit(f.code());
        }
    }
}
