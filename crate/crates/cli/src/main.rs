mod accumulate;
mod evaluate;
mod synth;

use clap::{Parser, Subcommand};

/// Event-stream slicing, frame accumulation and synthetic event generation.
#[derive(Parser)]
#[command(name = "evframe", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn a text event stream into PGM frames plus an index.
    Accumulate(accumulate::Args),
    /// Emit a synthetic event stream in the text format.
    Synth(synth::Args),
    /// Run the frame-similarity experiments and write CSV reports.
    Eval(evaluate::Args),
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Accumulate(args) => accumulate::run(args),
        Command::Synth(args) => synth::run(args),
        Command::Eval(args) => evaluate::run(args),
    }
}
