mod eval;
mod gaps;
mod helpers;
mod manifest;
mod phase;
mod plot;
mod records;
mod rerun;
mod stats;
mod zeros;
mod zeta_arg;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use helpers::RunContext;

/// Phase of ζ′ at the zeros of the Riemann zeta function.
#[derive(Parser)]
#[command(name = "zetaphase", version)]
struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, env = "ZP_JOBS")]
    jobs: Option<usize>,
    /// Where to write the run manifest. Commands that write an output file
    /// default to `<output>.manifest.json`.
    #[arg(long, global = true, env = "ZP_MANIFEST")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    Eval(eval::Opts),
    Phase(phase::Opts),
    Stats(stats::Opts),
    Gaps(gaps::Opts),
    Zeros(zeros::Opts),
    Plot(plot::Opts),
    ZetaArg(zeta_arg::Opts),
    Rerun(rerun::Opts),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Phase(_) => "phase",
            Command::Stats(_) => "stats",
            Command::Gaps(_) => "gaps",
            Command::Zeros(_) => "zeros",
            Command::Plot(_) => "plot",
            Command::ZetaArg(_) => "zeta-arg",
            Command::Rerun(_) => "rerun",
        }
    }
}

pub(crate) fn execute(argv: Vec<String>) -> anyhow::Result<()> {
    let cli = Cli::try_parse_from(&argv).map_err(helpers::usage_error)?;
    let start = Instant::now();
    let mut ctx = RunContext::new(cli.command.name(), argv, cli.jobs);
    let pool = helpers::thread_pool(cli.jobs)?;
    pool.install(|| match &cli.command {
        Command::Eval(o) => o.run(&mut ctx),
        Command::Phase(o) => o.run(&mut ctx),
        Command::Stats(o) => o.run(&mut ctx),
        Command::Gaps(o) => o.run(&mut ctx),
        Command::Zeros(o) => o.run(&mut ctx),
        Command::Plot(o) => o.run(&mut ctx),
        Command::ZetaArg(o) => o.run(&mut ctx),
        Command::Rerun(o) => o.run(&mut ctx),
    })?;
    if !matches!(cli.command, Command::Rerun(_)) {
        let path = cli.manifest.or_else(|| ctx.default_manifest_path());
        if let Some(path) = path {
            ctx.finish(start.elapsed()).write(&path)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if let Some(clap_err) = err.downcast_ref::<clap::Error>() {
                // Help and version requests land here too.
                let _ = clap_err.print();
                return ExitCode::from(if clap_err.use_stderr() { 2 } else { 0 });
            }
            eprintln!("error: {err:#}");
            ExitCode::from(helpers::exit_code(&err))
        }
    }
}
