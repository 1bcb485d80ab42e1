//! Library behind the `vedkit` command-line tool: argument types, metric
//! parsing, run records with an append-only cache, and the commands.

pub mod args;
pub mod commands;
pub mod error;
pub mod metric;
pub mod output;
pub mod record;

use clap::Parser;

pub use error::CliError;

/// Parses `argv`, runs the command and returns the process exit code.
/// Output goes to stdout, diagnostics to stderr.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            println!("{}", output::render(&outcome.record, cli.global.output));
            match outcome.failure {
                Some(err) => {
                    eprintln!("vedkit: {err}");
                    err.exit_code()
                }
                None => 0,
            }
        }
        Err(err) => {
            eprintln!("vedkit: {err}");
            err.exit_code()
        }
    }
}

fn execute(cli: &args::Cli) -> Result<commands::Outcome, CliError> {
    let ctx = commands::Context::new(&cli.global)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = cli.global.threads {
        pool = pool.num_threads(usize::from(threads));
    }
    let pool = pool.build().map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))?;
    pool.install(|| commands::run(&ctx, &cli.command))
}
