//! Argument parsing and the `check` command.

use chameleon_core::{check, render, to_json, Mode};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::IsTerminal;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TYPE_ERROR: i32 = 1;
pub const EXIT_INVALID_PROGRAM: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

const MAX_SOURCE_BYTES: u64 = 1024 * 1024;

#[derive(Parser, Debug)]
#[command(name = "chameleon", version, about = "Type checker that explains type errors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Type-check a source file.
    Check {
        file: PathBuf,
        /// Print the full result as JSON.
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Basic)]
        mode: ModeArg,
    },
    /// Run the HTTP service (port from CHAMELEON_PORT, default 8420).
    Serve {
        /// Directory of static assets served at `/`.
        #[arg(long, default_value = "webui/dist")]
        static_dir: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Basic,
    Balanced,
    Advanced,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Basic => Mode::Basic,
            ModeArg::Balanced => Mode::Balanced,
            ModeArg::Advanced => Mode::Advanced,
        }
    }
}

/// Output of the `check` command, kept apart from printing so it can be tested.
pub struct CheckOutput {
    pub stdout: String,
    pub code: i32,
}

pub fn run_check(source: &str, json: bool, mode: Mode, color: bool) -> CheckOutput {
    let result = check(source);
    let code = match result.status() {
        "ok" => EXIT_OK,
        "typeError" => EXIT_TYPE_ERROR,
        _ => EXIT_INVALID_PROGRAM,
    };
    let stdout = if json {
        let mut s = to_json(&result);
        s.push('\n');
        s
    } else {
        render(&result, source, mode, color)
    };
    CheckOutput { stdout, code }
}

fn read_source(file: &PathBuf) -> Result<String, String> {
    let meta = std::fs::metadata(file).map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    if meta.len() > MAX_SOURCE_BYTES {
        return Err(format!("{} is larger than 1 MiB", file.display()));
    }
    std::fs::read_to_string(file).map_err(|e| format!("cannot read {}: {e}", file.display()))
}

pub fn main_with_args(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Check { file, json, mode } => {
            let source = match read_source(&file) {
                Ok(s) => s,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return EXIT_USAGE;
                }
            };
            let color = !json && std::io::stdout().is_terminal() && std::env::var_os("NO_COLOR").is_none();
            let out = run_check(&source, json, mode.into(), color);
            print!("{}", out.stdout);
            out.code
        }
        Command::Serve { static_dir } => {
            let port = match crate::server::port_from_env() {
                Ok(p) => p,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return EXIT_USAGE;
                }
            };
            let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
            match runtime.block_on(crate::server::serve(port, Some(static_dir))) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            }
        }
    }
}
