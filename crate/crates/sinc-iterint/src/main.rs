use clap::{Parser, Subcommand, ValueEnum};
use sinc_iterint::cli::{self, Formula};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "sinc-iterint",
    version,
    about = "DE-Sinc integration of 2-D iterated integrals with certified error bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaArg {
    Modified,
    Original,
}

impl From<FormulaArg> for Formula {
    fn from(arg: FormulaArg) -> Self {
        match arg {
            FormulaArg::Modified => Formula::Modified,
            FormulaArg::Original => Formula::Original,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a mesh sweep over a list of h values and emit a CSV table
    Sweep {
        /// Built-in example id (1, 2, or 3)
        #[arg(long)]
        example: u8,
        /// Comma-separated mesh sizes, e.g. 0.5,0.4,0.3
        #[arg(long = "h-list", value_delimiter = ',', required = true)]
        h_list: Vec<f64>,
        /// Which formula to sweep
        #[arg(long, value_enum)]
        formula: FormulaArg,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the mesh plan and certified error bound for one h
    Bound {
        /// Built-in example id (1, 2, or 3)
        #[arg(long)]
        example: u8,
        /// Mesh size
        #[arg(long)]
        h: f64,
    },
    /// Check certificates on the built-in h grid
    Verify {
        /// Built-in example id (1, 2, or 3)
        #[arg(long)]
        example: u8,
    },
}

fn main() {
    let args = Cli::parse();
    let code = match args.command {
        Command::Sweep {
            example,
            h_list,
            formula,
            out,
        } => match out {
            Some(path) => match File::create(&path) {
                Ok(file) => {
                    let mut writer = BufWriter::new(file);
                    let code = cli::cmd_sweep(example, &h_list, formula.into(), &mut writer);
                    if writer.flush().is_err() {
                        eprintln!("sweep: failed to flush {}", path.display());
                        cli::EXIT_USAGE
                    } else {
                        code
                    }
                }
                Err(e) => {
                    eprintln!("sweep: cannot create {}: {e}", path.display());
                    cli::EXIT_USAGE
                }
            },
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                cli::cmd_sweep(example, &h_list, formula.into(), &mut lock)
            }
        },
        Command::Bound { example, h } => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            cli::cmd_bound(example, h, &mut lock)
        }
        Command::Verify { example } => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            cli::cmd_verify(example, &mut lock)
        }
    };
    std::process::exit(code);
}
