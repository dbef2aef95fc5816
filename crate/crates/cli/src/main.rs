use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use svlab_cli::{parse, print, run_script, Options, ScriptError};
use svlab_core::certificates::{Ledger, Verdict};

const USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "svlab",
    version,
    about = "Simplicial-volume and Euler-characteristic laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a script.
    Run {
        script: PathBuf,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the certificate ledger here.
        #[arg(long)]
        ledger: Option<PathBuf>,
        /// Print the derivation of every query and assertion.
        #[arg(long)]
        explain: bool,
        /// Directory of triangulation files.
        #[arg(long)]
        datasets: Option<PathBuf>,
    },
    /// Re-verify every certificate of a ledger file.
    Verify { ledger: PathBuf },
    /// Print a script in canonical form.
    Fmt {
        script: PathBuf,
        /// Exit with status 1 if the file is not already formatted.
        #[arg(long)]
        check: bool,
    },
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("svlab: {}: {e}", path.display());
        ExitCode::from(USAGE)
    })
}

fn write(path: &PathBuf, text: &str) -> Result<(), ExitCode> {
    std::fs::write(path, text).map_err(|e| {
        eprintln!("svlab: {}: {e}", path.display());
        ExitCode::from(USAGE)
    })
}

fn script_error(path: &Path, e: &ScriptError) -> ExitCode {
    eprintln!("{}:{e}", path.display());
    ExitCode::from(USAGE)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    match execute(cli.command) {
        Ok(code) | Err(code) => code,
    }
}

fn execute(command: Command) -> Result<ExitCode, ExitCode> {
    match command {
        Command::Run {
            script,
            report,
            ledger,
            explain,
            datasets,
        } => {
            let text = read(&script)?;
            let run = run_script(&text, &Options { datasets }).map_err(|e| script_error(&script, &e))?;
            print!("{}", run.report.render(explain));
            if let Some(p) = report {
                write(&p, &run.report.to_json())?;
            }
            if let Some(p) = ledger {
                write(&p, &run.ledger.to_json())?;
            }
            Ok(ExitCode::from(run.report.exit_code() as u8))
        }
        Command::Verify { ledger } => {
            let text = read(&ledger)?;
            let l = Ledger::from_json(&text).map_err(|e| {
                eprintln!("svlab: {}: {e}", ledger.display());
                ExitCode::from(USAGE)
            })?;
            let mut failed = 0;
            for (i, (c, v)) in l.certificates().iter().zip(l.verify_all()).enumerate() {
                match v {
                    Verdict::Pass => println!("#{i} {} {} <= {}: verified", c.target.kind, c.target.manifold, c.bound),
                    Verdict::Fail(r) => {
                        failed += 1;
                        println!(
                            "#{i} {} {} <= {}: REJECTED: {r}",
                            c.target.kind, c.target.manifold, c.bound
                        );
                    }
                }
            }
            println!("{} certificates, {failed} rejected", l.len());
            Ok(ExitCode::from(u8::from(failed > 0)))
        }
        Command::Fmt { script, check } => {
            let text = read(&script)?;
            let ast = parse(&text).map_err(|e| script_error(&script, &e))?;
            let out = print(&ast);
            if check {
                if out != text {
                    eprintln!("{}: not formatted", script.display());
                    return Ok(ExitCode::from(1));
                }
            } else {
                print!("{out}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
