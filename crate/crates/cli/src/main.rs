//! `tml2`: check, simulate, generate and format tml2 models.
//!
//! Exit status: 0 success, 1 parse/validation/model error, 2 usage error,
//! 3 runtime simulation error, 4 I/O error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tml2::interp::{write_trace, InstanceSnapshot, SimError, Simulator};
use tml2::{generate, parse, pretty_print, validate, write_artifacts, CodegenError, Model};

#[derive(Parser)]
#[command(
    name = "tml2",
    version,
    about = "Tools for tml2 IoT models with data analytics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model.
    Check { file: PathBuf },
    /// Simulate a configuration and emit a JSON-lines trace.
    Sim {
        file: PathBuf,
        #[arg(long)]
        config: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_steps: u64,
        /// Write the trace here instead of standard output.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Generate Python data-analytics scripts and a manifest.
    Gen {
        file: PathBuf,
        #[arg(long)]
        config: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a model in canonical form.
    Fmt { file: PathBuf },
}

enum Failure {
    Model,
    Runtime,
    Io,
}

impl From<Failure> for ExitCode {
    fn from(f: Failure) -> ExitCode {
        ExitCode::from(match f {
            Failure::Model => 1,
            Failure::Runtime => 3,
            Failure::Io => 4,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Check { file } => check(&file),
        Command::Sim {
            file,
            config,
            max_steps,
            trace,
        } => sim(&file, &config, max_steps, trace.as_deref()),
        Command::Gen { file, config, out } => gen(&file, &config, &out),
        Command::Fmt { file } => fmt(&file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.into(),
    }
}

fn io_error(what: &Path, e: io::Error) -> Failure {
    eprintln!("error: {}: {e}", what.display());
    Failure::Io
}

fn load(file: &Path) -> Result<Model, Failure> {
    let src = std::fs::read_to_string(file).map_err(|e| io_error(file, e))?;
    parse(&src, &file.to_string_lossy()).map_err(|diags| {
        for d in diags {
            eprintln!("{d}");
        }
        Failure::Model
    })
}

/// Parses and validates, printing every diagnostic.
fn load_valid(file: &Path) -> Result<Model, Failure> {
    let model = load(file)?;
    let report = validate(&model);
    for d in &report.diagnostics {
        eprintln!("{d}");
    }
    if report.ok {
        Ok(model)
    } else {
        Err(Failure::Model)
    }
}

fn check(file: &Path) -> Result<(), Failure> {
    load_valid(file).map(drop)
}

fn summary(out: &mut impl Write, steps: u64, states: &[InstanceSnapshot]) -> io::Result<()> {
    writeln!(out, "steps: {steps}")?;
    for s in states {
        let props: Vec<String> = s
            .properties
            .iter()
            .map(|(n, v)| format!("{n} = {v}"))
            .collect();
        write!(out, "{}: {}", s.name, s.state.as_deref().unwrap_or("-"))?;
        if !props.is_empty() {
            write!(out, " {{{}}}", props.join(", "))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn sim(file: &Path, config: &str, max_steps: u64, trace: Option<&Path>) -> Result<(), Failure> {
    let model = load_valid(file)?;
    let mut sim = match Simulator::new(&model, config) {
        Ok(sim) => sim,
        Err(SimError::UnknownConfiguration(name)) => {
            eprintln!("error: {}: no configuration named `{name}`", file.display());
            return Err(Failure::Model);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return Err(Failure::Model);
        }
    };
    let outcome = sim.run(max_steps);

    // the trace is written even when the run failed, up to the failure
    let stdout = io::stdout();
    match trace {
        Some(path) => {
            let f = File::create(path).map_err(|e| io_error(path, e))?;
            write_trace(sim.trace(), BufWriter::new(f)).map_err(|e| io_error(path, e))?;
        }
        None => write_trace(sim.trace(), stdout.lock())
            .map_err(|e| io_error(Path::new("<stdout>"), e))?,
    }
    if let Err(e) = outcome {
        eprintln!("error[{}]: {}", e.code(), e);
        return Err(Failure::Runtime);
    }
    summary(&mut stdout.lock(), sim.step(), &sim.snapshots())
        .map_err(|e| io_error(Path::new("<stdout>"), e))
}

fn gen(file: &Path, config: &str, out: &Path) -> Result<(), Failure> {
    let model = load_valid(file)?;
    let artifacts = generate(&model, config).map_err(|e| {
        match e.code() {
            Some(code) => eprintln!("error[{code}]: {e}"),
            None => eprintln!("error: {e}"),
        }
        Failure::Model
    })?;
    match write_artifacts(&artifacts, out) {
        Ok(n) => {
            println!("wrote {n} files to {}", out.display());
            Ok(())
        }
        Err(e @ (CodegenError::Io(_) | CodegenError::UnsafePath(_))) => {
            eprintln!("error[E-IO]: {e}");
            Err(Failure::Io)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(Failure::Model)
        }
    }
}

fn fmt(file: &Path) -> Result<(), Failure> {
    let model = load(file)?;
    print!("{}", pretty_print(&model));
    Ok(())
}
