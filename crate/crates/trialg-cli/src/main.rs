mod commands;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use output::{CliError, Out};

#[derive(Parser, Debug)]
#[command(name = "trialg", version, about = "Exact computations with trialitarian algebras and their Type III gradings")]
struct Cli {
    /// N for the coefficient field Q(ζ_N).
    #[arg(long, global = true, env = "TRIALG_FIELD_CONDUCTOR", default_value_t = 12)]
    field_conductor: u32,
    /// Seed for the randomized samples.
    #[arg(long, global = true, env = "TRIALG_SEED", default_value_t = 1)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, env = "TRIALG_OUT")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct an object by name and dump its structure constants.
    Build {
        #[arg(value_enum)]
        name: commands::Constructor,
        /// Parameter JSON (Type III parameters or a bicharacter), "-" for stdin.
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: commands::Suite,
        /// For the grading suite: Type III parameters to check instead of the fine gradings.
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Support, type vector, rank and universal group of a Type III grading.
    Invariants { params: PathBuf },
    /// Decide whether two Type III parameter sets give similar gradings.
    Similar { first: PathBuf, second: PathBuf },
    /// Related triple of the Type I coarsening and its Brauer relations.
    Brauer {
        /// Type III parameters; the grading is coarsened by ⟨h⟩.
        #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
        params: Option<PathBuf>,
        #[arg(long, value_enum)]
        builtin: Option<commands::BuiltinTypeOne>,
    },
    /// Tables of computed data.
    Catalog {
        #[arg(value_enum)]
        table: Table,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Table {
    #[value(name = "fine-typeIII")]
    FineTypeIii,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out::new(cli.field_conductor, cli.seed);
    let result = run(&cli, out);
    let (doc, code) = match result {
        Ok(out) => {
            let code = if out.passed() { 0 } else { 1 };
            (out.finish(), code)
        }
        Err(e) => {
            eprintln!("trialg: {e}");
            (Out::new(cli.field_conductor, cli.seed).error(&e), 2)
        }
    };
    let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("trialg: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}

fn run(cli: &Cli, mut out: Out) -> Result<Out, CliError> {
    let f = trialg::make_field(cli.field_conductor).map_err(|e| CliError::Param(e.to_string()))?;
    match &cli.command {
        Command::Build { name, params } => commands::build(&f, &mut out, *name, params.as_deref())?,
        Command::Verify { suite, params } => commands::verify(&f, &mut out, *suite, params.as_deref(), cli.seed)?,
        Command::Invariants { params } => commands::invariants(&f, &mut out, params)?,
        Command::Similar { first, second } => commands::similar(&mut out, first, second)?,
        Command::Brauer { params, builtin } => commands::brauer(&f, &mut out, params.as_deref(), *builtin)?,
        Command::Catalog { table: Table::FineTypeIii } => commands::catalog(&f, &mut out)?,
    }
    Ok(out)
}
