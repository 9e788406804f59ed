//! `cathom`: homotopy invariants and fibration checks for finite categories
//! stored as JSON composition tables.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{ModeArg, Output, Settings};
use input::Failure;

#[derive(Parser, Debug)]
#[command(name = "cathom", version, about = "Homotopy invariants of finite categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Homotopy flavour; `strict` only for secat.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Path truncation length L (battery homotopy length for fibcheck).
    #[arg(long, global = true)]
    max_len: Option<usize>,

    /// Identity pairs a localized path search may insert.
    #[arg(long, global = true, default_value_t = 3)]
    zigzag_depth: usize,

    #[arg(long, global = true, default_value_t = 100_000)]
    functor_cap: u64,

    #[arg(long, global = true, default_value_t = 1_000)]
    cover_cap: u64,

    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a category and check the category laws.
    Validate { category: PathBuf },
    /// Decide whether two parallel functors are homotopic.
    Homotopic { f: PathBuf, g: PathBuf },
    Ccat { category: PathBuf },
    Ctc { category: PathBuf },
    /// Homotopic distance of two parallel functors.
    Distance { f: PathBuf, g: PathBuf },
    Secat { p: PathBuf },
    /// Švarc genus.
    Sg { p: PathBuf },
    /// Replay a certificate from an invariant report, or check a bare cover.
    CoverCheck { cover: PathBuf },
    /// The truncated path category; with `--from` and `--to`, search a
    /// morphism between two paths written as `x,f,y,g,x`.
    Pathcat {
        category: PathBuf,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
    },
    /// Test the lifting property on a battery of problems.
    Fibcheck {
        p: PathBuf,
        /// Most problems to try; larger batteries are sampled with `--seed`.
        #[arg(long, default_value_t = 200)]
        battery: usize,
    },
    /// Factor a functor through its fibrant replacement.
    Replace { f: PathBuf },
    /// Evaluate the order relations between the invariants.
    Relations { category: PathBuf },
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let s = Settings {
        mode: cli.mode,
        max_len: cli.max_len,
        zigzag_depth: cli.zigzag_depth,
        functor_cap: cli.functor_cap,
        cover_cap: cli.cover_cap,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Validate { category } => commands::validate(category),
        Command::Homotopic { f, g } => commands::homotopic(f, g, &s),
        Command::Ccat { category } => commands::ccat_cmd(category, &s),
        Command::Ctc { category } => commands::ctc_cmd(category, &s),
        Command::Distance { f, g } => commands::distance(f, g, &s),
        Command::Secat { p } => commands::secat_cmd(p, &s),
        Command::Sg { p } => commands::sg(p, &s),
        Command::CoverCheck { cover } => commands::cover_check(cover),
        Command::Pathcat { category, from, to } => commands::pathcat(category, from.as_deref(), to.as_deref(), &s),
        Command::Fibcheck { p, battery } => commands::fibcheck(p, *battery, &s),
        Command::Replace { f } => commands::replace(f, &s),
        Command::Relations { category } => commands::relations(category, &s),
    }
}

fn configure_threads() {
    let Ok(text) = std::env::var("CATHOM_THREADS") else { return };
    match text.parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("warning: ignoring CATHOM_THREADS={text}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code() as u8);
        }
    };
    let mut text = serde_json::to_string_pretty(&out.json).expect("JSON values serialize");
    text.push('\n');
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if out.exhausted {
        eprintln!("budget exhausted; bounds reported");
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
