use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qbif_cli::commands::{run, Command, Options};
use qbif_cli::generate::{generate, CorpusKind, Filter, GenerateOptions};
use qbif_cli::report::{digest, Report, EXIT_INPUT};
use qbif_cli::workspace::Workspace;
use qbif_core::bifib::TieBreak;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Tie {
    Smallest,
    Largest,
}

impl From<Tie> for TieBreak {
    fn from(t: Tie) -> Self {
        match t {
            Tie::Smallest => TieBreak::Smallest,
            Tie::Largest => TieBreak::Largest,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Action {
    Validate,
    Wfs,
    Model,
    Bifib,
    Mates,
    Construct,
    Theorem,
    Reedy,
    Bigluing,
    Enumerate,
    CompareRsHp,
    GenerateCorpus,
}

/// Check finite categories, model structures and bifibrations described in
/// `qbif 1` workspace files.
#[derive(Parser, Debug)]
#[command(name = "qbif", version)]
struct Cli {
    command: Action,
    /// Workspace file; same as `--input`.
    file: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the report (or generated corpus) here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = qbif_core::fincat::DEFAULT_SIZE_GUARD)]
    size_guard: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for independent entities.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Override the cleavage tie-break of every setup.
    #[arg(long, value_enum)]
    tie_break: Option<Tie>,
    /// Check only the named entity.
    #[arg(long)]
    entity: Option<String>,

    /// Corpus kind for `generate-corpus`.
    #[arg(long, value_enum)]
    kind: Option<CorpusKind>,
    #[arg(long)]
    lattice: Option<String>,
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    left: Option<String>,
    #[arg(long)]
    right: Option<String>,
    #[arg(long)]
    reedy: Option<String>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    all_structures: bool,
    #[arg(long, value_enum, default_value = "all")]
    filter: Filter,
}

fn command_of(a: Action) -> Option<Command> {
    Some(match a {
        Action::Validate => Command::Validate,
        Action::Wfs => Command::Wfs,
        Action::Model => Command::Model,
        Action::Bifib => Command::Bifib,
        Action::Mates => Command::Mates,
        Action::Construct => Command::Construct,
        Action::Theorem => Command::Theorem,
        Action::Reedy => Command::Reedy,
        Action::Bigluing => Command::Bigluing,
        Action::Enumerate => Command::Enumerate,
        Action::CompareRsHp => Command::CompareRsHp,
        Action::GenerateCorpus => return None,
    })
}

fn emit(cli: &Cli, body: &str) -> Result<(), String> {
    match &cli.output {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn generate_corpus(cli: &Cli) -> u8 {
    let Some(kind) = cli.kind else {
        eprintln!("generate-corpus needs --kind");
        return EXIT_INPUT as u8;
    };
    let d = GenerateOptions::default();
    let opts = GenerateOptions {
        kind,
        lattice: cli.lattice.clone().unwrap_or(if matches!(kind, CorpusKind::Cod | CorpusKind::Dom) { "chain3".into() } else { d.lattice }),
        base: cli.base.clone().unwrap_or(d.base),
        left: cli.left.clone().unwrap_or(d.left),
        right: cli.right.clone().unwrap_or(d.right),
        reedy: cli.reedy.clone().unwrap_or(d.reedy),
        count: cli.count,
        all_structures: cli.all_structures,
        seed: cli.seed,
        tie_break: cli.tie_break.map(Into::into).unwrap_or_default(),
        filter: cli.filter,
        size_guard: cli.size_guard,
    };
    match generate(&opts) {
        Ok(ws) => match emit(cli, &ws.save()) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("{e}");
                EXIT_INPUT as u8
            }
        },
        Err(e) => {
            eprintln!("generate-corpus: {e}");
            EXIT_INPUT as u8
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(cmd) = command_of(cli.command) else { return ExitCode::from(generate_corpus(&cli)) };
    let name = cmd.name();
    let report = match cli.input.as_ref().or(cli.file.as_ref()) {
        None => Report::input_error(&name, String::new(), "no input file given".into()),
        Some(path) => match Workspace::load_file(path) {
            Ok((ws, bytes)) => {
                let opts = Options {
                    size_guard: cli.size_guard,
                    tie_break: cli.tie_break.map(Into::into),
                    entity: cli.entity.clone(),
                    parallel: cli.parallel.max(1),
                };
                run(cmd, &ws, digest(&bytes), &opts)
            }
            Err(e) => {
                let d = std::fs::read(path).map(|b| digest(&b)).unwrap_or_default();
                Report::input_error(&name, d, e.to_string())
            }
        },
    };
    let body = match cli.format {
        Format::Text => report.to_text(),
        Format::Structured => report.to_json(),
    };
    if let Err(e) = emit(&cli, &body) {
        eprintln!("{e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    if let Some(e) = &report.error {
        eprintln!("qbif {name}: {e}");
    }
    ExitCode::from(report.exit_code as u8)
}
