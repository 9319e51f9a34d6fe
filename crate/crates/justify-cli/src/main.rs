//! `justify`: validate, complement, solve, and explain justification frames.
//!
//! Exit codes: 0 on success with no property violations; 1 when a checked
//! property is violated (non-complementary frame, consistency violation,
//! witness failure); 2 on parse, validation, or usage errors; 3 on capacity
//! errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use justify::frame::{
    check_complementarity, complementation, FrameError, JustificationFrame,
    DEFAULT_SELECTION_CAP,
};
use justify::generate::{fuzz_consistency, FuzzConfig, GenerateError, InterpretationMode};
use justify::justification::Builtin;
use justify::lattice::{Fact, Interpretation};
use justify::parse::{
    compile_document, document_from_frame, document_rules, parse_interpretation, parse_literal,
    parse_rule_document_with, InterpretationError, ParseError, ParseOptions,
};
use justify::solver::{enumerate_models, is_model, SolverError, DEFAULT_MODEL_ATOM_CAP};
use justify::witness::{witness_pair, WitnessError, WitnessFormat};

#[derive(Parser)]
#[command(
    name = "justify",
    version,
    about = "Engine for justification frames: complementation, supported values, models, consistency checking, and explanation witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BeArg {
    Sp,
    Kk,
}

impl From<BeArg> for Builtin {
    fn from(arg: BeArg) -> Builtin {
        match arg {
            BeArg::Sp => Builtin::Sp,
            BeArg::Kk => Builtin::Kk,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Dot,
}

#[derive(Args)]
struct FileArgs {
    /// Rule file
    file: PathBuf,
    /// Treat undeclared body-only atoms as open instead of failing
    #[arg(long)]
    implicit_open: bool,
    /// Cap on selection-function enumeration per head
    #[arg(long, default_value_t = DEFAULT_SELECTION_CAP)]
    selection_cap: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a rule file and validate the frame conditions
    Validate(FileArgs),
    /// Print the complementation of the file's rules as a rule document
    Complement(FileArgs),
    /// Check the two complementarity conditions for every defined fact
    CheckComp(FileArgs),
    /// Supported values of the defined facts under an interpretation
    Solve {
        #[command(flatten)]
        file: FileArgs,
        /// Branch evaluation
        #[arg(long, value_enum)]
        be: BeArg,
        /// Interpretation file (`atom=value` tokens, values t|f|u)
        #[arg(long, conflicts_with = "all_interps")]
        interp: Option<PathBuf>,
        /// Sweep every interpretation of the universe
        #[arg(long)]
        all_interps: bool,
    },
    /// Enumerate all models of the frame
    Models {
        #[command(flatten)]
        file: FileArgs,
        #[arg(long, value_enum)]
        be: BeArg,
        /// Cap on the number of atoms for the exhaustive model sweep
        #[arg(long, default_value_t = DEFAULT_MODEL_ATOM_CAP)]
        atom_cap: u32,
    },
    /// Build the witness pair for a fact: a justification for it and one
    /// for its complement
    Explain {
        #[command(flatten)]
        file: FileArgs,
        #[arg(long, value_enum)]
        be: BeArg,
        /// The defined fact to explain, e.g. `p` or `~p`
        #[arg(long)]
        fact: String,
        /// Interpretation file
        #[arg(long)]
        interp: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Generate random complementary frames and sweep the consistency
    /// property; any violation on a complementary frame is a bug signal
    Fuzz {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        frames: u32,
        #[arg(long, default_value_t = 4)]
        max_defined_atoms: u32,
        #[arg(long, default_value_t = 2)]
        max_open_atoms: u32,
        #[arg(long, default_value_t = 3)]
        max_cases_per_head: u32,
        #[arg(long, default_value_t = 3)]
        max_body_size: u32,
        /// Branch evaluations to sweep (repeatable); default both
        #[arg(long, value_enum)]
        be: Vec<BeArg>,
        /// Sample this many interpretations per frame instead of sweeping
        /// exhaustively
        #[arg(long)]
        samples: Option<u32>,
        /// Also sweep frames rejected by the complementarity checker;
        /// violations on those are expected and reported separately
        #[arg(long)]
        allow_noncomplementary: bool,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Interp {
        path: String,
        source: InterpretationError,
    },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::Interp { .. }
            | CliError::Usage(_) => 2,
            CliError::Frame(FrameError::SelectionCapacity { .. }) => 3,
            CliError::Frame(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Witness(_) => 1,
            CliError::Generate(GenerateError::InvalidConfig(_)) => 2,
            CliError::Generate(GenerateError::RetriesExhausted { .. }) => 3,
            CliError::Generate(GenerateError::Frame(FrameError::SelectionCapacity {
                ..
            })) => 3,
            CliError::Generate(GenerateError::Frame(_)) => 2,
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_frame(args: &FileArgs) -> Result<JustificationFrame, CliError> {
    let text = read_file(&args.file)?;
    let options = ParseOptions {
        implicit_open: args.implicit_open,
    };
    let document =
        parse_rule_document_with(&text, options).map_err(|source| CliError::Parse {
            path: args.file.display().to_string(),
            source,
        })?;
    Ok(compile_document(&document, args.selection_cap)?)
}

fn load_interpretation(
    frame: &JustificationFrame,
    path: &Path,
) -> Result<Interpretation, CliError> {
    let text = read_file(path)?;
    parse_interpretation(&text, frame.space()).map_err(|source| CliError::Interp {
        path: path.display().to_string(),
        source,
    })
}

fn print_values(frame: &JustificationFrame, interp: &Interpretation, be: Builtin) {
    let valuation = justify::solver::support_operator(frame, interp, be);
    for (fact, value) in valuation.iter() {
        println!("sv({}) = {}", frame.space().render(fact), value);
    }
    let check = is_model(frame, interp, be);
    println!("model: {}", if check.satisfied() { "yes" } else { "no" });
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Validate(args) => {
            let frame = load_frame(&args)?;
            println!(
                "ok: {} atoms ({} defined), {} rules",
                frame.space().atom_count(),
                frame.defined_atoms().len(),
                frame.rules().len()
            );
            Ok(0)
        }
        Command::Complement(args) => {
            let text = read_file(&args.file)?;
            let options = ParseOptions {
                implicit_open: args.implicit_open,
            };
            let document =
                parse_rule_document_with(&text, options).map_err(|source| CliError::Parse {
                    path: args.file.display().to_string(),
                    source,
                })?;
            let (space, rules) = document_rules(&document);
            let completed = complementation(&space, &rules, args.selection_cap)?;
            let defined = completed.iter().filter_map(|r| r.head().atom()).collect();
            let frame = JustificationFrame::new(space, defined, completed)?;
            print!("{}", document_from_frame(&frame).render());
            Ok(0)
        }
        Command::CheckComp(args) => {
            let frame = load_frame(&args)?;
            let report = check_complementarity(&frame, args.selection_cap)?;
            println!("{}", report.render(frame.space()));
            Ok(if report.complementary() { 0 } else { 1 })
        }
        Command::Solve {
            file,
            be,
            interp,
            all_interps,
        } => {
            let frame = load_frame(&file)?;
            let be = Builtin::from(be);
            match (interp, all_interps) {
                (Some(path), false) => {
                    let interp = load_interpretation(&frame, &path)?;
                    print_values(&frame, &interp, be);
                    Ok(0)
                }
                (None, true) => {
                    let atoms = frame.space().atom_count();
                    if atoms as u32 > DEFAULT_MODEL_ATOM_CAP {
                        return Err(SolverError::UniverseCapacity {
                            atoms,
                            cap: DEFAULT_MODEL_ATOM_CAP,
                        }
                        .into());
                    }
                    for interp in Interpretation::enumerate(atoms) {
                        let valuation = justify::solver::support_operator(&frame, &interp, be);
                        let values: Vec<String> = valuation
                            .iter()
                            .map(|(fact, value)| {
                                format!("{}={}", frame.space().render(fact), value)
                            })
                            .collect();
                        let model = is_model(&frame, &interp, be).satisfied();
                        println!(
                            "I[{}] sv[{}] model={}",
                            interp.render(frame.space()),
                            values.join(" "),
                            if model { "yes" } else { "no" }
                        );
                    }
                    Ok(0)
                }
                _ => Err(CliError::Usage(
                    "solve requires exactly one of --interp FILE or --all-interps".into(),
                )),
            }
        }
        Command::Models { file, be, atom_cap } => {
            let frame = load_frame(&file)?;
            let models = enumerate_models(&frame, Builtin::from(be), atom_cap)?;
            for model in &models {
                println!("{}", model.render(frame.space()));
            }
            println!("models: {}", models.len());
            Ok(0)
        }
        Command::Explain {
            file,
            be,
            fact,
            interp,
            format,
        } => {
            let frame = load_frame(&file)?;
            let literal = parse_literal(&fact)
                .ok_or_else(|| CliError::Usage(format!("`{fact}` is not a literal")))?;
            let target: Fact = frame
                .space()
                .parse_fact(&literal.render())
                .map_err(|_| CliError::Usage(format!("`{fact}` is not in the universe")))?;
            if !frame.is_defined(target) {
                return Err(CliError::Usage(format!("`{fact}` is not a defined fact")));
            }
            let interp = load_interpretation(&frame, &interp)?;
            let witness = witness_pair(&frame, &interp, Builtin::from(be), target)?;
            let format = match format {
                FormatArg::Json => WitnessFormat::Json,
                FormatArg::Dot => WitnessFormat::Dot,
            };
            println!("{}", witness.export(format, frame.space()).trim_end());
            Ok(0)
        }
        Command::Fuzz {
            seed,
            frames,
            max_defined_atoms,
            max_open_atoms,
            max_cases_per_head,
            max_body_size,
            be,
            samples,
            allow_noncomplementary,
        } => {
            let evaluations: Vec<Builtin> = if be.is_empty() {
                Builtin::ALL.to_vec()
            } else {
                be.into_iter().map(Builtin::from).collect()
            };
            let cfg = FuzzConfig {
                seed,
                frame_count: frames,
                max_defined_atoms,
                max_open_atoms,
                max_cases_per_head,
                max_body_size,
                evaluations,
                interpretation_mode: match samples {
                    Some(count) => InterpretationMode::Sampled(count),
                    None => InterpretationMode::Exhaustive,
                },
                sweep_noncomplementary: allow_noncomplementary,
            };
            let report = fuzz_consistency(&cfg)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report.to_json()).expect("serializable")
            );
            eprintln!("{}", report.summary());
            Ok(if report.clean() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
