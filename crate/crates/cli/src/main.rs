use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use castml_core::cas::{evaluate, EvalRequest, Mode, Status};
use castml_core::html::{EmitOptions, RUNTIME_JS};

/// Compile a LaTeX document with giac cells into an HTML5+MathML page.
#[derive(Debug, Parser)]
#[command(name = "castml", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    compile: CompileArgs,
}

#[derive(Debug, Args)]
struct CompileArgs {
    /// Input .tex file
    input: Option<PathBuf>,
    /// Output path (default: input with an .html extension)
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Inline the cell runtime into the page (default)
    #[arg(long, conflicts_with = "runtime_path")]
    standalone: bool,
    /// Reference the runtime at PATH instead of inlining it
    #[arg(long, value_name = "PATH")]
    runtime_path: Option<String>,
    /// Parse and validate without writing anything
    #[arg(long)]
    check: bool,
    /// More output on stderr (-v, -vv)
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one command with the built-in CAS and print the JSON response
    Eval {
        #[arg(long, value_enum, default_value_t = EvalMode::Math)]
        mode: EvalMode,
        /// Command, e.g. "factor(x^10-1)"
        command: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EvalMode {
    Math,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Some(Command::Eval { mode, command }) => eval(mode, command),
        None => match cli.compile.input.clone() {
            Some(input) => compile(&cli.compile, &input),
            None => {
                use clap::CommandFactory;
                let mut cmd = Cli::command();
                cmd.error(clap::error::ErrorKind::MissingRequiredArgument, "an INPUT file is required")
                    .exit()
            }
        },
    }
}

fn eval(mode: EvalMode, command: String) -> ExitCode {
    let req = EvalRequest {
        id: "eval".to_string(),
        command,
        mode: match mode {
            EvalMode::Math => Mode::Math,
            EvalMode::Text => Mode::Text,
        },
    };
    let resp = evaluate(&req);
    match serde_json::to_string(&resp) {
        Ok(json) => println!("{json}"),
        Err(e) => {
            eprintln!("castml: error: cannot serialize response: {e}");
            return ExitCode::from(1);
        }
    }
    if resp.status == Status::Ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn compile(args: &CompileArgs, input: &Path) -> ExitCode {
    let shown = input.display().to_string();
    let started = Instant::now();
    let source = match fs::read(input) {
        Ok(bytes) => match String::from_utf8(bytes) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("{shown}: error: input is not valid UTF-8 (byte {})", e.utf8_error().valid_up_to());
                return ExitCode::from(1);
            }
        },
        Err(e) => {
            eprintln!("{shown}: error: cannot read input: {e}");
            return ExitCode::from(1);
        }
    };

    let output = args.output.clone().unwrap_or_else(|| input.with_extension("html"));
    let mut options = EmitOptions {
        document_title: input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        ..EmitOptions::default()
    };
    if let Some(path) = &args.runtime_path {
        if path.is_empty() {
            eprintln!("castml: error: --runtime-path must not be empty");
            return ExitCode::from(2);
        }
        options.standalone = false;
        options.runtime_path = path.clone();
    }

    let compiled = match castml_core::compile(&source, &options) {
        Ok(c) => c,
        Err(e) => {
            let d = castml_core::diag::Diagnostic::error(e.position(), e.message());
            eprintln!("{}", d.render(&shown));
            return ExitCode::from(1);
        }
    };
    for d in &compiled.diagnostics {
        eprintln!("{}", d.render(&shown));
    }
    if args.verbose > 0 {
        eprintln!(
            "{shown}: info: {} cell(s), {} math span(s), {} diagnostic(s) in {:.1?}",
            compiled.cells.len(),
            compiled.math_spans,
            compiled.diagnostics.len(),
            started.elapsed()
        );
    }
    if args.verbose > 1 {
        for c in &compiled.cells {
            eprintln!("{shown}:{}: info: cell {} ({}) {}", c.position, c.id, c.mode.as_str(), c.command);
        }
    }

    if !args.check {
        if let Err(e) = fs::write(&output, &compiled.html) {
            eprintln!("{}: error: cannot write output: {e}", output.display());
            return ExitCode::from(1);
        }
        if !options.standalone {
            if let Err(code) = write_runtime(&output, &options.runtime_path) {
                return code;
            }
        }
        if args.verbose > 0 {
            eprintln!("{shown}: info: wrote {}", output.display());
        }
    }
    if compiled.has_errors() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

/// Writes the runtime next to the output when a relative runtime path does
/// not exist yet; an existing file (possibly a custom engine) is left alone.
fn write_runtime(output: &Path, runtime_path: &str) -> Result<(), ExitCode> {
    let rel = Path::new(runtime_path);
    if rel.is_absolute() || runtime_path.contains("://") {
        return Ok(());
    }
    let target = output.parent().unwrap_or(Path::new(".")).join(rel);
    if target.exists() {
        return Ok(());
    }
    fs::write(&target, RUNTIME_JS).map_err(|e| {
        eprintln!("{}: error: cannot write runtime: {e}", target.display());
        ExitCode::from(1)
    })
}
