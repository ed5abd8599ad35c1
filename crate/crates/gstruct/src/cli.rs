//! Command-line interface. Exit codes: 0 success, 1 usage or input error,
//! 2 inconsistent geometry or a golden-report difference.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gstruct_core::scalar::set_float_epsilon;

use crate::builtin::{first_difference, BUILTINS};
use crate::engine::{run, Backend};
use crate::manifest::parse_manifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gstruct", version, about = "Classify hypersurfaces of 7-manifolds with G2-structure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a manifest, or the built-in examples against their golden reports.
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Manifest file (.gman).
    #[arg(required_unless_present = "examples", conflicts_with = "examples")]
    file: Option<PathBuf>,
    /// Run the built-in examples and compare with the stored golden reports.
    #[arg(long)]
    examples: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendArg,
    /// Zero tolerance of the float backend.
    #[arg(long, env = "GSTRUCT_EPS")]
    eps: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the command line `args` (including the program name) and returns the exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match cli.command {
        Command::Run(args) => run_command(&args, stdout, stderr),
    }
}

fn run_command(args: &RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if let Some(eps) = args.eps {
        if !(eps.is_finite() && eps > 0.0) {
            let _ = writeln!(stderr, "error: eps must be a positive number, got {eps}");
            return EXIT_USAGE;
        }
        set_float_epsilon(eps);
    }
    let backend = match args.backend {
        BackendArg::Exact => Backend::Exact,
        BackendArg::Float => Backend::Float,
    };
    if args.examples {
        return examples(args, backend, stdout, stderr);
    }
    let path = args.file.as_ref().expect("clap requires a file without --examples");
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    let manifest = match parse_manifest(&text) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(stderr, "{}:{}:{}: {}", path.display(), e.line, e.column, e.message);
            return EXIT_USAGE;
        }
    };
    let report = match run(&[manifest], backend) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "inconsistent: {e}");
            return EXIT_INCONSISTENT;
        }
    };
    let rendered = match args.format {
        Format::Text => report.to_text(),
        Format::Machine => report.to_machine(),
    };
    emit(args, &rendered, stdout, stderr)
}

fn emit(args: &RunArgs, rendered: &str, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let written = match &args.out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(rendered.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn examples(args: &RunArgs, backend: Backend, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if backend != Backend::Exact {
        let _ = writeln!(stderr, "error: the golden reports are exact; --examples needs --backend exact");
        return EXIT_USAGE;
    }
    let mut summary = String::new();
    let mut code = EXIT_OK;
    for b in &BUILTINS {
        let report = match b.report() {
            Ok(r) => r,
            Err(e) => {
                let _ = writeln!(stderr, "inconsistent: {e}");
                code = EXIT_INCONSISTENT;
                summary.push_str(&format!("{} error\n", b.name));
                continue;
            }
        };
        let (actual, golden, kind) = match args.format {
            Format::Text => (report.to_text(), b.golden_text, "text"),
            Format::Machine => (report.to_machine(), b.golden_machine, "machine"),
        };
        match first_difference(golden, &actual) {
            None => summary.push_str(&format!("{} {kind} matches golden\n", b.name)),
            Some((line, want, got)) => {
                code = EXIT_INCONSISTENT;
                summary.push_str(&format!("{} {kind} differs from golden at line {line}\n", b.name));
                let _ = writeln!(stderr, "{}: line {line}\n  golden: {want}\n  actual: {got}", b.name);
            }
        }
    }
    let emitted = emit(args, &summary, stdout, stderr);
    if code == EXIT_OK {
        emitted
    } else {
        code
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with(std::iter::once("gstruct").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&[]).0, EXIT_USAGE);
        assert_eq!(call(&["run"]).0, EXIT_USAGE);
        assert_eq!(call(&["run", "--format", "yaml", "x.gman"]).0, EXIT_USAGE);
        assert_eq!(call(&["run", "x.gman", "--examples"]).0, EXIT_USAGE);
        assert_eq!(call(&["run", "/nonexistent/x.gman"]).0, EXIT_USAGE);
        assert_eq!(call(&["run", "--examples", "--backend", "float"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("run"));
    }
}
