use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use toruskit_cli::{fixtures, render, run, to_text, CliError, Command, Options};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Rigidity, polarizations and projective deformations of finite group
/// actions on complex tori.
#[derive(Parser, Debug)]
#[command(name = "toruskit", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// input document (JSON)
    #[arg(long, conflicts_with = "fixture")]
    input: Option<PathBuf>,
    /// use a bundled input document instead of --input
    #[arg(long)]
    fixture: Option<String>,
    /// write the JSON report here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// format of standard output when no --output is given
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 256)]
    max_denominator: u64,
    /// largest accepted distance ||t|| of the projective neighbour
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// average the polarization over the group
    #[arg(long)]
    g_invariant: bool,
    #[arg(long)]
    tolerance_complex_structure: Option<f64>,
    #[arg(long)]
    tolerance_commutation: Option<f64>,
    #[arg(long)]
    tolerance_rounding: Option<f64>,
    #[arg(long)]
    tolerance_relation_one: Option<f64>,
    #[arg(long)]
    tolerance_min_eigenvalue: Option<f64>,
    #[arg(long)]
    tolerance_newton: Option<f64>,
    #[arg(long)]
    tolerance_positivity: Option<f64>,
    #[arg(long)]
    tolerance_conditioning: Option<f64>,
}

impl Cli {
    fn options(&self) -> Options {
        let mut o = Options { max_denominator: self.max_denominator, epsilon: self.epsilon, g_invariant: self.g_invariant, ..Default::default() };
        if let Some(s) = self.seed {
            o.seed = s;
        }
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut o.hodge.complex_structure, self.tolerance_complex_structure);
        set(&mut o.hodge.commutation, self.tolerance_commutation);
        set(&mut o.hodge.rounding, self.tolerance_rounding);
        set(&mut o.polarize.relation_one, self.tolerance_relation_one);
        set(&mut o.polarize.min_eigenvalue, self.tolerance_min_eigenvalue);
        set(&mut o.deform.newton, self.tolerance_newton);
        set(&mut o.deform.positivity, self.tolerance_positivity);
        set(&mut o.deform.conditioning, self.tolerance_conditioning);
        o
    }

    fn input(&self) -> Result<Option<String>, CliError> {
        if let Some(name) = &self.fixture {
            return fixtures::document(name)
                .map(|d| Some(d.to_string()))
                .ok_or_else(|| CliError::Schema(format!("no bundled fixture named {name}")));
        }
        match &self.input {
            Some(p) => std::fs::read_to_string(p)
                .map(Some)
                .map_err(|e| CliError::Io { path: p.display().to_string(), message: e.to_string() }),
            None => Ok(None),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (status, report) = match cli.input() {
        Ok(text) => run(cli.command, text.as_deref(), &cli.options()),
        Err(e) => (e.exit_code(), e.report()),
    };
    if let Some(err) = report.get("error") {
        eprintln!("error: {}", err["message"].as_str().unwrap_or_default());
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, to_text(&report)) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            print!("{}", render::table(&report));
        }
        None => match cli.format {
            Format::Json => print!("{}", to_text(&report)),
            Format::Text => print!("{}", render::table(&report)),
        },
    }
    ExitCode::from(status as u8)
}
