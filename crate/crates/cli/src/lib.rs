//! Batch front end: reads an input document, runs one pipeline stage and
//! produces a JSON report.

pub mod commands;
pub mod fixtures;
pub mod render;
pub mod schema;

use serde_json::{json, Value};
use thiserror::Error;
use toruskit::deform::{DeformError, DeformTolerances};
use toruskit::group::GroupError;
use toruskit::hodge::{HodgeError, HodgeTolerances};
use toruskit::polarize::{PolarizeError, PolarizeTolerances};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Polarize(#[from] PolarizeError),
    #[error(transparent)]
    Deform(#[from] DeformError),
}

impl CliError {
    /// 2 for malformed or inconsistent input, 1 for mathematical outcomes.
    pub fn exit_code(&self) -> i32 {
        use HodgeError as H;
        use PolarizeError as P;
        let input = match self {
            CliError::Schema(_) | CliError::Io { .. } => true,
            CliError::Group(g) => group_input(g),
            CliError::Hodge(h) | CliError::Polarize(P::Hodge(h)) | CliError::Deform(DeformError::Hodge(h)) => matches!(
                h,
                H::InvalidRepresentation(_)
                    | H::InvalidComplexStructure(_)
                    | H::NotInvariant { .. }
                    | H::HSViolation { .. }
                    | H::InvalidDecomposition(_)
            ) || matches!(h, H::Group(g) if group_input(g)),
            CliError::Polarize(p) => matches!(
                p,
                P::NotMonicIntegral | P::DegreeOutOfRange(_) | P::ReduciblePolynomial(_) | P::InvalidEmbeddingSet(_)
            ),
            CliError::Deform(_) => false,
        };
        if input {
            2
        } else {
            1
        }
    }

    /// Variant name of the innermost module error.
    pub fn kind(&self) -> String {
        let debug = match self {
            CliError::Schema(_) => return "SchemaError".into(),
            CliError::Io { .. } => return "IoError".into(),
            CliError::Group(e) => format!("{e:?}"),
            CliError::Hodge(e) => format!("{e:?}"),
            CliError::Polarize(PolarizeError::Hodge(e)) => format!("{e:?}"),
            CliError::Polarize(PolarizeError::Group(e)) => format!("{e:?}"),
            CliError::Polarize(e) => format!("{e:?}"),
            CliError::Deform(DeformError::Hodge(e)) => format!("{e:?}"),
            CliError::Deform(e) => format!("{e:?}"),
        };
        debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
    }

    pub fn report(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "detail": format!("{self:?}") } })
    }
}

fn group_input(g: &GroupError) -> bool {
    matches!(
        g,
        GroupError::InvalidTable(_)
            | GroupError::NotAssociative(..)
            | GroupError::InvalidPermutation(_)
            | GroupError::TooLarge(_)
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Analyze,
    Rigidity,
    EnumerateRigid,
    Polarize,
    Deform,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Rigidity => "rigidity",
            Command::EnumerateRigid => "enumerate-rigid",
            Command::Polarize => "polarize",
            Command::Deform => "deform",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub max_denominator: u64,
    pub epsilon: f64,
    pub g_invariant: bool,
    pub hodge: HodgeTolerances,
    pub polarize: PolarizeTolerances,
    pub deform: DeformTolerances,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: toruskit::group::chartab::DEFAULT_SEED,
            max_denominator: 256,
            epsilon: 1.0,
            g_invariant: false,
            hodge: HodgeTolerances::default(),
            polarize: PolarizeTolerances::default(),
            deform: DeformTolerances::default(),
        }
    }
}

/// Runs one command on the text of an input document (None for `selftest`).
/// Returns the exit status and the report.
pub fn run(command: Command, input: Option<&str>, opts: &Options) -> (i32, Value) {
    let result = match (command, input) {
        (Command::Selftest, _) => Ok(commands::selftest(opts)),
        (_, None) => Err(CliError::Schema(format!("{} needs an input document", command.name()))),
        (_, Some(text)) => schema::parse(text).and_then(|doc| commands::dispatch(command, &doc, opts)),
    };
    match result {
        Ok(report) => {
            let ok = report.get("passed").and_then(Value::as_bool).unwrap_or(true);
            (if ok { 0 } else { 1 }, report)
        }
        Err(e) => (e.exit_code(), e.report()),
    }
}

/// Pretty JSON with a trailing newline. Object keys come out sorted, so equal
/// reports give identical bytes.
pub fn to_text(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports are serializable");
    s.push('\n');
    s
}
