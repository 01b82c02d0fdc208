//! Error type shared by the whole crate.

use crate::expr::Symbol;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Lexical or grammatical error in model-language source.
    #[error("{line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },

    /// An equation references a variable or driver that was never declared.
    #[error("{line}:{col}: undeclared identifier `{name}`")]
    Undeclared {
        line: usize,
        col: usize,
        name: String,
    },

    /// Structural analysis requires as many equations as variables.
    #[error("system is not square: {equations} equations, {variables} variables")]
    NonSquare { equations: usize, variables: usize },

    /// No transversal of finite signature entries exists.
    #[error("structurally singular: every complete assignment hits an absent entry")]
    StructurallySingular,

    /// The offset fixed-point iteration exceeded its round budget, which can
    /// only happen when the supplied transversal is not optimal.
    #[error("offset iteration did not converge after {rounds} rounds; transversal not optimal?")]
    OffsetsDiverged { rounds: usize },

    /// Evaluation hit a symbol the point does not assign.
    #[error("missing assignment for {symbol}")]
    MissingAssignment { symbol: Symbol },

    /// Division by zero, logarithm of a non-positive value, and similar.
    #[error("domain error: {message}")]
    Domain { message: &'static str },

    /// Evaluation failure inside a Jacobian entry, with its coordinates.
    #[error("jacobian entry ({row}, {col}): {source}")]
    JacobianEntry {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },

    /// A stage Jacobian has rank below its equation count.
    #[error("stage {stage}: jacobian rank below equation count")]
    SingularStage { stage: usize },

    /// Damped Newton ran out of iterations on one stage.
    #[error("stage {stage}: no convergence within the iteration budget")]
    NoConvergence { stage: usize },

    /// The model lacks the substitution equations the reduction expects.
    #[error("model is not quasi-triangular: {reason}")]
    NotQuasiTriangular { reason: String },

    /// A closed form was requested for a configuration that has none.
    #[error("no closed form: {reason}")]
    NoClosedForm { reason: &'static str },
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error JSON.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Parse { .. } | Error::Undeclared { .. } => "parse_error",
            Error::NonSquare { .. } => "non_square",
            Error::StructurallySingular => "structurally_singular",
            Error::OffsetsDiverged { .. } => "offsets_diverged",
            Error::MissingAssignment { .. } => "missing_assignment",
            Error::Domain { .. } => "domain_error",
            Error::JacobianEntry { .. } => "evaluation_error",
            Error::SingularStage { .. } => "singular_stage",
            Error::NoConvergence { .. } => "no_convergence",
            Error::NotQuasiTriangular { .. } => "not_quasi_triangular",
            Error::NoClosedForm { .. } => "no_closed_form",
        }
    }
}
