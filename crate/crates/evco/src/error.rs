use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvcoError {
    /// Operands live in different ambient spaces.
    #[error("dimension mismatch: expected {expected}, got {got}{}", context_suffix(.context))]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: String,
    },

    /// Instance is valid input but outside what this build can decide
    /// (for example a face query on a polyhedron with nontrivial lineality).
    #[error("unsupported instance: {0}")]
    Unsupported(String),

    /// Structurally invalid input (bad rational literal, empty payload, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
}

fn context_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" ({context})")
    }
}

impl EvcoError {
    pub fn dim(expected: usize, got: usize, context: impl Into<String>) -> Self {
        EvcoError::DimensionMismatch {
            expected,
            got,
            context: context.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, EvcoError>;
