use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A system document failed to parse; `field` is a path like `modes[1].A[0]`.
    #[error("parse error at {field}: {message}")]
    Parse { field: String, message: String },

    /// The full system is not structurally controllable, so no mode subset can be.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The switched controllability matrix would exceed the configured caps.
    #[error("resource cap exceeded: controllability matrix would have {columns} columns ({detail})")]
    Resource { columns: u128, detail: String },
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}
