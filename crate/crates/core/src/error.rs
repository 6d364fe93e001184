use std::path::PathBuf;

#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("a ray needs at least one nonzero component")]
    ZeroRay,
    #[error("rays {0} and {1} are not orthogonal")]
    NotOrthogonal(String, String),
    #[error("basis is not pairwise orthogonal: {0}")]
    InvalidBasis(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown vector set '{0}'")]
    UnknownSet(String),
    #[error("no data file for '{name}' (looked for {})", path.display())]
    MissingData { name: String, path: PathBuf },
    #[error("duplicate ray: entries {first} and {second} are the same ray {ray}")]
    DuplicateRay { first: usize, second: usize, ray: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
