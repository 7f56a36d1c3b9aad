//! Round-based simulator for clustered wireless sensor networks.
//!
//! Three clustering protocols share one radio energy model: a LEACH-style
//! probabilistic baseline, a type-1 fuzzy unequal-clustering protocol with
//! competition radii, and an interval type-2 fuzzy election pipeline.

pub mod config;
pub mod energy;
pub mod fis;
pub mod network;
pub mod protocols;
pub mod report;
pub mod simulator;

use std::path::PathBuf;

pub use config::ConfigError;
pub use fis::FisError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Fis(#[from] FisError),
    #[error("positions: {0}")]
    Positions(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}: {msg}", path.display())]
    Csv {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}
