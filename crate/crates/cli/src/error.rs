use std::path::PathBuf;

use dspace_core::{GraphError, HotellingError, MapFileError};
use thiserror::Error;

pub const EXIT_PARSE: u8 = 1;
pub const EXIT_DISCONNECTED: u8 = 2;
pub const EXIT_UNKNOWN_SPACE: u8 = 3;
pub const EXIT_MARKET: u8 = 4;
pub const EXIT_NO_CONVERGENCE: u8 = 5;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", .path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot tell the input format of {}; use --input-format pl|csv", .0.display())]
    UnknownInputFormat(PathBuf),
    #[error("{}: {source}", .path.display())]
    Parse { path: PathBuf, source: MapFileError },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("`{0}` is the root and has no d-value")]
    RootHasNoDValue(String),
    #[error(transparent)]
    Market(HotellingError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::UnknownInputFormat(_) | CliError::Parse { .. } => {
                EXIT_PARSE
            }
            CliError::Graph(g) => match g {
                GraphError::EmptyGraph => EXIT_PARSE,
                GraphError::Disconnected { .. } | GraphError::DegenerateGraph(_) => {
                    EXIT_DISCONNECTED
                }
                GraphError::RootMissing(_) | GraphError::UnknownSpace(_) => EXIT_UNKNOWN_SPACE,
            },
            CliError::RootHasNoDValue(_) => EXIT_UNKNOWN_SPACE,
            CliError::Market(HotellingError::NoConvergence { .. }) => EXIT_NO_CONVERGENCE,
            CliError::Market(_) => EXIT_MARKET,
        }
    }
}
