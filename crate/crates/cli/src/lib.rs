//! Library side of the `quadtangent` command: scene and certificate formats
//! and the implementation of each subcommand.

pub mod certificate;
pub mod commands;
pub mod error;
pub mod output;
pub mod scene;

pub use certificate::{Certificate, SolutionRecord};
pub use error::{CliError, CliResult};
pub use scene::Scene;
