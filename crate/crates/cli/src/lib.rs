//! Command-line front end for the rotational CMC surface library:
//! parameter sweeps, profile plots, stereographic meshes and
//! deterministic CSV/JSON/SVG/OBJ serialization.

pub mod cli;
pub mod error;
pub mod export;
pub mod mesh;
pub mod sweep;
pub mod verify;

pub use cli::cli_main;
pub use error::{CliError, Result};
pub use mesh::{build_mesh, stereographic_project, SurfaceMesh, DEFAULT_POLE};
pub use sweep::{sweep, CMode, GridRange, Outputs, SweepRow, SweepSpec};
