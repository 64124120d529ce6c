//! Run configuration, archives and the construct / verify / query / export commands.

mod archive;
mod commands;
mod config;
mod export;

pub use archive::{write_atomic, TreeArchive, FORMAT_VERSION};
pub use commands::{
    cmd_construct, cmd_query, cmd_verify, query_archive, verify_archive, ConstructOutcome, QueryReport, VerifyEntry, VerifyReport, EXIT_FAILED,
    EXIT_OK, EXIT_PARTIAL,
};
pub use config::{RunBudget, RunConfig};
pub use export::{cmd_export, export_archive, stereographic, ExportOptions, ExportSummary, Projection};
