//! Library side of the command-line front end: input/report documents,
//! strict parsing, pipeline orchestration, and rendering.

pub mod doc;
pub mod render;
pub mod run;

pub use doc::{parse_input, DocError, InputDocument, InputOptions, ReportDocument};
pub use run::{analyze_document, batch, exit_code_for, AnalyzeFlags, BatchRow};
