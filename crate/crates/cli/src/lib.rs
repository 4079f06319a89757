//! Files and command line for `kronlab-core`: the text and `TEN1` binary
//! tensor formats, self-auditing run reports, the `kronlab` CLI and the
//! Kronecker matvec benchmark.

pub mod bench;
pub mod cli;
pub mod format;
pub mod report;

pub use cli::{run_command, CliError, Outcome};
pub use format::{parse_tensor_binary, parse_tensor_text, write_tensor_binary, write_tensor_text, TensorFile};
pub use report::RunReport;
