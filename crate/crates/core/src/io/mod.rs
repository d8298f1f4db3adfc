//! File formats, audit-log serialization, instance generation and benchmarks.

pub mod audit_log;
pub mod bench;
pub mod formats;
pub mod gen;
pub mod outputs;
pub mod shrink;

pub use audit_log::{read_audit_log, write_audit_log, AuditRecord, JsonlSink, LogError};
pub use formats::{load_instance, read_raw, write_raw, LoadError, ParseError};
pub use outputs::{output_digests, read_metrics, write_outputs, RunSummary};
