//! Monte-Carlo harness, result files and word formats for the RPA
//! decoders of `rpa-core`.
//!
//! - [`harness`]: seeded, thread-count-independent error-rate estimation,
//!   the ML lower bound and the codeword-invariance audit.
//! - [`transition`]: isotonic error-rate curves and transition widths.
//! - [`report`]: the CSV result schema.
//! - [`io`]: hex-packed hard words and text LLR words.

pub mod harness;
pub mod io;
pub mod report;
pub mod transition;

pub use harness::{
    invariance_audit, monotone_within_bands, run_point, run_sweep, wilson_interval, AuditReport,
    ChannelKind, DecoderKind, PointSummary, SweepSpec, Transmission,
};
pub use report::{emit_csv, parse_csv};
pub use transition::{transition_width, TransitionCurve};
