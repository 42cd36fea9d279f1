//! Library surface of the command-line runner: the oracle comparison used by
//! the `oracle` subcommand and the process exit-code contract.

pub mod oracle;

/// Every check passed.
pub const EXIT_PASS: u8 = 0;
/// At least one check failed.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Parse, configuration, or I/O error.
pub const EXIT_CONFIG: u8 = 2;
/// A residual came out NaN or infinite.
pub const EXIT_ANOMALY: u8 = 3;
