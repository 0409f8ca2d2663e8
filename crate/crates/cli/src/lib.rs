//! File formats, parallel sweeps and reporting on top of `xclab-core`.

use std::fmt;

use num_traits::ToPrimitive;
use xclab_core::counting::CountReport;

pub mod formats;
pub mod sweep;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input.
    Usage(String),
    /// A certificate was computed and failed.
    Certificate(String),
    /// Something that holds by construction did not.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Certificate(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Certificate(m) => write!(f, "certificate failed: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<xclab_core::Error> for CliError {
    fn from(e: xclab_core::Error) -> Self {
        match e {
            xclab_core::Error::Internal(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// `R* / (2^(n/2) / sqrt(n · log2(2n)))`, the certified bound against the
/// asymptotic shape. Floating point; never part of a certificate.
pub fn xc_ratio(r: &CountReport) -> f64 {
    let n = r.n as f64;
    let shape = (n / 2.0).exp2() / (n * (2.0 * n).log2()).sqrt();
    r.r_star.to_f64().unwrap_or(f64::INFINITY) / shape
}
