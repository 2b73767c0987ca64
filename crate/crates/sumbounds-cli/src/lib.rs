//! Implementation of the `sumbounds` command-line tool: `bounds` writes the
//! bound curves as CSV, `verify` runs Monte-Carlo containment checks, and
//! `figure` renders bounds and empirical CDFs as a static SVG.

pub mod commands;
pub mod config;
pub mod svg;

use std::fmt;

/// CLI failures, split by exit code: invalid input or a failed verification
/// exits 1, I/O problems exit 2.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Io(String),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<sumbounds::Error> for CliError {
    fn from(e: sumbounds::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// Ten significant digits, plain decimal notation, locale-independent.
pub fn fmt_sig10(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (9 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::fmt_sig10;

    #[test]
    fn formatting_is_ten_significant_digits() {
        assert_eq!(fmt_sig10(2.5), "2.500000000");
        assert_eq!(fmt_sig10(1.0), "1.000000000");
        assert_eq!(fmt_sig10(0.0), "0");
        assert_eq!(fmt_sig10(-0.0), "0");
        assert_eq!(fmt_sig10(0.9750021048517796), "0.9750021049");
        assert_eq!(fmt_sig10(45.05167867868493), "45.05167868");
        assert_eq!(fmt_sig10(0.005146997847093647), "0.005146997847");
    }

    #[test]
    fn formatting_round_trips_within_precision() {
        for v in [2.5, 0.09679004632150949, 0.9032099536784905, 1e-7, 3.2] {
            let parsed: f64 = fmt_sig10(v).parse().unwrap();
            assert!((parsed - v).abs() <= 1e-9 * v.abs().max(1.0));
        }
    }
}
