use std::io::{self, Write};

use serde_json::Value;
use whistle::Rational;

/// Five significant figures.
pub fn dec(r: &Rational) -> String {
    r.to_significant(5)
}

/// Percentages to one decimal place.
pub fn pct(r: &Rational) -> String {
    r.to_fixed(1)
}

pub fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

/// Print to stdout; a closed pipe (`| head`) is not an error.
pub fn print_json(v: &Value) -> io::Result<()> {
    match writeln!(io::stdout().lock(), "{}", to_pretty(v)) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}
