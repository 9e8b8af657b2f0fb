//! Deterministic CSV text: `%.12g`-style numbers, `#` metadata lines,
//! atomic file replacement.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::CliError;

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros dropped,
/// scientific notation outside `1e-4 <= |x| < 1e12`.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_bool(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// A CSV document assembled in memory so it can be written in one step.
#[derive(Debug, Default)]
pub struct Document {
    text: String,
}

impl Document {
    /// Starts with the standard header: tool version, command, then config.
    pub fn new(command: &str, config: &[(&str, String)]) -> Self {
        let mut doc = Self::default();
        doc.comment(&format!("chiralwalk {}", env!("CARGO_PKG_VERSION")));
        doc.comment(&format!("command: {command}"));
        for (key, value) in config {
            doc.comment(&format!("{key}: {value}"));
        }
        doc
    }

    pub fn comment(&mut self, line: &str) {
        let _ = writeln!(self.text, "# {line}");
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        let joined: Vec<&str> = fields.iter().map(|f| f.as_ref()).collect();
        self.text.push_str(&joined.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Writes to `path` through a temporary file in the same directory and a
    /// rename, so readers never observe a partial file.
    pub fn write_atomic(&self, path: &Path) -> Result<(), CliError> {
        let io = |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        };
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        tmp.write_all(self.text.as_bytes()).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(path).map_err(|e| io(e.error))?;
        Ok(())
    }
}
