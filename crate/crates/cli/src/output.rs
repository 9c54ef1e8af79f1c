use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};

/// Fixed numeric format for everything the CLI prints: scientific, 9
/// significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.8e}")
}

/// Destination for a single command's output.
pub struct Output {
    path: Option<PathBuf>,
}

impl Output {
    pub fn new(path: Option<PathBuf>) -> Self {
        Output { path }
    }

    pub fn write(&self, text: &str) -> Result<()> {
        match &self.path {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }
}
