//! Atomic file output: write to a temporary file in the target directory,
//! then rename over the destination.

use std::io::Write;
use std::path::Path;

use serde_json::Value;

pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes to `path`, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> std::io::Result<()> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()
        }
    }
}

/// Pretty JSON with a trailing newline. `serde_json` maps non-finite floats to
/// `null`, so callers check finiteness before building the value.
pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
