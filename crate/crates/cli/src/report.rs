use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde_json::{json, Value};

pub const TOOL_VERSION: &str = concat!("htc ", env!("CARGO_PKG_VERSION"));

pub fn render(command: &str, verdict: bool, details: Value) -> String {
    let report = json!({
        "toolVersion": TOOL_VERSION,
        "command": command,
        "verdict": verdict,
        "details": details,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("reports are plain JSON");
    text.push('\n');
    text
}

/// Write through a sibling temporary file and rename it into place.
pub fn write_atomic(path: &Path, text: &str) -> anyhow::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().context("output path has no file name")?.to_string_lossy();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| -> anyhow::Result<()> {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path).with_context(|| format!("renaming onto {}", path.display()))?;
        Ok(())
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}
