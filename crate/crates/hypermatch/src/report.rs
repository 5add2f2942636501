//! Versioned JSON report envelope and atomic file output.
//!
//! Every CLI run emits one envelope: schema version, tool version, the
//! verbatim configuration, and the result. Nondeterministic fields
//! (timestamp, wall-clock) live under a single `meta` object so that two
//! runs with identical config and inputs produce byte-identical reports
//! once `meta` is dropped.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

pub fn envelope(command: &str, config: Value, result: Value, wall_ms: u128) -> Value {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "hypermatch",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "meta": { "timestamp_unix_ms": timestamp as u64, "wall_ms": wall_ms as u64 },
        "result": result,
    })
}

/// Remove the nondeterministic `meta` object (for comparing reports).
pub fn strip_meta(mut report: Value) -> Value {
    if let Some(obj) = report.as_object_mut() {
        obj.remove("meta");
    }
    report
}

/// Write via a sibling temp file and rename, so failed runs leave no
/// partial output behind.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_shape_and_strip() {
        let rep = envelope("count", json!({"input": "x.hg"}), json!({"n": 3}), 17);
        assert_eq!(rep["schema_version"], 1);
        assert!(rep["meta"]["timestamp_unix_ms"].is_u64());
        let a = strip_meta(rep.clone());
        std::thread::sleep(std::time::Duration::from_millis(2));
        let b = strip_meta(envelope(
            "count",
            json!({"input": "x.hg"}),
            json!({"n": 3}),
            99,
        ));
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = std::env::temp_dir().join(format!("hm-report-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("report.json");
        write_atomic(&path, "one").unwrap();
        write_atomic(&path, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
