//! Key-value config files for the CLI: one `key = value` pair per line,
//! `#` comments, blank lines ignored. Flags given on the command line override
//! file values.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

pub fn load_config(path: &Path) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::invalid(format!(
                "config line {} is not `key = value`: {raw:?}",
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}
