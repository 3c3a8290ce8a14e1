use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::Exit;

/// Keys naming output files; they do not affect results and are left out
/// of the configuration hash.
const OUTPUT_KEYS: [&str; 3] = ["out", "svg", "samples"];

/// Settings for one command after the config file and flags are combined.
pub struct Resolved<A> {
    pub args: A,
    pub seed: u64,
    pub hash: String,
}

impl<A> Resolved<A> {
    /// Provenance block written into every artifact.
    pub fn meta(&self) -> Value {
        json!({
            "tool": "tlsg",
            "version": env!("CARGO_PKG_VERSION"),
            "config_hash": self.hash,
            "seed": self.seed,
        })
    }

    pub fn banner(&self) -> String {
        format!("tlsg {} config {} seed {}", env!("CARGO_PKG_VERSION"), self.hash, self.seed)
    }
}

fn is_unset(v: &Value) -> bool {
    match v {
        Value::Null | Value::Bool(false) => true,
        Value::Array(a) => a.is_empty(),
        _ => false,
    }
}

/// Fills flags left unset on the command line from the `command` section
/// of the config file; flags given explicitly always win.
pub fn resolve<A: Serialize + DeserializeOwned>(
    command: &str,
    args: A,
    seed: Option<u64>,
    file: Option<&Path>,
) -> Result<Resolved<A>> {
    let file_cfg = match file {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| Exit::parse(format!("config {}: {e}", p.display())))?;
            if !v.is_object() {
                return Err(Exit::parse(format!("config {} is not a JSON object", p.display())).into());
            }
            v
        }
        None => Value::Object(Map::new()),
    };
    let mut merged = match serde_json::to_value(&args)? {
        Value::Object(m) => m,
        _ => unreachable!("argument structs serialize to objects"),
    };
    if let Some(Value::Object(section)) = file_cfg.get(command) {
        for (k, v) in section {
            match merged.get(k) {
                Some(cur) if !is_unset(cur) => {}
                Some(_) => {
                    merged.insert(k.clone(), v.clone());
                }
                None => return Err(Exit::parse(format!("unknown key {k:?} in config section {command:?}")).into()),
            }
        }
    }
    let seed = match seed {
        Some(s) => s,
        None => match file_cfg.get("seed") {
            Some(v) => v.as_u64().ok_or_else(|| Exit::parse("config seed is not an unsigned integer"))?,
            None => 0,
        },
    };
    let mut hashed = merged.clone();
    for k in OUTPUT_KEYS {
        hashed.remove(k);
    }
    // serde_json maps are ordered by key, so this text is canonical
    let canonical = serde_json::to_string(&json!({ "command": command, "seed": seed, "args": hashed }))?;
    let hash = format!("{:x}", Sha256::digest(canonical.as_bytes()));
    let args = serde_json::from_value(Value::Object(merged)).map_err(|e| Exit::parse(format!("config: {e}")))?;
    Ok(Resolved { args, seed, hash })
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    std::io::Write::write_all(&mut tmp, contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
