use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Parsed arguments plus resolved values, echoed with every result.
pub fn params<A: Serialize>(command: &str, args: &A, resolved: Value) -> CliResult<Value> {
    let mut map = Map::new();
    map.insert("command".into(), Value::from(command));
    if let Value::Object(raw) = serde_json::to_value(args)? {
        map.extend(raw);
    }
    if let Value::Object(extra) = resolved {
        map.extend(extra);
    }
    Ok(Value::Object(map))
}

/// Compact JSON with 17 significant digits per float.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> CliResult<String> {
    Ok(renyi::json::to_string(value)?)
}

/// `# {params}` header line for text and CSV output.
pub fn comment_line(params: &Value) -> CliResult<String> {
    Ok(format!("# {}\n", to_json(params)?))
}

pub fn emit(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, content).map_err(|source| CliError::Write { path: p.to_path_buf(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Write { path: "<stdout>".into(), source })
        }
    }
}

/// Finished contents of an in-memory CSV writer.
pub fn csv_text(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
