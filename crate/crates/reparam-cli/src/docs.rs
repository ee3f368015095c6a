//! Document loading and writing. All on-disk rationals are strings; decimals
//! appear only in sample CSV output. Any parse or schema problem maps to
//! exit 2.

use std::path::Path;

use serde::Serialize;

use reparam::{PLPath, PLReparam, Rational, StopFamily, StopMap};

use crate::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}

pub fn load_stopmap(path: &Path) -> Result<StopMap, CliError> {
    let text = read(path)?;
    parse_json(path, &text)
}

pub fn load_family(path: &Path) -> Result<StopFamily, CliError> {
    let text = read(path)?;
    parse_json(path, &text)
}

pub fn load_reparam(path: &Path) -> Result<PLReparam, CliError> {
    let text = read(path)?;
    parse_json(path, &text)
}

/// Paths come as JSON documents or as CSV with rows `t,x1,...,xd`; CSV cells
/// are decimal literals (or exact `p/q` strings), converted exactly.
pub fn load_plpath(path: &Path) -> Result<PLPath, CliError> {
    let text = read(path)?;
    if path.extension().is_some_and(|ext| ext == "csv") {
        parse_csv_path(path, &text)
    } else {
        parse_json(path, &text)
    }
}

fn parse_cell(path: &Path, line: usize, cell: &str) -> Result<Rational, CliError> {
    let exact = if cell.contains('/') {
        cell.parse()
    } else {
        Rational::from_decimal_str(cell)
    };
    exact.map_err(|e| {
        CliError::Malformed(format!("{}: line {line}: {e}", path.display()))
    })
}

fn parse_csv_path(path: &Path, text: &str) -> Result<PLPath, CliError> {
    let mut rows: Vec<(Rational, Vec<Rational>)> = Vec::new();
    let mut dim: Option<usize> = None;
    for (i, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() < 2 {
            return Err(CliError::Malformed(format!(
                "{}: line {}: need t and at least one coordinate",
                path.display(),
                i + 1
            )));
        }
        match dim {
            None => dim = Some(cells.len() - 1),
            Some(d) if d != cells.len() - 1 => {
                return Err(CliError::Malformed(format!(
                    "{}: line {}: expected {} coordinates, found {}",
                    path.display(),
                    i + 1,
                    d,
                    cells.len() - 1
                )))
            }
            _ => {}
        }
        let t = parse_cell(path, i + 1, cells[0])?;
        let point = cells[1..]
            .iter()
            .map(|c| parse_cell(path, i + 1, c))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((t, point));
    }
    let dim = dim.ok_or_else(|| {
        CliError::Malformed(format!("{}: no data rows", path.display()))
    })?;
    PLPath::new(dim, rows).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}

pub enum PathOrReparam {
    Path(PLPath),
    Reparam(PLReparam),
}

/// Sniffs the document kind: path files carry a `dim` field.
pub fn load_path_or_reparam(path: &Path) -> Result<PathOrReparam, CliError> {
    if path.extension().is_some_and(|ext| ext == "csv") {
        return Ok(PathOrReparam::Path(load_plpath(path)?));
    }
    let text = read(path)?;
    let probe: serde_json::Value = parse_json(path, &text)?;
    if probe.get("dim").is_some() {
        Ok(PathOrReparam::Path(parse_json(path, &text)?))
    } else {
        Ok(PathOrReparam::Reparam(parse_json(path, &text)?))
    }
}

/// Serializes compactly with a trailing newline; stdout when no path is
/// given.
pub fn write_doc<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string(value)
        .map_err(|e| CliError::Internal(format!("serialization failed: {e}")))?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Malformed(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
