//! CSV datasets and book dumps.
//!
//! Input files are UTF-8, comma separated, one point per row. A first row is
//! taken as a header when any of its feature cells fails to parse as a number.
//! The label column, when given, may hold arbitrary strings; they are mapped to
//! ids in order of first appearance.

use std::collections::HashMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use active_medoids::{Dataset, DistanceBook};

use crate::error::{CliError, Result};

/// Which column holds the ground-truth labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    /// Zero-based column index.
    Index(usize),
    /// Header name; requires a header row.
    Name(String),
}

impl FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        })
    }
}

impl std::fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LabelColumn::Index(i) => write!(f, "{i}"),
            LabelColumn::Name(n) => f.write_str(n),
        }
    }
}

fn parse_cell(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Loads a dataset, named after the file stem.
pub fn load_csv(path: &Path, label: Option<&LabelColumn>) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        rows.push((line, record));
    }
    let Some((_, first)) = rows.first() else {
        return Err(CliError::EmptyFile { path: path.into() });
    };
    let width = first.len();

    let label_idx = match label {
        None => None,
        Some(LabelColumn::Index(i)) => {
            if *i >= width {
                return Err(CliError::MissingLabelColumn {
                    path: path.into(),
                    column: i.to_string(),
                });
            }
            Some(*i)
        }
        Some(LabelColumn::Name(name)) => Some(
            first
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| CliError::MissingLabelColumn {
                    path: path.into(),
                    column: name.clone(),
                })?,
        ),
    };
    let has_header = matches!(label, Some(LabelColumn::Name(_)))
        || first
            .iter()
            .enumerate()
            .any(|(c, cell)| Some(c) != label_idx && parse_cell(cell).is_none());
    let data = if has_header { &rows[1..] } else { &rows[..] };
    if data.is_empty() {
        return Err(CliError::EmptyFile { path: path.into() });
    }

    let dim = width - usize::from(label_idx.is_some());
    if dim == 0 {
        return Err(CliError::Config(format!(
            "{}: no feature columns",
            path.display()
        )));
    }
    let mut points = Vec::with_capacity(data.len() * dim);
    let mut labels = Vec::with_capacity(data.len());
    let mut class_ids: HashMap<String, usize> = HashMap::new();
    let mut class_names = Vec::new();
    for (line, record) in data {
        if record.len() != width {
            return Err(CliError::RaggedRow {
                path: path.into(),
                line: *line,
                expected: width,
                found: record.len(),
            });
        }
        for (c, cell) in record.iter().enumerate() {
            if Some(c) == label_idx {
                let id = *class_ids.entry(cell.to_string()).or_insert_with(|| {
                    class_names.push(cell.to_string());
                    class_names.len() - 1
                });
                labels.push(id);
            } else {
                points.push(parse_cell(cell).ok_or_else(|| CliError::NonNumeric {
                    path: path.into(),
                    line: *line,
                    column: c,
                    value: cell.to_string(),
                })?);
            }
        }
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    let labels = label_idx.map(|_| labels);
    Ok(Dataset::new(name, dim, points, labels, class_names)?)
}

/// Writes features (and labels as a trailing `label` column) with a header row.
pub fn write_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (0..dataset.dim()).map(|d| format!("x{d}")).collect();
    if dataset.labels().is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    for i in 0..dataset.len() {
        let mut row: Vec<String> = dataset.point(i).iter().map(|v| v.to_string()).collect();
        if let Some(labels) = dataset.labels() {
            let l = labels[i];
            row.push(
                dataset
                    .class_names()
                    .get(l)
                    .cloned()
                    .unwrap_or_else(|| l.to_string()),
            );
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

/// Dumps every pair as `i,j,value,status`.
pub fn dump_book(book: &DistanceBook, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "i,j,value,status")?;
    for (i, j, e) in book.pairs() {
        writeln!(out, "{i},{j},{},{}", e.value, e.status.as_str())?;
    }
    Ok(())
}
