//! Delimited-text readers and writers.
//!
//! Tables have one header row and gene ids in the first column. The
//! delimiter is a tab if the header line contains one, otherwise a comma.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use hyperlap::{AnnotationMatrix, ExpressionMatrix, Matrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}: {reason}", path.display())]
    Parse { path: PathBuf, line: u64, reason: String },
    #[error("{}: {source}", path.display())]
    Invalid { path: PathBuf, source: hyperlap::Error },
    #[error("{}: gene '{gene}' {reason}", path.display())]
    Mismatch { path: PathBuf, gene: String, reason: &'static str },
}

struct Table {
    header: Vec<String>,
    ids: Vec<String>,
    cells: Vec<Vec<String>>,
    lines: Vec<u64>,
}

fn detect_delimiter(text: &str) -> u8 {
    let first = text.lines().next().unwrap_or("");
    if first.contains('\t') {
        b'\t'
    } else {
        b','
    }
}

fn read_table(path: &Path) -> Result<Table, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.into(), source })?;
    let parse = |line: u64, reason: String| LoadError::Parse { path: path.into(), line, reason };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(detect_delimiter(&text))
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| parse(1, e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.len() < 2 {
        return Err(parse(1, "header needs a gene id column and at least one data column".into()));
    }

    let mut seen: HashMap<String, u64> = HashMap::new();
    let mut table = Table { header, ids: Vec::new(), cells: Vec::new(), lines: Vec::new() };
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != table.header.len() {
            return Err(parse(
                line,
                format!("expected {} cells, found {}", table.header.len(), record.len()),
            ));
        }
        let id = record[0].to_owned();
        if id.is_empty() {
            return Err(parse(line, "empty gene id".into()));
        }
        if let Some(first) = seen.insert(id.clone(), line) {
            return Err(parse(line, format!("duplicate gene id '{id}' (first seen on line {first})")));
        }
        let mut row = Vec::with_capacity(record.len() - 1);
        for (c, cell) in record.iter().enumerate().skip(1) {
            if cell.is_empty() {
                return Err(parse(line, format!("missing value in column '{}'", table.header[c])));
            }
            row.push(cell.to_owned());
        }
        table.ids.push(id);
        table.cells.push(row);
        table.lines.push(line);
    }
    if table.ids.is_empty() {
        return Err(parse(1, "no data rows".into()));
    }
    Ok(table)
}

/// Reads an `n × m` expression table.
pub fn load_expression(path: impl AsRef<Path>) -> Result<ExpressionMatrix, LoadError> {
    let path = path.as_ref();
    let table = read_table(path)?;
    let mut rows = Vec::with_capacity(table.ids.len());
    for (row, &line) in table.cells.iter().zip(&table.lines) {
        let mut values = Vec::with_capacity(row.len());
        for (c, cell) in row.iter().enumerate() {
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(LoadError::Parse {
                        path: path.into(),
                        line,
                        reason: format!("non-numeric cell '{cell}' in column '{}'", table.header[c + 1]),
                    })
                }
            }
        }
        rows.push(values);
    }
    let invalid = |source| LoadError::Invalid { path: path.into(), source };
    let values = Matrix::from_rows(&rows).map_err(invalid)?;
    ExpressionMatrix::new(values, table.ids).map_err(invalid)
}

/// Reads a 0/1 annotation table, rows in file order.
pub fn load_annotations(path: impl AsRef<Path>) -> Result<AnnotationMatrix, LoadError> {
    let path = path.as_ref();
    let table = read_table(path)?;
    let mut values = Vec::with_capacity(table.ids.len() * (table.header.len() - 1));
    for (row, &line) in table.cells.iter().zip(&table.lines) {
        for (c, cell) in row.iter().enumerate() {
            values.push(match cell.as_str() {
                "0" => false,
                "1" => true,
                _ => {
                    return Err(LoadError::Parse {
                        path: path.into(),
                        line,
                        reason: format!("annotation '{cell}' in column '{}' is not 0 or 1", table.header[c + 1]),
                    })
                }
            });
        }
    }
    let n = table.ids.len();
    AnnotationMatrix::new(values, n, table.header[1..].to_vec(), table.ids)
        .map_err(|source| LoadError::Invalid { path: path.into(), source })
}

/// Reorders annotation rows to follow `gene_ids`. Both files must list the
/// same genes.
pub fn align_annotations(
    ann: &AnnotationMatrix,
    gene_ids: &[String],
    path: impl AsRef<Path>,
) -> Result<AnnotationMatrix, LoadError> {
    let path = path.as_ref();
    let expression: HashMap<&str, usize> = gene_ids.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
    if let Some(g) = ann.gene_ids().iter().find(|g| !expression.contains_key(g.as_str())) {
        return Err(LoadError::Mismatch { path: path.into(), gene: g.clone(), reason: "is missing from the expression data" });
    }
    let annotated: HashMap<&str, usize> = ann.gene_ids().iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
    let mut values = Vec::with_capacity(gene_ids.len() * ann.n_classes());
    for g in gene_ids {
        let Some(&row) = annotated.get(g.as_str()) else {
            return Err(LoadError::Mismatch { path: path.into(), gene: g.clone(), reason: "has expression data but no annotation row" });
        };
        values.extend((0..ann.n_classes()).map(|c| ann.get(row, c)));
    }
    AnnotationMatrix::new(values, gene_ids.len(), ann.class_ids().to_vec(), gene_ids.to_vec())
        .map_err(|source| LoadError::Invalid { path: path.into(), source })
}

fn tsv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().delimiter(b'\t').from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("fields are valid UTF-8")
}

/// Tab-separated expression table. Values use the shortest representation
/// that parses back to the same `f64`.
pub fn render_expression(x: &ExpressionMatrix) -> String {
    let mut w = tsv_writer();
    let mut header = vec!["gene_id".to_owned()];
    header.extend((1..=x.n_experiments()).map(|j| format!("E{j:02}")));
    w.write_record(&header).unwrap();
    for (i, id) in x.gene_ids().iter().enumerate() {
        let mut record = vec![id.clone()];
        record.extend(x.values().row(i).iter().map(|v| v.to_string()));
        w.write_record(&record).unwrap();
    }
    finish(w)
}

pub fn render_annotations(ann: &AnnotationMatrix) -> String {
    let mut w = tsv_writer();
    let mut header = vec!["gene_id".to_owned()];
    header.extend(ann.class_ids().iter().cloned());
    w.write_record(&header).unwrap();
    for (i, id) in ann.gene_ids().iter().enumerate() {
        let mut record = vec![id.clone()];
        record.extend((0..ann.n_classes()).map(|c| if ann.get(i, c) { "1" } else { "0" }.to_owned()));
        w.write_record(&record).unwrap();
    }
    finish(w)
}

/// Two columns: gene id and zero-based cluster index.
pub fn render_assignments(gene_ids: &[String], labels: &[usize]) -> String {
    let mut w = tsv_writer();
    w.write_record(["gene_id", "cluster"]).unwrap();
    for (id, label) in gene_ids.iter().zip(labels) {
        w.write_record([id.as_str(), &label.to_string()]).unwrap();
    }
    finish(w)
}

/// Edge list of the co-expression graph, one unordered pair per row.
pub fn render_adjacency(gene_ids: &[String], edges: impl Iterator<Item = (usize, usize)>) -> String {
    let mut w = tsv_writer();
    w.write_record(["gene_a", "gene_b"]).unwrap();
    for (i, j) in edges {
        w.write_record([gene_ids[i].as_str(), gene_ids[j].as_str()]).unwrap();
    }
    finish(w)
}
