//! JSON and CSV renderings of an experiment report, and atomic output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hyperlap::ExperimentReport;
use serde::Serialize;

/// Bumped whenever a field of `report.json` changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

/// Digits after the decimal point in `report.csv`.
pub const CSV_PRECISION: usize = 6;

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    generator: &'static str,
    #[serde(flatten)]
    report: &'a ExperimentReport,
}

pub fn render_json(report: &ExperimentReport) -> String {
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        generator: concat!("hyperlap ", env!("CARGO_PKG_VERSION")),
        report,
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("report serializes");
    text.push('\n');
    text
}

/// One row per class with a column per method, then an `average` row.
/// Excluded classes are listed with `excluded` in every method column.
pub fn render_csv(report: &ExperimentReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["class_id".to_owned()];
    header.extend(report.results.iter().map(|r| r.method.title().to_owned()));
    w.write_record(&header).unwrap();

    let fmt = |q: f64| format!("{q:.CSV_PRECISION$}");
    if let Some(first) = report.results.first() {
        for (c, class) in first.classes.iter().enumerate() {
            let mut row = vec![class.class_id.clone()];
            row.extend(report.results.iter().map(|r| fmt(r.classes[c].mean_accuracy)));
            w.write_record(&row).unwrap();
        }
    }
    for class in &report.excluded_classes {
        let mut row = vec![class.class_id.clone()];
        row.extend(report.results.iter().map(|_| "excluded".to_owned()));
        w.write_record(&row).unwrap();
    }
    let mut row = vec!["average".to_owned()];
    row.extend(report.results.iter().map(|r| r.average_accuracy.map_or_else(|| "n/a".to_owned(), fmt)));
    w.write_record(&row).unwrap();

    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// Writes every file to a temporary name in `dir` first, then renames them
/// into place, so a failure part-way leaves no new report behind.
pub fn write_atomically(dir: &Path, files: &[(&str, String)]) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut staged = Vec::with_capacity(files.len());
    let result = (|| {
        for (name, contents) in files {
            let tmp = dir.join(format!(".{name}.partial"));
            staged.push(tmp.clone());
            let mut f = fs::File::create(&tmp)?;
            f.write_all(contents.as_bytes())?;
            f.sync_all()?;
        }
        Ok(())
    })();
    if let Err(e) = result {
        for tmp in &staged {
            let _ = fs::remove_file(tmp);
        }
        return Err(e);
    }
    let mut written = Vec::with_capacity(files.len());
    for ((name, _), tmp) in files.iter().zip(&staged) {
        let target = dir.join(name);
        fs::rename(tmp, &target)?;
        written.push(target);
    }
    Ok(written)
}
