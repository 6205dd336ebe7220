use std::fs;
use std::path::{Path, PathBuf};

use hyperlap_cli::io::{render_annotations, render_expression};
use hyperlap_cli::*;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn tiny_expression_fixture() {
    let x = load_expression(fixture("tiny_expression.tsv")).unwrap();
    assert_eq!(x.n_genes(), 3);
    assert_eq!(x.n_experiments(), 2);
    assert_eq!(x.gene_ids(), ["YAL001C", "YAL002W", "YAL003W"]);
    assert_eq!(x.values().as_slice(), &[0.5, -1.25, 2.0, 0.35, -0.0, 7.0]);
}

#[test]
fn comma_delimited_expression() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "x.csv", "id,a,b,c\ng1, 1,2,3\ng2,4,5,6\n");
    let x = load_expression(&p).unwrap();
    assert_eq!(x.values().row(0), &[1.0, 2.0, 3.0]);
}

#[test]
fn expression_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("id\ta\tb\ng1\t1\t2\ng2\t3\n", "x.tsv:3: expected 3 cells, found 2"),
        ("id\ta\tb\ng1\t1\t2\ng2\t3\t\n", "x.tsv:3: missing value in column 'b'"),
        ("id\ta\tb\ng1\t1\tup\n", "x.tsv:2: non-numeric cell 'up' in column 'b'"),
        ("id\ta\tb\ng1\t1\tNaN\n", "x.tsv:2: non-numeric cell 'NaN'"),
        ("id\ta\tb\ng1\t1\t2\ng2\t1\t3\ng1\t0\t0\n", "x.tsv:4: duplicate gene id 'g1' (first seen on line 2)"),
        ("id\ta\tb\n", "x.tsv:1: no data rows"),
    ];
    for (text, want) in cases {
        let p = write(dir.path(), "x.tsv", text);
        let msg = load_expression(&p).unwrap_err().to_string();
        assert!(msg.contains(want), "{msg:?} should contain {want:?}");
    }
    let missing = load_expression(dir.path().join("absent.tsv")).unwrap_err();
    assert!(matches!(missing, LoadError::Io { .. }));
    assert!(missing.to_string().contains("absent.tsv"));
}

#[test]
fn annotations_parse_and_align() {
    let x = load_expression(fixture("tiny_expression.tsv")).unwrap();
    let raw = load_annotations(fixture("tiny_annotations.csv")).unwrap();
    assert_eq!(raw.gene_ids(), ["YAL003W", "YAL001C", "YAL002W"]);
    assert_eq!(raw.class_ids(), ["GO:1", "GO:2"]);
    let ann = align_annotations(&raw, x.gene_ids(), "a.csv").unwrap();
    assert_eq!(ann.gene_ids(), x.gene_ids());
    assert_eq!(ann.column(0), vec![false, true, true]);
    assert_eq!(ann.column(1), vec![true, true, false]);
}

#[test]
fn annotation_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "a.tsv", "gene\tc1\ng1\t1\ng2\t2\n");
    let msg = load_annotations(&p).unwrap_err().to_string();
    assert!(msg.contains("a.tsv:3: annotation '2' in column 'c1' is not 0 or 1"), "{msg}");

    let ids: Vec<String> = ["g1", "g2"].map(String::from).to_vec();
    let extra = write(dir.path(), "b.tsv", "gene\tc1\ng1\t1\ng2\t0\ng9\t1\n");
    let msg = align_annotations(&load_annotations(&extra).unwrap(), &ids, &extra).unwrap_err().to_string();
    assert!(msg.contains("gene 'g9' is missing from the expression data"), "{msg}");

    let short = write(dir.path(), "c.tsv", "gene\tc1\ng1\t1\n");
    let msg = align_annotations(&load_annotations(&short).unwrap(), &ids, &short).unwrap_err().to_string();
    assert!(msg.contains("gene 'g2' has expression data but no annotation row"), "{msg}");
}

#[test]
fn written_tables_read_back_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec { n_genes: 40, n_experiments: 6, n_modules: 4, n_classes: 3, noise: 0.7, seed: 9 };
    let data = generate_synthetic(&spec).unwrap();
    let xp = write(dir.path(), "x.tsv", &render_expression(&data.expression));
    let ap = write(dir.path(), "a.tsv", &render_annotations(&data.annotations));
    assert_eq!(load_expression(&xp).unwrap(), data.expression);
    assert_eq!(load_annotations(&ap).unwrap(), data.annotations);
}

#[test]
fn committed_fixture_matches_the_generator() {
    let data = generate_synthetic(&SyntheticSpec::default()).unwrap();
    let expression = fs::read_to_string(fixture("synthetic_expression.tsv")).unwrap();
    let annotations = fs::read_to_string(fixture("synthetic_annotations.tsv")).unwrap();
    assert_eq!(expression, render_expression(&data.expression));
    assert_eq!(annotations, render_annotations(&data.annotations));
}
