//! End-to-end runs of the installed binary.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use cartfact::factorizer::isomorphism_check_small;
use cartfact::Graph;

const BIN: &str = env!("CARGO_BIN_EXE_cartfact");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_q3(dir: &Path) -> String {
    let path = dir.join("q3.el");
    fs::write(
        &path,
        "0 1\n0 2\n1 3\n2 3\n0 4\n1 5\n2 6\n3 7\n4 5\n4 6\n5 7\n6 7\n",
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn delta_labels_the_cube() {
    let dir = tempfile::tempdir().unwrap();
    let q3 = write_q3(dir.path());
    let out = stdout(&run(&["delta", &q3]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("# cartfact v1"));
    let data: Vec<&str> = lines.collect();
    assert_eq!(data.len(), 12);
    let classes: std::collections::HashSet<&str> = data
        .iter()
        .map(|l| l.split_whitespace().nth(2).unwrap())
        .collect();
    assert_eq!(classes.len(), 3);
}

#[test]
fn product_output_feeds_factorize() {
    let dir = tempfile::tempdir().unwrap();
    let star = dir.path().join("star.el");
    fs::write(&star, "0 1\n0 2\n0 3\n").unwrap();
    let path = dir.path().join("path.el");
    fs::write(&path, "0 1\n1 2\n").unwrap();
    let product_file = dir.path().join("product.el");
    let out = run(&[
        "product",
        "--factors",
        star.to_str().unwrap(),
        path.to_str().unwrap(),
        "-o",
        product_file.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // comment lines carry one "# class u v" triple per edge
    let text = fs::read_to_string(&product_file).unwrap();
    let color_lines = text
        .lines()
        .skip(2)
        .filter(|l| l.starts_with('#'))
        .count();
    assert_eq!(color_lines, 17);

    // the colored edge list is still a loadable edge list
    let out = stdout(&run(&["factorize", product_file.to_str().unwrap()]));
    let factors = parse_factors(&out);
    assert_eq!(factors.len(), 2);
    let truth = [
        Graph::from_edges(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap(),
        Graph::from_edges(3, vec![(0, 1), (1, 2)]).unwrap(),
    ];
    let direct = isomorphism_check_small(&factors[0], &truth[0]).unwrap()
        && isomorphism_check_small(&factors[1], &truth[1]).unwrap();
    let crossed = isomorphism_check_small(&factors[0], &truth[1]).unwrap()
        && isomorphism_check_small(&factors[1], &truth[0]).unwrap();
    assert!(direct || crossed);

    let rows = out
        .lines()
        .skip_while(|l| !l.starts_with("embedding"))
        .skip(1)
        .count();
    assert_eq!(rows, 12);
}

fn parse_factors(out: &str) -> Vec<Graph> {
    let mut factors = Vec::new();
    let mut lines = out.lines().peekable();
    while let Some(line) = lines.next() {
        let Some(rest) = line.strip_prefix("factor position ") else {
            continue;
        };
        let fields: Vec<&str> = rest.split_whitespace().collect();
        let n: usize = fields[2].parse().unwrap();
        let m: usize = fields[4].parse().unwrap();
        let mut edges = Vec::new();
        for _ in 0..m {
            let edge = lines.next().unwrap();
            let mut it = edge.split_whitespace();
            edges.push((
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            ));
        }
        factors.push(Graph::from_edges(n, edges).unwrap());
    }
    factors
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let q3 = write_q3(dir.path());
    assert_eq!(run(&["delta", &q3]).stdout, run(&["delta", &q3]).stdout);
    let experiment = [
        "approx",
        "--experiment",
        "--runs",
        "4",
        "--seed",
        "7",
        "--threshold",
        "2",
    ];
    assert_eq!(run(&experiment).stdout, run(&experiment).stdout);
}

#[test]
fn exit_codes_separate_domain_and_usage() {
    let dir = tempfile::tempdir().unwrap();
    let disc = dir.path().join("disconnected.el");
    fs::write(&disc, "0 1\n2 3\n").unwrap();
    let q3 = write_q3(dir.path());

    let out = run(&["delta", disc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["psp", &q3, "--center", "99"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["perturb", &q3, "--del", "1", "--add", "0"]);
    assert_eq!(out.status.code(), Some(2), "missing --seed must be a usage error");

    let out = run(&["delta", "--bogus", &q3]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "approx", "--experiment", "--runs", "2", "--threshold", "2",
    ]);
    assert_eq!(out.status.code(), Some(2), "experiments need --seed");
}

#[test]
fn perturb_reports_its_edits() {
    let dir = tempfile::tempdir().unwrap();
    let q3 = write_q3(dir.path());
    let out = stdout(&run(&["perturb", &q3, "--del", "1", "--add", "0", "--seed", "0"]));
    let edges = out.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(edges, 11);
    assert!(out.lines().any(|l| l == "# edit delete 3 7"));
}

#[test]
fn experiment_rows_have_all_report_fields() {
    let out = stdout(&run(&[
        "approx",
        "--experiment",
        "--runs",
        "5",
        "--seed",
        "100",
        "--threshold",
        "2",
    ]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("# cartfact v1"));
    assert_eq!(
        lines.next(),
        Some("seed,region_size,class_count,color_accuracy,scored_edges,vertices_retained,factor_verdicts")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert_eq!(row.split(',').count(), 7, "bad row: {row}");
    }
}

#[test]
fn thread_cap_still_computes() {
    let dir = tempfile::tempdir().unwrap();
    let q3 = write_q3(dir.path());
    let out = Command::new(BIN)
        .env("CARTFACT_THREADS", "0")
        .args(["delta", &q3])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(out.stdout, run(&["delta", &q3]).stdout);
}

#[test]
fn verify_passes_on_exact_products() {
    let dir = tempfile::tempdir().unwrap();
    let q3 = write_q3(dir.path());
    let out = stdout(&run(&["verify", &q3]));
    assert!(out.contains("check coordinates ok"));
    assert!(out.contains("check embedding ok"));
    assert!(out.contains("reconstruction exact"));
    assert!(out.contains("classes 3"));
}

#[test]
fn stdin_is_an_input() {
    let mut child = Command::new(BIN)
        .args(["delta"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"0 1\n1 2\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
}
