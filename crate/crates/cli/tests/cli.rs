use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use hiertag::hierarchy::{binary_tree, save_hierarchy};
use tempfile::TempDir;

fn hiertag() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hiertag"));
    cmd.env_remove("HIERTAG_THREADS");
    cmd
}

fn run(dir: &Path, args: &[&str]) -> Output {
    hiertag().current_dir(dir).args(args).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// A 63-tag binary tree and a corpus generated from it.
fn setup() -> (TempDir, PathBuf) {
    let dir = TempDir::new().unwrap();
    save_hierarchy(&binary_tree(6), dir.path().join("exact.tsv")).unwrap();
    ok(dir.path(), &["generate", "--hierarchy", "exact.tsv", "--objects", "20000", "--seed", "5", "--out", "objects.tsv"]);
    let root = dir.path().to_path_buf();
    (dir, root)
}

fn report_value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}\t")))
        .unwrap_or_else(|| panic!("no {key} in report:\n{report}"))
        .to_string()
}

#[test]
fn generate_writes_requested_objects_and_is_deterministic() {
    let (_tmp, dir) = setup();
    let text = fs::read_to_string(dir.join("objects.tsv")).unwrap();
    assert_eq!(text.lines().count(), 20000);
    ok(&dir, &["generate", "--hierarchy", "exact.tsv", "--objects", "20000", "--seed", "5", "--out", "again.tsv"]);
    assert_eq!(fs::read(dir.join("again.tsv")).unwrap(), text.as_bytes());

    let manifest = fs::read_to_string(dir.join("objects.tsv.manifest")).unwrap();
    assert!(manifest.starts_with("subcommand\tgenerate\n"));
    assert!(manifest.contains("arg.objects\t20000\n"));
    assert!(manifest.contains("arg.tags-per-object\tpoisson:3\n"));
    assert!(manifest.contains("seed\t5\n"));
    assert!(manifest.contains("duration_secs\t"));
}

#[test]
fn generate_without_hierarchy_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["generate", "--objects", "10"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--hierarchy"));
}

#[test]
fn thread_count_does_not_change_results() {
    let (_tmp, dir) = setup();
    let one = ok(&dir, &["--threads", "1", "generate", "--hierarchy", "exact.tsv", "--objects", "3000", "--seed", "9"]);
    let many = hiertag()
        .current_dir(&dir)
        .env("HIERTAG_THREADS", "4")
        .args(["generate", "--hierarchy", "exact.tsv", "--objects", "3000", "--seed", "9"])
        .output()
        .unwrap();
    assert!(many.status.success());
    assert_eq!(one.as_bytes(), many.stdout);
}

#[test]
fn algorithm_b_gives_a_tree_on_the_benchmark() {
    let (_tmp, dir) = setup();
    let edges = ok(&dir, &["extract", "--corpus", "objects.tsv", "--algorithm", "b"]);
    assert_eq!(edges.lines().count(), 62);
    assert!(edges.lines().all(|l| l.split('\t').count() == 2));
}

#[test]
fn unknown_algorithm_is_rejected() {
    let (_tmp, dir) = setup();
    let out = run(&dir, &["extract", "--corpus", "objects.tsv", "--algorithm", "c"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("possible values"));
}

#[test]
fn default_omega_matches_explicit_flag() {
    let (_tmp, dir) = setup();
    let plain = ok(&dir, &["extract", "--corpus", "objects.tsv", "--algorithm", "a"]);
    let flagged = ok(&dir, &["extract", "--corpus", "objects.tsv", "--algorithm", "a", "--omega", "0.4"]);
    assert_eq!(plain, flagged);
    assert_eq!(plain.lines().count(), 62);
}

#[test]
fn baselines_run() {
    let (_tmp, dir) = setup();
    let heymann = ok(&dir, &["extract", "--corpus", "objects.tsv", "--algorithm", "heymann"]);
    assert!(!heymann.contains("<root>"));
    let kept = ok(&dir, &["extract", "--corpus", "objects.tsv", "--algorithm", "heymann", "--keep-synthetic-root"]);
    assert!(kept.lines().any(|l| l.starts_with("<root>\t")));
    assert_eq!(kept.lines().count(), 63);
    ok(&dir, &["extract", "--corpus", "objects.tsv", "--algorithm", "schmitz", "--t-subsume", "0.7"]);
}

#[test]
fn objects_with_ids() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("o.tsv"), "# photos\np1\ta\tb\np2\ta\tb\np3\ta\n").unwrap();
    let edges = ok(dir.path(), &["extract", "--corpus", "o.tsv", "--with-ids", "--algorithm", "a"]);
    assert!(!edges.contains("p1"));
    assert_eq!(edges.lines().count(), 1);
}

#[test]
fn evaluate_identical_and_with_lmi() {
    let (_tmp, dir) = setup();
    let report = ok(&dir, &["evaluate", "--exact", "exact.tsv", "--recon", "exact.tsv"]);
    assert_eq!(report_value(&report, "r_E"), "1.000000");
    assert_eq!(report_value(&report, "nmi"), "1.000000");
    assert_eq!(report_value(&report, "lmi"), "NA");

    ok(&dir, &["extract", "--corpus", "objects.tsv", "--algorithm", "b", "--out", "recon.tsv"]);
    let report = ok(&dir, &["evaluate", "--exact", "exact.tsv", "--recon", "recon.tsv", "--lmi", "--curve-runs", "10"]);
    let lmi: f64 = report_value(&report, "lmi").parse().unwrap();
    assert!((0.0..=1.0).contains(&lmi));
    assert_eq!(report_value(&report, "N"), "63");
}

#[test]
fn evaluate_names_mismatched_tags() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("e.tsv"), "r\ta\nr\tb\n").unwrap();
    fs::write(dir.path().join("r.tsv"), "r\ta\nr\tstray\n").unwrap();
    let out = run(dir.path(), &["evaluate", "--exact", "e.tsv", "--recon", "r.tsv"]);
    assert!(!out.status.success());
    let msg = stderr(&out);
    assert!(msg.contains("\"b\"") && msg.contains("\"stray\""), "{msg}");

    fs::write(dir.path().join("r.tsv"), "r\ta\n").unwrap();
    assert!(!run(dir.path(), &["evaluate", "--exact", "e.tsv", "--recon", "r.tsv"]).status.success());
    let report = ok(dir.path(), &["evaluate", "--exact", "e.tsv", "--recon", "r.tsv", "--allow-missing"]);
    assert_eq!(report_value(&report, "r_M"), "0.500000");
}

#[test]
fn curve_starts_at_one() {
    let (_tmp, dir) = setup();
    let table = ok(&dir, &["curve", "--hierarchy", "exact.tsv", "--order", "random", "--runs", "10"]);
    let rows: Vec<(f64, f64)> = table
        .lines()
        .map(|l| {
            let (f, i) = l.split_once('\t').unwrap();
            (f.parse().unwrap(), i.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 21);
    assert_eq!(rows[0], (0.0, 1.0));
    assert!(rows.windows(2).all(|w| w[1].1 <= w[0].1));
}

#[test]
fn randomize_identity_and_determinism() {
    let (_tmp, dir) = setup();
    let same = ok(&dir, &["randomize", "--hierarchy", "exact.tsv", "--f", "0", "--seed", "1"]);
    assert_eq!(same, fs::read_to_string(dir.join("exact.tsv")).unwrap());
    let args = ["randomize", "--hierarchy", "exact.tsv", "--order", "top-first", "--f", "0.5", "--seed", "3"];
    let first = ok(&dir, &args);
    assert_eq!(first, ok(&dir, &args));
    assert_ne!(first, same);
}

#[test]
fn manifest_replay_reproduces_output() {
    let (_tmp, dir) = setup();
    ok(&dir, &["randomize", "--hierarchy", "exact.tsv", "--f", "0.3", "--seed", "11", "--out", "rand.tsv"]);
    let original = fs::read(dir.join("rand.tsv")).unwrap();
    fs::remove_file(dir.join("rand.tsv")).unwrap();
    ok(&dir, &["--manifest", "rand.tsv.manifest"]);
    assert_eq!(fs::read(dir.join("rand.tsv")).unwrap(), original);

    ok(&dir, &["extract", "--corpus", "objects.tsv", "--algorithm", "b", "--force-single-root", "--out", "b.tsv"]);
    let original = fs::read(dir.join("b.tsv")).unwrap();
    fs::remove_file(dir.join("b.tsv")).unwrap();
    ok(&dir, &["--manifest", "b.tsv.manifest"]);
    assert_eq!(fs::read(dir.join("b.tsv")).unwrap(), original);
}

#[test]
fn stdout_runs_report_manifest_on_stderr() {
    let (_tmp, dir) = setup();
    let out = run(&dir, &["curve", "--hierarchy", "exact.tsv", "--runs", "2", "--seed", "4"]);
    assert!(out.status.success());
    let manifest = stderr(&out);
    assert!(manifest.starts_with("subcommand\tcurve\n"));
    assert!(manifest.contains("arg.runs\t2\n") && manifest.contains("seed\t4\n"));
}

#[test]
fn pipeline_reads_stdin() {
    let (_tmp, dir) = setup();
    let objects = fs::read(dir.join("objects.tsv")).unwrap();
    let mut child = hiertag()
        .current_dir(&dir)
        .args(["extract", "--corpus", "-", "--algorithm", "b"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&objects).unwrap();
    let piped = child.wait_with_output().unwrap();
    assert!(piped.status.success());
    assert_eq!(
        String::from_utf8(piped.stdout).unwrap(),
        ok(&dir, &["extract", "--corpus", "objects.tsv", "--algorithm", "b"])
    );
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("cyc.tsv"), "a\tb\nb\ta\n").unwrap();
    let out = run(dir.path(), &["curve", "--hierarchy", "cyc.tsv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: "));
    assert!(!run(dir.path(), &["curve", "--hierarchy", "missing.tsv"]).status.success());
    assert!(!run(dir.path(), &["--threads", "0", "curve", "--hierarchy", "cyc.tsv"]).status.success());
}
