use std::path::{Path, PathBuf};
use std::process::Command as Process;

use clap::Parser;
use qecmarkov::experiments::DecayRecord;
use qecmarkov::linalg::format_float;
use qecmarkov_cli::{run, Cli, RunConfig};

fn config(dir: &Path, args: &[&str]) -> RunConfig {
    let mut argv = vec!["qecmarkov"];
    argv.extend_from_slice(args);
    let dir = dir.to_str().unwrap();
    argv.extend_from_slice(&["--output-dir", dir]);
    RunConfig::from_cli(Cli::try_parse_from(argv).unwrap()).unwrap()
}

fn run_in(dir: &Path, args: &[&str]) -> Vec<PathBuf> {
    run(&config(dir, args)).unwrap()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn bin(args: &[&str], envs: &[(&str, &Path)]) -> (i32, String, String) {
    let mut cmd = Process::new(env!("CARGO_BIN_EXE_qecmarkov"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn encoding_unitary_table() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["encoding-unitary", "--code", "rep3", "--formats", "csv"]);
    let expected = "logical,syndrome,encoded_state\n\
                    0,00,|000>\n0,01,|001>\n0,10,|100>\n0,11,|010>\n\
                    1,00,|111>\n1,01,|110>\n1,10,|011>\n1,11,|101>\n";
    assert_eq!(read(&dir.path().join("encoding-unitary.csv")), expected);
}

#[test]
fn decay_rep3_shape_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["decay", "--code", "rep3", "--p", "0.1", "--rounds", "60"]);
    let text = read(&dir.path().join("decay_p0.1.csv"));
    let rec = DecayRecord::from_csv(&text).unwrap();
    assert_eq!(rec.to_csv(), text);
    assert_eq!((rec.code.as_str(), rec.p, rec.q.len()), ("rep3", 0.1, 61));
    assert!((rec.q[1] - 1.0).abs() < 1e-12);
    for m in 1..60 {
        assert!(rec.q[m + 1] <= rec.q[m] + 1e-15, "q not monotone at m = {m}");
    }
    assert!(rec.q[60] < rec.q[2]);
    let svg = read(&dir.path().join("decay.svg"));
    assert!(svg.starts_with("<svg") && svg.matches("<polyline").count() == 3);
}

#[test]
fn outputs_are_byte_identical() {
    let args: &[&str] = &["decay", "--code", "rep3", "--p", "0.05,0.1", "--rounds", "30", "--log-y"];
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let fa = run_in(a.path(), args);
    let fb = run_in(b.path(), args);
    assert_eq!(fa.len(), 5);
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(x.file_name(), y.file_name());
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap(), "{x:?}");
    }
    let args: &[&str] = &["composability", "--code", "rep3", "--seed", "7"];
    let (fa, fb) = (run_in(a.path(), args), run_in(b.path(), args));
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
    }
    let csv = read(&a.path().join("composability.csv"));
    assert!(csv.contains("noisy-recovery,0.1,,"));
    assert!(csv.contains("random-with-recovery,,7,"));
}

fn numeric_round_trip(text: &str, skip_cols: usize) {
    let mut lines = text.lines();
    let mut rebuilt = format!("{}\n", lines.next().unwrap());
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let mut out: Vec<String> = cells[..skip_cols].iter().map(|s| s.to_string()).collect();
        for c in &cells[skip_cols..] {
            out.push(if c.is_empty() { String::new() } else { format_float(c.parse::<f64>().unwrap()) });
        }
        rebuilt += &format!("{}\n", out.join(","));
    }
    assert_eq!(rebuilt, text);
}

#[test]
fn tabular_csvs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["transition-matrix", "--code", "rep3", "--p", "0.1"]);
    let tm = read(&dir.path().join("transition-matrix_p0.1.csv"));
    assert!(tm.starts_with("to\\from,000,111,001,110,100,011,010,101\n"));
    assert_eq!(tm.lines().count(), 9);
    numeric_round_trip(&tm, 1);
    numeric_round_trip(&read(&dir.path().join("transition-matrix_p0.1_eigenvalues.csv")), 0);

    run_in(dir.path(), &["leading-order", "--code", "rep3", "--p", "0.001,0.01"]);
    numeric_round_trip(&read(&dir.path().join("leading-order.csv")), 0);
}

#[test]
fn cube_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["cube-graph", "--p", "0.1"]);
    let graph: serde_json::Value = serde_json::from_str(&read(&dir.path().join("cube-graph_p0.1.json"))).unwrap();
    assert_eq!(graph["nodes"].as_array().unwrap().len(), 8);
    assert_eq!(graph["edges"].as_array().unwrap().len(), 32);
    assert!(read(&dir.path().join("cube-graph_p0.1.dot")).starts_with("digraph"));
}

#[test]
fn five_qubit_theorem1_verdict() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["verify-theorem1", "--code", "five-qubit", "--p", "0.05"]);
    let v: serde_json::Value = serde_json::from_str(&read(&dir.path().join("verify-theorem1_p0.05.json"))).unwrap();
    assert_eq!(v["violated"], true);
    assert_eq!(v["logical_channel"]["is_pauli_channel"], true);
    assert!(v["witness"]["s1"].is_string());
    let manifest: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("verify-theorem1.manifest.json"))).unwrap();
    assert_eq!(manifest["code_fingerprint"], qecmarkov::builtin_five_qubit().fingerprint());
    assert_eq!(manifest["files"][0], "verify-theorem1_p0.05.json");
}

#[test]
fn code_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep3.code");
    std::fs::write(&path, qecmarkov::builtin_rep3().to_code_file()).unwrap();
    run_in(dir.path(), &["encoding-unitary", "--code", path.to_str().unwrap(), "--output", "from_file"]);
    run_in(dir.path(), &["encoding-unitary", "--output", "builtin"]);
    assert_eq!(read(&dir.path().join("from_file.csv")), read(&dir.path().join("builtin.csv")));
}

#[test]
fn exit_codes_and_error_lines() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cases: &[(&[&str], i32, &str)] = &[
        (&["decay", "--p", "1.5"], 2, "config"),
        (&["decay", "--rounds", "0"], 2, "config"),
        (&["decay", "--formats", "dot"], 2, "config"),
        (&["nonsense"], 2, "config"),
        (&["decay", "--code", "/no/such/file"], 2, "config"),
        (&["decay", "--rounds", "100000000"], 3, "capacity"),
        (&["transition-matrix", "--code", "five-qubit"], 4, "validation"),
    ];
    for (args, code, kind) in cases {
        let mut argv = args.to_vec();
        argv.extend_from_slice(&["--output-dir", d]);
        let (status, _, stderr) = bin(&argv, &[]);
        assert_eq!(status, *code, "{args:?}: {stderr}");
        assert_eq!(stderr.lines().count(), 1, "{stderr}");
        let line: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
        assert_eq!(line["error"], *kind);
        assert_eq!(line["exit_code"], *code);
    }
    assert_eq!(bin(&["--help"], &[]).0, 0);
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let (status, stdout, _) = bin(&["encoding-unitary"], &[("QECMARKOV_OUTPUT_DIR", dir.path())]);
    assert_eq!(status, 0);
    assert_eq!(stdout.lines().count(), 3);
    assert!(dir.path().join("encoding-unitary.manifest.json").exists());
}
