//! End-to-end tests for the rackkit binary: output formats, exit codes,
//! determinism, and the cache directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rackkit")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn run_with_env(args: &[&str], key: &str, value: &Path) -> Output {
    Command::new(bin()).args(args).env(key, value).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rackkit-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";

#[test]
fn space_homology_dihedral_three() {
    let out = run(&["space", "homology", "--rack", "dihedral:3", "--deg", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "Z^1\n1;\n");
}

#[test]
fn space_homology_dihedral_four_torsion() {
    let out = run(&["space", "homology", "--rack", "dihedral:4", "--deg", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "Z^4 + Z/2 + Z/2\n4;2,2\n");
}

#[test]
fn space_homology_extended_shift() {
    let out = run(&[
        "space", "homology", "--rack", "dihedral:3", "--space", "extended", "--deg", "1",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "Z^1\n1;\n");
}

#[test]
fn homology_is_deterministic() {
    let args = ["space", "homology", "--rack", "dihedral:4", "--deg", "2"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn rack_make_check_orbits() {
    let out = run(&["rack", "make", "dihedral:3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{\"size\":3,\"table\":[[0,2,1],[2,1,0],[1,0,2]]}\n");

    let dir = tmp_dir("rack");
    let rack_file = dir.join("d3.json");
    let out = run(&["rack", "make", "dihedral:3", "-o", rack_file.to_str().unwrap()]);
    assert!(out.status.success());
    // byte-exact file: no trailing whitespace
    let bytes = fs::read(&rack_file).unwrap();
    assert_eq!(bytes, b"{\"size\":3,\"table\":[[0,2,1],[2,1,0],[1,0,2]]}");

    let out = run(&["rack", "check", rack_file.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "ok\n");

    let bad = write(&dir, "bad.json", "{\"size\":2,\"table\":[[0,1],[1,0]]}");
    let out = run(&["rack", "check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("rack identity"));

    let out = run(&["rack", "orbits", "dihedral:4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{0,2} {1,3}\n");

    let out = run(&["rack", "orbits", "perm:(0 1 2)(3 4)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{0,1,2} {3,4}\n");
}

#[test]
fn diagram_commands() {
    let dir = tmp_dir("diagram");
    let trefoil = write(&dir, "trefoil.gauss", TREFOIL);

    let out =
        run(&["diagram", "colorings", "--gauss", trefoil.to_str().unwrap(), "--rack", "dihedral:3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "9\n");

    let out = run(&["diagram", "writhe", "--gauss", trefoil.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "3\n");

    let out = run(&["diagram", "rackpres", "--gauss", trefoil.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("generators: a0 a1 a2\n"));
    assert_eq!(text.lines().count(), 4);

    let pd = write(&dir, "trefoil.pd", "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]");
    let out = run(&["diagram", "writhe", "--pd", pd.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-3\n");
}

#[test]
fn parse_errors_exit_two() {
    let dir = tmp_dir("errors");
    let bad = write(&dir, "bad.gauss", "O1+ U1-");
    let out = run(&["diagram", "writhe", "--gauss", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sign mismatch"));

    let out = run(&["space", "homology", "--rack", "frob:3", "--deg", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["space", "homology", "--rack", "dihedral:3"]);
    assert_eq!(out.status.code(), Some(2)); // missing --deg is a usage error
}

#[test]
fn diagram_class_of_labelled_trefoil() {
    let dir = tmp_dir("class");
    let trefoil = write(&dir, "trefoil.gauss", TREFOIL);
    let labels = write(
        &dir,
        "labels.json",
        "{\"rack\":\"dihedral:3\",\"labels\":{\"0\":0,\"1\":0,\"2\":0}}",
    );
    let out = run(&[
        "diagram",
        "class",
        "--gauss",
        trefoil.to_str().unwrap(),
        "--labels",
        labels.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("Z^1 ["), "got {text}");

    // a labelling violating the crossing relation is a verification failure
    let bad = write(
        &dir,
        "bad-labels.json",
        "{\"rack\":\"dihedral:3\",\"labels\":{\"0\":0,\"1\":1,\"2\":0}}",
    );
    let out = run(&[
        "diagram",
        "class",
        "--gauss",
        trefoil.to_str().unwrap(),
        "--labels",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn james_validates() {
    let out = run(&[
        "james", "--rack", "dihedral:3", "--n", "1", "--maxdim", "2", "--validate",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("dim 2: 81 cells"));
    assert!(text.ends_with("validate: ok\n"));
}

#[test]
fn moves_reduce_and_replay() {
    let dir = tmp_dir("moves");
    // double kink with writhe zero: reducible to a circle
    let kinks = write(&dir, "kinks.gauss", "U1+ U2- O1+ O2-");
    let out = run(&[
        "moves",
        "reduce",
        "--gauss",
        kinks.to_str().unwrap(),
        "--rack",
        "dihedral:3",
        "--budget",
        "100",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace_text = stdout(&out);
    assert!(!trace_text.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("-> 0"));

    let trace = write(&dir, "trace.txt", &trace_text);
    let out = run(&[
        "moves",
        "replay",
        "--gauss",
        kinks.to_str().unwrap(),
        "--rack",
        "dihedral:3",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("crossings: 0\n"), "got {text}");
    assert!(text.contains("class: Z^1 [0]"), "got {text}");
}

#[test]
fn cache_round_trip() {
    let dir = tmp_dir("cache");
    let args = ["space", "homology", "--rack", "dihedral:3", "--deg", "1"];
    let first = run_with_env(&args, "RACKKIT_CACHE", &dir);
    assert!(first.status.success());
    // cache files appear: a cubical set and one matrix per boundary
    let entries: Vec<String> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert!(entries.iter().any(|e| e.ends_with(".cubset")), "{entries:?}");
    assert!(entries.iter().any(|e| e.ends_with(".b1.mat")), "{entries:?}");
    assert!(entries.iter().any(|e| e.ends_with(".b2.mat")), "{entries:?}");
    // second run hits the cache and prints the same bytes
    let second = run_with_env(&args, "RACKKIT_CACHE", &dir);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
    // corrupt cache: warn and rebuild
    for e in &entries {
        if e.ends_with(".b1.mat") {
            fs::write(dir.join(e), "garbage").unwrap();
        }
    }
    let third = run_with_env(&args, "RACKKIT_CACHE", &dir);
    assert!(third.status.success());
    assert_eq!(first.stdout, third.stdout);
    assert!(String::from_utf8_lossy(&third.stderr).contains("cache"));
}
