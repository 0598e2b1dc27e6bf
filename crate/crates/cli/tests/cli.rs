//! End-to-end exercises of the binary: exit codes, file contents, stderr
//! diagnostics.

use crescent_core::{ConfigFile, Rational, SqDistConfig};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crescent"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn tmpfile(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_rejects_n_below_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmpfile(&dir, "c.json");
    let result = run(&["construct", "--n", "2", "--out", path_str(&out)]);
    assert_eq!(code(&result), 2);
    assert!(!out.exists());
}

#[test]
fn construct_three_writes_the_line_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmpfile(&dir, "c3.json");
    let result = run(&["construct", "--n", "3", "--out", path_str(&out)]);
    assert_eq!(code(&result), 0, "stderr: {}", stderr(&result));
    let file = ConfigFile::read_from(&out).unwrap();
    assert_eq!(file.config.n(), 3);
    assert_eq!(file.config.dim(), 1);
    assert_eq!(file.config.sq_dist(0, 1), &rat(1));
    assert_eq!(file.config.sq_dist(0, 2), &rat(4));
    assert_eq!(file.config.sq_dist(1, 2), &rat(1));
    assert!(file.trace.is_some());
}

#[test]
fn construct_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for n in ["4", "8"] {
        let out = tmpfile(&dir, &format!("c{n}.json"));
        let built = run(&["construct", "--n", n, "--out", path_str(&out)]);
        assert_eq!(code(&built), 0, "stderr: {}", stderr(&built));
        let verified = run(&["verify", path_str(&out)]);
        assert_eq!(code(&verified), 0, "stderr: {}", stderr(&verified));
    }
}

#[test]
fn construct_accepts_seed_base() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmpfile(&dir, "seeded.json");
    let result = run(&[
        "construct",
        "--n",
        "4",
        "--seed-base",
        "1,1/2",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&result), 0, "stderr: {}", stderr(&result));
    let file = ConfigFile::read_from(&out).unwrap();
    let trace = file.trace.unwrap();
    assert_eq!(trace.base, (rat(1), Rational::new(1.into(), 2.into())));
    assert_eq!(trace.retries, 0);
}

#[test]
fn construct_rejects_malformed_seed_base() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmpfile(&dir, "bad.json");
    for bad in ["1", "1;2", "1/0,2", "a,b"] {
        let result = run(&[
            "construct",
            "--n",
            "4",
            "--seed-base",
            bad,
            "--out",
            path_str(&out),
        ]);
        assert_eq!(code(&result), 2, "seed {bad:?} should be rejected");
    }
}

#[test]
fn verify_accepts_the_lattice_fixture_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = tmpfile(&dir, "fixture.json");
    let fixture = ConfigFile::from_lattice_points(crescent_core::figure1_lattice_points()).unwrap();
    fixture.write_to(&path).unwrap();
    let result = run(&["verify", path_str(&path)]);
    assert_eq!(code(&result), 0, "stderr: {}", stderr(&result));
    // The stored lattice points round-trip with the exact matrix.
    let back = ConfigFile::read_from(&path).unwrap();
    assert_eq!(back.lattice_points.unwrap().len(), 8);
}

fn write_unit_square(path: &Path) {
    let config = SqDistConfig::from_fn(2, 4, |i, j| match (i, j) {
        (0, 3) | (1, 2) => rat(2),
        _ => rat(1),
    })
    .unwrap();
    ConfigFile::new(config).write_to(path).unwrap();
}

#[test]
fn verify_flags_the_concyclic_square() {
    let dir = tempfile::tempdir().unwrap();
    let path = tmpfile(&dir, "square.json");
    write_unit_square(&path);
    let result = run(&["verify", path_str(&path)]);
    assert_eq!(code(&result), 1);
    let diag = stderr(&result);
    assert!(diag.contains("Cosphericity"), "stderr: {diag}");
    assert!(diag.contains("[0, 1, 2, 3]"), "stderr: {diag}");
}

#[test]
fn verify_rejects_malformed_rationals_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = tmpfile(&dir, "bad.json");
    let good = tmpfile(&dir, "good.json");
    write_unit_square(&good);
    let text = std::fs::read_to_string(&good)
        .unwrap()
        .replace("\"2\"", "\"1/0\"");
    std::fs::write(&path, text).unwrap();
    let result = run(&["verify", path_str(&path)]);
    assert_eq!(code(&result), 2);
}

#[test]
fn verify_rejects_missing_file() {
    let result = run(&["verify", "/nonexistent/nope.json"]);
    assert_eq!(code(&result), 2);
}

#[test]
fn search_hex0_is_too_small() {
    let result = run(&["search", "--region", "hex:0", "--n", "3"]);
    assert_eq!(code(&result), 2);
    assert!(stderr(&result).contains("fewer than"), "stderr: {}", stderr(&result));
}

#[test]
fn search_hex1_matches_library_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmpfile(&dir, "h1n3.jsonl");
    let result = run(&["search", "--region", "hex:1", "--n", "3", "--out", path_str(&out)]);
    assert_eq!(code(&result), 0, "stderr: {}", stderr(&result));
    let body = std::fs::read_to_string(&out).unwrap();

    use crescent_core::{results_to_jsonl, search, HexRegion, Region, SearchSpec};
    let spec = SearchSpec::new(Region::Hex(HexRegion::new(1)), 3);
    let (results, _) = search(&spec, 1).unwrap();
    assert_eq!(body, results_to_jsonl(&results));
    assert!(!body.is_empty());
}

#[test]
fn search_h2_n9_finds_nothing_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmpfile(&dir, "h2n9.jsonl");
    let result = run(&["search", "--region", "hex:2", "--n", "9", "--out", path_str(&out)]);
    assert_eq!(code(&result), 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "");
    assert!(stderr(&result).contains("0 result(s)"));
}

#[test]
fn search_accepts_a_points_file_region() {
    let dir = tempfile::tempdir().unwrap();
    let region = tmpfile(&dir, "region.json");
    // H(1) written out explicitly.
    std::fs::write(
        &region,
        "[[-1,0],[-1,1],[0,-1],[0,0],[0,1],[1,-1],[1,0]]",
    )
    .unwrap();
    let from_file = run(&["search", "--region", path_str(&region), "--n", "3"]);
    assert_eq!(code(&from_file), 0);
    let from_hex = run(&["search", "--region", "hex:1", "--n", "3"]);
    assert_eq!(from_file.stdout, from_hex.stdout);
}

#[test]
fn search_progress_lines_go_to_stderr() {
    let with_progress = run(&[
        "search",
        "--region",
        "hex:2",
        "--n",
        "4",
        "--progress-interval",
        "1",
    ]);
    assert_eq!(code(&with_progress), 0);
    let diag = stderr(&with_progress);
    assert!(diag.contains("tasks"), "stderr: {diag}");

    // Progress reporting must not leak into the result stream.
    let silent = run(&["search", "--region", "hex:2", "--n", "4"]);
    assert_eq!(with_progress.stdout, silent.stdout);
}

#[test]
fn search_to_stdout_when_no_out_file() {
    let result = run(&["search", "--region", "hex:1", "--n", "3"]);
    assert_eq!(code(&result), 0);
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.lines().count() > 0);
    assert!(stdout.lines().all(|l| l.starts_with("{\"points\":")));
}

#[test]
fn realize_line_config_recovers_collinear_points() {
    let dir = tempfile::tempdir().unwrap();
    let input = tmpfile(&dir, "line.json");
    let output = tmpfile(&dir, "realized.json");
    let config = SqDistConfig::from_fn(1, 3, |i, j| if (i, j) == (0, 2) { rat(4) } else { rat(1) })
        .unwrap();
    ConfigFile::new(config).write_to(&input).unwrap();
    let result = run(&["realize", path_str(&input), "--out", path_str(&output)]);
    assert_eq!(code(&result), 0, "stderr: {}", stderr(&result));
    let realized = ConfigFile::read_from(&output).unwrap();
    let coords = realized.coords_float.unwrap();
    assert_eq!(coords.len(), 3);
    // Distances, not positions, are contractual.
    let d01 = (coords[0][0] - coords[1][0]).abs();
    let d02 = (coords[0][0] - coords[2][0]).abs();
    assert!((d01 - 1.0).abs() < 1e-9);
    assert!((d02 - 2.0).abs() < 1e-9);
}

#[test]
fn realize_rejects_unembeddable_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = tmpfile(&dir, "equilateral.json");
    let output = tmpfile(&dir, "never.json");
    let config = SqDistConfig::from_fn(1, 3, |_, _| rat(1)).unwrap();
    ConfigFile::new(config).write_to(&input).unwrap();
    let result = run(&["realize", path_str(&input), "--out", path_str(&output)]);
    assert_eq!(code(&result), 1);
    assert!(!output.exists());
}

#[test]
fn realize_constructed_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let built = tmpfile(&dir, "c6.json");
    let realized = tmpfile(&dir, "c6r.json");
    assert_eq!(code(&run(&["construct", "--n", "6", "--out", path_str(&built)])), 0);
    let result = run(&["realize", path_str(&built), "--out", path_str(&realized)]);
    assert_eq!(code(&result), 0, "stderr: {}", stderr(&result));
    let file = ConfigFile::read_from(&realized).unwrap();
    let coords = file.coords_float.unwrap();
    assert_eq!(coords.len(), 6);
    assert!(coords.iter().all(|row| row.len() == 4));
}

#[test]
fn unknown_subcommand_exits_two() {
    let result = run(&["frobnicate"]);
    assert_eq!(code(&result), 2);
}
