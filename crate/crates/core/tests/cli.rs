use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use isodrum::numspec::parse_spectrum_csv;
use isodrum::permcat::parse_catalog;

fn isodrum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isodrum")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("isodrum-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes() {
    let ok = isodrum(&["verify", "--pair", "7_3"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).trim_end().ends_with("RESULT: PASS"));

    let corrupt = isodrum(&["verify", "--pair", "15_4"]);
    assert_eq!(corrupt.status.code(), Some(1));
    assert!(stdout(&corrupt).contains("corrupt-source"));
    assert!(stdout(&corrupt).trim_end().ends_with("RESULT: FAIL"));

    assert_eq!(isodrum(&["verify", "--pair", "99_9"]).status.code(), Some(2));
    assert_eq!(isodrum(&["gp", "--gon", "4", "--s", "2"]).status.code(), Some(2));
    assert_eq!(isodrum(&["gp", "--gon", "5", "--s", "2", "--t", "2"]).status.code(), Some(2));
    assert_eq!(isodrum(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn build_then_compare_members() {
    let dir = scratch("build");
    let out = dir.join("dom.json");
    assert!(isodrum(&["build", "--pair", "7_1", "--out", s(&out)]).status.success());
    let mut csvs = Vec::new();
    for k in 1..=2 {
        let dom = dir.join(format!("dom-{k}.json"));
        let csv = dir.join(format!("spec-{k}.csv"));
        let o = isodrum(&["spectrum", "fd", "--domain", s(&dom), "--count", "6", "--out", s(&csv)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let values = parse_spectrum_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
        assert_eq!(values.len(), 6);
        csvs.push(csv);
    }
    let cmp = isodrum(&["compare", s(&csvs[0]), s(&csvs[1])]);
    assert_eq!(cmp.status.code(), Some(0));
    assert!(stdout(&cmp).contains("RESULT: PASS"));

    // a square spectrum is not that of the 7_1 domain
    let square = dir.join("square.csv");
    std::fs::write(&square, "index,eigenvalue_pi2_d2\n1,2\n2,5\n3,5\n4,8\n5,10\n6,10\n").unwrap();
    assert_eq!(isodrum(&["compare", s(&csvs[0]), s(&square)]).status.code(), Some(1));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn searched_pairs_round_trip_through_the_catalog_override() {
    let dir = scratch("search");
    let found = isodrum(&["catalog", "search", "--space", "2,2"]);
    assert!(found.status.success());
    let text = stdout(&found);
    let pairs = parse_catalog(&text).unwrap();
    assert_eq!(pairs.len(), 3);

    let path = dir.join("found.txt");
    std::fs::write(&path, &text).unwrap();
    let list = Command::new(env!("CARGO_BIN_EXE_isodrum"))
        .args(["catalog", "list"])
        .env("ISODRUM_CATALOG", &path)
        .output()
        .unwrap();
    let names: Vec<String> = stdout(&list).lines().map(|l| l.split('\t').next().unwrap().to_string()).collect();
    assert_eq!(names, ["7_s1", "7_s2", "7_s3"]);

    let verified = Command::new(env!("CARGO_BIN_EXE_isodrum"))
        .args(["verify", "--pair", "7_s1", "--maxlen", "6"])
        .env("ISODRUM_CATALOG", &path)
        .output()
        .unwrap();
    assert_eq!(verified.status.code(), Some(0), "{}", stdout(&verified));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn theta_reads_lattice_files() {
    let dir = scratch("theta");
    let path = dir.join("rot.lat");
    std::fs::write(&path, "# Z^2 turned by 45 degrees and shrunk\n2\n2\n1 1\n1 -1\n").unwrap();
    let o = isodrum(&["theta", "--lattice", s(&path), "--max-norm", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains(",1/2,4"), "{text}");
    assert!(text.contains(",1,4"), "{text}");

    std::fs::write(&path, "2\n2\n1 1\n").unwrap();
    assert_eq!(isodrum(&["theta", "--lattice", s(&path), "--max-norm", "1"]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn mode_matching_output_parses() {
    let o = isodrum(&["spectrum", "mm", "--count", "3"]);
    assert!(o.status.success());
    let values = parse_spectrum_csv(&stdout(&o)).unwrap();
    assert_eq!(values.len(), 3);
    assert!((values[0] - 1.0284).abs() < 1e-3, "{values:?}");
}
