use std::path::PathBuf;
use std::process::Command;

use avdc::cli::{run, EXIT_INVALID, EXIT_OK, EXIT_USAGE};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn avdc(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("avdc").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn validate_and_mirror() {
    let (code, out, _) = avdc(&["validate", &data("ternary.aut")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("ok: d = 3, sigma = 3"));

    let (code, mirrored, _) = avdc(&["mirror", &data("ternary.aut")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(mirrored, "d 3\nsigma 3\n2 0 0\n3 1 0\n3 1 3\n");

    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("m.aut");
    std::fs::write(&once, &mirrored).unwrap();
    let (_, twice, _) = avdc(&["mirror", once.to_str().unwrap()]);
    let original = avdc(&["mirror", &data("ternary.aut")]).1;
    let canonical = std::fs::read_to_string(data("ternary.aut"))
        .unwrap()
        .parse::<avdc::automaton::OrderedAutomaton>()
        .unwrap()
        .to_string();
    assert_eq!(twice, canonical);
    assert_ne!(twice, original);
}

#[test]
fn invalid_automaton() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.aut");
    std::fs::write(&p, "d 3\nsigma 3\n3 2 1\n3 0 1\n2 0 1\n").unwrap();
    let (code, _, err) = avdc(&["validate", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("monoton"), "{err}");
    let (code, _, _) = avdc(&["validate", "/nonexistent/file.aut"]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn spectral_output() {
    let (code, out, _) = avdc(&["spectral", &data("ternary.aut")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("charpoly: x^3-2x^2-x+1"));
    assert!(out.contains("pisot: true"));
    assert!(out.contains("eta_1 = b^2-2b ≈ 0.554958132087"));

    let (code, out, _) = avdc(&["spectral", &data("non_pisot.aut")]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.contains("pisot: false"));
    assert!(out.contains("reducible"));
}

#[test]
fn rank_and_unrank() {
    let f = data("ternary.aut");
    assert_eq!(avdc(&["rank", &f, "0,1"]).1, "5\n");
    assert_eq!(avdc(&["rank", &f, "2,2,2"]).1, "26\n");
    assert_eq!(avdc(&["unrank", &f, "26"]).1, "2,2,2\n");
    assert_eq!(avdc(&["unrank", &f, "0", "--lprime"]).1, "ε\n");
    assert_eq!(avdc(&["unrank", &f, "7", "--lprime"]).1, "1,0,0\n");
    assert_eq!(avdc(&["rank", &f, "1,0,0", "--lprime"]).1, "7\n");
    assert_eq!(avdc(&["rank", &f, "1,1"]).0, EXIT_INVALID);
    assert_eq!(avdc(&["unrank", &f, "abc"]).0, EXIT_USAGE);
}

#[test]
fn sequence_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("seq.csv");
    let (code, _, _) = avdc(&["sequence", &data("ternary.aut"), "--n-max", "4", "--csv", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&p).unwrap();
    assert_eq!(
        text,
        "n,word,value\n0,,0.000000000000\n1,1,0.445041867913\n2,2,0.753020396283\n3,\"0,1\",0.198062264195\n"
    );
    let (_, out, _) = avdc(&["sequence", &data("ternary.aut"), "--n-max", "4"]);
    assert_eq!(out, text);
}

#[test]
fn discrepancy_csv() {
    let (code, out, err) = avdc(&[
        "discrepancy",
        &data("ternary.aut"),
        "--y",
        "2",
        "--n-max",
        "10",
        "--stride",
        "5",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "N,count,D\n0,0,0.000000000000\n5,4,0.234898018587\n10,8,0.469796037175\n"
    );
    assert!(err.contains("max |D| / ln N"));
    let (code, _, _) = avdc(&["discrepancy", &data("ternary.aut"), "--y", "2", "--n-max", "10", "--stride", "0"]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn brs_verdicts() {
    let (code, out, _) = avdc(&["brs", &data("ternary.aut"), "--u", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "bounded"), "{out}");
    let (_, out, _) = avdc(&["brs", &data("ternary.aut"), "--u", "|0,1", "--empirical", "2000"]);
    assert!(out.lines().any(|l| l == "unbounded"), "{out}");
    assert!(out.contains("witness:"));
    assert!(out.contains("empirical: unbounded"));

    let (code, out, _) = avdc(&["brs", &data("non_pisot.aut"), "--u", "3,0|2"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.contains("verdict: undecided"));
    assert!(out.contains("prop5: none"));
    assert!(out.contains("pisot: false"));
}

#[test]
fn beta_command() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("beta.aut");
    let (code, out, _) = avdc(&["beta", "--poly", "-2 0 -4 1", "--out", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("t: |4,0,1\nbeta-polynomial: x^3-4x^2-2\n"));
    let written = std::fs::read_to_string(&p).unwrap();
    let expected = std::fs::read_to_string(data("beta_cubic.aut")).unwrap();
    assert_eq!(
        written.parse::<avdc::automaton::OrderedAutomaton>().unwrap(),
        expected.parse().unwrap()
    );
    assert_eq!(avdc(&["beta", "--poly", "-3 0 1"]).0, EXIT_INVALID);
    assert_eq!(avdc(&["beta", "--poly", "1 2"]).0, EXIT_INVALID);
}

#[test]
fn usage_errors() {
    assert_eq!(avdc(&[]).0, EXIT_USAGE);
    assert_eq!(avdc(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(avdc(&["sequence", &data("ternary.aut")]).0, EXIT_USAGE);
    assert_eq!(avdc(&["--help"]).0, EXIT_OK);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_avdc");
    let out = Command::new(bin)
        .args(["spectral", &data("ternary.aut")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("charpoly: x^3-2x^2-x+1\n"));
    let out = Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
