//! End-to-end checks of the command-line interface: golden outputs on the
//! bundled data files, exit codes, error positions and determinism.

use std::path::PathBuf;
use std::process::Command;

use unisheaf::cli::{run, Outcome};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("unisheaf").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> String {
    let o = cli(args);
    assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
    o.stdout
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    std::io::Write::write_all(&mut f, contents.as_bytes()).unwrap();
    f
}

#[test]
fn check_reports_smallest_entourage() {
    let out = ok(&["check", &data("two-classes.space")]);
    assert_eq!(out, "quasi-uniformity=true\nuniformity=true\ne_min=(a,a) (a,b) (b,a) (b,b) (c,c)\n");
}

#[test]
fn relation_operations() {
    let file = data("two-classes.space");
    assert_eq!(
        ok(&["relation", "compose", &file]),
        "entourage (a,a) (a,b) (a,c) (b,a) (b,b) (b,c) (c,a) (c,b) (c,c)\n"
    );
    assert_eq!(ok(&["relation", "image", &file, "--set", "a"]), "image={a,b}\n");
}

#[test]
fn sierpinski_pair_items() {
    let out = ok(&["gtop", "l7", &data("sierpinski.pair")]);
    let expected: String =
        (1..=5).map(|k| format!("item{k}=pass\n")).collect::<String>() + "item6=fail(expected)\nitem7=fail(expected)\n";
    assert_eq!(out, expected);
}

#[test]
fn circle_cohomology_and_cech() {
    assert_eq!(ok(&["gtop", "cohomology", &data("circle.sheaf")]), "dims=1 1\n");
    let out = ok(&["gtop", "cech", &data("pseudo-circle.pair"), &data("circle.sheaf")]);
    assert!(out.contains("cech=1 1\n") && out.contains("sheaf=1 1\n"), "{out}");
}

#[test]
fn operator_invariants() {
    assert_eq!(ok(&["dmod", "chi", &data("airy.op")]), "chi=-1\n");
    assert_eq!(ok(&["dmod", "irregularity", &data("mixed-slopes.op")]), "ir[0]=3\nir[inf]=0\n");
    assert_eq!(ok(&["dmod", "irregularity", &data("airy.op"), "--at", "inf"]), "ir[inf]=3\n");
    assert!(ok(&["dmod", "report", &data("airy.op")]).ends_with("agree=true\n"));
}

#[test]
fn tower_star_certificate() {
    let out = ok(&["tower", "build", &data("sectorial.tower")]);
    assert!(out.starts_with("generator=sectorial\ndepth=4\n"), "{out}");
    assert!(out.ends_with("verified=true\n"), "{out}");
}

#[test]
fn corpus_single_criterion() {
    assert_eq!(
        ok(&["corpus", "run", "--only", "10"]),
        "criterion 10 pass irregularity values: 8 irregularities match\n"
    );
}

#[test]
fn parse_errors_carry_line_and_column() {
    let f = temp_file("space s 2\nelements a b\nentourage (a,a) (a,q)\n");
    let o = cli(&["check", f.path().to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert_eq!(o.stderr, "error: parse error at line 3, column 20: unknown label `q`\n");
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(cli(&["check", &data("empty-basis.space")]).code, 2);
    assert_eq!(cli(&["check", "/definitely/not/here.space"]).code, 2);
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn failed_checks_exit_one() {
    let cover = data("sectors.cover");
    let o = cli(&["tower", "uniform-cover", &data("metric.tower"), "--cover", &cover]);
    assert_eq!(o.code, 1, "{}", o.stdout);
    assert_eq!(cli(&["tower", "uniform-cover", &data("sectorial.tower"), "--cover", &cover]).code, 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["gtop", "groth", &data("pseudo-circle.pair")];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn binary_matches_library_entry_point() {
    let file = data("two-classes.space");
    let out = Command::new(env!("CARGO_BIN_EXE_unisheaf")).args(["check", &file]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), ok(&["check", &file]));
    let bad =
        Command::new(env!("CARGO_BIN_EXE_unisheaf")).args(["check", &data("empty-basis.space")]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(String::from_utf8(bad.stderr).unwrap(), "error: empty basis\n");
}
