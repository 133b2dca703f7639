use std::path::{Path, PathBuf};

use ontic::cli::{run, CliOutcome};

fn ontic(args: &[&str]) -> CliOutcome {
    run(std::iter::once("ontic").chain(args.iter().copied()))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const IRRATIONAL: &str = r#"schema_version = 1

[space]
factors = [{ name = "L", labels = ["a", "b"] }]

[[preparations]]
label = "mu"
weights = [["a", "1/3 + sqrt2/7"], ["b", "2/3 - sqrt2/7"]]

[[measurements]]
label = "M"
outcomes = 2
filler = "1/2"
entries = []
"#;

#[test]
fn demo_pbr_succeeds() {
    let out = ontic(&["demo-pbr"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("16/16 cells agree"));
    assert!(out.stdout.contains("no-go certified"));
    assert!(out.stdout.contains("1/16 (0.06250000)"));
    let json = ontic(&["demo-pbr", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["agreement"]["matching"], 16);
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ontic(&["validate", "--builtin", "toy-nlhv"]).code, 0);
    assert_eq!(ontic(&["validate", data("toy_nlhv.model").to_str().unwrap()]).code, 0);

    let ok = write(dir.path(), "irrational.model", IRRATIONAL);
    let out = ontic(&["validate", &ok]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);

    let bad = write(dir.path(), "nonsense.model", &IRRATIONAL.replace("2/3 - sqrt2/7", "1/2"));
    let out = ontic(&["validate", &bad]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("deficit"), "{}", out.stdout);
    let json: serde_json::Value = serde_json::from_str(&ontic(&["validate", &bad, "--format", "json"]).stdout).unwrap();
    assert_eq!(json["valid"], false);

    let empty = write(dir.path(), "empty.model", "");
    assert_eq!(ontic(&["validate", &empty]).code, 2);
    let unknown = write(dir.path(), "unknown.model", &IRRATIONAL.replace("[\"b\", \"2/3", "[\"z\", \"2/3"));
    let out = ontic(&["validate", &unknown]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 8, column 37"), "{}", out.stderr);
    assert_eq!(ontic(&["validate", "/no/such/file"]).code, 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ontic(&[]).code, 2);
    assert_eq!(ontic(&["frobnicate"]).code, 2);
    assert_eq!(ontic(&["validate"]).code, 2);
    assert_eq!(ontic(&["validate", "--builtin", "nope"]).code, 2);
    assert_eq!(ontic(&["simulate", "--builtin", "toy-nlhv", "--samples", "many"]).code, 2);
    assert_eq!(ontic(&["--help"]).code, 0);
}

#[test]
fn predict_and_born_check() {
    let out = ontic(&["predict", "--builtin", "toy-nlhv", "--prep", "nu00"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "nu00 | M: 0, 1/4 (0.25000000), 1/4 (0.25000000), 1/2 (0.50000000)\n");
    assert_eq!(ontic(&["predict", "--builtin", "toy-nlhv", "--prep", "nope"]).code, 2);
    assert_eq!(ontic(&["predict", "--builtin", "pbr-lhv"]).code, 2);

    let out = ontic(&["born-check", "--builtin", "toy-nlhv"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("16/16 cells agree exactly"));
    // The same tables measured in the computational basis disagree.
    assert_eq!(ontic(&["born-check", "--builtin", "toy-nlhv", "--basis", "computational"]).code, 1);
}

#[test]
fn independence_and_overlap() {
    let out = ontic(&["independence", "--builtin", "toy-nlhv"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("nu0+: local independence holds, full independence fails"));
    assert!(out.stdout.contains("witness (HH,HH,2): joint 1/4 (0.25000000) vs product 1/16 (0.06250000)"));

    // Hiding L2 instead leaves L1 and Ls, which are correlated in nu0+.
    assert_eq!(ontic(&["independence", "--builtin", "toy-nlhv", "--inaccessible", "L2"]).code, 1);
    assert_eq!(ontic(&["independence", "--builtin", "toy-nlhv", "--inaccessible", "Lx"]).code, 2);

    let dir = tempfile::tempdir().unwrap();
    let correlated = write(
        dir.path(),
        "corr.model",
        r#"schema_version = 1
[space]
factors = [{ name = "A", labels = ["0", "1"] }, { name = "B", labels = ["0", "1"] }]
[[preparations]]
label = "bell"
weights = [["0,0", "1/2"], ["1,1", "1/2"]]
"#,
    );
    assert_eq!(ontic(&["independence", &correlated]).code, 1);

    let out = ontic(&["overlap", "--builtin", "toy-nlhv", "--preps", "nu0,nu+"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "overlap(nu0, nu+) = 1/2 (0.50000000)\n");
    let json: serde_json::Value =
        serde_json::from_str(&ontic(&["overlap", "--builtin", "toy-nlhv", "--preps", "nu0,nu+", "--format", "json"]).stdout)
            .unwrap();
    assert_eq!(json["overlap"], "1/2");
    assert_eq!(ontic(&["overlap", "--builtin", "toy-nlhv", "--preps", "nu00,nu0+"]).code, 0);
    assert_eq!(ontic(&["overlap", "--builtin", "pbr-lhv", "--preps", "nu0,nu+"]).code, 2);
    assert_eq!(ontic(&["overlap", "--builtin", "toy-nlhv", "--preps", "nu00"]).code, 2);
    let disjoint = write(
        dir.path(),
        "disjoint.model",
        r#"schema_version = 1
[space]
factors = [{ name = "L", labels = ["a", "b"] }]
[[preparations]]
label = "x"
weights = [["a", "1"]]
[[preparations]]
label = "y"
weights = [["b", "1"]]
"#,
    );
    assert_eq!(ontic(&["overlap", &disjoint, "--preps", "x,y"]).code, 1);
}

#[test]
fn synthesize_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let result = dir.path().join("result.toml");
    let out = ontic(&["synthesize", "--builtin", "pbr-lhv", "--output", result.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("status: infeasible"));
    assert!(std::fs::read_to_string(&result).unwrap().contains("status = \"infeasible\""));

    assert_eq!(ontic(&["synthesize", "--builtin", "toy-nlhv"]).code, 0);
    assert_eq!(ontic(&["synthesize", "--builtin", "toy-nlhv", "--targets", "born"]).code, 0);
    assert_eq!(ontic(&["synthesize", "--builtin", "pbr-lhv", "--targets", "born"]).code, 1);
    assert_eq!(ontic(&["synthesize", data("pbr_lhv_zeros.spec").to_str().unwrap()]).code, 1);
    assert_eq!(ontic(&["synthesize", data("toy_nlhv.model").to_str().unwrap()]).code, 0);
    let garbage = write(dir.path(), "garbage.spec", "outcomes = \"four\"\n");
    assert_eq!(ontic(&["synthesize", &garbage]).code, 2);
}

#[test]
fn nogo_exit_codes() {
    let out = ontic(&["nogo"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("with Ls restored: feasible"));
    assert!(out.stdout.contains("model measurement M as witness: all 36 equalities hold"));
    assert_eq!(ontic(&["nogo", "--builtin", "pbr-lhv"]).code, 0);

    // A model whose preparations have disjoint supports admits a local
    // explanation, so no no-go is certified.
    let dir = tempfile::tempdir().unwrap();
    let lhv = std::fs::read_to_string(data("pbr_lhv.model")).unwrap();
    let spread = lhv.replace("[\"HH,HH\", \"1/4\"],\n  [\"HH,TH\", \"1/4\"],\n  [\"TH,HH\", \"1/4\"],\n  [\"TH,TH\", \"1/4\"]", "[\"TT,TT\", \"1\"]");
    assert_ne!(spread, lhv);
    let path = write(dir.path(), "spread.model", &spread);
    let out = ontic(&["nogo", &path]);
    assert_eq!(out.code, 1, "{}{}", out.stdout, out.stderr);

    let json: serde_json::Value = serde_json::from_str(&ontic(&["nogo", "--format", "json"]).stdout).unwrap();
    assert_eq!(json["certified"], true);
    assert_eq!(json["min_violation"], "1/16");
    assert_eq!(ontic(&["nogo", "--inaccessible", "nope"]).code, 2);
}

#[test]
fn simulate_is_reproducible() {
    let args = ["simulate", "--builtin", "toy-nlhv", "--prep", "nu0+", "--samples", "20000", "--seed", "5"];
    let a = ontic(&args);
    assert_eq!(a.code, 0);
    let mut parallel = args.to_vec();
    parallel.extend(["--jobs", "3"]);
    assert_eq!(ontic(&parallel).stdout, a.stdout);
    assert!(a.stdout.contains("outcome 2: 0 (0.00000), exact 0"), "{}", a.stdout);
    assert_eq!(ontic(&["simulate", "--builtin", "toy-nlhv", "--samples", "0"]).code, 2);
    assert_eq!(ontic(&["simulate", "--builtin", "pbr-lhv"]).code, 2);
}

#[test]
fn dump_matches_golden_files() {
    let out = ontic(&["dump", "--builtin", "toy-nlhv"]);
    assert_eq!(out.stdout, std::fs::read_to_string(data("toy_nlhv.model")).unwrap());
}
