use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use algebra_learn::group::{catalog, write_tables};
use serde_json::Value;
use tempfile::TempDir;

fn cli(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algebra-learn"))
        .args(args)
        .current_dir(dir)
        .env_remove("ALGEBRA_LEARN_OUT")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout_json(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

const SMALL_RUN: &[&str] = &[
    "run",
    "--recipe",
    "cayley-n8",
    "--n",
    "4",
    "--k-perms",
    "4",
    "--num-latin",
    "60",
    "--train-sizes",
    "40,60",
    "--headline-train-size=60",
    "repeats=2",
    "--epochs",
    "3",
];

#[test]
fn gen_is_byte_deterministic() {
    let tmp = TempDir::new().unwrap();
    let args = |out: &str| {
        [
            "gen",
            "cayley-vs-latin",
            "--n",
            "4",
            "--k-perms",
            "3",
            "--num-latin",
            "20",
            "--seed",
            "9",
            "--out",
            out,
        ]
        .map(String::from)
    };
    for out in ["a.ndjson", "b.ndjson"] {
        let o = Command::new(env!("CARGO_BIN_EXE_algebra-learn"))
            .args(args(out))
            .current_dir(tmp.path())
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = fs::read(tmp.path().join("a.ndjson")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, fs::read(tmp.path().join("b.ndjson")).unwrap());
}

#[test]
fn oracle_confirms_generated_labels_and_catches_a_flip() {
    let tmp = TempDir::new().unwrap();
    // random squares of order 4 are all isotopic to groups, so use order 8
    let o = cli(
        tmp.path(),
        &["gen", "cayley-vs-latin", "--n", "8", "--k-perms", "2", "--num-latin", "20", "--out", "d.ndjson"],
    );
    assert_eq!(code(&o), 0);
    let o = cli(tmp.path(), &["oracle", "quadrangle", "d.ndjson"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let verdicts = stdout_json(&o);
    assert!(verdicts.len() > 20);
    assert!(verdicts.iter().all(|v| v["agrees"] == true));

    let text = fs::read_to_string(tmp.path().join("d.ndjson")).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut rec: Value = serde_json::from_str(&lines[1]).unwrap();
    rec["label"] = Value::from(1 - rec["label"].as_u64().unwrap());
    lines[1] = rec.to_string();
    fs::write(tmp.path().join("flipped.ndjson"), lines.join("\n") + "\n").unwrap();
    let o = cli(tmp.path(), &["oracle", "quadrangle", "flipped.ndjson"]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o).iter().filter(|v| v["agrees"] == false).count(), 1);
}

#[test]
fn oracle_on_plain_tables() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("c1.ndjson"), "{\"n\": 1, \"table\": [1]}\n").unwrap();
    let o = cli(tmp.path(), &["oracle", "subgroups", "c1.ndjson"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)[0]["subgroups"], 1);

    let mut buf = Vec::new();
    write_tables(&mut buf, &catalog(32)).unwrap();
    fs::write(tmp.path().join("catalog.ndjson"), buf).unwrap();
    let o = cli(tmp.path(), &["oracle", "simple", "catalog.ndjson"]);
    assert_eq!(code(&o), 0);
    let simple: Vec<u64> =
        stdout_json(&o).iter().filter(|v| v["simple"] == true).map(|v| v["n"].as_u64().unwrap()).collect();
    assert_eq!(simple, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]);

    let o = cli(tmp.path(), &["oracle", "distrib", "c1.ndjson"]);
    assert_eq!(code(&o), 2, "a group table is not a ring record");
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    assert_eq!(code(&cli(dir, &["--help"])), 0);
    assert_eq!(code(&cli(dir, &["--version"])), 0);
    assert_eq!(code(&cli(dir, &["frobnicate"])), 1);
    assert_eq!(code(&cli(dir, &["run", "--recipe", "no-such-recipe"])), 1);
    assert_eq!(code(&cli(dir, &["run", "--recipe", "cayley-n8", "--bogus", "1"])), 1);
    assert_eq!(code(&cli(dir, &["run", "--recipe", "cayley-n8", "--moduli", "2,3"])), 1);
    assert_eq!(code(&cli(dir, &["gen", "cayley-vs-latin", "--n", "0", "--out", "x.ndjson"])), 2);
    assert_eq!(code(&cli(dir, &["oracle", "simple", "missing.ndjson"])), 2);
}

#[test]
fn config_file_with_flag_overrides_and_strict_report() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let toml = "recipe = \"cayley-n8\"\nn = 4\nk-perms = 4\nnum-latin = 60\ntrain-sizes = [40, 60]\nrepeats = 5\nepochs = 3\n";
    fs::write(dir.join("exp.toml"), toml).unwrap();
    let o = cli(dir, &["run", "--config", "exp.toml", "--repeats", "2", "--out", "bundle"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(dir.join("bundle/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["repeats"], 2);
    assert_eq!(summary["config"]["n"], 4);
    for f in ["manifest.json", "runs.csv", "aggregate.csv", "curve.svg", "timing.json"] {
        assert!(dir.join("bundle").join(f).exists(), "{f}");
    }

    assert_eq!(code(&cli(dir, &["report", "bundle"])), 0);
    // a four-element toy run cannot reach the n = 8 bands
    let strict = cli(dir, &["report", "bundle/summary.json", "--strict"]);
    assert_eq!(summary["passed"], false);
    assert_eq!(code(&strict), 3);
}

#[test]
fn bundles_are_deterministic_apart_from_timing() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    for out in ["one", "two"] {
        let mut args = SMALL_RUN.to_vec();
        args.extend(["--out", out]);
        let o = cli(dir, &args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let mut names: Vec<String> = fs::read_dir(dir.join("one"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert!(names.contains(&"summary.json".to_string()));
    for name in names.iter().filter(|n| *n != "timing.json") {
        let a = fs::read(dir.join("one").join(name)).unwrap();
        assert_eq!(a, fs::read(dir.join("two").join(name)).unwrap(), "{name}");
    }
}

#[test]
fn output_root_comes_from_the_environment() {
    let tmp = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_algebra-learn"))
        .args(["gen", "cayley-vs-latin", "--n", "3", "--k-perms", "2", "--num-latin", "4"])
        .current_dir(tmp.path())
        .env("ALGEBRA_LEARN_OUT", tmp.path().join("root"))
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(tmp.path().join("root/cayley-vs-latin.ndjson").exists());
}

#[test]
fn curve_writes_tables() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    assert_eq!(
        code(&cli(
            dir,
            &[
                "gen",
                "cayley-vs-latin",
                "--n",
                "4",
                "--k-perms",
                "4",
                "--num-latin",
                "40",
                "--out",
                "d.ndjson"
            ]
        )),
        0
    );
    let o = cli(
        dir,
        &["curve", "d.ndjson", "--gammas", "0.3,0.6", "--repeats", "2", "--epochs", "2", "--out", "c"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let agg = fs::read_to_string(dir.join("c/aggregate.csv")).unwrap();
    assert_eq!(agg.lines().count(), 3);
    assert_eq!(code(&cli(dir, &["curve", "d.ndjson", "--n", "4"])), 1);
}
