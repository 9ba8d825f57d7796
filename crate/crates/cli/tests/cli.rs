use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn raney(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_raney")).args(args).env_remove("RANEY_JOBS").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("raney-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn count_reports_formula_and_enumeration() {
    let out = raney(&["count", "--z", "1", "--p", "3", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["details"]["formula"], "2");
    assert_eq!(v["details"]["enumerated"], 2);
    assert_eq!(v["verdict"], "equal");

    let v = json(&raney(&["count", "--z", "1", "--p", "0", "--k", "0"]));
    assert_eq!(v["details"]["enumerated"], 1);
    let v = json(&raney(&["count", "--z", "2,3", "--p", "4", "--k", "1,1"]));
    assert_eq!(v["details"]["formula"], "0");
    assert_eq!(v["verdict"], "equal");
}

#[test]
fn enumerate_lists_words() {
    let v = json(&raney(&["enumerate", "--z", "1", "--p", "3", "--k", "1"]));
    assert_eq!(v, serde_json::json!(["a b1", "b1 a"]));
    let out = raney(&["--format", "text", "enumerate", "--z", "1", "--p", "3", "--k", "1", "--r", "1"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "a b1");
}

#[test]
fn shift_on_a_word_and_back() {
    let out = raney(&["--format", "text", "bijection", "shift", "--z", "1", "--p", "1", "--q", "1", "--n", "1", "--word", "a b"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "b1 a");
    let out = raney(&[
        "--format", "text", "bijection", "shift", "--z", "1", "--p", "1", "--q", "1", "--n", "1", "--word", "b a",
        "--inverse",
    ]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "a b1");
}

#[test]
fn class_verification() {
    let v = json(&raney(&["bijection", "shift", "--z", "1", "--p", "1", "--q", "1", "--n", "1"]));
    assert_eq!(v["details"]["class_size"], 1);
    assert_eq!(v["details"]["round_trips"], 1);
    assert_eq!(v["verdict"], "pass");
    let v = json(&raney(&["bijection", "raney", "--z", "1", "--p", "1", "--q", "1", "--n", "1"]));
    assert_eq!(v["details"]["total"], 2);
    assert_eq!(v["details"]["prefix_case"], 1);
    assert_eq!(v["details"]["overshoot"], 1);
    assert_eq!(v["verdict"], "pass");
    let v = json(&raney(&["bijection", "raney", "--z", "1", "--p", "1", "--q", "1", "--n", "1", "--word", "b a"]));
    assert_eq!(v["details"]["factorization"]["case"], "overshoot");
}

#[test]
fn verify_examples() {
    for args in [
        vec!["verify", "gould-mohanty", "--n", "1,1", "--z", "1,2"],
        vec!["verify", "raney-mohanty-1", "--n", "0", "--z", "1"],
        vec!["verify", "rothe-2", "--n", "3", "--z", "2", "--grid-range", "20..40"],
        vec!["verify", "kmpink", "--n", "2,1", "--z", "1,3", "--i", "2", "--j", "3"],
        vec!["verify", "abel-2", "--n", "2", "--z", "3", "--point", "x=5/2,y=-1"],
    ] {
        let out = raney(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(json(&out)["verdict"], "equal", "{args:?}");
    }
    let v = json(&raney(&["verify", "gould-mohanty", "--n", "1,1", "--z", "1,2"]));
    assert_eq!(v["grid"]["points_evaluated"], 27);
}

#[test]
fn series_commands() {
    let v = json(&raney(&["series", "solve", "--z", "2", "--order", "5"]));
    assert_eq!(v["5"], "42");
    let out = raney(&["series", "check2", "--x", "3", "--z", "1,2", "--order", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "equal");
}

#[test]
fn configuration_errors_exit_2_and_name_the_constraint() {
    let out = raney(&["bijection", "shift", "--z", "1", "--p", "0", "--q", "1", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p >= n·z"));

    let out = raney(&["series", "check2", "--x", "1", "--z", "0,1", "--order", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("z_i >= 1"));

    let out = raney(&["count", "--z", "1,2", "--p", "3", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = raney(&["verify", "rothe-1", "--n", "2", "--z", "1", "--point", "x=2,y=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let run = |jobs: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_raney"))
            .args(["sweep", "raney"])
            .env("RANEY_JOBS", jobs)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn output_file() {
    let path = scratch("count.json");
    let out = raney(&["--output", path.to_str().unwrap(), "count", "--z", "1", "--p", "3", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["check"], "count");
}

#[test]
fn suite_manifests() {
    let empty = scratch("empty.json");
    std::fs::write(&empty, "[]").unwrap();
    let out = raney(&["suite", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert_eq!(json(&out)["checks"], 0);

    let mixed = scratch("mixed.json");
    std::fs::write(
        &mixed,
        r#"[
  {"command": "count", "z": "1", "p": 3, "k": "1"},
  {"command": "bijection-shift", "z": "1", "p": 0, "q": 1, "n": "1"},
  {"command": "series-check1", "x": 2, "z": [2], "order": 4}
]"#,
    )
    .unwrap();
    let out = raney(&["suite", mixed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["passed"], 2);
    assert_eq!(v["config_errors"], 1);
    assert_eq!(v["results"][1]["status"], "config-error");

    let broken = scratch("broken.json");
    std::fs::write(&broken, "[\n  {\"command\": \"count\",\n   \"p\": \"three\"}\n]").unwrap();
    let out = raney(&["suite", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("entry 1 (line 2)"));
}
