use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_metasym"))
        .args(args)
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().unwrap(), v, text)
}

/// Compares a report with `tests/golden/<name>.json`; set `UPDATE_GOLDEN=1`
/// to rewrite. File paths echoed in the report are stripped first.
fn golden(name: &str, mut v: Value) {
    if let Some(s) = v["input"].as_str() {
        if s.ends_with(".json") {
            v["input"] = Value::String(Path::new(s).file_name().unwrap().to_string_lossy().into());
        }
    }
    let path: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"));
    let pretty = serde_json::to_string_pretty(&v).unwrap() + "\n";
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &pretty).unwrap();
    }
    let want =
        std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(pretty, want, "golden mismatch for {name}");
}

fn rref(d: &Value) -> Vec<Vec<String>> {
    d["rref"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_str().unwrap().to_string())
                .collect()
        })
        .collect()
}

fn rows(r: &[[&str; 5]]) -> Vec<Vec<String>> {
    r.iter()
        .map(|x| x.iter().map(|s| s.to_string()).collect())
        .collect()
}

#[test]
fn classify_worked_example() {
    let (code, v, _) = run(&["classify", "p111 - p112 - 2*p122"]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["class"], "quasi-linear");
    assert_eq!(r["mae"], true);
    assert_eq!(r["orthogonal"], true);
    let ds = r["distributions"].as_array().unwrap();
    assert_eq!(ds.len(), 3);
    assert_eq!(
        rref(&ds[0]),
        rows(&[
            ["1", "0", "0", "0", "0"],
            ["0", "0", "1", "0", "1/2"],
            ["0", "0", "0", "1", "-1/2"]
        ])
    );
    assert_eq!(
        rref(&ds[1]),
        rows(&[
            ["1", "1", "0", "0", "0"],
            ["0", "0", "1", "1/2", "0"],
            ["0", "0", "0", "0", "1"]
        ])
    );
    assert_eq!(
        rref(&ds[2]),
        rows(&[
            ["1", "-2", "0", "0", "0"],
            ["0", "0", "1", "-1", "0"],
            ["0", "0", "0", "0", "1"]
        ])
    );
    golden("classify_example", v);
}

#[test]
fn classify_classes_and_exit_codes() {
    let (code, v, _) = run(&["classify", "p111^2"]);
    assert_eq!((code, v["result"]["class"].as_str()), (3, Some("not-mae")));
    let (code, v, _) = run(&["classify", "p112*p222 - p122^2"]);
    assert_eq!(
        (code, v["result"]["class"].as_str()),
        (0, Some("fully-nonlinear-goursat"))
    );
    let (code, v, _) = run(&["classify", "p111*p122 - p112^2 + p222 + 1"]);
    assert_eq!(
        (code, v["result"]["class"].as_str()),
        (0, Some("mae-not-goursat"))
    );
    let (code, v, _) = run(&["classify", "p11 +"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
}

#[test]
fn cone_multiplicities() {
    let (code, v, _) = run(&["cone", "p111 - p112 - 2*p122"]);
    assert_eq!(code, 0);
    let mults: Vec<u64> = v["result"]["lines"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["mult"].as_u64().unwrap())
        .collect();
    assert_eq!(mults, vec![1, 1, 1]);
    assert!(v["result"]["lines"]
        .as_array()
        .unwrap()
        .iter()
        .all(|l| l["strong"] == true));
    golden("cone_example", v);

    let (_, v, _) = run(&["cone", "p111"]);
    let lines = v["result"]["lines"].as_array().unwrap();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["mult"], 3);

    let (_, v, _) = run(&["cone", "p122"]);
    let mut mults: Vec<u64> = v["result"]["lines"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["mult"].as_u64().unwrap())
        .collect();
    mults.sort();
    assert_eq!(mults, vec![1, 2]);
    assert_eq!(
        rref(&v["result"]["linear_component"]),
        rows(&[
            ["0", "1", "0", "0", "0"],
            ["0", "0", "1", "0", "0"],
            ["0", "0", "0", "0", "1"]
        ])
    );
}

#[test]
fn build_and_orthogonal_on_the_first_distribution() {
    let (code, v, _) = run(&["build", "--distribution", &data("example_d1.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["equation"], "p111 - p112 - 2*p122");
    golden("build_example", v);

    let (code, v, _) = run(&["orthogonal", "--distribution", &data("example_d1.json")]);
    assert_eq!(code, 0);
    let c = v["result"]["complements"].as_array().unwrap();
    assert_eq!(
        rref(&c[0]),
        rows(&[
            ["1", "1", "0", "0", "0"],
            ["0", "0", "1", "1/2", "0"],
            ["0", "0", "0", "0", "1"]
        ])
    );
    assert_eq!(
        rref(&c[1]),
        rows(&[
            ["1", "-2", "0", "0", "0"],
            ["0", "0", "1", "-1", "0"],
            ["0", "0", "0", "0", "1"]
        ])
    );
    assert_eq!(v["result"]["orthogonal"], true);
    golden("orthogonal_example", v);
}

#[test]
fn recover_fully_nonlinear() {
    let (code, v, _) = run(&["recover", "p112*p222 - p122^2"]);
    assert_eq!(code, 0);
    assert_eq!(
        rref(&v["result"]["distribution"]),
        rows(&[
            ["1", "0", "0", "0", "0"],
            ["0", "1", "0", "0", "0"],
            ["0", "0", "1", "0", "0"]
        ])
    );
    assert_eq!(v["result"]["check"], true);
    let (code, v, _) = run(&["recover", "p122"]);
    assert_eq!(code, 0);
    assert_eq!(
        rref(&v["result"]["distribution"]),
        rows(&[
            ["0", "1", "0", "0", "0"],
            ["0", "0", "1", "0", "0"],
            ["0", "0", "0", "0", "1"]
        ])
    );
    // No linear component: degenerate, exit 4.
    let (code, v, _) = run(&["recover", "p111*p122 - p112^2 + p222 + 1"]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["kind"], "degenerate");
}

#[test]
fn integrals_report() {
    let (code, v, _) = run(&[
        "integrals",
        "p122",
        "--candidate",
        "p12",
        "--candidate",
        "p11",
        "--candidate",
        "x1",
    ]);
    assert_eq!(code, 0);
    let verdicts: Vec<&str> = v["result"]["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["verdict"].as_str().unwrap())
        .collect();
    assert_eq!(verdicts, vec!["yes", "no", "vacuous"]);
    let (_, v, _) = run(&[
        "integrals",
        "p122",
        "--search-degree",
        "1",
        "--distribution",
        &data("p122.json"),
    ]);
    assert_eq!(
        v["result"]["search"]["basis"],
        serde_json::json!(["x1", "p12"])
    );
    golden("integrals_p122", v);
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["--seed", "7", "cone", "p111 - p112 - 2*p122"]).2;
    let b = run(&["--seed", "7", "cone", "p111 - p112 - 2*p122"]).2;
    assert_eq!(a, b);
    let (_, v, _) = run(&[
        "--probe-point",
        r#"{"x1": "1/2", "p11": 3}"#,
        "classify",
        "p122",
    ]);
    assert_eq!(v["result"]["base"]["x1"], "1/2");
    assert_eq!(v["result"]["base"]["p11"], "3");
}

#[test]
fn verify_roundtrip() {
    let (code, v, _) = run(&[
        "--seed",
        "1",
        "verify",
        "--suite",
        "roundtrip",
        "--n-cases",
        "50",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["suites"][0]["passed"], 50);
    let (code, _, _) = run(&["verify", "--suite", "nope"]);
    assert_eq!(code, 2);
}
