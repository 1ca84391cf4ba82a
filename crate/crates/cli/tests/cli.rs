use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_screenlab"))
        .args(args)
        .env_remove("SCREENLAB_JOBS")
        .output()
        .expect("spawn screenlab")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn fmono_example() {
    let out = run(&["fmono", "--m", "1/3,1/5", "--mm", "1/7"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["converged"], true);
    assert!((v["value"]["re"].as_f64().unwrap() + 0.0148).abs() < 5e-4);
    assert!((v["value"]["im"].as_f64().unwrap() - 0.0240).abs() < 5e-4);
    assert!(v["error_estimate"].as_f64().unwrap() < 1e-8);
}

#[test]
fn nichols_rank_one() {
    let out = run(&["nichols", "--rank", "1", "--q", "2/3", "--nmax", "5"]);
    assert_eq!(code(&out), 0);
    let h: Vec<u64> = json(&out)["hilbert_series"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(h, vec![1, 1, 1, 0, 0, 0]);
}

#[test]
fn nichols_csv() {
    let out = run(&[
        "nichols", "--rank", "2", "--q", "1,-1/2,1", "--nmax", "4", "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,dimension"));
    let total: usize = lines
        .map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 8);
}

#[test]
fn symcheck_example() {
    let out = run(&["symcheck", "--n", "2", "--m", "8/7,1/7", "--mm", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["residual"].as_f64().unwrap() < 5e-4);
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&["fmono", "--m", "1/3,x"])), 64);
    assert_eq!(code(&run(&["fmono", "--m", "0.5"])), 64);
    assert_eq!(code(&run(&["fmono", "--m", "1/3", "--tol", "0"])), 64);
    assert_eq!(
        code(&run(&[
            "symcheck", "--n", "3", "--m", "1/3,1/5", "--mm", "1/7"
        ])),
        64
    );
    assert_eq!(code(&run(&["no-such-command"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn precondition_errors() {
    let out = run(&[
        "symcheck",
        "--n",
        "3",
        "--m",
        "0,0,0",
        "--mm",
        "-1/2,-9/10,-9/10",
    ]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("[1, 2, 3]"), "{err}");
    assert_eq!(code(&run(&["selberg", "--m", "-3/2"])), 2);
}

#[test]
fn non_convergence() {
    let out = run(&[
        "fmono",
        "--m",
        "1/3,1/5,1/7",
        "--mm",
        "1/2,1/3,1/4",
        "--shell-cap",
        "4",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn paper_table_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = run(&[
        "paper-table",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let mut r = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "m1",
            "m2",
            "m12",
            "expected_re",
            "expected_im",
            "observed_re",
            "observed_im",
            "residual",
            "pass"
        ]
    );
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|row| &row[8] == "true"));
}

#[test]
fn deterministic_monte_carlo() {
    let args = [
        "selberg",
        "--m",
        "0,0,0,0",
        "--mbar",
        "1/2,1/2,1/2,1/2",
        "--mm",
        "1/2,1/2,1/2,1/2,1/2,1/2",
        "--tol",
        "1/50",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["method"], "monte_carlo");
}

#[test]
fn screen_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let lat = dir.path().join("lattice.json");
    std::fs::write(&lat, r#"{"rank": 2, "gram": [["3", "1"], ["1", "3"]]}"#).unwrap();
    let base = [
        "screen",
        "--lattice",
        lat.to_str().unwrap(),
        "--alphas",
        "1,0;0,1",
        "--trunc",
        "3",
    ];
    let formula = run(&[&base[..], &["--lambda", "1/5,-2/7"]].concat());
    assert_eq!(
        code(&formula),
        0,
        "{}",
        String::from_utf8_lossy(&formula.stderr)
    );
    // the same vector as a VOA element file
    let input = dir.path().join("v.json");
    std::fs::write(
        &input,
        r#"[{"monomial": [], "lattice": ["1/5", "-2/7"], "coeff": {"re": 1.0, "im": 0.0}}]"#,
    )
    .unwrap();
    let direct = run(&[
        &base[..],
        &[
            "--input",
            input.to_str().unwrap(),
            "--method",
            "direct",
            "--headroom",
            "1",
        ],
    ]
    .concat());
    assert_eq!(
        code(&direct),
        0,
        "{}",
        String::from_utf8_lossy(&direct.stderr)
    );
    let (f, d) = (json(&formula), json(&direct));
    let f = f["element"].as_array().unwrap();
    let d = d["element"].as_array().unwrap();
    assert_eq!(f.len(), d.len());
    assert!(!f.is_empty());
    for (x, y) in f.iter().zip(d) {
        assert_eq!(x["monomial"], y["monomial"]);
        assert_eq!(x["lattice"], y["lattice"]);
        for part in ["re", "im"] {
            let (a, b) = (
                x["coeff"][part].as_f64().unwrap(),
                y["coeff"][part].as_f64().unwrap(),
            );
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn fractional_screen_without_lambda_is_usage_error() {
    let out = run(&[
        "screen",
        "--lattice",
        r#"{"rank": 1, "gram": [["1/2"]]}"#,
        "--alphas",
        "1",
    ]);
    assert_eq!(code(&out), 64);
}

#[test]
fn trivial_level_sl2() {
    let out = run(&["trivial-level", "--root", "sl2", "--trunc", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["failures"] == 0));
}

#[test]
fn jobs_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_screenlab"))
        .args(["ftilde", "--m", "1/3,1/5", "--mm", "1/7"])
        .env("SCREENLAB_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["value"]["re"].as_f64().unwrap() + 0.0007).abs() < 5e-4);
}
