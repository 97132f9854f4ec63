use std::process::{Command, Output};

fn shnirel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shnirel"))
        .args(args)
        .env_remove("SHNIREL_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn last_line(o: &Output) -> String {
    stdout(o).lines().last().unwrap_or_default().to_string()
}

#[test]
fn tables_validate() {
    let o = shnirel(&["tables", "--validate"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        last_line(&o),
        "rows: 102 passed, 0 failed, 2 annotated typos"
    );
}

#[test]
fn tables_regenerate_as_markdown() {
    let o = shnirel(&["tables", "--regenerate", "--format", "md", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("## Table 1") && text.contains("## Table 2"));
    assert!(!text.contains("EMPTY"));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("missing: 0"));
}

#[test]
fn decompose_quadrant_target() {
    let o = shnirel(&[
        "decompose",
        "--z",
        "19,16",
        "--primes",
        "kpi",
        "--max-terms",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    // 19+16i has prime norm 617, so it is its own one-term answer
    assert!(last_line(&o).contains("1 term(s)"));

    let o = shnirel(&[
        "decompose",
        "--z",
        "19,16",
        "--primes",
        "kpi",
        "--max-terms",
        "3",
        "--no-single-term",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        last_line(&o).contains("3 term(s), z=p+q+r"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn decompose_json_and_negative_components() {
    let o = shnirel(&[
        "decompose",
        "--z",
        "6,6",
        "--primes",
        "spi",
        "--max-terms",
        "2",
        "--strict-norm",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);

    let o = shnirel(&["decompose", "--z", "-3,2", "--primes", "spi"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn scan_quadrant_has_no_exceptions() {
    let o = shnirel(&[
        "scan",
        "--targets",
        "a",
        "--re",
        "1..50",
        "--im",
        "1..50",
        "--primes",
        "kpi",
        "--max-terms",
        "3",
        "--min-max-component",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(last_line(&o).contains("exceptions: 0"));
}

#[test]
fn scan_exceptions_exit_one() {
    let o = shnirel(&[
        "scan",
        "--targets",
        "gamma",
        "--re",
        "1..20",
        "--im",
        "0..20",
        "--primes",
        "gammapi",
        "--strict-norm",
        "--line",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(last_line(&o).contains("exceptions: 20"));
}

#[test]
fn scan_output_is_identical_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "8"] {
        let path = dir.path().join(format!("scan-{jobs}.csv"));
        let o = shnirel(&[
            "scan",
            "--targets",
            "gammag-sector",
            "--re",
            "1..30",
            "--im",
            "-30..30",
            "--primes",
            "spi",
            "--strict-norm",
            "--min-max-component",
            "6",
            "--jobs",
            jobs,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(1));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(String::from_utf8(outputs[0].clone())
        .unwrap()
        .starts_with("z,p,q,r,representation\n"));
}

#[test]
fn solvers() {
    let o = shnirel(&["solve-thm1", "--a", "11", "--b", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("row 1:   5 3 3 0"));
    assert!(text.contains("row 2:   0 0 0 3"));

    let o = shnirel(&[
        "solve-thm2",
        "--a",
        "7",
        "--b",
        "1",
        "--kmax",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["k"], 2);

    let o = shnirel(&[
        "solve-conj1",
        "--a",
        "8",
        "--b",
        "1",
        "--kmax",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x1,x2,target\n3,0,9\n3,0,9\n2,1,5\n");
}

#[test]
fn number_theory_commands() {
    let o = shnirel(&["thm130", "--n", "24", "--c0", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(last_line(&o).contains("4 primes"));

    let o = shnirel(&["hypotheses", "--index", "2", "--upper", "10000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(last_line(&o).contains("max 5"));

    let o = shnirel(&["obstruction", "--bound", "20", "--norm-limit", "10000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(last_line(&o).contains("multi-term representations: 0"));
}

#[test]
fn sieve_uses_the_cache_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("primes.bin");
    let o = Command::new(env!("CARGO_BIN_EXE_shnirel"))
        .args(["sieve", "--limit", "1000"])
        .env("SHNIREL_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(last_line(&o), "primes up to 1000: 168 (largest 997)");
    let bytes = std::fs::read(&cache).unwrap();
    assert_eq!(&bytes[..8], b"SHNPRIM1");
    assert_eq!(bytes.len(), 8 + 168 * 8);
}

#[test]
fn invalid_arguments_exit_two() {
    for args in [
        &["solve-thm1", "--a", "7", "--b", "7"][..],
        &[
            "scan",
            "--targets",
            "nowhere",
            "--re",
            "1..5",
            "--im",
            "1..5",
            "--primes",
            "kpi",
        ],
        &[
            "scan",
            "--targets",
            "a",
            "--re",
            "1..900",
            "--im",
            "1..5",
            "--primes",
            "kpi",
        ],
        &["decompose", "--z", "3;4"],
        &["hypotheses", "--index", "5", "--upper", "100"],
        &["tables"],
    ] {
        let o = shnirel(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}
