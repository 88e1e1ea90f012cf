//! End-to-end runs of the `fewweight` binary.

use std::process::{Command, Output};

fn fewweight(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fewweight"))
        .args(args)
        .env_remove("FEWWEIGHT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_text_line() {
    let o = fewweight(&["build", "--family", "d1", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.trim_end()
            .ends_with("[24,6,10]  1+24z^10+12z^12+24z^14+3z^16"),
        "{out}"
    );
}

#[test]
fn build_json_round_trips() {
    let o = fewweight(&["build", "--family", "d3", "--m", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let report = fewweight::report::parse_code_report(&stdout(&o)).unwrap();
    assert_eq!((report.n, report.k), (56, 8));
    assert_eq!(fewweight::report::to_canonical_json(&report), stdout(&o));
}

#[test]
fn build_writes_out_file() {
    let dir = std::env::temp_dir().join(format!("fewweight-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d2.csv");
    let o = fewweight(&[
        "build",
        "--family",
        "d2",
        "--m",
        "3..=4",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("family,m,d,modulus,n,k,w,A"));
    assert!(csv.contains("D2,4,1,0x13,113,8,56,190"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        fewweight(&["build", "--family", "d2", "--m", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fewweight(&["charsum", "--m", "3", "--sum", "s9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fewweight(&["build", "--m", "3", "--d", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        fewweight(&["build", "--m", "3", "--modulus", "0xf"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_grid_passes() {
    let o = fewweight(&["verify", "--family", "all", "--m", "3..5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 9);
    assert!(out.lines().all(|l| l.ends_with("PASS")), "{out}");
}

#[test]
fn verify_out_of_scope_is_not_a_failure() {
    let o = fewweight(&["verify", "--family", "d1", "--m", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("out of theorem scope"));
}

#[test]
fn budget_refusal_exits_3() {
    let o = fewweight(&["verify", "--family", "d2", "--m", "20"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    let small = fewweight(&["build", "--family", "d1", "--m", "5", "--budget", "2^10"]);
    assert_eq!(small.status.code(), Some(3));
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_fewweight"))
        .args(["build", "--family", "d3", "--m", "4"])
        .env("FEWWEIGHT_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn charsum_rows_all_ok() {
    let o = fewweight(&["charsum", "--m", "3", "--d", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("sum_id,m,d,a,b,direct,predicted_set,ok"));
    let rows: Vec<&str> = lines.collect();
    // 7 sums, 2 exponents, 64 labels, minus (0,0) for S1..S5.
    assert_eq!(rows.len(), 7 * 2 * 64 - 5 * 2);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn charsum_s4_reaches_both_branch_values() {
    let o = fewweight(&["charsum", "--m", "4", "--sum", "s4"]);
    assert_eq!(o.status.code(), Some(0));
    let direct: Vec<i64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert!(direct.contains(&33) && direct.contains(&-31));
}
