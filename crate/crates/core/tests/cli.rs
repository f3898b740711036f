//! End-to-end checks of the command-line surface: exit codes, formats
//! and file output.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_auction-leakage"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("run binary");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn price_subcommand() {
    let (code, stdout, _) = run(&["price", "--bids", "1,1,4,1"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "price 1\nbuyers 1,2,3,4\nbenefit 4\n");
}

#[test]
fn usage_errors_exit_1() {
    let (code, _, _) = run(&["price"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["price", "--bids", "abc"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["no-such-command"]);
    assert_eq!(code, 1);
}

#[test]
fn domain_errors_exit_2() {
    let (code, _, stderr) = run(&["price", "--bids", "0,3"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("below the minimum"));
    let (code, _, _) = run(&["entropy", "--n", "3", "--m", "5", "--engine", "closed2"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["table", "--m", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn budget_errors_exit_3() {
    let (code, _, stderr) = run(&["entropy", "--n", "4", "--m", "50", "--budget", "1000"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("budget"));
}

#[test]
fn budget_env_variable_is_honored() {
    let out = bin()
        .args(["entropy", "--n", "4", "--m", "50"])
        .env("AUCTION_LEAKAGE_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn entropy_json_shape() {
    let (code, stdout, _) = run(&["entropy", "--n", "2", "--m", "9", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(v["engine"], "closed2");
    assert_eq!(v["vulnerability"]["num"], "5");
    assert_eq!(v["vulnerability"]["den"], "9");
    assert_eq!(v["limit_bits"], 1.0);
}

#[test]
fn entropy_human_output() {
    let (code, stdout, _) = run(&["entropy", "--n", "1", "--m", "10"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("vulnerability 1/1"));
    assert!(stdout.contains("entropy_bits 0"));
}

#[test]
fn verify_and_series_happy_paths() {
    let (code, stdout, _) = run(&["verify", "--n", "2", "--max-m", "16"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("16/16 exact matches"));

    let (code, stdout, _) = run(&["series", "--n", "2", "--max-m", "5"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "m,c_n\n1,1\n2,3\n3,6\n4,10\n5,15\n");
}

#[test]
fn fit_appends_json_report() {
    let (code, stdout, _) = run(&["fit", "--n", "2", "--max-m", "10"]);
    assert_eq!(code, 0);
    let last = stdout.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(last).unwrap();
    assert_eq!(v["degree"], 2);
    assert_eq!(v["paper_leading"], 0.5);
    assert!((v["leading"].as_f64().unwrap() - 0.5).abs() < 1e-6);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("auction-leakage-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let (code, stdout, _) = run(&[
        "table",
        "--m",
        "3",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "1,1,3\n1,2,2\n3,2,3\n"
    );
}
