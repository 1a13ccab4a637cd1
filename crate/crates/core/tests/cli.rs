//! Golden outputs and exit statuses of the `locrr` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn locrr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locrr")).args(args).output().expect("spawn locrr")
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn assert_golden(args: &[&str], name: &str) {
    let out = locrr(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden(name), "locrr {}", args.join(" "));
}

#[test]
fn chi_range_golden() {
    assert_golden(&["chi", "--wps", "1,2", "--range", "0..3"], "chi_wps_1_2_range_0_3.txt");
}

#[test]
fn sectors_golden() {
    assert_golden(&["sectors", "--wps", "1,2", "--twist", "1"], "sectors_wps_1_2_twist_1.txt");
    assert_golden(
        &["sectors", "--wps", "1,2", "--twist", "1", "--format", "machine"],
        "sectors_wps_1_2_twist_1.machine.txt",
    );
}

#[test]
fn todd_coarse_golden() {
    assert_golden(&["todd-coarse", "--wps", "1,1,2"], "todd_coarse_wps_1_1_2.txt");
}

#[test]
fn poly_golden() {
    assert_golden(&["poly", "--pqs", "2,3", "--group", "S3"], "poly_pqs_2_3_s3.txt");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["sectors", "--pqs", "1,4", "--group", "S4", "--range", "-3..3", "--format", "machine"];
    let a = locrr(&args);
    let b = locrr(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn check_battery_exits_zero() {
    let out = locrr(&["check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(" 0 mismatches"), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    let out = locrr(&["chi", "--wps", "1,2", "--twist", "x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--twist"));
    let out = locrr(&["chi", "--pqs", "2,3", "--group", "(123),(12)", "--twist", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = locrr(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mismatch_status_is_four() {
    let job = locrr::cli::parse_args(["locrr", "check", "--pqs", "1,2", "--group", "S2", "--range", "0..2"]).unwrap();
    let mut out = Vec::new();
    let wrong = |_: &locrr::cli::StackSpec, _: i64| Ok(locrr::exact_arith::int(-1));
    assert_eq!(locrr::cli::run_check_with(&job, &mut out, &wrong).unwrap(), 4);
}
