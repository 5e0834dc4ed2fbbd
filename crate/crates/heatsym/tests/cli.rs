//! End-to-end exercises of the command-line surface: exit codes, config
//! diagnostics, and emitted files.

use heatsym::harness::cli;
use std::fs;
use std::path::Path;

fn run(args: &[&str]) -> i32 {
    let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    cli(&owned)
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&[]), 1);
    assert_eq!(run(&["no-such-command"]), 1);
    assert_eq!(run(&["filter"]), 1);
    assert_eq!(run(&["filter", "--problem", "ibvp9"]), 1);
    assert_eq!(run(&["compare"]), 1);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.conf");
    assert_eq!(run(&["compare", "--config", missing.to_str().unwrap()]), 2);

    let bad = write_config(dir.path(), "bad.conf", "problem = ibvp1\nwhat = 1\n");
    assert_eq!(run(&["compare", "--config", &bad]), 2);

    let incomplete = write_config(dir.path(), "incomplete.conf", "problem = ibvp1\n");
    assert_eq!(run(&["solve-fd", "--config", &incomplete]), 2);
}

#[test]
fn numerical_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // Explicit scheme far beyond its stability bound.
    let unstable = write_config(
        dir.path(),
        "unstable.conf",
        &format!(
            "problem = ibvp1\nT_i = 300\nT_s = 900\ntheta = 0\ndx = 0.002\ndt = 60\n\
             t_end = 600\nsnapshot_times = 600\noutput_dir = {}\n",
            dir.path().join("out").display()
        ),
    );
    assert_eq!(run(&["compare", "--config", &unstable]), 3);
}

#[test]
fn verify_and_filter_and_reduce_succeed() {
    assert_eq!(run(&["verify-algebra"]), 0);
    assert_eq!(run(&["filter", "--problem", "ibvp1"]), 0);
    assert_eq!(run(&["filter", "--problem", "ibvp2"]), 0);
    assert_eq!(run(&["reduce", "--problem", "ibvp1"]), 0);
    assert_eq!(run(&["reduce", "--problem", "ibvp2"]), 0);
}

#[test]
fn solver_commands_emit_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    // Coarse grid: keep the end-to-end run quick.
    let config = write_config(
        dir.path(),
        "run.conf",
        &format!(
            "problem = ibvp1\nT_i = 300\nT_s = 900\ndx = 0.02\ndt = 10\nt_end = 600\n\
             snapshot_times = 300,600\noutput_dir = {}\n",
            out.display()
        ),
    );

    assert_eq!(run(&["solve-analytic", "--config", &config]), 0);
    assert!(out.join("profile_ibvp1_t300.csv").is_file());
    assert!(out.join("profile_ibvp1_t600.csv").is_file());

    assert_eq!(run(&["solve-fd", "--config", &config]), 0);
    assert!(out.join("fd_ibvp1_t600.csv").is_file());

    assert_eq!(run(&["compare", "--config", &config]), 0);
    let compare = fs::read_to_string(out.join("compare_ibvp1_t600.csv")).unwrap();
    assert!(compare.starts_with("x,t,T_analytic,T_numeric,abs_error\n"));
    // 2 m / 0.02 m + 1 nodes plus the header.
    assert_eq!(compare.lines().count(), 102);
}

#[test]
fn reproduce_figures_emits_four_datasets() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("figs");
    // Coarse shared grid so both problems run quickly; problem-specific
    // boundary data comes from the worked example.
    let config = write_config(
        dir.path(),
        "figs.conf",
        &format!(
            "dx = 0.025\ndt = 30\nt_end = 600\nsnapshot_times = 300,600\noutput_dir = {}\n",
            out.display()
        ),
    );
    assert_eq!(run(&["reproduce-figures", "--config", &config]), 0);
    for name in [
        "figure1_ibvp1_analytic_profiles.csv",
        "figure2_ibvp1_comparison.csv",
        "figure3_ibvp2_analytic_profiles.csv",
        "figure4_ibvp2_comparison.csv",
    ] {
        assert!(out.join(name).is_file(), "{name} missing");
    }
    let fig1 = fs::read_to_string(out.join("figure1_ibvp1_analytic_profiles.csv")).unwrap();
    assert!(fig1.starts_with("x,t,T_analytic\n"));
    // Two snapshot blocks of L/dx + 1 nodes each, plus the header.
    assert_eq!(fig1.lines().count(), 1 + 2 * 81);
}
