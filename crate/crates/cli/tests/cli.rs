//! End-to-end CLI tests: exit-code contract, artifact layout, determinism
//! of reruns, and the inspection subcommands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_nonlocal")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nonlocal-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

#[test]
fn good_run_exits_zero_and_writes_artifacts() {
    let dir = tmp_dir("good");
    let cfg = write_config(
        &dir,
        "run.cfg",
        &format!(
            "suite = gns\nt = 2\nresolution = 256\nout = {}\n\
             [kernel]\nfamily = fractional\ns = 0.25\n\
             [function]\nshape = hat\n",
            dir.join("out").display()
        ),
    );
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.join("out/reports.jsonl").exists());
    assert!(dir.join("out/summary.csv").exists());
    assert!(dir.join("out/curves/phi_fractional-0.csv").exists());
    let summary = std::fs::read_to_string(dir.join("out/summary.csv")).unwrap();
    assert!(summary.starts_with("id,lhs,rhs,margin,pass"));
    assert!(summary.contains(",true"));
}

#[test]
fn small_base_is_an_input_error() {
    let dir = tmp_dir("badbase");
    let cfg = write_config(&dir, "bad.cfg", "suite = gns\nt = 1.5\n");
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("t ≥ 2"));
}

#[test]
fn inverse_at_q_equal_p_refuses_with_exit_two() {
    let dir = tmp_dir("inverse");
    let cfg = write_config(
        &dir,
        "inv.cfg",
        "suite = inverse\nresolution = 128\n[inverse]\nc = 1\nq = 2\np = 2\nd = 1\n",
    );
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1/p"));
}

#[test]
fn saturating_kernel_yields_indeterminate_and_exit_one() {
    let dir = tmp_dir("saturate");
    let cfg = write_config(
        &dir,
        "ball.cfg",
        &format!(
            "suite = gns\nt = 2\nresolution = 128\nout = {}\n\
             [kernel]\nfamily = ball\nradius = 1\n\
             [function]\nshape = hat\n",
            dir.join("out").display()
        ),
    );
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let reports = std::fs::read_to_string(dir.join("out/reports.jsonl")).unwrap();
    assert!(reports.contains("indeterminate"));
    assert!(reports.contains("w saturates"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tmp_dir("determinism");
    let body = |out: &Path| {
        format!(
            "suite = lemmas\nt = 2\nresolution = 128\nseed = 7\nworkers = 2\nout = {}\n\
             [kernel]\nfamily = fractional\ns = 0.25\n\
             [function]\nshape = hat\n[function]\nshape = indicator\n",
            out.display()
        )
    };
    let cfg_a = write_config(&dir, "a.cfg", &body(&dir.join("out-a")));
    let cfg_b = write_config(&dir, "b.cfg", &body(&dir.join("out-b")));
    assert!(run(&["run", "--config", cfg_a.to_str().unwrap()]).status.success());
    assert!(run(&["run", "--config", cfg_b.to_str().unwrap()]).status.success());
    for file in ["reports.jsonl", "summary.csv"] {
        let a = std::fs::read(dir.join("out-a").join(file)).unwrap();
        let b = std::fs::read(dir.join("out-b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between reruns");
    }
}

#[test]
fn describe_reports_saturation_and_growth_failure() {
    let dir = tmp_dir("describe");
    let cfg = write_config(
        &dir,
        "d.cfg",
        "resolution = 128\n\
         [kernel]\nfamily = ball\nradius = 1\n\
         [kernel]\nfamily = max-fractional\ns1 = 0.125\ns2 = 0.25\n",
    );
    let out = run(&["describe", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("w saturates"), "{text}");
    assert!(text.contains("per-component"), "{text}");
}

#[test]
fn norm_uses_phi_section_and_matches_indicator_closed_form() {
    let dir = tmp_dir("norm");
    let cfg = write_config(
        &dir,
        "n.cfg",
        "resolution = 1024\n\
         [phi]\nq = 4\nc = 32\np = 2\n\
         [function]\nshape = indicator\n",
    );
    let out = run(&["norm", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    // ‖1_{(0,1)}‖ under 32t⁴ is 1/φ⁻¹(1) = 32^{1/4} ≈ 2.378414
    assert!(text.contains("2.378414"), "{text}");
}

#[test]
fn seminorm_and_critical_subcommands_work() {
    let dir = tmp_dir("sub");
    let cfg = write_config(
        &dir,
        "s.cfg",
        &format!(
            "resolution = 256\nout = {}\n\
             [kernel]\nfamily = fractional\ns = 0.25\n\
             [function]\nshape = hat\n",
            dir.join("out").display()
        ),
    );
    let out = run(&["seminorm", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("seminorm^p"));
    let out = run(&["critical", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(dir.join("out/curves/phi_fractional-0.csv").exists());
    assert!(dir.join("out/curves/w_fractional-0.csv").exists());
}

#[test]
fn flags_override_config_keys() {
    let dir = tmp_dir("override");
    let cfg = write_config(
        &dir,
        "o.cfg",
        &format!(
            "suite = bbm\nt = 2\nresolution = 128\nout = {}\n\
             [kernel]\nfamily = fractional\ns = 0.25\n\
             [function]\nshape = hat\n",
            dir.join("out-default").display()
        ),
    );
    let out_dir = dir.join("out-flag");
    let out = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--suite",
        "gns",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert!(summary.contains("gns/"), "{summary}");
    assert!(!summary.contains("bbm"));
}

#[test]
fn function_csv_round_trips_through_run() {
    let dir = tmp_dir("csvfn");
    // export a grid function, feed it back through the config
    let u = nonlocal_core::corpus::hat(256);
    let mut buf = Vec::new();
    u.to_csv(&mut buf).unwrap();
    let csv_path = dir.join("hat.csv");
    std::fs::write(&csv_path, &buf).unwrap();
    let cfg = write_config(
        &dir,
        "c.cfg",
        &format!(
            "suite = gns\nt = 2\nresolution = 256\nout = {}\n\
             [kernel]\nfamily = fractional\ns = 0.25\n\
             [function]\ncsv = {}\n",
            dir.join("out").display(),
            csv_path.display()
        ),
    );
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(dir.join("out/summary.csv")).unwrap();
    assert!(summary.contains("csv-0"));
}

#[test]
fn missing_file_is_an_input_error() {
    let dir = tmp_dir("missing");
    let cfg = write_config(
        &dir,
        "m.cfg",
        "suite = gns\n[function]\ncsv = /nonexistent/file.csv\n",
    );
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
