//! Runs the built binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpc-isac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.toml");
    fs::write(
        &path,
        "[sweep]\nsnr_db = [10.0]\nmpc_counts = [1, 2]\n\n[ecdf]\nsnr_db = 10.0\nmpc_count = 2\n\n[ber]\nbits = 4000\nsnr_db = [0.0, 10.0]\n",
    )
    .unwrap();
    path.to_str().unwrap().to_owned()
}

fn assert_csv(path: &Path, header: &str, seed: u64) -> String {
    let text = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut lines = text.lines();
    let comment = lines.next().unwrap();
    assert!(comment.starts_with("# config_hash="), "{comment}");
    assert!(comment.ends_with(&format!(" seed={seed}")), "{comment}");
    assert_eq!(lines.next().unwrap(), header);
    assert!(lines.next().is_some(), "no data rows in {}", path.display());
    text
}

#[test]
fn rmse_writes_csv_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let outputs: Vec<String> = ["a", "b"]
        .iter()
        .map(|sub| {
            let out = dir.path().join(sub);
            let status = run(&[
                "rmse",
                "--config",
                &cfg,
                "--seed",
                "3",
                "--trials",
                "2",
                "--out",
                out.to_str().unwrap(),
            ]);
            assert!(
                status.status.success(),
                "{}",
                String::from_utf8_lossy(&status.stderr)
            );
            assert_csv(
                &out.join("rmse.csv"),
                "snr_db,mpc_count,trials,unconverged,rmse_m,median_m,p90_m",
                3,
            )
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn ecdf_and_ber_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("out");
    let out_s = out.to_str().unwrap();
    assert!(
        run(&["ecdf", "--config", &cfg, "--trials", "3", "--out", out_s])
            .status
            .success()
    );
    assert_csv(&out.join("ecdf.csv"), "scheme,error_m,ecdf", 0);
    assert_csv(
        &out.join("ecdf_trials.csv"),
        "trial,tensor_hash,sfmc_error_m,data_level_error_m",
        0,
    );
    assert!(
        run(&["ber", "--config", &cfg, "--out", out_s, "--seed", "1"])
            .status
            .success()
    );
    assert_csv(&out.join("ber.csv"), "phi,K,snr_db,bits,errors,ber", 1);
}

#[test]
fn locate_reports_the_target() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("loc");
    let result = run(&["locate", "--desk", "--out", out.to_str().unwrap()]);
    assert!(
        result.status.success(),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("error_m      0\n"), "{stdout}");
    assert_csv(&out.join("locate_profile.csv"), "x,y,value", 0);
}

#[test]
fn scale_flags_are_exclusive_and_bad_configs_fail() {
    assert!(!run(&["rmse", "--desk", "--full"]).status.success());
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[grid]\nomega = 4\n").unwrap();
    let result = run(&["rmse", "--config", bad.to_str().unwrap()]);
    assert!(!result.status.success());
    assert!(String::from_utf8_lossy(&result.stderr).contains("grid.omega"));
}
