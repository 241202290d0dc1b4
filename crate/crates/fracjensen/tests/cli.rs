//! Contract tests against the built binary.

use std::fs;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_fracjensen");

fn write_job(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

const SWEEP_JOB: &str = "\
command = sweep
inequality = mjensen_discrete
phi = x^2
points = 0, 0.5, 1, 2
weights = 0.25, 0.25, 0.25, 0.25
m = 0.2:1:5
alpha = 0.5
seed = 7
format = csv
";

#[test]
fn sweep_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(&dir, "sweep.job", SWEEP_JOB);
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}.csv"));
        let status = Command::new(BIN)
            .args(["sweep", "--job"])
            .arg(&job)
            .arg("--output")
            .arg(&out)
            .env("FRACJENSEN_THREADS", "2")
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert!(text.starts_with("alpha,m,lhs,rhs,slack,quadrature_error,verdict\n"));
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn falsify_violation_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(
        &dir,
        "falsify.job",
        "command = falsify\ninequality = jensen_classical\nrelaxation = drop_convexity\nbudget = 200\nseed = 42\n",
    );
    let out = Command::new(BIN)
        .args(["falsify", "--job"])
        .arg(&job)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("counterexample"), "{text}");
}

#[test]
fn missing_key_exits_1_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(&dir, "bad.job", "command = integrate\nkernel = rl\na = 0\nb = 1\nt = 0.5\nalpha = 0.5\n");
    let out = Command::new(BIN)
        .args(["integrate", "--job"])
        .arg(&job)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("f"));
}

#[test]
fn command_mismatch_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(&dir, "sweep.job", SWEEP_JOB);
    let out = Command::new(BIN)
        .args(["falsify", "--job"])
        .arg(&job)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_thread_env_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(&dir, "sweep.job", SWEEP_JOB);
    let out = Command::new(BIN)
        .args(["sweep", "--job"])
        .arg(&job)
        .env("FRACJENSEN_THREADS", "two")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FRACJENSEN_THREADS"));
}

#[test]
fn check_hypothesis_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    // m < 1 but 0 is not in the interval spanned by the points
    let job = write_job(
        &dir,
        "hyp.job",
        "command = check\ninequality = mjensen_discrete\nphi = x^2\npoints = 1, 2\nweights = 0.5, 0.5\nm = 0.5\nalpha = 0.5\n",
    );
    let out = Command::new(BIN)
        .args(["check", "--job"])
        .arg(&job)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn seed_override_changes_falsify_search() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(
        &dir,
        "f.job",
        "command = falsify\ninequality = mercer_discrete\nrelaxation = none\nbudget = 50\nseed = 1\n",
    );
    for seed in ["1", "99"] {
        let out = Command::new(BIN)
            .args(["falsify", "--job"])
            .arg(&job)
            .args(["--seed", seed])
            .output()
            .unwrap();
        // the honest inequality survives any seed
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
