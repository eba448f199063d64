//! End-to-end tests of the command-line binary: job files, output modes and
//! the exit-code contract.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_determinacy-kit");

const EXAMPLE_JOB: &str = "\
characteristic = 2
vars = x y
matrix = 1 1
entry 1 1 = x^2+y^3
group = contact
command = separability
";

fn write_job(dir: &PathBuf, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("determinacy-kit-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn separability_text_output() {
    let dir = tmpdir("sep");
    let job = write_job(&dir, "job.txt", EXAMPLE_JOB);
    let out = Command::new(BIN).args(["--job"]).arg(&job).output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("c_image: 5"), "got:\n{text}");
    assert!(text.contains("c_space: 4"), "got:\n{text}");
    assert!(text.contains("separable: false"), "got:\n{text}");
}

#[test]
fn structured_output_is_json() {
    let dir = tmpdir("json");
    let job = write_job(&dir, "job.txt", &EXAMPLE_JOB.replace("separability", "determ"));
    let out = Command::new(BIN)
        .args(["determ", "--output", "structured", "--job"])
        .arg(&job)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["p"], serde_json::json!(2));
    assert_eq!(v["d"], serde_json::json!(4));
    assert_eq!(v["ring"]["characteristic"], serde_json::json!(2));
}

#[test]
fn json_job_document() {
    let dir = tmpdir("jsonjob");
    let job = write_job(
        &dir,
        "job.json",
        r#"{"characteristic": 2, "vars": ["x","y"], "matrix": [["x^2+y^3"]],
            "group": "contact", "command": "codim"}"#,
    );
    let out = Command::new(BIN).args(["--job"]).arg(&job).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("codim: 5"), "got:\n{text}");
}

#[test]
fn validation_errors_exit_2() {
    let dir = tmpdir("val");
    let bad_char = write_job(&dir, "a.txt", &EXAMPLE_JOB.replace("= 2", "= 6"));
    let out = Command::new(BIN).args(["--job"]).arg(&bad_char).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("characteristic"));

    let bad_poly = write_job(&dir, "b.txt", &EXAMPLE_JOB.replace("x^2+y^3", "x^2 + * y"));
    let out = Command::new(BIN).args(["--job"]).arg(&bad_poly).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let not_local = write_job(&dir, "c.txt", &EXAMPLE_JOB.replace("x^2+y^3", "1+x"));
    let out = Command::new(BIN).args(["--job"]).arg(&not_local).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infinite_codimension_exit_3() {
    let dir = tmpdir("inf");
    let job = write_job(
        &dir,
        "job.txt",
        &EXAMPLE_JOB
            .replace("contact", "right")
            .replace("separability", "orbit-codim"),
    );
    let out = Command::new(BIN).args(["--job"]).arg(&job).output().unwrap();
    assert_eq!(out.status.code(), Some(3));

    // but plain codim reports "infinite" with exit 0
    let job = write_job(
        &dir,
        "job2.txt",
        &EXAMPLE_JOB
            .replace("contact", "right")
            .replace("separability", "codim"),
    );
    let out = Command::new(BIN).args(["--job"]).arg(&job).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("codim: infinite"));
}

#[test]
fn verify_flag_cross_checks_methods() {
    let dir = tmpdir("verify");
    let job = write_job(&dir, "job.txt", EXAMPLE_JOB);
    let out = Command::new(BIN)
        .args(["--verify", "--job"])
        .arg(&job)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("verified: true"));
}

#[test]
fn jobs_dir_runs_batch_in_sorted_order() {
    let dir = tmpdir("batch");
    write_job(&dir, "01-determ.txt", &EXAMPLE_JOB.replace("separability", "determ"));
    write_job(&dir, "02-codim.txt", &EXAMPLE_JOB.replace("separability", "codim"));
    let out = Command::new(BIN).args(["--jobs-dir"]).arg(&dir).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let p1 = text.find("01-determ").unwrap();
    let p2 = text.find("02-codim").unwrap();
    assert!(p1 < p2);
    assert!(text.contains("d: 4"));
    assert!(text.contains("codim: 5"));
}

#[test]
fn command_mismatch_in_batch_fails() {
    let dir = tmpdir("mismatch");
    write_job(&dir, "job.txt", EXAMPLE_JOB);
    let out = Command::new(BIN)
        .args(["determ", "--jobs-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deterministic_across_runs() {
    let dir = tmpdir("det");
    let job = write_job(&dir, "job.txt", &EXAMPLE_JOB.replace("separability", "orbit-codim"));
    let run = || {
        let out = Command::new(BIN)
            .args(["--output", "structured", "--job"])
            .arg(&job)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run(), run());
}
