//! End-to-end checks of the `mvrl` binary: artifact layout, output
//! formats, and error handling.

use std::path::PathBuf;
use std::process::{Command, Output};

fn mvrl() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mvrl"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mvrl_cli_{name}_{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).expect("create scratch dir");
    dir
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

/// Short training run that leaves a usable checkpoint behind.
fn quick_train(out: &PathBuf) -> Output {
    mvrl()
        .args([
            "train",
            "--env",
            "pendulum",
            "--steps",
            "400",
            "--warmup",
            "300",
            "--eval-episodes",
            "2",
            "--seed",
            "0",
            "--out",
        ])
        .arg(out)
        .output()
        .expect("run mvrl train")
}

#[test]
fn train_writes_checkpoint_and_parseable_csv() {
    let dir = scratch("train");
    let output = quick_train(&dir);
    assert!(output.status.success(), "stderr: {}", stderr(&output));

    let text = stdout(&output);
    assert!(text.contains("eval: mean return"), "stdout: {text}");
    assert!(text.contains("checkpoint:"), "stdout: {text}");
    assert!(dir.join("agent.json").exists());

    let mut reader = csv::Reader::from_path(dir.join("episodes.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        [
            "episode",
            "steps",
            "total_env_steps",
            "return",
            "critic_loss",
            "actor_loss",
            "attn_entropy"
        ]
    );
    let rows = reader.records().count();
    assert!(rows >= 1, "expected at least one episode row, got {rows}");

    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn eval_reads_a_checkpoint_and_compares_to_baseline() {
    let dir = scratch("eval");
    let output = quick_train(&dir);
    assert!(output.status.success(), "stderr: {}", stderr(&output));

    let output = mvrl()
        .args([
            "eval",
            "--env",
            "pendulum",
            "--episodes",
            "2",
            "--baseline",
            "--checkpoint",
        ])
        .arg(dir.join("agent.json"))
        .output()
        .expect("run mvrl eval");
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("policy: mean return"), "stdout: {text}");
    assert!(text.contains("random: mean return"), "stdout: {text}");
    assert!(text.contains("improvement:"), "stdout: {text}");

    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn eval_rejects_checkpoint_env_shape_mismatch() {
    let dir = scratch("mismatch");
    let output = quick_train(&dir);
    assert!(output.status.success(), "stderr: {}", stderr(&output));

    // Pendulum checkpoint (1 view x 3) against nav (3 views x 4).
    let output = mvrl()
        .args(["eval", "--env", "nav", "--checkpoint"])
        .arg(dir.join("agent.json"))
        .output()
        .expect("run mvrl eval");
    assert!(!output.status.success(), "mismatch must fail");
    assert!(
        stderr(&output).contains("does not match env"),
        "stderr: {}",
        stderr(&output)
    );

    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn parallel_train_writes_worker_episode_csv() {
    let dir = scratch("parallel");
    let output = mvrl()
        .args([
            "train",
            "--env",
            "pendulum",
            "--steps",
            "300",
            "--warmup",
            "250",
            "--workers",
            "2",
            "--eval-episodes",
            "2",
            "--out",
        ])
        .arg(&dir)
        .output()
        .expect("run mvrl train --workers");
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    assert!(stdout(&output).contains("across 2 workers"));
    assert!(dir.join("agent.json").exists());

    let mut reader = csv::Reader::from_path(dir.join("episodes.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["worker", "ret", "steps"]
    );

    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sweep_writes_one_row_per_seed() {
    let dir = scratch("sweep");
    let csv_path = dir.join("sweep.csv");
    let output = mvrl()
        .args([
            "sweep",
            "--env",
            "pendulum",
            "--seeds",
            "0,1",
            "--steps",
            "300",
            "--warmup",
            "250",
            "--eval-episodes",
            "2",
            "--threads",
            "2",
            "--out",
        ])
        .arg(&csv_path)
        .output()
        .expect("run mvrl sweep");
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    assert!(
        stdout(&output).contains("across 2 seeds"),
        "stdout: {}",
        stdout(&output)
    );

    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(reader.records().count(), 2);

    let _ = std::fs::remove_dir_all(&dir);
}
