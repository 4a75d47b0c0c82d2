//! Criterion 15: the `all` suite run twice with the same seed, under
//! different worker counts, produces byte-identical JSON.

use std::process::{Command, ExitCode};
use std::time::Instant;

fn run_all(threads: &str) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_hspec"))
        .args(["all", "--seed", "0"])
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let (code_a, first) = run_all("1");
    let (code_b, second) = run_all("2");
    let identical = !first.is_empty() && first == second;
    let valid = serde_json::from_slice::<serde_json::Value>(&first).is_ok();
    let pass = identical && valid && code_a == code_b;
    println!(
        "{} criterion 15 determinism of `all`: {} bytes, identical={identical}, valid_json={valid}, exit codes {:?}/{:?} [{:.2}s]",
        if pass { "PASS" } else { "FAIL" },
        first.len(),
        code_a,
        code_b,
        start.elapsed().as_secs_f64()
    );
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
