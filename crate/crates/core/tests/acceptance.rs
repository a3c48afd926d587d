//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use quotfib::cli::{execute, Cli};
use quotfib::suite::{run_check, CHECKS, DEFAULT_SAMPLES};

const SEED: u64 = 7;

/// Runtime bound per criterion; `None` where no bound is set.
fn bound(id: u8) -> Option<Duration> {
    let secs = match id {
        1 | 5 => 1,
        2 | 8 => 10,
        3 | 4 => 60,
        7 => 30,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

fn line(id: u8, name: &str, ok: bool, elapsed: Duration, detail: &str) {
    let limit = bound(id).map_or(String::new(), |b| format!(" (bound {} s)", b.as_secs()));
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {name:<22} {verdict} {:>9.3} s{limit}  {detail}", elapsed.as_secs_f64());
}

fn suite_json() -> String {
    let cli = Cli::parse_from(["quotfib", "suite", "--seed", &SEED.to_string()]);
    execute(&cli).expect("suite never reads input").to_json()
}

fn main() -> ExitCode {
    let mut all = true;
    for &(id, name) in &CHECKS {
        let start = Instant::now();
        let entry = run_check(id, SEED, DEFAULT_SAMPLES);
        let elapsed = start.elapsed();
        let in_time = bound(id).is_none_or(|b| elapsed < b);
        let ok = entry.passed() && in_time;
        let detail = if in_time { entry.detail.clone() } else { format!("over time; {}", entry.detail) };
        line(id, name, ok, elapsed, &detail);
        all &= ok;
    }

    let start = Instant::now();
    let (a, b) = (suite_json(), suite_json());
    let same = a == b;
    line(10, "determinism", same, start.elapsed(), &format!("two suite reports, {} bytes each, identical: {same}", a.len()));
    all &= same;

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
