//! Runs every acceptance criterion at full size and prints one line each.
//! Set NLPERIM_ACCEPTANCE=fast for the reduced suite.

use nlperim::suite::{self, CriterionResult, Scale};
use std::process::ExitCode;

const SEED: u64 = 20261015;

/// Thresholds pinned here, independently of the suite's own constants.
fn pinned(id: u8) -> f64 {
    match id {
        1 | 2 => 1e-9,
        3..=8 => 3.0,
        9 => 3.0,
        10 => 0.10,
        11 => 0.0,
        _ => unreachable!(),
    }
}

fn check(r: &CriterionResult) -> Result<(), String> {
    if r.threshold != pinned(r.id) {
        return Err(format!("threshold {} differs from pinned {}", r.threshold, pinned(r.id)));
    }
    if r.cases == 0 {
        return Err("no cases ran".into());
    }
    if r.failures > 0 || !r.passed {
        return Err(format!("{} of {} cases failed", r.failures, r.cases));
    }
    if r.id != 10 && (r.worst.is_nan() || r.worst > r.threshold) {
        return Err(format!("worst {} exceeds {}", r.worst, r.threshold));
    }
    if r.id == 1 && r.seconds >= 1.0 {
        return Err(format!("took {:.3} s", r.seconds));
    }
    Ok(())
}

fn main() -> ExitCode {
    let fast = std::env::var("NLPERIM_ACCEPTANCE").map(|v| v == "fast").unwrap_or(false);
    let scale = if fast { Scale::Fast } else { Scale::Full };
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    println!("acceptance suite ({scale:?}, seed {SEED})");
    let mut ok = true;
    for id in 1..=11u8 {
        let r = suite::run_criterion(id, scale, SEED);
        let verdict = check(&r);
        println!(
            "criterion {:>2} {:<36} {}  cases={} worst={:.3e} threshold={:.1e} time={:.1}s{}",
            r.id,
            r.name,
            if verdict.is_ok() { "PASS" } else { "FAIL" },
            r.cases,
            r.worst,
            r.threshold,
            r.seconds,
            match &verdict {
                Ok(()) if r.detail.is_empty() => String::new(),
                Ok(()) => format!("  [{}]", r.detail),
                Err(e) => format!("  [{e}; {}]", r.detail),
            }
        );
        ok &= verdict.is_ok();
    }
    if ok {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
