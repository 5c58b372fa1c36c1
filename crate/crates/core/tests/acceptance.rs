//! One PASS/FAIL line per acceptance criterion. Select criteria with
//! `cargo test --test acceptance -- 3 5`; exits non-zero if any fails.

use std::process::ExitCode;

use ogw_localization::selftest;

fn main() -> ExitCode {
    let only: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let reports = selftest::run(&only, |r| println!("{}", r.line()));
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("acceptance: {}/{} criteria passed", reports.len() - failed, reports.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
