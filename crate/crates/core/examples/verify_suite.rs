//! Runs a verification suite in-process and checks the report's checksum.

use moddiag::reports::{parse_params, run_suite, Status};

fn main() -> moddiag::Result<()> {
    let suite = std::env::args().nth(1).unwrap_or_else(|| "thresholds".into());
    let params = parse_params(std::env::args().skip(2).collect::<Vec<_>>().iter().map(String::as_str))?;
    let report = run_suite(&suite, &params)?;
    for check in &report.payload.checks {
        let mark = match check.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        println!("{mark} {}", check.id);
    }
    println!("{} checks, checksum {} valid {}", report.payload.checks.len(), report.checksum, report.checksum_valid());
    std::process::exit(if report.passed() { 0 } else { 1 });
}
