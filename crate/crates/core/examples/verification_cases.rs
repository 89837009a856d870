//! Runs every catalogued verification case and prints its checks.

use sepinv::cases::{list_cases, run_case, CaseParams};
use sepinv::Result;

fn main() -> Result<()> {
    for case in list_cases() {
        let report = run_case(case.id, &CaseParams::default())?;
        println!("{} [{}] {}", if report.passed() { "pass" } else { "FAIL" }, case.id, case.title);
        for check in &report.checks {
            println!("    {} {}", if check.passed { "ok " } else { "bad" }, check.name);
        }
    }
    Ok(())
}
