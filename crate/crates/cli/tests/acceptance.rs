use std::process::ExitCode;

use robust_orbits_cli::verify;

fn main() -> ExitCode {
    let mut failed = 0;
    for id in verify::ids() {
        let report = verify::run_one(id).expect("known criterion");
        println!("{report}");
        if !report.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", verify::ids().len() - failed, verify::ids().len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
