// The randomized identity suite, as run by `sixj verify`.

use std::error::Error;

use sixj::analysis::run_identity_suite;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let report = run_identity_suite(7, 25);
    print!("{report}");
    if !report.passed() {
        return Err("identity suite failed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
