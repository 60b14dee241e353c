//! Runs every acceptance criterion and prints one line per criterion.
//!
//! `cargo test -p inthull --test acceptance [-- NAME]` restricts the run to
//! checks whose name starts with NAME.

use std::process::ExitCode;

use inthull::checks::Suite;

fn main() -> ExitCode {
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let suite = Suite::new();
    let outcomes = match suite.run(filter.as_deref(), |o| println!("{o}")) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
