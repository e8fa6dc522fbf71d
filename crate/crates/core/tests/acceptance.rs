//! Acceptance suite. Prints one line per criterion and fails if any criterion
//! fails. Criterion numbers given as arguments restrict the run; `SMALLBALL_SEED`
//! overrides the default seed.

use std::process::ExitCode;

use smallball::verify::{run_criterion, CRITERIA};

const DEFAULT_SEED: u64 = 42;

fn main() -> ExitCode {
    let seed = std::env::var("SMALLBALL_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    let only: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<u8> = CRITERIA.iter().copied().filter(|id| only.is_empty() || only.contains(id)).collect();
    if std::env::args().any(|a| a == "--list") {
        for id in &ids {
            println!("criterion_{id}: test");
        }
        return ExitCode::SUCCESS;
    }
    println!("running {} acceptance criteria with seed {seed}", ids.len());
    let mut failed = 0;
    for id in ids {
        match run_criterion(id, seed) {
            Ok(r) => {
                failed += usize::from(!r.passed);
                println!("{r}");
            }
            Err(e) => {
                failed += 1;
                println!("criterion {id} [FAIL] error: {e}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
