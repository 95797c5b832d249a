//! Full verification suite. Prints one line per criterion and exits nonzero
//! if any fails.

use std::process::ExitCode;

use freelog::acceptance::{self, SuiteOptions};

fn main() -> ExitCode {
    let opts = SuiteOptions::full();
    let outcomes = [
        acceptance::exact_counts(&opts),
        acceptance::exact_power_sums(&opts),
        acceptance::laurent_expansion(),
        acceptance::residue(),
        acceptance::tauberian_main_terms(),
        acceptance::moment_convergence_check(),
        acceptance::distributional_convergence(),
        acceptance::sampler_correctness(&opts),
        acceptance::anchor_values(),
    ];
    for o in &outcomes {
        println!("{} ({:.2?})", o.line(), o.elapsed);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
