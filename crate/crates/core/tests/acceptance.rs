//! One line per acceptance criterion. Set CONEGAUGE_QUICK=1 for the reduced grid.

use conegauge::suite::{run_criterion, SuiteConfig, CRITERIA};

fn main() {
    let quick = std::env::var("CONEGAUGE_QUICK").is_ok_and(|v| v == "1");
    let seed = std::env::var("CONEGAUGE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let only: Option<u32> = std::env::var("CONEGAUGE_CRITERION").ok().and_then(|s| s.parse().ok());
    let cfg = SuiteConfig { quick, seed };
    let mut failed = 0;
    for (id, _) in CRITERIA {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let r = run_criterion(id, cfg);
        println!("{}", r.line());
        if !r.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} failed", failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
