use std::io::Write;
use std::time::Instant;

use thrackle_core::experiment::{run_experiment, ExperimentConfig, Suite};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for (i, suite) in Suite::ALL.iter().copied().enumerate() {
        let config = ExperimentConfig::default_for(suite);
        let start = Instant::now();
        let line = match run_experiment(suite, &config) {
            Ok(r) => {
                let verdict = if r.summary.all_pass { "PASS" } else { "FAIL" };
                for row in r.rows.iter().filter(|r| !r.pass) {
                    eprintln!("  {suite} seed {:?} {}: {}", row.seed, row.instance, row.note.as_deref().unwrap_or(""));
                }
                if !r.summary.all_pass {
                    failed.push(suite);
                }
                format!("{verdict} ({}/{} instances, {:.1}s)", r.summary.passed, r.summary.instances, start.elapsed().as_secs_f64())
            }
            Err(e) => {
                failed.push(suite);
                format!("FAIL ({e})")
            }
        };
        // written to the raw handle so the line shows up without --nocapture
        let mut out = std::io::stdout().lock();
        writeln!(out, "criterion {:>2} {:<13} {line}", i + 1, suite.name()).unwrap();
        out.flush().unwrap();
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
