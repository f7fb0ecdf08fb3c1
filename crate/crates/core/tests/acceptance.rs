//! One line per acceptance criterion. Tolerances: exact integer equality for
//! every group and rank; wall-clock limits of 60 s (criterion 1), 10 s
//! (criterion 6), 30 s (criterion 8) and 120 s (criterion 9).

use bdspectra::battery::{run_criterion, CRITERIA};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for id in 1..=CRITERIA.len() {
        let r = run_criterion(id);
        println!("{}", r.line());
        if !r.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
