//! Differential self-test: random workloads run against both the tries
//! and naive reference implementations, with a deliberately broken
//! matcher to show that disagreements are reported.

use exprtrie::expr::eq_expr;
use exprtrie::selftest;

fn main() {
    let report = selftest::run(200, 7);
    println!(
        "correct matcher: {} trials, passed {}",
        report.trials,
        report.passed()
    );

    let broken = selftest::run_with_eq(200, 7, |a, b| !eq_expr(a, b));
    println!("broken matcher: failed after {} trial(s)", broken.trials);
    if let Some(c) = broken.counterexample {
        println!("{c}");
    }
}
