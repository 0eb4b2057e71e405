//! Tabulates the closed-form bounds on the best achievable data limit for
//! each machine count: the floor-based bound, the stronger quadratic
//! bound, and the known exact value where one is available.
//!
//! Run with: cargo run --example bounds_table

use atac_limits::bounds::bound_report;

fn main() {
    println!("{:>4} {:>3} {:>12} {:>12} {:>8}", "m", "s", "floor bound", "lower bound", "exact");
    for m in 2..=40 {
        let r = bound_report(m).unwrap();
        let exact = r
            .known_exact
            .map(|e| e.to_string())
            .unwrap_or_else(|| "-".to_string());
        println!(
            "{:>4} {:>3} {:>12} {:>12} {:>8}",
            r.m,
            r.s,
            r.hkt_bound.to_string(),
            r.new_bound_lower.to_decimal_string(6),
            exact
        );
    }
}
