//! Exhaustively determines the best achievable data limit for small
//! machine counts and prints the witness designs.
//!
//! Run with: cargo run --release --example exact_search

use atac_limits::search::exact_limit;

fn main() {
    for m in 2..=6 {
        let result = exact_limit(m, None).unwrap();
        println!(
            "L({m}) = {}  ({} designs examined, {} pruned)",
            result.limit, result.examined, result.pruned
        );
        for b in 0..result.witness.num_blocks() {
            println!("  block {{{}}}", result.witness.block_labels(b).join(", "));
        }
    }
}
