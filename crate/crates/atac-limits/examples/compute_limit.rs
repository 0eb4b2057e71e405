//! Computes the exact data limit of a small hand-built covering design and
//! walks through the chain of lower bounds that pin it down.
//!
//! Run with: cargo run --example compute_limit

use atac_limits::bounds::{bounds_rk, lower_bound_frac_transversal, lower_bound_rep_seq};
use atac_limits::{data_limit, CoveringDesign, Rational};

fn main() {
    // Five points, five blocks, every pair of points covered.
    let points: Vec<String> = (1..=5).map(|i| i.to_string()).collect();
    let blocks = vec![
        vec![0, 1],
        vec![0, 2],
        vec![0, 3, 4],
        vec![1, 2, 3],
        vec![1, 2, 4],
    ];
    let design = CoveringDesign::from_index_blocks(points, blocks).unwrap();

    // Cheap bounds first: min replication over block count, then the
    // replication-sequence refinement.
    let (rk_lower, rk_upper) = bounds_rk(&design);
    println!("replication bound:          L >= {rk_lower}");
    println!("block size bound:           L <= {rk_upper}");
    println!("replication sequence bound: L >= {}", lower_bound_rep_seq(&design));

    // A good fractional transversal of the blocks sharpens the lower bound
    // further; this one is tight.
    let h: Vec<Rational> = [(1, 5), (1, 5), (3, 5), (2, 5), (2, 5)]
        .iter()
        .map(|&(n, d)| Rational::new(n, d))
        .collect();
    let transversal_bound = lower_bound_frac_transversal(&design, &h).unwrap();
    println!("fractional transversal:     L >= {transversal_bound}");

    // The exact value with an optimal weighting and a matching dual
    // certificate.
    let certificate = data_limit(&design);
    println!("\nexact data limit: {}", certificate.limit);
    println!("optimal weighting:");
    for (label, weight) in certificate.weighting.iter() {
        println!("  point {label}: {weight}");
    }
    certificate.verify(&design).unwrap();
    println!("certificate re-verified");
}
