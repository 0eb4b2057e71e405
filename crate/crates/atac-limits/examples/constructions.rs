//! Builds each design family the crate knows and prints its parameters
//! together with its exact data limit.
//!
//! Run with: cargo run --example constructions

use atac_limits::construct::{
    affine_plane, almost_projective_plane, hjelmslev_plane, near_pencil, projective_plane,
    transversal_design,
};
use atac_limits::{data_limit, CoveringDesign};

fn report(name: &str, design: &CoveringDesign) {
    let limit = data_limit(design).limit;
    println!(
        "{name}: {} points, {} blocks, limit {limit}",
        design.num_points(),
        design.num_blocks()
    );
}

fn main() {
    for q in [2, 3, 4, 5] {
        report(
            &format!("projective plane of order {q}"),
            &projective_plane(q).unwrap(),
        );
    }
    for q in [2, 3, 4] {
        report(&format!("affine plane of order {q}"), &affine_plane(q).unwrap());
    }
    report("near pencil on 6 points", &near_pencil(6).unwrap());
    for s in [2, 3] {
        report(
            &format!("almost projective plane of order {s}"),
            &almost_projective_plane(s).unwrap(),
        );
    }
    for (k, n) in [(2, 2), (3, 3), (3, 4), (4, 5)] {
        report(
            &format!("transversal design with {k} groups of {n}"),
            &transversal_design(k, n).unwrap(),
        );
    }
    for p in [2, 3] {
        report(
            &format!("Hjelmslev plane over Z/{}", p * p),
            &hjelmslev_plane(p).unwrap(),
        );
    }
}
