//! Recognises the structure of covering designs from their incidence data
//! alone, including one built by hand as a cyclic development.
//!
//! Run with: cargo run --example classify_designs

use atac_limits::construct::{classify, hjelmslev_plane, projective_plane, transversal_design};
use atac_limits::{data_limit, CoveringDesign};

fn show(name: &str, design: &CoveringDesign) {
    let labels = classify(design);
    println!("{name}:");
    if labels.is_empty() {
        println!("  no recognised structure");
    }
    for label in labels {
        println!("  {label}");
    }
}

fn main() {
    show("Fano plane", &projective_plane(2).unwrap());
    show("transversal design (3 groups of 3)", &transversal_design(3, 3).unwrap());
    show("Hjelmslev plane over Z/4", &hjelmslev_plane(2).unwrap());

    // Developing the base block {0, 1, 4, 6} through Z/12 yields twelve
    // blocks on twelve points; the classifier recognises the structure and
    // the limit matches the best possible value at twelve machines.
    let points: Vec<String> = (0..12).map(|i| i.to_string()).collect();
    let blocks: Vec<Vec<usize>> = (0..12)
        .map(|shift| [0, 1, 4, 6].iter().map(|b| (b + shift) % 12).collect())
        .collect();
    let developed = CoveringDesign::from_index_blocks(points, blocks).unwrap();
    show("Z/12 development of {0, 1, 4, 6}", &developed);
    println!("  limit: {}", data_limit(&developed).limit);
}
