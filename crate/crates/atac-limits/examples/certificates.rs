//! Round-trips an optimality certificate through JSON and shows that
//! verification is independent of the solver: a tampered certificate is
//! rejected.
//!
//! Run with: cargo run --example certificates

use atac_limits::construct::projective_plane;
use atac_limits::{data_limit, LimitCertificate, Rational};

fn main() {
    let design = projective_plane(3).unwrap();
    let certificate = data_limit(&design);
    println!("limit of the order-3 projective plane: {}", certificate.limit);

    let json = serde_json::to_string_pretty(&certificate).unwrap();
    println!("\ncertificate as JSON ({} bytes)", json.len());

    let reloaded: LimitCertificate = serde_json::from_str(&json).unwrap();
    reloaded.verify(&design).unwrap();
    println!("reloaded certificate verifies");

    // Claiming a better limit than the weighting supports must fail.
    let mut tampered = reloaded;
    tampered.limit = Rational::new(1, 4);
    match tampered.verify(&design) {
        Ok(()) => unreachable!("tampered certificate must not verify"),
        Err(e) => println!("tampered certificate rejected: {e}"),
    }
}
