//! Screens projective plane and almost projective plane orders against the
//! known nonexistence conditions. A ruled-out order means no design of the
//! corresponding family can reach the matching limit.
//!
//! Run with: cargo run --example existence_screens

use atac_limits::construct::{almost_plane_screen, plane_existence, AlmostPlaneScreen, PlaneExistence};

fn main() {
    println!("projective planes:");
    for s in 2..=24 {
        let verdict = match plane_existence(s) {
            PlaneExistence::Exists => "exists (field construction)".to_string(),
            PlaneExistence::RuledOut(reason) => format!("ruled out ({reason:?})"),
            PlaneExistence::Unknown => "open".to_string(),
        };
        println!("  order {s:>2}: {verdict}");
    }

    println!("\nalmost projective planes:");
    for s in 2..=12 {
        let verdict = match almost_plane_screen(s) {
            AlmostPlaneScreen::RuledOut(reason) => format!("ruled out: {reason}"),
            AlmostPlaneScreen::PossiblyExists(Some((x, y, z))) => {
                format!("passes the screen, form witness ({x}, {y}, {z})")
            }
            AlmostPlaneScreen::PossiblyExists(None) => "passes the screen".to_string(),
            AlmostPlaneScreen::Inconclusive => "inconclusive".to_string(),
        };
        println!("  order {s:>2}: {verdict}");
    }
}
