//! Plans concrete item placements: picks the best catalogued design for the
//! machine count, rounds the optimal weighting to whole items, and prints
//! the per-machine manifests.
//!
//! Run with: cargo run --example placement_plan

use atac_limits::planner::{plan, ItemSpec, Items, PlanRequest};

fn main() {
    // 700 equal items on 7 machines: the Fano plane splits them perfectly.
    let manifest = plan(&PlanRequest {
        machines: 7,
        items: Items::Count(700),
    })
    .unwrap();
    println!("7 machines, 700 equal items");
    println!("  design limit {}, achieved {}", manifest.limit, manifest.achieved_max_load);
    for (i, machine) in manifest.machines.iter().enumerate() {
        println!(
            "  machine {}: groups {{{}}}, {} items, load {}",
            i + 1,
            machine.block.join(", "),
            machine.items.len(),
            machine.load
        );
    }

    // Uneven item sizes are placed greedily, largest first.
    let items: Vec<ItemSpec> = [("logs", 40u64), ("images", 25), ("index", 20), ("meta", 5)]
        .iter()
        .map(|&(id, size)| ItemSpec {
            id: id.to_string(),
            size,
        })
        .collect();
    let manifest = plan(&PlanRequest {
        machines: 4,
        items: Items::Sized(items),
    })
    .unwrap();
    println!("\n4 machines, sized items");
    println!("  design limit {}, achieved {}", manifest.limit, manifest.achieved_max_load);
    for (item, group) in &manifest.groups {
        println!("  {item} -> group {group}");
    }
    for (i, machine) in manifest.machines.iter().enumerate() {
        println!("  machine {}: [{}] load {}", i + 1, machine.items.join(", "), machine.load);
    }
}
