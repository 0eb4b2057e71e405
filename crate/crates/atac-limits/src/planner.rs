//! Placement planning: pick the best catalogued design for a machine count,
//! apportion concrete data items to its points, and emit per-machine
//! manifests.
//!
//! The catalog holds one entry per construction family whose block count
//! fits the machine budget, each with a certified limit. Padding a design
//! with duplicate blocks never changes its limit, so a design with fewer
//! blocks than machines is always usable.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bounds::known_exact;
use crate::construct::{
    affine_plane, almost_projective_plane, hjelmslev_plane, near_pencil, projective_plane,
    transversal_design,
};
use crate::design::CoveringDesign;
use crate::gf::prime_power;
use crate::limit::data_limit;
use crate::rational::Rational;
use crate::search::table_fixture;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PlanError {
    #[error("at least one machine is required")]
    NoMachines,
    #[error("at least one item is required")]
    NoItems,
    #[error("item {0} has size zero")]
    ZeroSize(String),
    #[error("duplicate item id {0}")]
    DuplicateItem(String),
}

/// A construction family the planner knows how to build, with parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "camelCase")]
pub enum Family {
    /// One point in one block; the only shape for fewer than three blocks.
    SinglePoint,
    /// All pairs out of `points` points as blocks.
    CompletePairs { points: usize },
    /// The five-point five-block design attaining the limit 5/9.
    FivePoint,
    NearPencil { points: usize },
    /// A stored witness matching the exact-limit table at `m` blocks.
    TableWitness { m: usize },
    ProjectivePlane { order: usize },
    AffinePlane { order: usize },
    AlmostProjectivePlane { order: usize },
    TransversalDesign { k: usize, n: usize },
    HjelmslevPlane { p: usize },
}

impl Family {
    /// Tie-break rank when two entries share a limit and block count.
    fn rank(&self) -> u32 {
        match self {
            Family::ProjectivePlane { .. } => 0,
            Family::AffinePlane { .. } => 1,
            Family::TableWitness { .. } => 2,
            Family::SinglePoint => 3,
            Family::CompletePairs { .. } => 4,
            Family::FivePoint => 5,
            Family::AlmostProjectivePlane { .. } => 6,
            Family::HjelmslevPlane { .. } => 7,
            Family::TransversalDesign { .. } => 8,
            Family::NearPencil { .. } => 9,
        }
    }

    pub fn build(&self) -> CoveringDesign {
        match *self {
            Family::SinglePoint => {
                CoveringDesign::from_index_blocks(vec!["1".to_string()], vec![vec![0]]).unwrap()
            }
            Family::CompletePairs { points } => {
                let labels: Vec<String> = (1..=points).map(|i| i.to_string()).collect();
                let mut blocks = Vec::new();
                for j in 1..points {
                    for i in 0..j {
                        blocks.push(vec![i, j]);
                    }
                }
                CoveringDesign::from_index_blocks(labels, blocks).unwrap()
            }
            Family::FivePoint => {
                let labels: Vec<String> = (1..=5).map(|i| i.to_string()).collect();
                let blocks = vec![
                    vec![0, 1],
                    vec![0, 2],
                    vec![0, 3, 4],
                    vec![1, 2, 3],
                    vec![1, 2, 4],
                ];
                CoveringDesign::from_index_blocks(labels, blocks).unwrap()
            }
            Family::NearPencil { points } => near_pencil(points).unwrap(),
            Family::TableWitness { m } => table_fixture(m).unwrap(),
            Family::ProjectivePlane { order } => projective_plane(order).unwrap(),
            Family::AffinePlane { order } => affine_plane(order).unwrap(),
            Family::AlmostProjectivePlane { order } => almost_projective_plane(order).unwrap(),
            Family::TransversalDesign { k, n } => transversal_design(k, n).unwrap(),
            Family::HjelmslevPlane { p } => hjelmslev_plane(p).unwrap(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogEntry {
    #[serde(flatten)]
    pub family: Family,
    pub blocks: usize,
    pub limit: Rational,
}

fn entry(family: Family, blocks: usize, limit: Rational) -> CatalogEntry {
    CatalogEntry {
        family,
        blocks,
        limit,
    }
}

/// All catalogued designs with at most `m` blocks and their certified
/// limits. The candidate set only grows with `m`, so the best limit is
/// nonincreasing in `m`.
pub fn catalog(m: usize) -> Vec<CatalogEntry> {
    assert!(m >= 1, "at least one block is required");
    let mut out = vec![entry(Family::SinglePoint, 1, Rational::one())];
    if m >= 3 {
        out.push(entry(Family::CompletePairs { points: 3 }, 3, Rational::new(2, 3)));
        // The near pencil on t points has t blocks and limit (t-1)/(2t-3);
        // the ratio is decreasing in t, so only the largest fits matters.
        out.push(entry(
            Family::NearPencil { points: m },
            m,
            Rational::new(m as i64 - 1, 2 * m as i64 - 3),
        ));
    }
    if m >= 5 {
        out.push(entry(Family::FivePoint, 5, Rational::new(5, 9)));
    }
    if m >= 6 {
        out.push(entry(Family::CompletePairs { points: 4 }, 6, Rational::new(1, 2)));
        out.push(entry(
            Family::AlmostProjectivePlane { order: 2 },
            6,
            Rational::new(1, 2),
        ));
    }
    for f in 8..=11 {
        if f <= m {
            out.push(entry(Family::TableWitness { m: f }, f, known_exact(f).unwrap()));
        }
    }
    if m >= 12 {
        out.push(entry(
            Family::AlmostProjectivePlane { order: 3 },
            12,
            Rational::new(1, 3),
        ));
    }
    if m >= 28 {
        out.push(entry(Family::HjelmslevPlane { p: 2 }, 28, Rational::new(3, 14)));
    }
    if m >= 117 {
        out.push(entry(Family::HjelmslevPlane { p: 3 }, 117, Rational::new(4, 39)));
    }
    for q in 2.. {
        if q * q > m {
            break;
        }
        if prime_power(q).is_none() {
            continue;
        }
        let qi = q as i64;
        if q * q + q + 1 <= m {
            out.push(entry(
                Family::ProjectivePlane { order: q },
                q * q + q + 1,
                Rational::new(qi + 1, qi * qi + qi + 1),
            ));
        }
        if q * q + q <= m {
            out.push(entry(
                Family::AffinePlane { order: q },
                q * q + q,
                Rational::new(1, qi),
            ));
        }
        // A transversal design with k groups of n points plus the group
        // blocks has n^2 + k blocks; its limit is 1/k provided k <= n.
        let k = q.min(m - q * q);
        if k >= 2 {
            out.push(entry(
                Family::TransversalDesign { k, n: q },
                q * q + k,
                Rational::new(1, k as i64),
            ));
        }
    }
    out
}

/// The catalog entry with the smallest limit; ties go to fewer blocks, then
/// to the family rank, so the result is deterministic.
pub fn best_catalog_entry(m: usize) -> CatalogEntry {
    catalog(m)
        .into_iter()
        .min_by(|a, b| {
            (&a.limit, a.blocks, a.family.rank()).cmp(&(&b.limit, b.blocks, b.family.rank()))
        })
        .unwrap()
}

/// The best certified upper bound on the limit achievable with `m` blocks.
pub fn best_known_limit(m: usize) -> Rational {
    best_catalog_entry(m).limit
}

/// Builds the winning catalog design and pads it to exactly `m` blocks.
pub fn best_known_design(m: usize) -> (CoveringDesign, Rational) {
    let entry = best_catalog_entry(m);
    let design = entry.family.build().pad_to_block_count(m).unwrap();
    (design, entry.limit)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemSpec {
    pub id: String,
    pub size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Items {
    /// `n` items of equal size, named `item1` through `itemN`.
    Count(usize),
    Sized(Vec<ItemSpec>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanRequest {
    pub machines: usize,
    pub items: Items,
}

#[derive(Clone, Debug, Serialize)]
pub struct MachineManifest {
    pub block: Vec<String>,
    pub items: Vec<String>,
    pub load: Rational,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PlacementManifest {
    #[serde(flatten)]
    pub family: Family,
    pub design: CoveringDesign,
    /// Item id to the point label of its data group.
    pub groups: BTreeMap<String, String>,
    pub machines: Vec<MachineManifest>,
    /// The certified limit of the chosen design.
    pub limit: Rational,
    pub achieved_max_load: Rational,
    /// Points that received no items; their pairs are still covered.
    pub empty_groups: Vec<String>,
}

/// Chooses a design for the requested machine count, rounds the optimal
/// weighting to whole items, and emits one manifest per machine.
///
/// Equal-size items are apportioned by largest remainder against the
/// weighting; sized items go greedily, largest first, to the group
/// minimising the resulting load-to-weight ratio. Any two items end up
/// together on at least one machine because the design covers all point
/// pairs.
pub fn plan(req: &PlanRequest) -> Result<PlacementManifest, PlanError> {
    if req.machines == 0 {
        return Err(PlanError::NoMachines);
    }
    let items = match &req.items {
        Items::Count(0) => return Err(PlanError::NoItems),
        Items::Count(n) => (1..=*n)
            .map(|i| ItemSpec {
                id: format!("item{i}"),
                size: 1,
            })
            .collect(),
        Items::Sized(list) => {
            if list.is_empty() {
                return Err(PlanError::NoItems);
            }
            let mut seen = BTreeMap::new();
            for item in list {
                if item.size == 0 {
                    return Err(PlanError::ZeroSize(item.id.clone()));
                }
                if seen.insert(item.id.clone(), ()).is_some() {
                    return Err(PlanError::DuplicateItem(item.id.clone()));
                }
            }
            list.clone()
        }
    };

    let family = best_catalog_entry(req.machines).family;
    let design = family.build().pad_to_block_count(req.machines).unwrap();
    let certificate = data_limit(&design);
    let weights: Vec<Rational> = design
        .points()
        .iter()
        .map(|p| certificate.weighting.get(p).unwrap().clone())
        .collect();

    let assignment = match &req.items {
        Items::Count(n) => apportion_equal(&weights, *n),
        Items::Sized(_) => assign_sized(&weights, &items),
    };

    let total: u64 = items.iter().map(|i| i.size).sum();
    let mut groups = BTreeMap::new();
    let mut group_size = vec![0u64; design.num_points()];
    for (item, &point) in items.iter().zip(&assignment) {
        groups.insert(item.id.clone(), design.point_label(point).to_string());
        group_size[point] += item.size;
    }

    let mut machines = Vec::with_capacity(design.num_blocks());
    let mut achieved = Rational::zero();
    for block in design.blocks() {
        let held: u64 = block.iter().map(|&p| group_size[p]).sum();
        let load = Rational::new(held as i64, total as i64);
        achieved = achieved.max(load.clone());
        let mut block_items: Vec<String> = items
            .iter()
            .zip(&assignment)
            .filter(|(_, p)| block.contains(p))
            .map(|(item, _)| item.id.clone())
            .collect();
        block_items.sort();
        machines.push(MachineManifest {
            block: block.iter().map(|&p| design.point_label(p).to_string()).collect(),
            items: block_items,
            load,
        });
    }

    let empty_groups = (0..design.num_points())
        .filter(|&p| group_size[p] == 0)
        .map(|p| design.point_label(p).to_string())
        .collect();

    Ok(PlacementManifest {
        family,
        design,
        groups,
        machines,
        limit: certificate.limit,
        achieved_max_load: achieved,
        empty_groups,
    })
}

/// Largest-remainder apportionment of `n` equal items to the weighting.
/// Returns the point index of each item in order; ties in remainder go to
/// the earlier point.
fn apportion_equal(weights: &[Rational], n: usize) -> Vec<usize> {
    let n_rat = Rational::from_int(n as i64);
    let quotas: Vec<Rational> = weights.iter().map(|w| w.clone() * &n_rat).collect();
    let mut counts: Vec<u64> = Vec::with_capacity(quotas.len());
    let mut remainders: Vec<(Rational, usize)> = Vec::with_capacity(quotas.len());
    for (i, q) in quotas.iter().enumerate() {
        let floor = q.numer() / q.denom();
        let floor_u: u64 = floor.clone().try_into().unwrap();
        remainders.push((q.clone() - Rational::from_int(floor), i));
        counts.push(floor_u);
    }
    let assigned: u64 = counts.iter().sum();
    let mut leftover = n as u64 - assigned;
    remainders.sort_by(|(ra, ia), (rb, ib)| rb.cmp(ra).then(ia.cmp(ib)));
    for (_, i) in remainders {
        if leftover == 0 {
            break;
        }
        counts[i] += 1;
        leftover -= 1;
    }
    let mut out = Vec::with_capacity(n);
    for (point, &c) in counts.iter().enumerate() {
        out.extend(std::iter::repeat(point).take(c as usize));
    }
    out
}

/// Greedy placement of sized items, largest first, onto the group whose
/// load-to-weight ratio stays smallest. Zero-weight groups receive nothing.
fn assign_sized(weights: &[Rational], items: &[ItemSpec]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        items[b]
            .size
            .cmp(&items[a].size)
            .then(items[a].id.cmp(&items[b].id))
    });
    let mut loads = vec![Rational::zero(); weights.len()];
    let mut assignment = vec![0usize; items.len()];
    for idx in order {
        let size = Rational::from_int(items[idx].size as i64);
        let best = (0..weights.len())
            .filter(|&g| weights[g].is_positive())
            .min_by(|&a, &b| {
                let ra = (loads[a].clone() + &size) / &weights[a];
                let rb = (loads[b].clone() + &size) / &weights[b];
                ra.cmp(&rb).then(a.cmp(&b))
            })
            .expect("a normalised weighting has a positive weight");
        loads[best] += &size;
        assignment[idx] = best;
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::new_bound_f;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn best_limit_matches_exact_table() {
        for m in 1..=13 {
            assert_eq!(best_known_limit(m), known_exact(m).unwrap(), "m={m}");
        }
    }

    #[test]
    fn catalog_winners_at_landmark_sizes() {
        assert_eq!(
            best_catalog_entry(7).family,
            Family::ProjectivePlane { order: 2 }
        );
        assert_eq!(
            best_catalog_entry(12).family,
            Family::AffinePlane { order: 3 }
        );
        let e28 = best_catalog_entry(28);
        assert_eq!(e28.family, Family::HjelmslevPlane { p: 2 });
        assert_eq!(e28.limit, r(3, 14));
        // At 30 machines the affine plane of order 5 (or the equivalent
        // transversal design) reaches 1/5, beating both the padded
        // projective plane of order 4 at 5/21 and the Hjelmslev plane
        // at 3/14.
        let e30 = best_catalog_entry(30);
        assert_eq!(e30.limit, r(1, 5));
        assert!(e30.limit < r(3, 14));
        assert!(e30.limit < r(5, 21));
        let e117 = best_catalog_entry(117);
        assert_eq!(e117.family, Family::HjelmslevPlane { p: 3 });
        assert_eq!(e117.limit, r(4, 39));
    }

    #[test]
    fn best_limit_monotone_and_above_lower_bound() {
        let mut prev = best_known_limit(3);
        for m in 4..=130 {
            let cur = best_known_limit(m);
            assert!(cur <= prev, "limit increased at m={m}");
            prev = cur;
        }
        for m in 3..=130 {
            let f = new_bound_f(m).unwrap();
            let limit = best_known_limit(m);
            assert!(f <= limit, "catalog beats the lower bound at m={m}");
        }
    }

    #[test]
    fn winner_designs_certify_their_catalog_limits() {
        // Padding to the machine count must leave the limit unchanged.
        for m in [3, 4, 5, 6, 7, 10, 14, 20, 29] {
            let (design, claimed) = best_known_design(m);
            assert_eq!(design.num_blocks(), m);
            let cert = data_limit(&design);
            assert_eq!(cert.limit, claimed, "m={m}");
            cert.verify(&design).unwrap();
        }
    }

    #[test]
    fn two_items_on_three_machines() {
        let manifest = plan(&PlanRequest {
            machines: 3,
            items: Items::Count(2),
        })
        .unwrap();
        let mut loads: Vec<Rational> =
            manifest.machines.iter().map(|m| m.load.clone()).collect();
        loads.sort();
        assert_eq!(loads, vec![r(1, 2), r(1, 2), r(1, 1)]);
        assert_eq!(manifest.empty_groups, vec!["3".to_string()]);
        // The two items share the machine holding both their groups.
        assert!(manifest
            .machines
            .iter()
            .any(|m| m.items.len() == 2));
    }

    #[test]
    fn five_items_on_four_machines_follow_near_pencil_weighting() {
        let manifest = plan(&PlanRequest {
            machines: 4,
            items: Items::Count(5),
        })
        .unwrap();
        let mut sizes: Vec<usize> = manifest
            .design
            .points()
            .iter()
            .map(|p| manifest.groups.values().filter(|&g| g == p).count())
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 1, 2]);
        assert_eq!(manifest.achieved_max_load, r(3, 5));
        assert_eq!(manifest.limit, r(3, 5));
    }

    #[test]
    fn seven_hundred_items_on_seven_machines_split_evenly() {
        let manifest = plan(&PlanRequest {
            machines: 7,
            items: Items::Count(700),
        })
        .unwrap();
        assert_eq!(manifest.limit, r(3, 7));
        assert_eq!(manifest.achieved_max_load, r(3, 7));
        for machine in &manifest.machines {
            assert_eq!(machine.items.len(), 300);
            assert_eq!(machine.load, r(3, 7));
        }
    }

    #[test]
    fn nine_items_on_twelve_machines_use_the_affine_plane() {
        let manifest = plan(&PlanRequest {
            machines: 12,
            items: Items::Count(9),
        })
        .unwrap();
        assert_eq!(manifest.family, Family::AffinePlane { order: 3 });
        assert_eq!(manifest.limit, r(1, 3));
        assert_eq!(manifest.achieved_max_load, r(1, 3));
    }

    fn all_pairs_colocated(manifest: &PlacementManifest) -> bool {
        let ids: Vec<&String> = manifest.groups.keys().collect();
        for (a, &id_b) in ids.iter().enumerate().flat_map(|(j, b)| {
            ids[..j].iter().map(move |a| (*a, b))
        }) {
            let shared = manifest
                .machines
                .iter()
                .any(|m| m.items.contains(a) && m.items.contains(id_b));
            if !shared {
                return false;
            }
        }
        true
    }

    #[test]
    fn sized_items_keep_every_pair_colocated() {
        let items: Vec<ItemSpec> = [7u64, 5, 5, 3, 2, 1, 1]
            .iter()
            .enumerate()
            .map(|(i, &size)| ItemSpec {
                id: format!("blob{i}"),
                size,
            })
            .collect();
        for machines in [3, 4, 5, 6] {
            let manifest = plan(&PlanRequest {
                machines,
                items: Items::Sized(items.clone()),
            })
            .unwrap();
            assert!(all_pairs_colocated(&manifest), "machines={machines}");
            assert!(manifest.achieved_max_load >= manifest.limit);
        }
    }

    #[test]
    fn achieved_load_matches_limit_on_exact_multiples() {
        // Items divisible by the weighting denominator leave no rounding
        // slack, so the plan attains the theoretical limit exactly.
        for (machines, n) in [(3, 9), (4, 10), (5, 18), (7, 14)] {
            let manifest = plan(&PlanRequest {
                machines,
                items: Items::Count(n),
            })
            .unwrap();
            assert_eq!(
                manifest.achieved_max_load, manifest.limit,
                "machines={machines} items={n}"
            );
        }
    }

    #[test]
    fn degenerate_requests_are_rejected() {
        assert_eq!(
            plan(&PlanRequest {
                machines: 0,
                items: Items::Count(4)
            })
            .unwrap_err(),
            PlanError::NoMachines
        );
        assert_eq!(
            plan(&PlanRequest {
                machines: 3,
                items: Items::Count(0)
            })
            .unwrap_err(),
            PlanError::NoItems
        );
        assert_eq!(
            plan(&PlanRequest {
                machines: 3,
                items: Items::Sized(vec![ItemSpec {
                    id: "a".into(),
                    size: 0
                }])
            })
            .unwrap_err(),
            PlanError::ZeroSize("a".into())
        );
    }

    #[test]
    fn manifest_serialises_with_expected_keys() {
        let manifest = plan(&PlanRequest {
            machines: 3,
            items: Items::Count(3),
        })
        .unwrap();
        let json = serde_json::to_value(&manifest).unwrap();
        for key in ["design", "groups", "machines", "limit", "achievedMaxLoad"] {
            assert!(json.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(json["machines"][0]["load"], "2/3");
    }
}
