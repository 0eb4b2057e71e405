//! Construction and classification of the classical design families:
//! projective and affine planes over finite fields, near pencils, almost
//! projective planes, transversal designs from mutually orthogonal Latin
//! squares, and projective Hjelmslev planes over the ring of integers
//! modulo p². Plus the nonexistence screens for plane orders.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;

use crate::design::{CoveringDesign, DesignError};
use crate::gf::{is_prime, prime_power, FiniteField};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("order {0} is too small for this family")]
    OrderTooSmall(usize),
    #[error("near pencils need at least 3 points, got {0}")]
    MTooSmall(usize),
    #[error("no almost projective plane of order {0} is known")]
    UnknownOrder(usize),
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("order {0} is beyond the supported desk scale")]
    TooLarge(usize),
    #[error("group count {k} out of range for order {n} (need 2 <= k <= n+1)")]
    KOutOfRange { k: usize, n: usize },
    #[error(transparent)]
    Design(#[from] DesignError),
}

/// The projective plane of order `q` over GF(q): points are the 1-dimensional
/// subspaces of GF(q)^3, blocks the 2-dimensional ones. Order 1 is allowed
/// and gives the triangle.
pub fn projective_plane(q: usize) -> Result<CoveringDesign, ConstructError> {
    if q == 1 {
        return Ok(CoveringDesign::validate(
            ["1", "2", "3"],
            vec![vec!["1", "2"], vec!["1", "3"], vec!["2", "3"]],
        )?);
    }
    let f = field(q)?;
    let reps = projective_reps(q);
    let labels: Vec<String> = reps
        .iter()
        .map(|&(x, y, z)| format!("({x}:{y}:{z})"))
        .collect();
    let blocks: Vec<Vec<String>> = reps
        .iter()
        .map(|&normal| {
            reps.iter()
                .zip(&labels)
                .filter(|(&p, _)| dot3(&f, normal, p) == 0)
                .map(|(_, l)| l.clone())
                .collect()
        })
        .collect();
    Ok(CoveringDesign::validate(labels, blocks)?)
}

/// Normalized homogeneous coordinate representatives of PG(2, q).
fn projective_reps(q: usize) -> Vec<(usize, usize, usize)> {
    let mut reps = Vec::with_capacity(q * q + q + 1);
    for a in 0..q {
        for b in 0..q {
            reps.push((1, a, b));
        }
    }
    for a in 0..q {
        reps.push((0, 1, a));
    }
    reps.push((0, 0, 1));
    reps
}

fn dot3(f: &FiniteField, a: (usize, usize, usize), b: (usize, usize, usize)) -> usize {
    f.add(f.add(f.mul(a.0, b.0), f.mul(a.1, b.1)), f.mul(a.2, b.2))
}

fn field(q: usize) -> Result<FiniteField, ConstructError> {
    FiniteField::new(q).map_err(|_| match prime_power(q) {
        Some(_) => ConstructError::TooLarge(q),
        None => ConstructError::NotPrimePower(q),
    })
}

/// The affine plane of order `q`: the projective plane with one block and
/// its points deleted.
pub fn affine_plane(q: usize) -> Result<CoveringDesign, ConstructError> {
    if q < 2 {
        return Err(ConstructError::OrderTooSmall(q));
    }
    let f = field(q)?;
    let reps = projective_reps(q);
    // Affine points are the classes with first coordinate 1; the deleted
    // block is the line with normal (0, 0, 1)... rather, delete the points
    // with first coordinate 0, i.e. the line at infinity x0 = 0, whose
    // normal is (1, 0, 0).
    let affine: Vec<(usize, usize, usize)> = reps
        .iter()
        .copied()
        .filter(|&(x0, _, _)| x0 == 1)
        .collect();
    let labels: Vec<String> = affine.iter().map(|&(_, a, b)| format!("({a},{b})")).collect();
    let blocks: Vec<Vec<String>> = reps
        .iter()
        .filter(|&&normal| normal != (1, 0, 0))
        .map(|&normal| {
            affine
                .iter()
                .zip(&labels)
                .filter(|(&p, _)| dot3(&f, normal, p) == 0)
                .map(|(_, l)| l.clone())
                .collect::<Vec<String>>()
        })
        .filter(|b| !b.is_empty())
        .collect();
    Ok(CoveringDesign::validate(labels, blocks)?)
}

/// The near pencil on `m` points: one block of size m-1 and m-1 blocks of
/// size 2 through the remaining point.
pub fn near_pencil(m: usize) -> Result<CoveringDesign, ConstructError> {
    if m < 3 {
        return Err(ConstructError::MTooSmall(m));
    }
    let points: Vec<String> = (1..=m).map(|i| i.to_string()).collect();
    let mut blocks: Vec<Vec<String>> = (2..=m)
        .map(|i| vec!["1".to_string(), i.to_string()])
        .collect();
    blocks.push((2..=m).map(|i| i.to_string()).collect());
    Ok(CoveringDesign::validate(points, blocks)?)
}

/// Cyclic base blocks for the two known almost projective planes: the
/// development of {0,1,3} modulo 6 for order 2 and of {0,1,4,6} modulo 12
/// for order 3.
pub fn almost_projective_plane(s: usize) -> Result<CoveringDesign, ConstructError> {
    let (modulus, base): (usize, &[usize]) = match s {
        2 => (6, &[0, 1, 3]),
        3 => (12, &[0, 1, 4, 6]),
        _ => return Err(ConstructError::UnknownOrder(s)),
    };
    let points: Vec<String> = (0..modulus).map(|i| i.to_string()).collect();
    let blocks: Vec<Vec<String>> = (0..modulus)
        .map(|i| base.iter().map(|&b| ((b + i) % modulus).to_string()).collect())
        .collect();
    Ok(CoveringDesign::validate(points, blocks)?)
}

/// A (k, n)-transversal design from the slopes of GF(n): k groups of size n
/// partition the kn points and the n² cross blocks of size k meet every
/// group exactly once. Requires n a prime power and 2 <= k <= n+1.
pub fn transversal_design(k: usize, n: usize) -> Result<CoveringDesign, ConstructError> {
    let f = field(n)?;
    if k < 2 || k > n + 1 {
        return Err(ConstructError::KOutOfRange { k, n });
    }
    let label = |group: usize, value: usize| format!("g{group}v{value}");
    let points: Vec<String> = (0..k)
        .flat_map(|g| (0..n).map(move |v| label(g, v)))
        .collect();
    let mut blocks: Vec<Vec<String>> = (0..k)
        .map(|g| (0..n).map(|v| label(g, v)).collect())
        .collect();
    // Group i uses slope i; when k = n+1 the last group reads off the
    // intercept-free coordinate directly.
    let infinite_group = if k == n + 1 { Some(k - 1) } else { None };
    for a in 0..n {
        for b in 0..n {
            let mut block = Vec::with_capacity(k);
            for g in 0..k {
                if Some(g) == infinite_group {
                    block.push(label(g, a));
                } else {
                    block.push(label(g, f.add(f.mul(a, g), b)));
                }
            }
            blocks.push(block);
        }
    }
    Ok(CoveringDesign::validate(points, blocks)?)
}

/// A (p, p)-projective Hjelmslev plane from the ring of integers modulo p²:
/// points and blocks are the unit classes of unimodular triples, incidence
/// is a vanishing dot product.
pub fn hjelmslev_plane(p: usize) -> Result<CoveringDesign, ConstructError> {
    if !is_prime(p) {
        return Err(ConstructError::NotPrime(p));
    }
    if p > 3 {
        return Err(ConstructError::TooLarge(p));
    }
    let m = p * p;
    let units: Vec<usize> = (1..m).filter(|u| u % p != 0).collect();
    let mut seen = HashSet::new();
    let mut reps: Vec<(usize, usize, usize)> = Vec::new();
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                if x % p != 0 || y % p != 0 || z % p != 0 {
                    let canon = units
                        .iter()
                        .map(|&u| (x * u % m, y * u % m, z * u % m))
                        .min()
                        .unwrap();
                    if seen.insert(canon) {
                        reps.push(canon);
                    }
                }
            }
        }
    }
    let labels: Vec<String> = reps
        .iter()
        .map(|&(x, y, z)| format!("({x},{y},{z})"))
        .collect();
    let blocks: Vec<Vec<String>> = reps
        .iter()
        .map(|&(a, b, c)| {
            reps.iter()
                .zip(&labels)
                .filter(|(&(x, y, z), _)| (a * x + b * y + c * z) % m == 0)
                .map(|(_, l)| l.clone())
                .collect()
        })
        .collect();
    Ok(CoveringDesign::validate(labels, blocks)?)
}

/// Structural classes a covering design can belong to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum StructureLabel {
    ProjectivePlane { order: usize },
    AffinePlane { order: usize },
    AlmostProjectivePlane { order: usize },
    NearPencil { order: usize },
    TransversalDesign { k: usize, n: usize },
    HjelmslevPlane { t: usize, q: usize },
}

impl fmt::Display for StructureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureLabel::ProjectivePlane { order } => {
                write!(f, "projective plane of order {order}")
            }
            StructureLabel::AffinePlane { order } => write!(f, "affine plane of order {order}"),
            StructureLabel::AlmostProjectivePlane { order } => {
                write!(f, "almost projective plane of order {order}")
            }
            StructureLabel::NearPencil { order } => write!(f, "near pencil of order {order}"),
            StructureLabel::TransversalDesign { k, n } => {
                write!(f, "({k},{n})-transversal design")
            }
            StructureLabel::HjelmslevPlane { t, q } => {
                write!(f, "({t},{q})-projective Hjelmslev plane")
            }
        }
    }
}

/// Tests a design against each structural definition and reports every
/// label that applies. The label set may be empty.
pub fn classify(d: &CoveringDesign) -> Vec<StructureLabel> {
    let mut labels = BTreeSet::new();
    let v = d.num_points();
    let b = d.num_blocks();
    let stats = d.incidence_stats();
    let linear = d.is_linear_space();

    if linear && stats.is_uniform {
        let k = stats.block_sizes[0];
        if k >= 2 {
            let s = k - 1;
            if v == s * s + s + 1 && b == s * s + s + 1 {
                labels.insert(StructureLabel::ProjectivePlane { order: s });
            }
            if k >= 2 && v == k * k && b == k * k + k {
                labels.insert(StructureLabel::AffinePlane { order: k });
            }
        }
    }
    if stats.is_uniform {
        let k = stats.block_sizes[0];
        if k >= 2 {
            let s = k - 1;
            if v == s * s + s && b == s * s + s && stats.replication.iter().all(|&r| r == s + 1) {
                labels.insert(StructureLabel::AlmostProjectivePlane { order: s });
            }
        }
    }
    if linear && v == b && v >= 3 {
        let m = v;
        let mut sizes = stats.block_sizes.clone();
        sizes.sort_unstable();
        if sizes[m - 1] == m - 1 && sizes[..m - 1].iter().all(|&s| s == 2) {
            labels.insert(StructureLabel::NearPencil { order: m });
        }
    }
    if linear {
        if let Some((k, n)) = detect_transversal(d) {
            labels.insert(StructureLabel::TransversalDesign { k, n });
        }
    }
    if let Some((t, q)) = detect_hjelmslev(d) {
        labels.insert(StructureLabel::HjelmslevPlane { t, q });
    }
    labels.into_iter().collect()
}

/// Looks for k pairwise disjoint blocks of a common size n covering the
/// point set, with the remaining blocks all of size k and n² of them.
fn detect_transversal(d: &CoveringDesign) -> Option<(usize, usize)> {
    let v = d.num_points();
    let sizes: BTreeSet<usize> = d.blocks().iter().map(|b| b.len()).collect();
    for &n in sizes.iter().rev() {
        if v % n != 0 {
            continue;
        }
        let k = v / n;
        if k < 2 || d.num_blocks() != k + n * n {
            continue;
        }
        let candidates: Vec<usize> = d
            .blocks()
            .iter()
            .enumerate()
            .filter(|(_, blk)| blk.len() == n)
            .map(|(i, _)| i)
            .collect();
        if let Some(partition) = find_partition(d, &candidates, v, k) {
            let partition: HashSet<usize> = partition.into_iter().collect();
            let rest_ok = d
                .blocks()
                .iter()
                .enumerate()
                .filter(|(i, _)| !partition.contains(i))
                .all(|(_, blk)| blk.len() == k);
            if rest_ok {
                return Some((k, n));
            }
        }
    }
    None
}

fn find_partition(
    d: &CoveringDesign,
    candidates: &[usize],
    v: usize,
    k: usize,
) -> Option<Vec<usize>> {
    fn rec(
        d: &CoveringDesign,
        candidates: &[usize],
        from: usize,
        used: &mut Vec<usize>,
        covered: &mut Vec<bool>,
        v: usize,
        k: usize,
    ) -> bool {
        if used.len() == k {
            return covered.iter().all(|&c| c);
        }
        for ci in from..candidates.len() {
            let blk = &d.blocks()[candidates[ci]];
            if blk.iter().any(|&p| covered[p]) {
                continue;
            }
            for &p in blk {
                covered[p] = true;
            }
            used.push(candidates[ci]);
            if rec(d, candidates, ci + 1, used, covered, v, k) {
                return true;
            }
            used.pop();
            for &p in blk {
                covered[p] = false;
            }
        }
        false
    }
    let mut used = Vec::new();
    let mut covered = vec![false; v];
    if rec(d, candidates, 0, &mut used, &mut covered, v, k) {
        Some(used)
    } else {
        None
    }
}

/// Builds the point and block neighbour partitions from the
/// more-than-one-common-block relations and verifies the quotient is a
/// projective plane. Only reports thick planes (t >= 2); a (1, q) plane is
/// the projective plane label itself.
fn detect_hjelmslev(d: &CoveringDesign) -> Option<(usize, usize)> {
    if !d.is_intersecting() {
        return None;
    }
    let v = d.num_points();
    let b = d.num_blocks();
    if v != b {
        return None;
    }

    // Point classes: components of the "share more than one block" graph.
    let mut point_adj = vec![Vec::new(); v];
    for i in 0..v {
        for j in i + 1..v {
            let common = d
                .blocks()
                .iter()
                .filter(|blk| blk.binary_search(&i).is_ok() && blk.binary_search(&j).is_ok())
                .count();
            if common > 1 {
                point_adj[i].push(j);
                point_adj[j].push(i);
            }
        }
    }
    let point_class = components(&point_adj);

    // Block classes: components of the "meet in more than one point" graph.
    let mut block_adj = vec![Vec::new(); b];
    for i in 0..b {
        for j in i + 1..b {
            let common = d.blocks()[i]
                .iter()
                .filter(|p| d.blocks()[j].binary_search(p).is_ok())
                .count();
            if common > 1 {
                block_adj[i].push(j);
                block_adj[j].push(i);
            }
        }
    }
    let block_class = components(&block_adj);

    let n_pc = point_class.iter().max().map(|&c| c + 1)?;
    let n_bc = block_class.iter().max().map(|&c| c + 1)?;
    if n_pc != n_bc {
        return None;
    }
    // A (t, q) plane has t^2 points per neighbour class.
    let mut class_sizes = vec![0usize; n_pc];
    for &c in &point_class {
        class_sizes[c] += 1;
    }
    let class_size = class_sizes[0];
    if class_sizes.iter().any(|&s| s != class_size) {
        return None;
    }
    let t = (1..).find(|&t: &usize| t * t >= class_size)?;
    if t * t != class_size || t < 2 {
        return None;
    }
    let mut bclass_sizes = vec![0usize; n_bc];
    for &c in &block_class {
        bclass_sizes[c] += 1;
    }
    if bclass_sizes.iter().any(|&s| s != class_size) {
        return None;
    }
    // v = t^2 (q^2 + q + 1)
    if v % (t * t) != 0 {
        return None;
    }
    let plane_size = v / (t * t);
    let q = (1..).find(|&q: &usize| q * q + q + 1 >= plane_size)?;
    if q * q + q + 1 != plane_size || n_pc != plane_size {
        return None;
    }

    // Every block meets a point class in exactly 0 or t points, and blocks
    // of a class meet exactly the same point classes.
    let mut class_incidence: Vec<Option<BTreeSet<usize>>> = vec![None; n_bc];
    for (bi, blk) in d.blocks().iter().enumerate() {
        let mut hits: BTreeMap<usize, usize> = BTreeMap::new();
        for &p in blk {
            *hits.entry(point_class[p]).or_insert(0) += 1;
        }
        if hits.values().any(|&c| c != t) {
            return None;
        }
        let classes: BTreeSet<usize> = hits.into_keys().collect();
        match &class_incidence[block_class[bi]] {
            None => class_incidence[block_class[bi]] = Some(classes),
            Some(existing) => {
                if *existing != classes {
                    return None;
                }
            }
        }
    }

    // The quotient must be a projective plane of order q.
    let quotient_points: Vec<String> = (0..n_pc).map(|c| format!("c{c}")).collect();
    let quotient_blocks: Vec<Vec<String>> = class_incidence
        .into_iter()
        .map(|classes| {
            classes
                .unwrap_or_default()
                .into_iter()
                .map(|c| format!("c{c}"))
                .collect()
        })
        .collect();
    let quotient = CoveringDesign::validate(quotient_points, quotient_blocks).ok()?;
    if classify(&quotient).contains(&StructureLabel::ProjectivePlane { order: q }) {
        Some((t, q))
    } else {
        None
    }
}

fn components(adj: &[Vec<usize>]) -> Vec<usize> {
    let mut class = vec![usize::MAX; adj.len()];
    let mut next = 0;
    for start in 0..adj.len() {
        if class[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        class[start] = next;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if class[y] == usize::MAX {
                    class[y] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    class
}

/// Existence status of a projective plane of a given order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PlaneExistence {
    Exists,
    RuledOut(RuledOutReason),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RuledOutReason {
    /// Order is 1 or 2 mod 4 but not a sum of two squares.
    BruckRyser,
    /// The computational nonexistence result for order 10.
    Order10,
}

fn is_sum_of_two_squares(n: usize) -> bool {
    let mut a = 0usize;
    while a * a <= n {
        let rest = n - a * a;
        let r = (rest as f64).sqrt() as usize;
        for c in r.saturating_sub(1)..=r + 1 {
            if c * c == rest {
                return true;
            }
        }
        a += 1;
    }
    false
}

/// Screens the order of a projective plane against the known nonexistence
/// results. `Exists` means a field construction is available.
pub fn plane_existence(s: usize) -> PlaneExistence {
    if s == 1 || prime_power(s).is_some() {
        return PlaneExistence::Exists;
    }
    if s == 10 {
        return PlaneExistence::RuledOut(RuledOutReason::Order10);
    }
    if (s % 4 == 1 || s % 4 == 2) && !is_sum_of_two_squares(s) {
        return PlaneExistence::RuledOut(RuledOutReason::BruckRyser);
    }
    PlaneExistence::Unknown
}

/// Outcome of the almost-projective-plane order screen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AlmostPlaneScreen {
    RuledOut(String),
    /// The necessary conditions hold; carries a ternary-form witness
    /// (x, y, z) when one applies.
    PossiblyExists(Option<(i64, i64, i64)>),
    /// The bounded ternary-form search did not decide solvability.
    Inconclusive,
}

const TERNARY_SEARCH_BOUND: i64 = 10_000;

/// Applies the square and ternary-form conditions for the existence of an
/// almost projective plane of order `s`. Never overclaims nonexistence: an
/// undecided ternary form reports `Inconclusive`.
pub fn almost_plane_screen(s: usize) -> AlmostPlaneScreen {
    let is_square = |n: usize| {
        let r = (n as f64).sqrt() as usize;
        (r.saturating_sub(1)..=r + 1).any(|c| c * c == n)
    };
    let m = s * (s + 1) / 2;
    match s % 4 {
        0 | 3 => {
            if !is_square(s + 1) {
                return AlmostPlaneScreen::RuledOut(format!("{} is not a square", s + 1));
            }
            if m % 4 == 2 && !is_sum_of_two_squares(s - 1) {
                return AlmostPlaneScreen::RuledOut(format!(
                    "{} is not a sum of two squares",
                    s - 1
                ));
            }
            AlmostPlaneScreen::PossiblyExists(None)
        }
        _ => {
            if !is_square(s - 1) {
                return AlmostPlaneScreen::RuledOut(format!("{} is not a square", s - 1));
            }
            // (s+1) x^2 + (-1)^{m(m-1)/2} 2 y^2 = z^2, nontrivially.
            let exponent = (m as u64) * (m as u64 - 1) / 2;
            let sign: i64 = if exponent % 2 == 0 { 1 } else { -1 };
            let coeff = (s + 1) as i64;
            for x in 1..=TERNARY_SEARCH_BOUND {
                for y in 0..=TERNARY_SEARCH_BOUND {
                    let value = coeff * x * x + sign * 2 * y * y;
                    if value < 0 {
                        continue;
                    }
                    let z = (value as f64).sqrt() as i64;
                    for c in (z - 1).max(0)..=z + 1 {
                        if c * c == value {
                            return AlmostPlaneScreen::PossiblyExists(Some((x, y, c)));
                        }
                    }
                }
            }
            AlmostPlaneScreen::Inconclusive
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limit::data_limit;
    use crate::rational::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn fano_plane() {
        let d = projective_plane(2).unwrap();
        assert_eq!(d.num_points(), 7);
        assert_eq!(d.num_blocks(), 7);
        assert!(d.is_linear_space());
        assert!(d.incidence_stats().is_uniform);
        assert_eq!(classify(&d), vec![StructureLabel::ProjectivePlane { order: 2 }]);
    }

    #[test]
    fn projective_plane_order_one_is_triangle() {
        let d = projective_plane(1).unwrap();
        assert_eq!(d.num_points(), 3);
        let labels = classify(&d);
        assert!(labels.contains(&StructureLabel::ProjectivePlane { order: 1 }));
        assert!(labels.contains(&StructureLabel::NearPencil { order: 3 }));
    }

    #[test]
    fn projective_plane_counts_exhaustive() {
        for q in [2usize, 3, 4, 5, 7, 8, 9] {
            let d = projective_plane(q).unwrap();
            assert_eq!(d.num_points(), q * q + q + 1);
            assert_eq!(d.num_blocks(), q * q + q + 1);
            assert!(d.is_linear_space(), "pairs not exactly once for q={q}");
            let stats = d.incidence_stats();
            assert!(stats.block_sizes.iter().all(|&k| k == q + 1));
            assert!(stats.replication.iter().all(|&r| r == q + 1));
            // Any two blocks meet in exactly one point.
            for (i, b1) in d.blocks().iter().enumerate() {
                for b2 in &d.blocks()[i + 1..] {
                    let common = b1.iter().filter(|p| b2.binary_search(p).is_ok()).count();
                    assert_eq!(common, 1);
                }
            }
        }
    }

    #[test]
    fn fano_dual_is_projective_plane() {
        let d = projective_plane(2).unwrap();
        let dual = d.dual().to_design().unwrap();
        assert_eq!(dual.num_points(), 7);
        assert!(classify(&dual).contains(&StructureLabel::ProjectivePlane { order: 2 }));
    }

    #[test]
    fn affine_planes() {
        for q in [2usize, 3, 4, 5] {
            let d = affine_plane(q).unwrap();
            assert_eq!(d.num_points(), q * q);
            assert_eq!(d.num_blocks(), q * q + q);
            assert!(d.is_linear_space());
            assert!(classify(&d).contains(&StructureLabel::AffinePlane { order: q }));
        }
        assert_eq!(affine_plane(1).unwrap_err(), ConstructError::OrderTooSmall(1));
        assert_eq!(affine_plane(6).unwrap_err(), ConstructError::NotPrimePower(6));
    }

    #[test]
    fn near_pencils() {
        let d = near_pencil(4).unwrap();
        assert_eq!(data_limit(&d).limit, r(3, 5));
        assert!(classify(&d).contains(&StructureLabel::NearPencil { order: 4 }));
        assert_eq!(near_pencil(2).unwrap_err(), ConstructError::MTooSmall(2));

        // The order-3 near pencil is the triangle.
        let d3 = near_pencil(3).unwrap();
        assert!(classify(&d3).contains(&StructureLabel::ProjectivePlane { order: 1 }));
    }

    #[test]
    fn almost_projective_planes() {
        let d2 = almost_projective_plane(2).unwrap();
        assert_eq!(d2.num_points(), 6);
        assert_eq!(d2.num_blocks(), 6);
        assert!(classify(&d2).contains(&StructureLabel::AlmostProjectivePlane { order: 2 }));
        assert_eq!(data_limit(&d2).limit, r(1, 2));

        let d3 = almost_projective_plane(3).unwrap();
        assert_eq!(d3.num_points(), 12);
        let labels = classify(&d3);
        assert!(labels.contains(&StructureLabel::AlmostProjectivePlane { order: 3 }));
        assert!(!labels.contains(&StructureLabel::AffinePlane { order: 3 }));
        assert_eq!(data_limit(&d3).limit, r(1, 3));

        assert_eq!(
            almost_projective_plane(4).unwrap_err(),
            ConstructError::UnknownOrder(4)
        );
    }

    #[test]
    fn transversal_designs() {
        for (k, n) in [(2usize, 2usize), (3, 3), (3, 4), (4, 5)] {
            let d = transversal_design(k, n).unwrap();
            assert_eq!(d.num_points(), k * n);
            assert_eq!(d.num_blocks(), k + n * n);
            assert!(d.is_linear_space(), "TD({k},{n}) not a linear space");
            assert!(classify(&d).contains(&StructureLabel::TransversalDesign { k, n }));
        }
        assert!(matches!(
            transversal_design(7, 5),
            Err(ConstructError::KOutOfRange { .. })
        ));
        assert!(matches!(
            transversal_design(3, 6),
            Err(ConstructError::NotPrimePower(6))
        ));
    }

    #[test]
    fn transversal_design_full_group_count() {
        // k = n + 1 uses the slope-infinity group.
        let d = transversal_design(4, 3).unwrap();
        assert!(d.is_linear_space());
        assert!(classify(&d).contains(&StructureLabel::TransversalDesign { k: 4, n: 3 }));
    }

    #[test]
    fn hjelmslev_plane_order_two() {
        let d = hjelmslev_plane(2).unwrap();
        assert_eq!(d.num_points(), 28);
        assert_eq!(d.num_blocks(), 28);
        let stats = d.incidence_stats();
        assert!(stats.block_sizes.iter().all(|&k| k == 6));
        assert!(stats.replication.iter().all(|&r| r == 6));
        assert!(classify(&d).contains(&StructureLabel::HjelmslevPlane { t: 2, q: 2 }));
        assert_eq!(hjelmslev_plane(4).unwrap_err(), ConstructError::NotPrime(4));
        assert_eq!(hjelmslev_plane(5).unwrap_err(), ConstructError::TooLarge(5));
    }

    #[test]
    fn existence_screens() {
        assert_eq!(plane_existence(7), PlaneExistence::Exists);
        assert_eq!(plane_existence(1), PlaneExistence::Exists);
        assert_eq!(
            plane_existence(6),
            PlaneExistence::RuledOut(RuledOutReason::BruckRyser)
        );
        assert_eq!(
            plane_existence(10),
            PlaneExistence::RuledOut(RuledOutReason::Order10)
        );
        assert_eq!(plane_existence(12), PlaneExistence::Unknown);
    }

    #[test]
    fn almost_plane_screen_order_ten() {
        match almost_plane_screen(10) {
            AlmostPlaneScreen::PossiblyExists(Some((x, y, z))) => {
                assert_eq!((x, y, z), (1, 1, 3));
                assert_eq!(11 * x * x - 2 * y * y, z * z);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn almost_plane_screen_small_orders() {
        // Orders 2 and 3 exist, so the screen must not rule them out.
        assert!(!matches!(almost_plane_screen(2), AlmostPlaneScreen::RuledOut(_)));
        assert!(!matches!(almost_plane_screen(3), AlmostPlaneScreen::RuledOut(_)));
    }
}
