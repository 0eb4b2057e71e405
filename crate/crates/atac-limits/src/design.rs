//! Covering designs, weightings and their basic transforms.
//!
//! A covering design is a point set together with a multiset of blocks such
//! that every pair of distinct points occurs together in at least one block.
//! Designs are immutable after validation; every transform returns a new
//! design. The JSON interchange format is
//! `{"points": ["a","b",...], "blocks": [["a","b"],...]}` for designs and
//! `{"a": "2/5", ...}` for weightings, with rationals as `"p/q"` strings.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// Errors from design construction and transformation.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DesignError {
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("duplicate point label {0:?}")]
    DuplicatePoint(String),
    #[error("empty point label")]
    EmptyPointLabel,
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("block {block} references unknown point {label:?}")]
    UnknownPoint { block: usize, label: String },
    #[error("pair {{{0}, {1}}} is not covered by any block")]
    UncoveredPair(String, String),
    #[error("no weight assigned to point {0:?}")]
    MissingWeight(String),
    #[error("negative weight on point {0:?}")]
    NegativeWeight(String),
    #[error("weighting does not sum to 1 (total {0})")]
    NotNormalised(Rational),
    #[error("all points would be removed")]
    AllPointsRemoved,
    #[error("requested block count {requested} is below current count {current}")]
    TooFewBlocksRequested { requested: usize, current: usize },
}

/// A validated covering design.
///
/// Points are ordered; blocks are stored as sorted point-index sets with the
/// block list itself sorted lexicographically, so serialization is
/// deterministic. Duplicate blocks are retained: the block count is the
/// resource being measured.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoveringDesign {
    points: Vec<String>,
    blocks: Vec<Vec<usize>>,
}

impl CoveringDesign {
    /// Validates points and blocks into a covering design.
    ///
    /// Fails with the first uncovered pair if pair coverage does not hold.
    /// A single-point design is accepted: it has no pairs to cover.
    pub fn validate<P, B, L>(points: P, blocks: B) -> Result<CoveringDesign, DesignError>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        B: IntoIterator<Item = L>,
        L: IntoIterator,
        L::Item: Into<String>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(DesignError::EmptyPointSet);
        }
        let mut index = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if p.is_empty() {
                return Err(DesignError::EmptyPointLabel);
            }
            if index.insert(p.clone(), i).is_some() {
                return Err(DesignError::DuplicatePoint(p.clone()));
            }
        }

        let mut resolved: Vec<Vec<usize>> = Vec::new();
        for (bi, block) in blocks.into_iter().enumerate() {
            let mut members = HashSet::new();
            for label in block {
                let label: String = label.into();
                match index.get(&label) {
                    Some(&i) => {
                        members.insert(i);
                    }
                    None => return Err(DesignError::UnknownPoint { block: bi, label }),
                }
            }
            if members.is_empty() {
                return Err(DesignError::EmptyBlock(bi));
            }
            let mut members: Vec<usize> = members.into_iter().collect();
            members.sort_unstable();
            resolved.push(members);
        }
        resolved.sort();

        let design = CoveringDesign {
            points,
            blocks: resolved,
        };
        design.check_covering()?;
        Ok(design)
    }

    fn check_covering(&self) -> Result<(), DesignError> {
        let v = self.points.len();
        let mut covered = vec![false; v * v];
        for block in &self.blocks {
            for (a, &i) in block.iter().enumerate() {
                for &j in &block[a + 1..] {
                    covered[i * v + j] = true;
                }
            }
        }
        for i in 0..v {
            for j in i + 1..v {
                if !covered[i * v + j] {
                    return Err(DesignError::UncoveredPair(
                        self.points[i].clone(),
                        self.points[j].clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Builds a design directly from index blocks over `points`.
    pub fn from_index_blocks(
        points: Vec<String>,
        blocks: Vec<Vec<usize>>,
    ) -> Result<CoveringDesign, DesignError> {
        let labels: Vec<Vec<String>> = blocks
            .iter()
            .map(|b| b.iter().map(|&i| points[i].clone()).collect())
            .collect();
        CoveringDesign::validate(points, labels)
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_label(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }

    /// Blocks as sorted point-index sets, in canonical order.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_labels(&self, b: usize) -> Vec<&str> {
        self.blocks[b].iter().map(|&i| self.points[i].as_str()).collect()
    }

    /// Replication number of each point: the number of blocks containing it.
    pub fn replication(&self) -> Vec<usize> {
        let mut r = vec![0usize; self.points.len()];
        for block in &self.blocks {
            for &i in block {
                r[i] += 1;
            }
        }
        r
    }

    pub fn incidence_stats(&self) -> IncidenceStats {
        let replication = self.replication();
        let mut block_sizes: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        block_sizes.sort_unstable();
        let is_uniform = block_sizes.windows(2).all(|w| w[0] == w[1]);
        let is_regular = replication.windows(2).all(|w| w[0] == w[1]);
        IncidenceStats {
            replication,
            block_sizes,
            is_uniform,
            is_regular,
        }
    }

    /// True if every pair of distinct points occurs in exactly one block.
    pub fn is_linear_space(&self) -> bool {
        let v = self.points.len();
        let mut count = vec![0u32; v * v];
        for block in &self.blocks {
            for (a, &i) in block.iter().enumerate() {
                for &j in &block[a + 1..] {
                    count[i * v + j] += 1;
                }
            }
        }
        (0..v).all(|i| (i + 1..v).all(|j| count[i * v + j] == 1))
    }

    /// True if every two blocks share at least one point.
    pub fn is_intersecting(&self) -> bool {
        self.blocks.iter().enumerate().all(|(a, b1)| {
            self.blocks[a + 1..]
                .iter()
                .all(|b2| b1.iter().any(|p| b2.binary_search(p).is_ok()))
        })
    }

    /// Exact weight of one block under `w`.
    pub fn block_weight(&self, w: &Weighting, block: usize) -> Result<Rational, DesignError> {
        self.blocks[block]
            .iter()
            .map(|&i| w.get(&self.points[i]))
            .try_fold(Rational::zero(), |acc, x| Ok(acc + x?.clone()))
    }

    /// The maximum block weight under `w`; this is the max-load fraction of
    /// the placement described by the weighting.
    pub fn max_block_weight(&self, w: &Weighting) -> Result<Rational, DesignError> {
        let mut best: Option<Rational> = None;
        for b in 0..self.blocks.len() {
            let bw = self.block_weight(w, b)?;
            best = Some(match best {
                Some(cur) => cur.max(bw),
                None => bw,
            });
        }
        Ok(best.unwrap_or_else(Rational::zero))
    }

    /// The dual hypergraph: one vertex per block, one edge per point
    /// collecting the blocks containing that point.
    pub fn dual(&self) -> DualHypergraph {
        let mut edges: Vec<Vec<usize>> = vec![Vec::new(); self.points.len()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                edges[i].push(b);
            }
        }
        DualHypergraph {
            num_vertices: self.blocks.len(),
            edges,
            edge_labels: self.points.clone(),
        }
    }

    /// Removes zero-weight points, then iteratively merges duplicated points
    /// (points incident to exactly the same block set), transferring weight.
    /// Preserves the maximum block weight exactly.
    ///
    /// Blocks that become empty are dropped.
    pub fn remove_duplicated_and_zero_points(
        &self,
        w: &Weighting,
    ) -> Result<(CoveringDesign, Weighting), DesignError> {
        w.check_normalised(self)?;

        // Zero-weight points go first.
        let mut keep: Vec<usize> = (0..self.points.len())
            .filter(|&i| !w.get(&self.points[i]).unwrap().is_zero())
            .collect();
        if keep.is_empty() {
            return Err(DesignError::AllPointsRemoved);
        }

        // Merge duplicated points: identical incident block sets.
        let mut incidence: HashMap<usize, Vec<usize>> = HashMap::new();
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                incidence.entry(i).or_default().push(b);
            }
        }
        let mut weight_of: HashMap<usize, Rational> = keep
            .iter()
            .map(|&i| (i, w.get(&self.points[i]).unwrap().clone()))
            .collect();
        let mut rep_of: HashMap<Vec<usize>, usize> = HashMap::new();
        keep.retain(|&i| {
            let key = incidence.get(&i).cloned().unwrap_or_default();
            match rep_of.get(&key) {
                Some(&rep) => {
                    let merged = weight_of[&i].clone();
                    *weight_of.get_mut(&rep).unwrap() += &merged;
                    false
                }
                None => {
                    rep_of.insert(key, i);
                    true
                }
            }
        });

        let kept: HashSet<usize> = keep.iter().copied().collect();
        let points: Vec<String> = keep.iter().map(|&i| self.points[i].clone()).collect();
        let blocks: Vec<Vec<String>> = self
            .blocks
            .iter()
            .map(|block| {
                block
                    .iter()
                    .filter(|i| kept.contains(i))
                    .map(|&i| self.points[i].clone())
                    .collect::<Vec<String>>()
            })
            .filter(|b: &Vec<String>| !b.is_empty())
            .collect();
        let design = CoveringDesign::validate(points, blocks)?;
        let weights: BTreeMap<String, Rational> = keep
            .iter()
            .map(|&i| (self.points[i].clone(), weight_of[&i].clone()))
            .collect();
        Ok((design, Weighting::new(weights)))
    }

    /// Expands the design into a k-uniform design on `v` points carrying the
    /// same limit value under the uniform weighting `1/v`.
    ///
    /// Each point `x` is replaced by `v * w(x)` copies, where `v` is the least
    /// common denominator of the weighting; blocks shorter than the maximum
    /// expanded size `k` are padded with the lowest-index points not already
    /// in them.
    pub fn uniformize(&self, w: &Weighting) -> Result<(CoveringDesign, usize, usize), DesignError> {
        w.check_normalised(self)?;
        let mut v = num_bigint::BigInt::from(1);
        for p in &self.points {
            let weight = w.get(p)?;
            v = num_integer::lcm(v, weight.denom().clone());
        }
        let v: usize = {
            use num_traits::ToPrimitive;
            v.to_usize().expect("common denominator fits in usize")
        };

        // Copies of each point, labelled deterministically.
        let mut copies: Vec<Vec<usize>> = Vec::with_capacity(self.points.len());
        let mut labels: Vec<String> = Vec::with_capacity(v);
        for (i, p) in self.points.iter().enumerate() {
            let weight = w.get(p)?;
            let count = {
                use num_traits::ToPrimitive;
                (weight.numer() * num_bigint::BigInt::from(v) / weight.denom())
                    .to_usize()
                    .expect("copy count fits in usize")
            };
            let ids: Vec<usize> = (0..count).map(|c| labels.len() + c).collect();
            for c in 0..count {
                labels.push(format!("{}#{}", self.points[i], c));
            }
            copies.push(ids);
        }
        debug_assert_eq!(labels.len(), v);

        let mut expanded: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|block| {
                let mut b: Vec<usize> = block.iter().flat_map(|&i| copies[i].iter().copied()).collect();
                b.sort_unstable();
                b
            })
            .collect();
        let k = expanded.iter().map(|b| b.len()).max().unwrap_or(0);

        // Pad short blocks with the lowest-index points missing from them.
        for b in expanded.iter_mut() {
            let mut have: HashSet<usize> = b.iter().copied().collect();
            let mut next = 0usize;
            while b.len() < k {
                while have.contains(&next) {
                    next += 1;
                }
                b.push(next);
                have.insert(next);
            }
            b.sort_unstable();
        }

        let design = CoveringDesign::from_index_blocks(labels, expanded)?;
        Ok((design, v, k))
    }

    /// Pads the block multiset to exactly `m` blocks by duplicating existing
    /// blocks. Leaves the data limit unchanged.
    pub fn pad_to_block_count(&self, m: usize) -> Result<CoveringDesign, DesignError> {
        let current = self.blocks.len();
        if m < current {
            return Err(DesignError::TooFewBlocksRequested {
                requested: m,
                current,
            });
        }
        let mut blocks = self.blocks.clone();
        for i in 0..m - current {
            blocks.push(self.blocks[i % current].clone());
        }
        CoveringDesign::from_index_blocks(self.points.clone(), blocks)
    }

    /// The uniform normalised weighting `1/|X|`.
    pub fn uniform_weighting(&self) -> Weighting {
        let v = self.points.len();
        Weighting::new(
            self.points
                .iter()
                .map(|p| (p.clone(), Rational::new(1, v as i64)))
                .collect(),
        )
    }
}

impl fmt::Debug for CoveringDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CoveringDesign({} points, {} blocks)",
            self.points.len(),
            self.blocks.len()
        )
    }
}

/// Serde mirror of the design interchange format.
#[derive(Serialize, Deserialize)]
pub struct DesignJson {
    pub points: Vec<String>,
    pub blocks: Vec<Vec<String>>,
}

impl Serialize for CoveringDesign {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DesignJson {
            points: self.points.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|&i| self.points[i].clone()).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoveringDesign {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = DesignJson::deserialize(deserializer)?;
        CoveringDesign::validate(raw.points, raw.blocks).map_err(serde::de::Error::custom)
    }
}

/// A nonnegative weighting of points. Serializes as a label-to-`"p/q"` map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weighting {
    weights: BTreeMap<String, Rational>,
}

impl Weighting {
    pub fn new(weights: BTreeMap<String, Rational>) -> Weighting {
        Weighting { weights }
    }

    pub fn get(&self, label: &str) -> Result<&Rational, DesignError> {
        self.weights
            .get(label)
            .ok_or_else(|| DesignError::MissingWeight(label.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.weights.iter()
    }

    pub fn total(&self) -> Rational {
        self.weights.values().cloned().sum()
    }

    /// Checks the weighting is defined and nonnegative on every point of `d`
    /// and sums to exactly 1.
    pub fn check_normalised(&self, d: &CoveringDesign) -> Result<(), DesignError> {
        let mut total = Rational::zero();
        for p in d.points() {
            let w = self.get(p)?;
            if w.is_negative() {
                return Err(DesignError::NegativeWeight(p.clone()));
            }
            total += w;
        }
        if total != Rational::one() {
            return Err(DesignError::NotNormalised(total));
        }
        Ok(())
    }
}

/// The dual of a covering design: vertices are the source blocks, edges are
/// the sets of blocks through each source point. Intersecting source designs
/// have covering duals and vice versa.
#[derive(Clone, Debug)]
pub struct DualHypergraph {
    num_vertices: usize,
    edges: Vec<Vec<usize>>,
    edge_labels: Vec<String>,
}

impl DualHypergraph {
    pub fn from_edges(num_vertices: usize, edges: Vec<Vec<usize>>) -> DualHypergraph {
        let edge_labels = (0..edges.len()).map(|i| format!("e{i}")).collect();
        DualHypergraph {
            num_vertices,
            edges,
            edge_labels,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted vertex-index lists.
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_label(&self, e: usize) -> &str {
        &self.edge_labels[e]
    }

    pub fn is_intersecting(&self) -> bool {
        self.edges.iter().enumerate().all(|(a, e1)| {
            self.edges[a + 1..]
                .iter()
                .all(|e2| e1.iter().any(|v| e2.contains(v)))
        })
    }

    /// True if two edges have identical vertex sets (the source design had
    /// duplicated points).
    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|e| seen.insert(e.clone()))
    }

    /// Reinterprets the hypergraph as a covering design with vertices as
    /// points. Fails if some vertex pair is uncovered, i.e. the source design
    /// was not intersecting.
    pub fn to_design(&self) -> Result<CoveringDesign, DesignError> {
        let points: Vec<String> = (0..self.num_vertices).map(|i| format!("b{i}")).collect();
        CoveringDesign::from_index_blocks(points, self.edges.clone())
    }
}

/// Incidence statistics of a design.
#[derive(Clone, Debug, Serialize)]
pub struct IncidenceStats {
    /// Replication number per point, in point order.
    pub replication: Vec<usize>,
    /// Sorted multiset of block sizes.
    pub block_sizes: Vec<usize>,
    pub is_uniform: bool,
    pub is_regular: bool,
}
