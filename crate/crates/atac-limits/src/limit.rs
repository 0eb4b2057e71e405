//! Exact data limits with optimality certificates.
//!
//! The data limit of a covering design is the reciprocal of the fractional
//! matching number of its dual hypergraph. The matching solve yields a
//! normalised point weighting proving the upper bound; its dual yields a
//! fractional transversal of the blocks proving the matching lower bound.
//! Both halves of the certificate re-verify independently of the solver.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::design::{CoveringDesign, DualHypergraph, Weighting};
use crate::lp::{self, Cmp, Constraint, LinearProgramInstance, LpStatus, Sense};
use crate::rational::Rational;

/// Maximum of the edge-weight total subject to per-vertex load at most 1.
/// Returns the exact value and an optimal edge weighting together with the
/// dual vertex weights from the final tableau.
pub fn fractional_matching(h: &DualHypergraph) -> (Rational, Vec<Rational>, Vec<Rational>) {
    assert!(h.num_vertices() >= 1, "hypergraph must have a vertex");
    let ne = h.num_edges();
    let nv = h.num_vertices();
    let mut constraints = Vec::with_capacity(nv);
    for v in 0..nv {
        let mut coeffs = vec![Rational::zero(); ne];
        for (e, edge) in h.edges().iter().enumerate() {
            if edge.contains(&v) {
                coeffs[e] = Rational::one();
            }
        }
        constraints.push(Constraint {
            coeffs,
            cmp: Cmp::Le,
            rhs: Rational::one(),
        });
    }
    let lp = LinearProgramInstance {
        sense: Sense::Maximize,
        objective: vec![Rational::one(); ne],
        constraints,
    };
    let sol = lp::solve(&lp);
    debug_assert_eq!(sol.status, LpStatus::Optimal);
    (sol.value, sol.primal, sol.dual)
}

/// Convenience wrapper returning only value and edge weights.
pub fn fractional_matching_number(h: &DualHypergraph) -> (Rational, Vec<Rational>) {
    let (value, edge_weights, _) = fractional_matching(h);
    (value, edge_weights)
}

/// Minimum total vertex weight covering every edge to level at least 1.
/// This is a direct minimization solve, independent of the matching route;
/// by strong duality the two values agree exactly.
pub fn fractional_transversal_min(h: &DualHypergraph) -> (Rational, Vec<Rational>) {
    assert!(
        h.edges().iter().all(|e| !e.is_empty()),
        "every edge must be non-empty"
    );
    let nv = h.num_vertices();
    let constraints = h
        .edges()
        .iter()
        .map(|edge| {
            let mut coeffs = vec![Rational::zero(); nv];
            for &v in edge {
                coeffs[v] = Rational::one();
            }
            Constraint {
                coeffs,
                cmp: Cmp::Ge,
                rhs: Rational::one(),
            }
        })
        .collect();
    let lp = LinearProgramInstance {
        sense: Sense::Minimize,
        objective: vec![Rational::one(); nv],
        constraints,
    };
    let sol = lp::solve(&lp);
    debug_assert_eq!(sol.status, LpStatus::Optimal);
    (sol.value, sol.primal)
}

/// Certificate errors.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("weighting is not normalised (total {0})")]
    WeightingNotNormalised(Rational),
    #[error("weight of point {0:?} is negative")]
    NegativeWeight(String),
    #[error("block {index} has weight {weight} exceeding the claimed limit {limit}")]
    BlockOverweight {
        index: usize,
        weight: Rational,
        limit: Rational,
    },
    #[error("transversal entry {0} is negative")]
    NegativeTransversal(usize),
    #[error("transversal length {got} does not match block count {expected}")]
    TransversalLength { got: usize, expected: usize },
    #[error("point {0:?} has transversal coverage {1} below 1")]
    CoverageBelowOne(String, Rational),
    #[error("transversal value {got} differs from 1/limit = {expected}")]
    TransversalValueMismatch { got: Rational, expected: Rational },
    #[error("missing weight for point {0:?}")]
    MissingWeight(String),
    #[error("claimed limit {0} is not positive")]
    NonPositiveLimit(Rational),
}

/// An exact optimality certificate for the data limit of a design.
///
/// The weighting proves the limit is achievable; the fractional transversal
/// of value `1/limit` proves no weighting does better. The transversal is
/// stored per block in the design's canonical block order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LimitCertificate {
    pub limit: Rational,
    pub weighting: Weighting,
    pub transversal: Vec<Rational>,
}

impl LimitCertificate {
    /// Re-checks both halves of the certificate against `design`, using only
    /// rational arithmetic and no solver state.
    pub fn verify(&self, design: &CoveringDesign) -> Result<(), CertificateError> {
        if !self.limit.is_positive() {
            return Err(CertificateError::NonPositiveLimit(self.limit.clone()));
        }

        // Upper bound: the weighting is normalised and no block exceeds the
        // claimed limit.
        let mut total = Rational::zero();
        for p in design.points() {
            let w = self
                .weighting
                .get(p)
                .map_err(|_| CertificateError::MissingWeight(p.to_string()))?;
            if w.is_negative() {
                return Err(CertificateError::NegativeWeight(p.to_string()));
            }
            total += w;
        }
        if total != Rational::one() {
            return Err(CertificateError::WeightingNotNormalised(total));
        }
        for (index, block) in design.blocks().iter().enumerate() {
            let weight: Rational = block
                .iter()
                .map(|&i| self.weighting.get(design.point_label(i)).unwrap().clone())
                .sum();
            if weight > self.limit {
                return Err(CertificateError::BlockOverweight {
                    index,
                    weight,
                    limit: self.limit.clone(),
                });
            }
        }

        // Lower bound: nonnegative block weights covering every point to
        // level >= 1 with total exactly 1/limit.
        if self.transversal.len() != design.num_blocks() {
            return Err(CertificateError::TransversalLength {
                got: self.transversal.len(),
                expected: design.num_blocks(),
            });
        }
        for (i, h) in self.transversal.iter().enumerate() {
            if h.is_negative() {
                return Err(CertificateError::NegativeTransversal(i));
            }
        }
        for (i, p) in design.points().iter().enumerate() {
            let coverage: Rational = design
                .blocks()
                .iter()
                .zip(&self.transversal)
                .filter(|(block, _)| block.binary_search(&i).is_ok())
                .map(|(_, h)| h.clone())
                .sum();
            if coverage < Rational::one() {
                return Err(CertificateError::CoverageBelowOne(p.clone(), coverage));
            }
        }
        let value: Rational = self.transversal.iter().cloned().sum();
        let expected = self.limit.recip();
        if value != expected {
            return Err(CertificateError::TransversalValueMismatch {
                got: value,
                expected,
            });
        }
        Ok(())
    }
}

/// Computes the exact data limit of a design with a verified certificate.
pub fn data_limit(design: &CoveringDesign) -> LimitCertificate {
    let h = design.dual();
    let (nu, edge_weights, vertex_duals) = fractional_matching(&h);
    debug_assert!(nu.is_positive());
    let limit = nu.recip();

    // Edge e of the dual is point e of the design; normalise the matching.
    let weights: BTreeMap<String, Rational> = design
        .points()
        .iter()
        .cloned()
        .zip(edge_weights.iter().map(|w| w * &limit))
        .collect();
    let weighting = Weighting::new(weights);

    // Vertex duals of the dual hypergraph are block weights of the design;
    // an optimal dual already has total nu = 1/limit.
    let certificate = LimitCertificate {
        limit,
        weighting,
        transversal: vertex_duals,
    };
    certificate
        .verify(design)
        .expect("solver produced an invalid certificate");
    certificate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::test_designs::{five_point, near_pencil_4, triangle};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn triangle_matching_is_three_halves() {
        let (nu, w) = fractional_matching_number(&triangle().dual());
        assert_eq!(nu, r(3, 2));
        assert_eq!(w.iter().cloned().sum::<Rational>(), r(3, 2));
    }

    #[test]
    fn single_vertex_loop_edge() {
        let h = DualHypergraph::from_edges(1, vec![vec![0]]);
        let (nu, _) = fractional_matching_number(&h);
        assert_eq!(nu, Rational::one());
    }

    #[test]
    fn transversal_matches_matching_on_triangle() {
        let h = triangle().dual();
        let (tau, y) = fractional_transversal_min(&h);
        assert_eq!(tau, r(3, 2));
        assert_eq!(y, vec![r(1, 2), r(1, 2), r(1, 2)]);
    }

    #[test]
    fn whole_set_edge_transversal_is_one() {
        let h = DualHypergraph::from_edges(4, vec![vec![0, 1, 2, 3]]);
        let (tau, _) = fractional_transversal_min(&h);
        assert_eq!(tau, Rational::one());
    }

    #[test]
    fn triangle_limit() {
        let cert = data_limit(&triangle());
        assert_eq!(cert.limit, r(2, 3));
    }

    #[test]
    fn near_pencil_limit() {
        let cert = data_limit(&near_pencil_4());
        assert_eq!(cert.limit, r(3, 5));
    }

    #[test]
    fn five_point_limit_and_weighting() {
        let d = five_point();
        let cert = data_limit(&d);
        assert_eq!(cert.limit, r(5, 9));
        // The optimal weighting from the LP matches the known one.
        assert_eq!(cert.weighting.get("1").unwrap(), &r(1, 3));
        assert_eq!(cert.weighting.get("2").unwrap(), &r(2, 9));
        assert_eq!(cert.weighting.get("3").unwrap(), &r(2, 9));
        assert_eq!(cert.weighting.get("4").unwrap(), &r(1, 9));
        assert_eq!(cert.weighting.get("5").unwrap(), &r(1, 9));
    }

    #[test]
    fn whole_set_block_forces_limit_one() {
        let d = CoveringDesign::validate(["a", "b", "c"], vec![vec!["a", "b", "c"]]).unwrap();
        assert_eq!(data_limit(&d).limit, Rational::one());
    }

    #[test]
    fn tampered_certificates_fail_verification() {
        let d = triangle();
        let good = data_limit(&d);

        let mut bad = good.clone();
        bad.limit = r(1, 2);
        assert!(matches!(
            bad.verify(&d),
            Err(CertificateError::BlockOverweight { .. })
        ));

        let mut bad = good.clone();
        bad.transversal[0] = Rational::zero();
        assert!(bad.verify(&d).is_err());

        let mut bad = good;
        bad.transversal.pop();
        assert!(matches!(
            bad.verify(&d),
            Err(CertificateError::TransversalLength { .. })
        ));
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = data_limit(&five_point());
        let json = serde_json::to_string(&cert).unwrap();
        let back: LimitCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        assert!(json.contains("\"5/9\""));
    }
}
