//! Closed-form bounds on L(m) and L(D).
//!
//! L(m) is the best data limit achievable with m machines. Two lower bounds
//! are computed: the floor-square-root bound and the stronger quadratic-root
//! bound F(m). F(m) is kept in exact symbolic form (a + sqrt(d))/b and all
//! comparisons are done by radical isolation and squaring, never floating
//! point. The design-level toolbox gives quick lower bounds on L(D) from
//! replication counts and block weightings.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::construct::{plane_existence, PlaneExistence};
use crate::design::{CoveringDesign, Weighting};
use crate::rational::Rational;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BoundError {
    #[error("m must be at least 2, got {0}")]
    MTooSmall(usize),
    #[error("point {0:?} is not covered to level 1 by the given block weights")]
    CoverageViolated(String),
    #[error("the multiplicity t must be at least 1")]
    TNotPositive,
    #[error("expected {expected} block weights, got {got}")]
    WeightCount { got: usize, expected: usize },
    #[error("block weight {0} is negative")]
    NegativeBlockWeight(usize),
}

/// An exact value of the form (a + sqrt(d))/b with integers a, d >= 0, b > 0.
/// Perfect-square radicands are folded away on construction, so `d` is zero
/// exactly when the value is rational.
#[derive(Clone, Debug)]
pub struct AlgebraicValue {
    a: BigInt,
    d: BigInt,
    b: BigInt,
}

impl Serialize for AlgebraicValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AlgebraicValue", 3)?;
        s.serialize_field("a", &self.a.to_string())?;
        s.serialize_field("d", &self.d.to_string())?;
        s.serialize_field("b", &self.b.to_string())?;
        s.end()
    }
}

impl AlgebraicValue {
    pub fn new<A, D, B>(a: A, d: D, b: B) -> AlgebraicValue
    where
        A: Into<BigInt>,
        D: Into<BigInt>,
        B: Into<BigInt>,
    {
        let mut a: BigInt = a.into();
        let mut d: BigInt = d.into();
        let mut b: BigInt = b.into();
        assert!(!d.is_negative(), "radicand must be nonnegative");
        assert!(!b.is_zero(), "denominator must be nonzero");
        if b.is_negative() {
            a = -a;
            b = -b;
            assert!(d.is_zero(), "cannot negate a radical");
        }
        let root = d.sqrt();
        if &root * &root == d {
            a += root;
            d = BigInt::zero();
        }
        AlgebraicValue { a, d, b }
    }

    pub fn from_rational(r: &Rational) -> AlgebraicValue {
        AlgebraicValue::new(r.numer().clone(), 0, r.denom().clone())
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational()
            .then(|| Rational::from_inner(BigRational::new(self.a.clone(), self.b.clone())))
    }

    /// A rational lower bound within 10^-13 of the true value: sqrt(d) is
    /// replaced by floor(sqrt(d * K^2))/K with K = 10^13.
    pub fn lower_approximation(&self) -> Rational {
        if let Some(r) = self.as_rational() {
            return r;
        }
        let scale = BigInt::from(10u8).pow(13);
        let root = (&self.d * &scale * &scale).sqrt();
        Rational::from_inner(BigRational::new(&self.a * &scale + root, &self.b * &scale))
    }

    /// Sign of self - other, computed exactly.
    fn cmp_sign(&self, other: &AlgebraicValue) -> i32 {
        // (a1 + sqrt(d1))/b1 - (a2 + sqrt(d2))/b2 has the sign of
        // e + u sqrt(d1) - v sqrt(d2) with e = a1 b2 - a2 b1, u = b2, v = b1.
        let e = &self.a * &other.b - &other.a * &self.b;
        sign_radical_difference(&e, &other.b, &self.d, &self.b, &other.d)
    }
}

/// Sign of e + u*sqrt(d1) - v*sqrt(d2) for u, v > 0 and d1, d2 >= 0.
fn sign_radical_difference(e: &BigInt, u: &BigInt, d1: &BigInt, v: &BigInt, d2: &BigInt) -> i32 {
    if d2.is_zero() {
        return sign_plus_radical(e, u, d1);
    }
    if d1.is_zero() {
        return -sign_plus_radical(&-e, v, d2);
    }
    let t = sign_of(&(u * u * d1 - v * v * d2));
    let se = sign_of(e);
    if se == 0 {
        return t;
    }
    if t == 0 || t == se {
        return se;
    }
    // e and the radical difference have opposite signs: decide |e| vs |T|
    // where T = u sqrt(d1) - v sqrt(d2). e^2 - T^2 = A + 2uv sqrt(d1 d2).
    let a = e * e - u * u * d1 - v * v * d2;
    match sign_plus_radical(&a, &(2 * u * v), &(d1 * d2)) {
        1 => se,
        -1 => t,
        _ => 0,
    }
}

/// Sign of e + u*sqrt(d) for u >= 0, d >= 0.
fn sign_plus_radical(e: &BigInt, u: &BigInt, d: &BigInt) -> i32 {
    let radical_zero = u.is_zero() || d.is_zero();
    if radical_zero {
        return sign_of(e);
    }
    if !e.is_negative() {
        return 1;
    }
    sign_of(&(u * u * d - e * e))
}

fn sign_of(x: &BigInt) -> i32 {
    match x.cmp(&BigInt::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

impl PartialEq for AlgebraicValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_sign(other) == 0
    }
}

impl Eq for AlgebraicValue {}

impl PartialOrd for AlgebraicValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.cmp_sign(other) {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl PartialEq<Rational> for AlgebraicValue {
    fn eq(&self, other: &Rational) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd<Rational> for AlgebraicValue {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(&AlgebraicValue::from_rational(other)))
    }
}

impl fmt::Display for AlgebraicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "({} + sqrt({}))/{}", self.a, self.d, self.b),
        }
    }
}

/// The unique positive integer s with s^2 - s + 1 < m <= s^2 + s + 1.
pub fn s_of(m: usize) -> Result<usize, BoundError> {
    if m < 2 {
        return Err(BoundError::MTooSmall(m));
    }
    let mut s = (m as f64).sqrt() as usize;
    s = s.max(1);
    while s * s + s + 1 < m {
        s += 1;
    }
    while s > 1 && s * s - s + 1 >= m {
        s -= 1;
    }
    debug_assert!(s * s - s + 1 < m && m <= s * s + s + 1);
    Ok(s)
}

/// The floor-square-root lower bound min(1/floor(sqrt(m)), (floor(sqrt(m))+1)/m).
pub fn hkt_bound(m: usize) -> Rational {
    assert!(m >= 1);
    let f = (1..).take_while(|&r| r * r <= m).last().unwrap();
    Rational::new(1, f as i64).min(Rational::new(f as i64 + 1, m as i64))
}

/// The quadratic-root lower bound F(m) on L(m), exact.
///
/// For m in (s^2-s+1, s^2+s+1] the bound is
/// (s^2 + (2m-1)s - 1 + sqrt((s^2-s-1)^2 + 4m(s-1)(s^2+s+1-m))) / (2m(s^2+s-1)),
/// where the radical is the root branch that makes F continuous and
/// nonincreasing on [3, oo). For s = 1 that branch simplifies to s^2-s-1,
/// which is negative, so the two order-one values are returned in closed
/// form: F(2) = 1 and F(3) = 2/3.
pub fn new_bound_f(m: usize) -> Result<AlgebraicValue, BoundError> {
    let s = s_of(m)?;
    if s == 1 {
        let r = if m == 2 {
            Rational::one()
        } else {
            Rational::new(2, 3)
        };
        return Ok(AlgebraicValue::from_rational(&r));
    }
    let s = s as i128;
    let m = m as i128;
    let a = s * s + (2 * m - 1) * s - 1;
    let d = (s * s - s - 1) * (s * s - s - 1) + 4 * m * (s - 1) * (s * s + s + 1 - m);
    let b = 2 * m * (s * s + s - 1);
    Ok(AlgebraicValue::new(a, d, b))
}

/// The known exact values of L(m) for m <= 13.
const KNOWN_TABLE: [(usize, i64, i64); 13] = [
    (1, 1, 1),
    (2, 1, 1),
    (3, 2, 3),
    (4, 3, 5),
    (5, 5, 9),
    (6, 1, 2),
    (7, 3, 7),
    (8, 5, 12),
    (9, 2, 5),
    (10, 3, 8),
    (11, 5, 14),
    (12, 1, 3),
    (13, 4, 13),
];

/// The exact value of L(m) when known: from the small table, or from plane
/// existence when m = s^2 + s or m = s^2 + s + 1.
pub fn known_exact(m: usize) -> Option<Rational> {
    if let Some(&(_, n, d)) = KNOWN_TABLE.iter().find(|&&(mm, _, _)| mm == m) {
        return Some(Rational::new(n, d));
    }
    let s = s_of(m).ok()?;
    if plane_existence(s) == PlaneExistence::Exists {
        if m == s * s + s {
            return Some(Rational::new(1, s as i64));
        }
        if m == s * s + s + 1 {
            return Some(Rational::new(s as i64 + 1, m as i64));
        }
    }
    None
}

/// The bounds on L(m) for one machine count.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport {
    pub m: usize,
    pub s: usize,
    pub hkt_bound: Rational,
    pub new_bound: AlgebraicValue,
    pub new_bound_lower: Rational,
    pub known_exact: Option<Rational>,
}

pub fn bound_report(m: usize) -> Result<BoundReport, BoundError> {
    let s = s_of(m)?;
    let new_bound = new_bound_f(m)?;
    Ok(BoundReport {
        m,
        s,
        hkt_bound: hkt_bound(m),
        new_bound_lower: new_bound.lower_approximation(),
        new_bound,
        known_exact: known_exact(m),
    })
}

/// Lower bound on L(D) from nonnegative block weights h covering every
/// point to level at least 1: L(D) >= 1 / sum h(B). The weights are given
/// in the design's canonical block order.
pub fn lower_bound_frac_transversal(
    d: &CoveringDesign,
    h: &[Rational],
) -> Result<Rational, BoundError> {
    if h.len() != d.num_blocks() {
        return Err(BoundError::WeightCount {
            got: h.len(),
            expected: d.num_blocks(),
        });
    }
    if let Some(i) = h.iter().position(|x| x.is_negative()) {
        return Err(BoundError::NegativeBlockWeight(i));
    }
    for (i, p) in d.points().iter().enumerate() {
        let coverage: Rational = d
            .blocks()
            .iter()
            .zip(h)
            .filter(|(block, _)| block.binary_search(&i).is_ok())
            .map(|(_, x)| x.clone())
            .sum();
        if coverage < Rational::one() {
            return Err(BoundError::CoverageViolated(p.clone()));
        }
    }
    Ok(h.iter().cloned().sum::<Rational>().recip())
}

/// Lower bound on L(D) from a subfamily of blocks in which every point
/// occurs at least t times: L(D) >= t / |subfamily|.
pub fn lower_bound_subfamily(
    d: &CoveringDesign,
    block_indices: &[usize],
    t: usize,
) -> Result<Rational, BoundError> {
    if t == 0 {
        return Err(BoundError::TNotPositive);
    }
    for (i, p) in d.points().iter().enumerate() {
        let occurrences = block_indices
            .iter()
            .filter(|&&b| d.blocks()[b].binary_search(&i).is_ok())
            .count();
        if occurrences < t {
            return Err(BoundError::CoverageViolated(p.clone()));
        }
    }
    Ok(Rational::new(t as i64, block_indices.len() as i64))
}

/// Replication and block-size bounds: min r_x / |blocks| <= L(D) <= max |B| / |points|.
/// For a uniform regular design both sides coincide at r/m = k/v, the exact
/// value of L(D).
pub fn bounds_rk(d: &CoveringDesign) -> (Rational, Rational) {
    let stats = d.incidence_stats();
    let r_min = *stats.replication.iter().min().unwrap();
    let k_max = *stats.block_sizes.iter().max().unwrap();
    let lower = Rational::new(r_min as i64, d.num_blocks() as i64);
    let upper = Rational::new(k_max as i64, d.num_points() as i64);
    if stats.is_uniform && stats.is_regular {
        assert_eq!(lower, upper, "rv = km forces r/m = k/v");
    }
    (lower, upper)
}

/// Lower bound on L(D) from the replication sequence: (1 + sigma)/(v + sigma)
/// with sigma = sum over points of 1/(r_x - 1). A point replicated once
/// forces L(D) = 1, in which case 1 is returned.
pub fn lower_bound_rep_seq(d: &CoveringDesign) -> Rational {
    let replication = d.replication();
    if replication.iter().any(|&r| r < 2) {
        return Rational::one();
    }
    let sigma: Rational = replication
        .iter()
        .map(|&r| Rational::new(1, r as i64 - 1))
        .sum();
    let one = Rational::one();
    (&one + &sigma) / (Rational::from_int(d.num_points() as i64) + sigma)
}

/// Sanity inequality on any normalised weighting w: the block count times
/// the maximum block weight is at least the replication-weighted total.
pub fn av_weight_check(d: &CoveringDesign, w: &Weighting) -> bool {
    let ell = d.max_block_weight(w).expect("weighting covers all points");
    let weighted_total: Rational = d
        .replication()
        .iter()
        .zip(d.points())
        .map(|(&r, p)| Rational::from_int(r as i64) * w.get(p).unwrap().clone())
        .sum();
    Rational::from_int(d.num_blocks() as i64) * ell >= weighted_total
}

/// Checks w(x) <= (r_x L(D,w) - 1)/(r_x - 1) for every point and returns
/// the violations as (point, weight, bound). The inequality presumes
/// L(D,w) < 1 and r_x >= 2; points outside that premise are skipped.
pub fn max_weight_check(d: &CoveringDesign, w: &Weighting) -> Vec<(String, Rational, Rational)> {
    let ell = d.max_block_weight(w).expect("weighting covers all points");
    if ell >= Rational::one() {
        return Vec::new();
    }
    let mut violations = Vec::new();
    for (&r, p) in d.replication().iter().zip(d.points()) {
        if r < 2 {
            continue;
        }
        let bound = (Rational::from_int(r as i64) * &ell - Rational::one())
            / Rational::from_int(r as i64 - 1);
        let weight = w.get(p).unwrap().clone();
        if weight > bound {
            violations.push((p.clone(), weight, bound));
        }
    }
    violations
}

/// All design-level bounds next to the exact value.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DesignBoundReport {
    pub exact: Rational,
    pub rk_lower: Rational,
    pub rk_upper: Rational,
    pub rep_seq_lower: Rational,
    pub frac_transversal_lower: Rational,
}

pub fn design_bound_report(d: &CoveringDesign) -> DesignBoundReport {
    let (rk_lower, rk_upper) = bounds_rk(d);
    // h(B) = max over x in B of 1/r_x covers every point to level >= 1.
    let replication = d.replication();
    let h: Vec<Rational> = d
        .blocks()
        .iter()
        .map(|block| {
            block
                .iter()
                .map(|&x| Rational::new(1, replication[x] as i64))
                .max()
                .unwrap()
        })
        .collect();
    DesignBoundReport {
        exact: crate::limit::data_limit(d).limit,
        rk_lower,
        rk_upper,
        rep_seq_lower: lower_bound_rep_seq(d),
        frac_transversal_lower: lower_bound_frac_transversal(d, &h)
            .expect("max-reciprocal-replication weights always cover"),
    }
}
