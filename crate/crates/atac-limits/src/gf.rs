//! Finite field arithmetic for the design constructions.
//!
//! Fields GF(p^k) are built from the lexicographically smallest monic
//! irreducible modulus polynomial, so element labelling is reproducible
//! byte-for-byte. Elements are encoded as integers in `0..q` whose base-p
//! digits are the polynomial coefficients (constant term first). Addition
//! and multiplication tables are precomputed; the scale here is desk-sized.

use std::collections::HashSet;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("field order {0} too large for table construction")]
    TooLarge(usize),
}

/// Returns `Some((p, k))` if `n = p^k` for a prime `p` and `k >= 1`.
pub fn prime_power(n: usize) -> Option<(usize, u32)> {
    if n < 2 {
        return None;
    }
    let mut n = n;
    let mut p = 0usize;
    let mut k = 0u32;
    let mut d = 2usize;
    while d * d <= n {
        if n % d == 0 {
            p = d;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            break;
        }
        d += 1;
    }
    if p == 0 {
        // n itself is prime.
        return Some((n, 1));
    }
    if n == 1 {
        Some((p, k))
    } else {
        None
    }
}

pub fn is_prime(n: usize) -> bool {
    matches!(prime_power(n), Some((p, 1)) if p == n)
}

const MAX_ORDER: usize = 256;

/// The field GF(p^k) with tabulated arithmetic.
#[derive(Debug)]
pub struct FiniteField {
    p: usize,
    k: u32,
    q: usize,
    /// Modulus coefficients, constant term first, including the leading 1.
    modulus: Vec<usize>,
    add: Vec<usize>,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl FiniteField {
    pub fn new(q: usize) -> Result<FiniteField, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q));
        }
        let modulus = lowest_irreducible(p, k);
        let mut field = FiniteField {
            p,
            k,
            q,
            modulus,
            add: vec![0; q * q],
            mul: vec![0; q * q],
            inv: vec![0; q],
        };
        for a in 0..q {
            for b in 0..q {
                field.add[a * q + b] = field.add_raw(a, b);
                field.mul[a * q + b] = field.mul_raw(a, b);
            }
        }
        for a in 1..q {
            let inv = (1..q)
                .find(|&b| field.mul[a * q + b] == 1)
                .expect("every nonzero element has an inverse");
            field.inv[a] = inv;
        }
        field.verify();
        Ok(field)
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &[usize] {
        &self.modulus
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).unwrap()
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        assert!(a != 0, "zero has no inverse");
        self.inv[a]
    }

    pub fn div(&self, a: usize, b: usize) -> usize {
        self.mul(a, self.inv(b))
    }

    fn digits(&self, a: usize) -> Vec<usize> {
        let mut a = a;
        let mut d = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    fn from_digits(&self, d: &[usize]) -> usize {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_raw(&self, a: usize, b: usize) -> usize {
        let da = self.digits(a);
        let db = self.digits(b);
        let sum: Vec<usize> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        self.from_digits(&sum)
    }

    fn mul_raw(&self, a: usize, b: usize) -> usize {
        let da = self.digits(a);
        let db = self.digits(b);
        let k = self.k as usize;
        let mut prod = vec![0usize; 2 * k];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // Reduce modulo the modulus polynomial.
        for d in (k..2 * k).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &mc) in self.modulus.iter().take(k).enumerate() {
                let pos = d - k + i;
                prod[pos] = (prod[pos] + c * (self.p - mc % self.p)) % self.p;
            }
        }
        self.from_digits(&prod[..k])
    }

    /// Sampled associativity and distributivity checks plus the exhaustive
    /// inverse table built in the constructor.
    fn verify(&self) {
        let q = self.q;
        let step = (q / 8).max(1);
        let sample: Vec<usize> = (0..q).step_by(step).chain([q - 1]).collect();
        for &a in &sample {
            for &b in &sample {
                for &c in &sample {
                    assert_eq!(
                        self.mul(self.mul(a, b), c),
                        self.mul(a, self.mul(b, c)),
                        "associativity fails in GF({q})"
                    );
                    assert_eq!(
                        self.mul(a, self.add(b, c)),
                        self.add(self.mul(a, b), self.mul(a, c)),
                        "distributivity fails in GF({q})"
                    );
                }
            }
        }
        if q <= 81 {
            let inverses: HashSet<usize> = (1..q).map(|a| self.inv[a]).collect();
            assert_eq!(inverses.len(), q - 1, "inverse map not a bijection");
        }
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree `k`
/// over GF(p), constant term first.
fn lowest_irreducible(p: usize, k: u32) -> Vec<usize> {
    let k = k as usize;
    if k == 1 {
        return vec![0, 1];
    }
    let count = p.pow(k as u32);
    for code in 0..count {
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut c = code;
        for _ in 0..k {
            coeffs.push(c % p);
            c /= p;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists");
}

/// Trial division by all monic polynomials of degree up to half the degree.
fn is_irreducible(poly: &[usize], p: usize) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                divisor.push(c % p);
                c /= p;
            }
            divisor.push(1);
            if divides(&divisor, poly, p) {
                return false;
            }
        }
    }
    true
}

fn divides(divisor: &[usize], poly: &[usize], p: usize) -> bool {
    let mut rem: Vec<usize> = poly.to_vec();
    let dd = divisor.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for (i, &c) in divisor.iter().enumerate() {
                rem[shift + i] = (rem[shift + i] + (p - c % p) * lead) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn gf4_structure() {
        let f = FiniteField::new(4).unwrap();
        // x^2 + x + 1 is the only irreducible quadratic over GF(2).
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.mul(2, 2), 3); // x * x = x + 1
        assert_eq!(f.mul(2, 3), 1); // x * (x+1) = 1
    }

    #[test]
    fn gf_prime_is_mod_arithmetic() {
        let f = FiniteField::new(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.mul(5, 4), 6);
        assert_eq!(f.inv(3), 5);
    }

    #[test]
    fn all_small_fields_construct() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
            let f = FiniteField::new(q).unwrap();
            assert_eq!(f.order(), q);
        }
        assert_eq!(FiniteField::new(6).unwrap_err(), FieldError::NotPrimePower(6));
    }
}
