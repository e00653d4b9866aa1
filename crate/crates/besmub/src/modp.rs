//! Exact arithmetic over `Z_p` and the group `SL(2,Z_p)`.
//!
//! Residues are stored canonically in `{0, .., p-1}`; a signed rendering is
//! available for display only.  All values are immutable after construction.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default cap on `p` for full-group enumeration.  `|SL(2,Z_p)| = p(p^2-1)`
/// grows cubically, so enumeration and adjacency matrices are bounded here.
pub const DEFAULT_MAX_PRIME: u64 = 101;

/// A deterministically verified prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    /// Checks primality by trial division and enforces the default cap.
    pub fn new(p: u64) -> Result<Self> {
        Self::with_cap(p, DEFAULT_MAX_PRIME)
    }

    /// Same as [`Prime::new`] with a caller-chosen cap.
    pub fn with_cap(p: u64, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > cap {
            return Err(Error::PrimeTooLarge { p, max: cap });
        }
        Ok(Prime(p))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// `|SL(2,Z_p)| = p(p^2 - 1)`.
    pub fn group_order(self) -> u64 {
        self.0 * (self.0 * self.0 - 1)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `b^e mod p`.
pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse of a nonzero residue, by Fermat.
pub fn inv_mod(x: u64, p: u64) -> u64 {
    debug_assert!(x % p != 0);
    pow_mod(x, p - 2, p)
}

/// Legendre symbol of `x` mod `p`: 1 for a nonzero square, -1 for a
/// non-square, 0 for `x = 0`.
pub fn legendre(x: u64, p: Prime) -> i32 {
    let p = p.value();
    let x = x % p;
    if x == 0 {
        return 0;
    }
    if pow_mod(x, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// An element of `SL(2,Z_p)` with entries `[[alpha, beta], [gamma, delta]]`.
///
/// Field order matters: the derived `Ord` is lexicographic on
/// `(alpha, beta, gamma, delta)`, the vertex order used for the Cayley graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sl2Matrix {
    alpha: u64,
    beta: u64,
    gamma: u64,
    delta: u64,
    p: u64,
}

impl Sl2Matrix {
    pub fn new(p: Prime, alpha: u64, beta: u64, gamma: u64, delta: u64) -> Result<Self> {
        let m = p.value();
        let (alpha, beta, gamma, delta) = (alpha % m, beta % m, gamma % m, delta % m);
        let det = (alpha * delta % m + m - beta * gamma % m) % m;
        if det != 1 {
            return Err(Error::NotUnimodular { det, p: m });
        }
        Ok(Sl2Matrix { alpha, beta, gamma, delta, p: m })
    }

    /// Construct from entries that may be given as signed representatives.
    pub fn from_signed(p: Prime, entries: [[i64; 2]; 2]) -> Result<Self> {
        let m = p.value() as i64;
        let r = |x: i64| x.rem_euclid(m) as u64;
        Self::new(p, r(entries[0][0]), r(entries[0][1]), r(entries[1][0]), r(entries[1][1]))
    }

    pub fn identity(p: Prime) -> Self {
        Sl2Matrix { alpha: 1, beta: 0, gamma: 0, delta: 1, p: p.value() }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn entries(&self) -> [[u64; 2]; 2] {
        [[self.alpha, self.beta], [self.gamma, self.delta]]
    }

    /// The first row `(alpha, beta)`; the key of the row coloring.
    pub fn row(&self) -> (u64, u64) {
        (self.alpha, self.beta)
    }

    pub fn trace(&self) -> u64 {
        (self.alpha + self.delta) % self.p
    }

    /// Matrix product mod p.  Mismatched moduli are a usage error.
    pub fn mul(&self, rhs: &Sl2Matrix) -> Sl2Matrix {
        assert_eq!(self.p, rhs.p, "mismatched moduli in SL(2,Z_p) product");
        let p = self.p;
        Sl2Matrix {
            alpha: (self.alpha * rhs.alpha + self.beta * rhs.gamma) % p,
            beta: (self.alpha * rhs.beta + self.beta * rhs.delta) % p,
            gamma: (self.gamma * rhs.alpha + self.delta * rhs.gamma) % p,
            delta: (self.gamma * rhs.beta + self.delta * rhs.delta) % p,
            p,
        }
    }

    /// `A^-1 = [[delta, -beta], [-gamma, alpha]]` for unit determinant.
    pub fn inverse(&self) -> Sl2Matrix {
        let p = self.p;
        Sl2Matrix {
            alpha: self.delta,
            beta: (p - self.beta) % p,
            gamma: (p - self.gamma) % p,
            delta: self.alpha,
            p,
        }
    }

    /// `Tr(self^-1 * other)` without forming the product.
    ///
    /// This is the adjacency criterion of the Cayley graph: two vertices are
    /// adjacent iff this value differs from 2.
    pub fn trace_of_inv_mul(&self, other: &Sl2Matrix) -> u64 {
        assert_eq!(self.p, other.p, "mismatched moduli in SL(2,Z_p) trace");
        let p = self.p;
        let pos = (self.delta * other.alpha + self.alpha * other.delta) % p;
        let neg = (self.beta * other.gamma + self.gamma * other.beta) % p;
        (pos + p - neg) % p
    }

    /// Render with signed representatives in `(-p/2, p/2]`, as in the paper's
    /// figures.  Storage stays canonical.
    pub fn display_signed(&self) -> String {
        let p = self.p as i64;
        let s = |x: u64| {
            let x = x as i64;
            if x > p / 2 {
                x - p
            } else {
                x
            }
        };
        format!(
            "[[{},{}],[{},{}]]",
            s(self.alpha),
            s(self.beta),
            s(self.gamma),
            s(self.delta)
        )
    }
}

impl fmt::Display for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]]",
            self.alpha, self.beta, self.gamma, self.delta
        )
    }
}

impl fmt::Debug for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]] mod {}",
            self.alpha, self.beta, self.gamma, self.delta, self.p
        )
    }
}

/// All of `SL(2,Z_p)` in lexicographic order on `(alpha, beta, gamma, delta)`.
///
/// For each admissible first row there are exactly `p` completions, giving
/// `p(p^2 - 1)` elements in total.
pub fn enumerate_sl2(p: Prime) -> Vec<Sl2Matrix> {
    let m = p.value();
    let mut out = Vec::with_capacity(p.group_order() as usize);
    for alpha in 0..m {
        for beta in 0..m {
            if alpha == 0 && beta == 0 {
                continue;
            }
            if alpha != 0 {
                let alpha_inv = inv_mod(alpha, m);
                for gamma in 0..m {
                    let delta = alpha_inv * (1 + beta * gamma) % m;
                    out.push(Sl2Matrix { alpha, beta, gamma, delta, p: m });
                }
            } else {
                // alpha = 0 forces gamma = -beta^-1; delta is free.
                let gamma = (m - inv_mod(beta, m)) % m;
                for delta in 0..m {
                    out.push(Sl2Matrix { alpha, beta, gamma, delta, p: m });
                }
            }
        }
    }
    debug_assert_eq!(out.len() as u64, p.group_order());
    out
}

/// Number of elements of `SL(2,Z_p)` with each trace value, by exhaustive
/// enumeration.
///
/// For odd `p` the counts follow the Legendre symbol of `t^2 - 4`:
/// `p(p+1)` when it is 1, `p(p-1)` when it is -1, and `p^2` when `t = ±2`.
pub fn trace_class_counts(p: Prime) -> BTreeMap<u64, u64> {
    let mut counts = BTreeMap::new();
    for f in enumerate_sl2(p) {
        *counts.entry(f.trace()).or_insert(0) += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn primality_is_enforced() {
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(0).is_err());
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(97).is_ok());
        assert!(matches!(Prime::new(103), Err(Error::PrimeTooLarge { .. })));
        assert!(Prime::with_cap(103, 200).is_ok());
    }

    #[test]
    fn legendre_cases() {
        assert_eq!(legendre(0, prime(3)), 0);
        assert_eq!(legendre(4, prime(5)), 1);
        // squares mod 5 are {1, 4}; 2 is absent
        assert_eq!(legendre(2, prime(5)), -1);
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        for &p in &[3u64, 5, 7, 11, 13] {
            let pr = prime(p);
            let squares: std::collections::HashSet<u64> = (1..p).map(|x| x * x % p).collect();
            for x in 0..p {
                let expect = if x == 0 {
                    0
                } else if squares.contains(&x) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(x, pr), expect, "x={x} p={p}");
            }
        }
    }

    #[test]
    fn legendre_is_multiplicative() {
        for &p in &[3u64, 5, 7, 11, 13] {
            let pr = prime(p);
            for x in 1..p {
                for y in 1..p {
                    assert_eq!(legendre(x * y % p, pr), legendre(x, pr) * legendre(y, pr));
                }
            }
        }
    }

    #[test]
    fn product_and_inverse() {
        let p = prime(5);
        let i = Sl2Matrix::identity(p);
        assert_eq!(i.mul(&i), i);
        let a = Sl2Matrix::new(p, 1, 1, 0, 1).unwrap();
        let b = Sl2Matrix::new(p, 1, 0, 1, 1).unwrap();
        assert_eq!(a.mul(&b), Sl2Matrix::new(p, 2, 1, 1, 1).unwrap());
        assert_eq!(a.mul(&a.inverse()), i);

        let p3 = prime(3);
        let c = Sl2Matrix::new(p3, 1, 1, 1, 2).unwrap();
        assert_eq!(c.inverse(), Sl2Matrix::new(p3, 2, 2, 2, 1).unwrap());

        let rot = Sl2Matrix::new(p, 0, 1, 4, 0).unwrap();
        assert_eq!(rot.inverse(), Sl2Matrix::new(p, 0, 4, 1, 0).unwrap());
        assert_eq!(Sl2Matrix::identity(p).inverse(), Sl2Matrix::identity(p));
    }

    #[test]
    fn non_unimodular_rejected() {
        assert!(Sl2Matrix::new(prime(5), 2, 0, 0, 2).is_err());
    }

    #[test]
    fn enumeration_order_and_size() {
        assert_eq!(enumerate_sl2(prime(2)).len(), 6);
        let g3 = enumerate_sl2(prime(3));
        assert_eq!(g3.len(), 24);
        assert_eq!(g3[0], Sl2Matrix::new(prime(3), 0, 1, 2, 0).unwrap());
        let mut sorted = g3.clone();
        sorted.sort();
        assert_eq!(g3, sorted, "enumeration is lexicographic");
        sorted.dedup();
        assert_eq!(sorted.len(), 24, "no duplicates");
    }

    #[test]
    fn enumeration_is_unimodular() {
        for &p in &[2u64, 3, 5, 7] {
            let pr = prime(p);
            for f in enumerate_sl2(pr) {
                let [[a, b], [c, d]] = f.entries();
                assert_eq!((a * d % p + p - b * c % p) % p, 1);
            }
        }
    }

    #[test]
    fn inverse_preserves_trace() {
        for &p in &[3u64, 5, 7] {
            for f in enumerate_sl2(prime(p)) {
                assert_eq!(f.trace(), f.inverse().trace());
            }
        }
    }

    #[test]
    fn trace_of_inv_mul_matches_product() {
        for f in enumerate_sl2(prime(5)) {
            for k in enumerate_sl2(prime(5)).iter().step_by(7) {
                assert_eq!(f.trace_of_inv_mul(k), f.inverse().mul(k).trace());
            }
        }
    }

    #[test]
    fn trace_class_counts_p5() {
        let counts = trace_class_counts(prime(5));
        let expect: BTreeMap<u64, u64> =
            [(0, 30), (1, 20), (2, 25), (3, 25), (4, 20)].into_iter().collect();
        assert_eq!(counts, expect);
    }

    #[test]
    fn trace_class_counts_follow_legendre_formula() {
        for &p in &[3u64, 5, 7, 11] {
            let pr = prime(p);
            let counts = trace_class_counts(pr);
            assert_eq!(counts.values().sum::<u64>(), pr.group_order());
            for t in 0..p {
                let disc = (t * t + 4 * p - 4) % p;
                let expect = match legendre(disc, pr) {
                    1 => p * (p + 1),
                    -1 => p * (p - 1),
                    _ => p * p,
                };
                assert_eq!(counts.get(&t).copied().unwrap_or(0), expect, "p={p} t={t}");
            }
        }
    }

    #[test]
    fn signed_display() {
        let p = prime(3);
        let f = Sl2Matrix::new(p, 0, 1, 2, 0).unwrap();
        assert_eq!(f.display_signed(), "[[0,1],[-1,0]]");
    }
}
