//! Adjacency spectra of the Cayley graph and its complement.
//!
//! The complement is a known Ramanujan family with spectrum
//! `{p^2-1, p-1, 0, -(p+1)}`; complementation of a regular graph turns that
//! into the four-value spectrum of the MUB graph, from which the
//! chromatic and independence bounds follow.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::graph::CayleyGraph;
use crate::modp::Prime;
use crate::{Error, Result};

/// Eigenvalue binning tolerance.  Distinct theoretical eigenvalues are at
/// least 1 apart, so the binning is unambiguous.
pub const BIN_TOLERANCE: f64 = 1e-6;

/// Largest prime for which the dense eigenproblem is attempted by default.
pub const DEFAULT_EIGEN_MAX_PRIME: u64 = 13;

/// A spectrum as `(value, multiplicity)` pairs, descending in value.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub p: u64,
    pub pairs: Vec<(f64, usize)>,
    pub tolerance: f64,
}

impl SpectrumReport {
    pub fn total_multiplicity(&self) -> usize {
        self.pairs.iter().map(|&(_, m)| m).sum()
    }

    /// Compare against another spectrum: multiplicities exactly, values
    /// within `tol`.
    pub fn matches(&self, other: &SpectrumReport, tol: f64) -> bool {
        self.pairs.len() == other.pairs.len()
            && self
                .pairs
                .iter()
                .zip(&other.pairs)
                .all(|(&(va, ma), &(vb, mb))| ma == mb && (va - vb).abs() <= tol)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }
}

/// Closed-form spectrum of the MUB Cayley graph:
/// `lambda_0 = p(p^2-1) - p^2` (multiplicity 1), `p` (`p(p-1)^2/2`),
/// `-1` (`p^2`), `-p` (`(p-2)(p+1)^2/2`).
///
/// At `p = 2` the first two values coincide and the last multiplicity
/// vanishes; the degenerate bins are merged.
pub fn expected_spectrum(p: Prime) -> SpectrumReport {
    let pf = p.value() as f64;
    let raw = [
        (pf * (pf * pf - 1.0) - pf * pf, 1usize),
        (pf, (p.value() * (p.value() - 1) * (p.value() - 1) / 2) as usize),
        (-1.0, (p.value() * p.value()) as usize),
        (-pf, ((p.value() - 2) * (p.value() + 1) * (p.value() + 1) / 2) as usize),
    ];
    SpectrumReport { p: p.value(), pairs: merge_bins(&raw), tolerance: BIN_TOLERANCE }
}

/// Closed-form spectrum of the complement (the Ramanujan family):
/// `p^2-1` (1), `p-1` (`(p-2)(p+1)^2/2`), `0` (`p^2`), `-(p+1)`
/// (`p(p-1)^2/2`).
pub fn expected_complement_spectrum(p: Prime) -> SpectrumReport {
    let pf = p.value() as f64;
    let raw = [
        (pf * pf - 1.0, 1usize),
        (pf - 1.0, ((p.value() - 2) * (p.value() + 1) * (p.value() + 1) / 2) as usize),
        (0.0, (p.value() * p.value()) as usize),
        (-(pf + 1.0), (p.value() * (p.value() - 1) * (p.value() - 1) / 2) as usize),
    ];
    SpectrumReport { p: p.value(), pairs: merge_bins(&raw), tolerance: BIN_TOLERANCE }
}

fn merge_bins(raw: &[(f64, usize)]) -> Vec<(f64, usize)> {
    let mut pairs: Vec<(f64, usize)> = Vec::new();
    let mut sorted: Vec<(f64, usize)> = raw.iter().copied().filter(|&(_, m)| m > 0).collect();
    sorted.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    for (v, m) in sorted {
        match pairs.last_mut() {
            Some(last) if (last.0 - v).abs() <= BIN_TOLERANCE => last.1 += m,
            _ => pairs.push((v, m)),
        }
    }
    pairs
}

/// Dense symmetric eigendecomposition of the adjacency matrix, binned at
/// [`BIN_TOLERANCE`].
pub fn computed_spectrum(g: &CayleyGraph) -> Result<SpectrumReport> {
    if g.prime().value() > DEFAULT_EIGEN_MAX_PRIME {
        return Err(Error::PrimeTooLarge { p: g.prime().value(), max: DEFAULT_EIGEN_MAX_PRIME });
    }
    let n = g.n();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if g.adjacent(i, j) {
                a[(i, j)] = 1.0;
            }
        }
    }
    let mut values: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut pairs: Vec<(f64, usize)> = Vec::new();
    let mut start = 0.0;
    for v in values {
        match pairs.last_mut() {
            Some(last) if (start - v).abs() <= BIN_TOLERANCE => last.1 += 1,
            _ => {
                pairs.push((v, 1));
                start = v;
            }
        }
    }
    Ok(SpectrumReport { p: g.prime().value(), pairs, tolerance: BIN_TOLERANCE })
}

/// Result of checking the complement spectrum and the regular-complement
/// eigenvalue relation.
#[derive(Debug)]
pub struct ComplementReport {
    pub spectrum_ok: bool,
    pub relation_ok: bool,
    pub computed: SpectrumReport,
    pub expected: SpectrumReport,
}

impl ComplementReport {
    pub fn is_clean(&self) -> bool {
        self.spectrum_ok && self.relation_ok
    }
}

/// Builds the complement graph, verifies its spectrum against the closed
/// form, and checks that complementing the eigenvalues
/// (`n - k - 1`, `-lambda_i - 1`) reproduces the MUB-graph spectrum.
pub fn complement_spectrum_check(p: Prime) -> Result<ComplementReport> {
    let gc = CayleyGraph::build_complement(p);
    let computed = computed_spectrum(&gc)?;
    let expected = expected_complement_spectrum(p);
    let spectrum_ok = computed.matches(&expected, BIN_TOLERANCE);

    // regular-complement relation: spectrum of the complement of a k-regular
    // graph on n vertices with eigenvalues k > l1 > l2 > l3 is
    // {n - k - 1, -l3 - 1, -l2 - 1, -l1 - 1}
    let comp = &expected.pairs;
    let n = p.group_order() as f64;
    let k = comp[0].0;
    let mut mapped = vec![(n - k - 1.0, comp[0].1)];
    for &(v, m) in comp[1..].iter().rev() {
        mapped.push((-v - 1.0, m));
    }
    let mapped = SpectrumReport { p: p.value(), pairs: merge_bins(&mapped), tolerance: BIN_TOLERANCE };
    let relation_ok = mapped.matches(&expected_spectrum(p), BIN_TOLERANCE);

    Ok(ComplementReport { spectrum_ok, relation_ok, computed, expected })
}

/// Spectral bounds on the chromatic and independence numbers.
#[derive(Debug, Serialize)]
pub struct SpectralBounds {
    pub p: u64,
    /// `chi >= 1 - lambda_0 / lambda_3 = p(p-1)`.
    pub chromatic_lower: f64,
    /// The row coloring gives `chi <= p^2 - 1`.
    pub chromatic_upper: u64,
    /// The row sets give `alpha >= p`.
    pub independence_lower: u64,
    /// Hoffman-Lovasz: `alpha <= -n lambda_3 / (lambda_0 - lambda_3) = p + 1`.
    pub independence_upper: f64,
}

/// Evaluates the bound chains from the closed-form eigenvalues.  The nominal
/// `lambda_0 = p(p^2-1) - p^2` and `lambda_3 = -p` are used even at `p = 2`,
/// where their multiplicities degenerate.
pub fn spectral_bounds(p: Prime) -> SpectralBounds {
    let pf = p.value() as f64;
    let n = p.group_order() as f64;
    let lambda0 = pf * (pf * pf - 1.0) - pf * pf;
    let lambda_min = -pf;
    SpectralBounds {
        p: p.value(),
        chromatic_lower: 1.0 - lambda0 / lambda_min,
        chromatic_upper: p.value() * p.value() - 1,
        independence_lower: p.value(),
        independence_upper: -n * lambda_min / (lambda0 - lambda_min),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn expected_spectrum_p3() {
        let spec = expected_spectrum(prime(3));
        assert_eq!(spec.pairs, vec![(15.0, 1), (3.0, 6), (-1.0, 9), (-3.0, 8)]);
        assert_eq!(spec.total_multiplicity(), 24);
    }

    #[test]
    fn expected_spectrum_p2_merges_degenerate_bins() {
        let spec = expected_spectrum(prime(2));
        assert_eq!(spec.pairs, vec![(2.0, 2), (-1.0, 4)]);
        assert_eq!(spec.total_multiplicity(), 6);
    }

    #[test]
    fn multiplicities_sum_to_group_order() {
        for &p in &[2u64, 3, 5, 7, 11, 13] {
            let pr = Prime::new(p).unwrap();
            assert_eq!(expected_spectrum(pr).total_multiplicity() as u64, pr.group_order());
            assert_eq!(
                expected_complement_spectrum(pr).total_multiplicity() as u64,
                pr.group_order()
            );
        }
    }

    #[test]
    fn computed_matches_expected_p3() {
        let g = CayleyGraph::build(prime(3));
        let computed = computed_spectrum(&g).unwrap();
        assert!(computed.matches(&expected_spectrum(prime(3)), BIN_TOLERANCE));
    }

    #[test]
    fn trace_and_edge_identities() {
        let g = CayleyGraph::build(prime(3));
        let spec = computed_spectrum(&g).unwrap();
        let trace: f64 = spec.pairs.iter().map(|&(v, m)| v * m as f64).sum();
        assert!(trace.abs() < spec.total_multiplicity() as f64 * BIN_TOLERANCE);
        let square_sum: f64 = spec.pairs.iter().map(|&(v, m)| v * v * m as f64).sum();
        let expect = (g.n() * g.degree(0)) as f64;
        assert!((square_sum - expect).abs() < 1e-4);
    }

    #[test]
    fn complement_check_p3() {
        let report = complement_spectrum_check(prime(3)).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.expected.pairs, vec![(8.0, 1), (2.0, 8), (0.0, 9), (-4.0, 6)]);
    }

    #[test]
    fn walk_regularity_small_primes() {
        // diagonal entries of A^2, A^3, A^4 constant across vertices
        for &p in &[2u64, 3, 5] {
            let g = CayleyGraph::build(prime(p));
            let n = g.n();
            let mut a = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    if g.adjacent(i, j) {
                        a[(i, j)] = 1.0;
                    }
                }
            }
            let mut power = a.clone();
            for _ in 0..3 {
                power = &power * &a;
                let d0 = power[(0, 0)];
                for i in 1..n {
                    assert!((power[(i, i)] - d0).abs() < 1e-6, "p={p}");
                }
            }
        }
    }

    #[test]
    fn bounds_instantiate() {
        let b = spectral_bounds(prime(5));
        assert_eq!(b.chromatic_lower, 20.0);
        assert_eq!(b.chromatic_upper, 24);
        assert_eq!(b.independence_lower, 5);
        assert!((b.independence_upper - 6.0).abs() < 1e-9);

        let b3 = spectral_bounds(prime(3));
        assert!((b3.independence_upper - 4.0).abs() < 1e-9);
    }

    #[test]
    fn eigen_budget_enforced() {
        // constructing a graph beyond the eigensolver budget is already
        // heavy, so check the guard directly via the prime cap
        let g = CayleyGraph::build(Prime::with_cap(17, 101).unwrap());
        assert!(matches!(computed_spectrum(&g), Err(Error::PrimeTooLarge { .. })));
    }
}
