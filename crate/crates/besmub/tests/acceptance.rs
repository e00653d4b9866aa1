//! End-to-end acceptance gate.  Each test covers one numbered criterion and
//! prints a single pass/fail line (visible with `--nocapture`).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use besmub::clique::{
    constructive_clique, coset_partition, exact_max_clique, extend_clique, fig1_triangles,
    heuristic_clique, subgroup_clique, valid_constructive_params, verify_certificate, OracleCheck,
    SearchBudget,
};
use besmub::graph::{independent_row_sets, row_coloring, CayleyGraph};
use besmub::modp::{enumerate_sl2, Prime, Sl2Matrix};
use besmub::oracle::{
    self, basis_states, lmm_check, lmm_reconstruct, overlap, verify_trace_relations, CMatrix,
};
use besmub::pauli::{partition_check, pauli_matrix, verify_eigenbasis, SymplecticPauli};
use besmub::spectral::{
    complement_spectrum_check, computed_spectrum, expected_spectrum, spectral_bounds,
    BIN_TOLERANCE,
};

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn report(criterion: u32, name: &str, pass: bool) {
    println!("criterion {criterion} ({name}): {}", if pass { "pass" } else { "FAIL" });
    assert!(pass, "criterion {criterion} ({name}) failed");
}

#[test]
fn criterion_01_group_sizes() {
    let expected = [(2u64, 6u64), (3, 24), (5, 120), (7, 336), (11, 1320), (13, 2184)];
    let pass = expected
        .iter()
        .all(|&(p, n)| enumerate_sl2(prime(p)).len() as u64 == n && prime(p).group_order() == n);
    report(1, "group sizes", pass);
}

#[test]
fn criterion_02_complete_mubs_with_oracle() {
    let mut pass = true;
    for &p in &[3u64, 5, 7, 11] {
        let cert = subgroup_clique(prime(p)).unwrap();
        pass &= cert.len() as u64 == p * p - 1;
        let mode = match p {
            3 | 5 => OracleCheck::Exhaustive,
            7 => OracleCheck::Sampled { pairs: 10_000, seed: 1 },
            _ => OracleCheck::Off,
        };
        let rep = verify_certificate(&cert, mode);
        pass &= rep.is_clean();
        if let Some(o) = &rep.oracle {
            pass &= o.max_deviation <= 1e-9;
            if p == 7 {
                pass &= o.checked >= 10_000;
            }
        }
    }
    report(2, "complete BES MUBs", pass);
}

#[test]
fn criterion_03_coset_partition() {
    let mut pass = true;
    for &p in &[3u64, 5, 7, 11] {
        let parts = coset_partition(prime(p)).unwrap();
        pass &= parts.len() as u64 == p;
        pass &= parts.iter().all(|c| c.verified_graph() && c.len() as u64 == p * p - 1);
        let mut all: Vec<Sl2Matrix> = parts.iter().flat_map(|c| c.members().to_vec()).collect();
        all.sort();
        all.dedup();
        pass &= all.len() as u64 == prime(p).group_order();
    }
    report(3, "coset partition", pass);
}

#[test]
fn criterion_04_exact_optimality() {
    let budget = SearchBudget { max_nodes: u64::MAX, max_seconds: 300.0, seed: 1 };
    let mut pass = true;
    for &p in &[2u64, 3, 5] {
        let g = CayleyGraph::build(prime(p));
        let outcome = exact_max_clique(&g, &budget).unwrap();
        pass &= outcome.proven_optimal
            && outcome.certificate.verified_graph()
            && outcome.certificate.len() as u64 == p * p - 1;
    }
    report(4, "exact optimality", pass);
}

#[test]
fn criterion_05_constructive_lower_bound() {
    let mut pass = true;
    for &p in &[3u64, 5, 7, 11, 13, 17] {
        let pr = prime(p);
        let (s, t) = valid_constructive_params(pr)[0];
        let cert = constructive_clique(pr, s, t).unwrap();
        pass &= cert.verified_graph() && cert.len() as u64 == p * (p - 1);
        if p >= 5 {
            let g = CayleyGraph::build(pr);
            let budget = SearchBudget { max_nodes: u64::MAX, max_seconds: 600.0, seed: 1 };
            let outcome = extend_clique(&g, &cert, &budget).unwrap();
            pass &= outcome.certificate.verified_graph();
            if (outcome.certificate.len() as u64) < p * (p - 1) + 2 {
                println!(
                    "warning: extension at p={p} reached {} (< {})",
                    outcome.certificate.len(),
                    p * (p - 1) + 2
                );
            }
        }
    }
    report(5, "constructive lower bound", pass);
}

#[test]
fn criterion_06_heuristic_p13() {
    let g = CayleyGraph::build(prime(13));
    let budget = SearchBudget { max_nodes: u64::MAX, max_seconds: 120.0, seed: 1 };
    let cert = heuristic_clique(&g, &budget).unwrap();
    println!(
        "heuristic p=13: size {} (stretch target 158 {})",
        cert.len(),
        if cert.len() >= 158 { "reached" } else { "not reached" }
    );
    report(6, "heuristic at p=13", cert.verified_graph() && cert.len() >= 156);
}

#[test]
fn criterion_07_spectra() {
    let mut pass = true;
    for &p in &[2u64, 3, 5, 7, 11, 13] {
        let g = CayleyGraph::build(prime(p));
        let computed = computed_spectrum(&g).unwrap();
        pass &= computed.matches(&expected_spectrum(prime(p)), BIN_TOLERANCE);
    }
    for &p in &[3u64, 5, 7] {
        pass &= complement_spectrum_check(prime(p)).unwrap().is_clean();
    }
    report(7, "spectra", pass);
}

#[test]
fn criterion_08_trace_relations() {
    let mut pass = true;
    for &(p, cases) in &[(3u64, 24 * 9usize), (5, 120 * 25)] {
        let rep = verify_trace_relations(prime(p));
        pass &= rep.is_clean() && rep.checked == cases;
    }
    report(8, "trace relations", pass);
}

#[test]
fn criterion_09_stabilizer_classes() {
    let mut pass = true;
    for f in enumerate_sl2(prime(3)) {
        pass &= verify_eigenbasis(&f).unwrap().ok;
    }
    let all5 = enumerate_sl2(prime(5));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let f = all5.choose(&mut rng).unwrap();
        pass &= verify_eigenbasis(f).unwrap().ok;
    }
    for &(p, labels) in &[(3u64, 64usize), (5, 576)] {
        let mut cert = subgroup_clique(prime(p)).unwrap();
        let rep = verify_certificate(&cert, OracleCheck::Off);
        cert.apply_report(&rep);
        let part = partition_check(&cert).unwrap();
        pass &= part.is_clean() && part.distinct_labels == labels && part.exhausts == Some(true);
    }
    report(9, "stabilizer classes", pass);
}

#[test]
fn criterion_10_bounds() {
    let mut pass = true;
    for &p in &[2u64, 3, 5, 7, 11, 13] {
        let pr = prime(p);
        let g = CayleyGraph::build(pr);
        let coloring = row_coloring(&g);
        pass &= coloring.num_colors() as u64 == p * p - 1;
        for i in 0..g.n() {
            for j in (i + 1)..g.n() {
                if g.adjacent(i, j) {
                    pass &= coloring.color(i) != coloring.color(j);
                }
            }
        }
        let bounds = spectral_bounds(pr);
        pass &= (bounds.independence_upper - (p as f64 + 1.0)).abs() < 1e-9;
        pass &= bounds.chromatic_lower == (p * (p - 1)) as f64;
        let sets = independent_row_sets(&g);
        pass &= sets.iter().any(|s| s.len() as u64 >= p);
        for s in &sets {
            pass &= s.len() as u64 <= p + 1;
            for (a, &i) in s.iter().enumerate() {
                for &j in &s[a + 1..] {
                    pass &= !g.adjacent(i, j);
                }
            }
        }
    }
    report(10, "spectral and coloring bounds", pass);
}

/// Hermitean basis of the LMM subspace at `p`: the identity plus, for each
/// inverse pair of weight-two labels, the real and imaginary Hermitean
/// combinations.  The `(p^2 - 1)^2` weight-two labels give `(p^2 - 1)^2`
/// real parameters; with the identity the dimension is `(p^2 - 1)^2 + 1`.
fn lmm_hermitian_basis(p: u64) -> Vec<CMatrix> {
    let pr = prime(p);
    let d = (p * p) as usize;
    let mut basis = vec![CMatrix::identity(d, d)];
    let mut seen: Vec<(u64, u64, u64, u64)> = Vec::new();
    for x1 in 0..p {
        for x2 in 0..p {
            for z1 in 0..p {
                for z2 in 0..p {
                    let op = SymplecticPauli::new(pr, x1, x2, z1, z2, 0);
                    if !op.is_weight_two() {
                        continue;
                    }
                    let inv = ((p - x1) % p, (p - x2) % p, (p - z1) % p, (p - z2) % p);
                    if seen.contains(&inv) {
                        continue;
                    }
                    seen.push(op.label());
                    let m = pauli_matrix(&op);
                    let madj = m.adjoint();
                    basis.push((&m + &madj) * Complex64::new(0.5, 0.0));
                    basis.push((&m - &madj) * Complex64::new(0.0, 0.5));
                }
            }
        }
    }
    basis
}

/// Linear-inversion tomography oracle: least-squares solve for the LMM
/// operator matching the probability table, independent of the closed-form
/// reconstruction.
fn linear_inversion_oracle(
    basis: &[CMatrix],
    states: &[Vec<oracle::CVector>],
    probs: &[Vec<f64>],
) -> CMatrix {
    let d = basis[0].nrows();
    let rows = states.len() * d;
    let mut a = DMatrix::<f64>::zeros(rows, basis.len());
    let mut b = DVector::<f64>::zeros(rows);
    for (k, (basis_states_k, prob_row)) in states.iter().zip(probs).enumerate() {
        for (j, state) in basis_states_k.iter().enumerate() {
            let row = k * d + j;
            b[row] = prob_row[j];
            for (m, h) in basis.iter().enumerate() {
                a[(row, m)] = state.dotc(&(h * state)).re;
            }
        }
    }
    let x = a.svd(true, true).solve(&b, 1e-12).unwrap();
    let mut w = CMatrix::zeros(d, d);
    for (m, h) in basis.iter().enumerate() {
        w += h * Complex64::new(x[m], 0.0);
    }
    w
}

#[test]
fn criterion_11_lmm_reconstruction() {
    let p = prime(3);
    let d = 9usize;
    let mut cert = subgroup_clique(p).unwrap();
    let rep = verify_certificate(&cert, OracleCheck::Off);
    cert.apply_report(&rep);
    let basis = lmm_hermitian_basis(3);
    assert_eq!(basis.len(), 65);
    let states: Vec<Vec<oracle::CVector>> =
        cert.members().iter().map(basis_states).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut pass = true;
    for _ in 0..20 {
        let mut w = CMatrix::zeros(d, d);
        for h in &basis {
            w += h * Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        }
        pass &= lmm_check(&w).unwrap();
        let probs: Vec<Vec<f64>> = states
            .iter()
            .map(|sk| sk.iter().map(|s| s.dotc(&(&w * s)).re).collect())
            .collect();
        let trace = w.trace().re;
        let closed = lmm_reconstruct(p, &cert, &probs, trace).unwrap();
        let inverted = linear_inversion_oracle(&basis, &states, &probs);
        pass &= (&closed - &w).norm() <= 1e-8;
        pass &= (&inverted - &w).norm() <= 1e-8;
        pass &= (&closed - &inverted).norm() <= 1e-8;
    }
    report(11, "LMM reconstruction", pass);
}

#[test]
fn criterion_12_two_qubit_triangles() {
    let triangles = fig1_triangles();
    let mut pass = triangles.len() == 2;
    let mut all: Vec<Sl2Matrix> = Vec::new();
    for t in &triangles {
        pass &= t.len() == 3 && t.verified_graph();
        all.extend_from_slice(t.members());
    }
    all.sort();
    all.dedup();
    pass &= all.len() == 6;
    for t in &triangles {
        let bases: Vec<_> = t.members().iter().map(basis_states).collect();
        for a in 0..3 {
            for b in (a + 1)..3 {
                for sa in &bases[a] {
                    for sb in &bases[b] {
                        let purity_overlap = overlap(sa, sb).unwrap().powi(2);
                        pass &= (purity_overlap - 0.25).abs() <= 1e-12;
                    }
                }
            }
        }
    }
    report(12, "two-qubit triangles", pass);
}
