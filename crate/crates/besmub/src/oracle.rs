//! Independent numerical ground truth: explicit Clifford unitaries, their
//! Jamiolkowski states, trace relations, and reconstruction of local
//! maximally mixed operators from MUB statistics.
//!
//! For odd `p` the unitary `C_(F|u) = D_u U_F` is built from Appleby's
//! closed form; `p = 2` ships a hardcoded table of the six two-qubit
//! Cliffords indexed by `SL(2,Z_2)`.  All operator identities are asserted
//! modulo a global phase.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::modp::{inv_mod, Prime, Sl2Matrix};
use crate::{Error, Result};

/// Construction tolerance (unitarity, normalization).
pub const TOL_CONSTRUCTION: f64 = 1e-10;
/// Verification tolerance (overlaps, trace relations).
pub const TOL_VERIFY: f64 = 1e-9;
/// Reconstruction tolerance (Frobenius error of LMM recovery).
pub const TOL_RECONSTRUCT: f64 = 1e-8;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// A Clifford unitary index `(F | u)` with `F` in `SL(2,Z_p)`, `u` in `Z_p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CliffordElement {
    pub f: Sl2Matrix,
    pub u: (u64, u64),
}

impl CliffordElement {
    pub fn new(f: Sl2Matrix, u: (u64, u64)) -> Self {
        let p = f.modulus();
        CliffordElement { f, u: (u.0 % p, u.1 % p) }
    }
}

/// `omega = e^(2 pi i / p)` raised to `e`.
pub fn omega_pow(p: u64, e: i64) -> Complex64 {
    let e = e.rem_euclid(p as i64);
    Complex64::from_polar(1.0, 2.0 * PI * e as f64 / p as f64)
}

/// `tau = e^((p+1) pi i / p)` raised to `e`, exponent reduced mod 2p before
/// exponentiation to keep angles small.
pub fn tau_pow(p: u64, e: i64) -> Complex64 {
    let e = e.rem_euclid(2 * p as i64);
    Complex64::from_polar(1.0, (p + 1) as f64 * PI * e as f64 / p as f64)
}

/// Displacement operator `D_u = tau^(u1 u2) X^(u1) Z^(u2)` acting on `C^p`.
pub fn build_displacement(p: Prime, u: (u64, u64)) -> CMatrix {
    let m = p.value();
    let (u1, u2) = (u.0 % m, u.1 % m);
    let phase = tau_pow(m, (u1 * u2) as i64);
    let mut d = CMatrix::zeros(m as usize, m as usize);
    for k in 0..m {
        // X^u1 Z^u2 |k> = omega^(k u2) |k + u1>
        let row = ((k + u1) % m) as usize;
        d[(row, k as usize)] = phase * omega_pow(m, (k * u2) as i64);
    }
    d
}

/// Appleby's `U_F` for odd `p`.
fn build_uf(f: &Sl2Matrix) -> CMatrix {
    let p = f.modulus();
    let n = p as usize;
    let mut u = CMatrix::zeros(n, n);
    if f.beta() != 0 {
        let beta_inv = inv_mod(f.beta(), p);
        let norm = Complex64::new(1.0 / (p as f64).sqrt(), 0.0);
        for j in 0..p {
            for k in 0..p {
                // tau^(beta^-1 (alpha k^2 - 2 j k + delta j^2))
                let quad = (f.alpha() * k * k + f.delta() * j * j + 2 * p * p
                    - 2 * j * k)
                    % p;
                let e = (beta_inv * quad) as i64;
                u[(j as usize, k as usize)] = norm * tau_pow(p, e);
            }
        }
    } else {
        for k in 0..p {
            let e = (f.alpha() * f.gamma() % p * (k * k % p)) as i64;
            u[((f.alpha() * k % p) as usize, k as usize)] = tau_pow(p, e);
        }
    }
    u
}

/// The Clifford unitary `C_(F|u)`.
///
/// Odd `p` uses the closed form; `p = 2` dispatches to the hardcoded
/// two-qubit table composed with `D_u`.
pub fn build_clifford(c: &CliffordElement) -> CMatrix {
    let p = c.f.modulus();
    if p == 2 {
        return build_displacement(Prime::new(2).unwrap(), c.u) * clifford_p2(&c.f);
    }
    let prime = Prime::with_cap(p, u64::MAX).expect("modulus of an Sl2Matrix is prime");
    build_displacement(prime, c.u) * build_uf(&c.f)
}

/// The six two-qubit Cliffords `C_(F|0)` for `p = 2`, as words in H and S.
pub fn clifford_p2(f: &Sl2Matrix) -> CMatrix {
    assert_eq!(f.modulus(), 2, "clifford_p2 is the p = 2 table");
    let s2 = 1.0 / 2f64.sqrt();
    let h = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(s2, 0.0),
            Complex64::new(s2, 0.0),
            Complex64::new(s2, 0.0),
            Complex64::new(-s2, 0.0),
        ],
    );
    let s = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
        ],
    );
    // symplectic action: H swaps X and Z, S maps X to XZ
    match f.entries() {
        [[1, 0], [0, 1]] => CMatrix::identity(2, 2),
        [[0, 1], [1, 0]] => h,
        [[1, 0], [1, 1]] => s,
        [[1, 1], [1, 0]] => &h * &s,
        [[0, 1], [1, 1]] => &s * &h,
        [[1, 1], [0, 1]] => &h * &s * &h,
        _ => unreachable!("all six elements of SL(2,Z_2) are covered"),
    }
}

/// Report from checking the closed-form trace relations against numerics.
#[derive(Debug)]
pub struct TraceRelationReport {
    pub checked: usize,
    pub mismatches: Vec<TraceMismatch>,
}

#[derive(Debug)]
pub struct TraceMismatch {
    pub f: Sl2Matrix,
    pub u: (u64, u64),
    pub expected: f64,
    pub actual: f64,
}

impl TraceRelationReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Case table for `|Tr(C_(F|u))|` in terms of `F` and `u` (odd `p`).
pub fn expected_abs_trace(f: &Sl2Matrix, u: (u64, u64)) -> f64 {
    let p = f.modulus();
    if f.trace() != 2 % p {
        return 1.0;
    }
    if f.beta() == 0 {
        if f.gamma() != 0 {
            if u.0 % p == 0 {
                (p as f64).sqrt()
            } else {
                0.0
            }
        } else if u.0 % p == 0 && u.1 % p == 0 {
            p as f64
        } else {
            0.0
        }
    } else {
        // nonzero only on the line u2 = beta^-1 (1 - alpha) u1
        let line = inv_mod(f.beta(), p) * ((1 + p - f.alpha()) % p) % p * u.0 % p;
        if u.1 % p == line {
            (p as f64).sqrt()
        } else {
            0.0
        }
    }
}

/// Exhaustively compares `|Tr(C_(F|u))|` with the case table over all
/// `(F, u)` for odd `p`.
pub fn verify_trace_relations(p: Prime) -> TraceRelationReport {
    assert!(p.is_odd(), "trace relations are stated for odd p");
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for f in crate::modp::enumerate_sl2(p) {
        for u1 in 0..p.value() {
            for u2 in 0..p.value() {
                let c = build_clifford(&CliffordElement::new(f, (u1, u2)));
                let actual = c.trace().norm();
                let expected = expected_abs_trace(&f, (u1, u2));
                checked += 1;
                if (actual - expected).abs() > TOL_VERIFY {
                    mismatches.push(TraceMismatch { f, u: (u1, u2), expected, actual });
                }
            }
        }
    }
    TraceRelationReport { checked, mismatches }
}

/// Jamiolkowski state `(I (x) C) sum_j |jj> / sqrt(p)`, dimension `p^2`.
pub fn jam_state(c: &CliffordElement) -> CVector {
    let p = c.f.modulus() as usize;
    let cm = build_clifford(c);
    let norm = 1.0 / (p as f64).sqrt();
    let mut v = CVector::zeros(p * p);
    for j in 0..p {
        for k in 0..p {
            v[j * p + k] = cm[(k, j)] * norm;
        }
    }
    v
}

/// The full basis attached to `F`: states `|J_u^F>` for `u = (u1, u2)` at
/// index `u1 * p + u2`.
pub fn basis_states(f: &Sl2Matrix) -> Vec<CVector> {
    let p = f.modulus();
    let mut out = Vec::with_capacity((p * p) as usize);
    for u1 in 0..p {
        for u2 in 0..p {
            out.push(jam_state(&CliffordElement::new(*f, (u1, u2))));
        }
    }
    out
}

/// `|<a|b>|`.
pub fn overlap(a: &CVector, b: &CVector) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(a.len(), b.len()));
    }
    Ok(a.dotc(b).norm())
}

/// Partial trace over the first factor: result `[j, k] = sum_i W[ip+j, ip+k]`.
pub fn partial_trace_1(w: &CMatrix, p: usize) -> CMatrix {
    let mut out = CMatrix::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            for k in 0..p {
                out[(j, k)] += w[(i * p + j, i * p + k)];
            }
        }
    }
    out
}

/// Partial trace over the second factor: result `[i, l] = sum_j W[ip+j, lp+j]`.
pub fn partial_trace_2(w: &CMatrix, p: usize) -> CMatrix {
    let mut out = CMatrix::zeros(p, p);
    for i in 0..p {
        for l in 0..p {
            for j in 0..p {
                out[(i, l)] += w[(i * p + j, l * p + j)];
            }
        }
    }
    out
}

fn max_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn is_proportional_to_identity(m: &CMatrix, tol: f64) -> bool {
    let p = m.nrows();
    let scale = m.trace() / Complex64::new(p as f64, 0.0);
    let mut dev: f64 = 0.0;
    for i in 0..p {
        for j in 0..p {
            let expect = if i == j { scale } else { Complex64::new(0.0, 0.0) };
            dev = dev.max((m[(i, j)] - expect).norm());
        }
    }
    dev <= tol
}

/// True iff both partial traces of the Hermitean operator `W` are
/// proportional to the identity.
pub fn lmm_check(w: &CMatrix) -> Result<bool> {
    let d = w.nrows();
    let p = (d as f64).sqrt().round() as usize;
    if p * p != d || w.ncols() != d {
        return Err(Error::DimensionMismatch(w.nrows(), w.ncols()));
    }
    if max_norm(&(w - w.adjoint())) > TOL_CONSTRUCTION {
        return Err(Error::NotHermitean);
    }
    Ok(is_proportional_to_identity(&partial_trace_1(w, p), TOL_VERIFY)
        && is_proportional_to_identity(&partial_trace_2(w, p), TOL_VERIFY))
}

/// Recovers an LMM operator from its outcome probabilities across the
/// `p^2 - 1` bases of a verified certificate:
///
/// `W = sum_{k,j} probs[k][j] Pi_j^k  -  (p^2 - 2) (trace / p^2) I`.
///
/// The subtraction constant follows from the fact that the weight-two Pauli
/// components of `W` appear once across the disjoint classes while the
/// identity component appears once per basis.
pub fn lmm_reconstruct(
    p: Prime,
    cert: &crate::clique::MubCertificate,
    probs: &[Vec<f64>],
    trace: f64,
) -> Result<CMatrix> {
    if !cert.verified_graph() {
        return Err(Error::UnverifiedCertificate);
    }
    let d = (p.value() * p.value()) as usize;
    let n_bases = d - 1;
    if cert.members().len() != n_bases {
        return Err(Error::InvalidParameters(format!(
            "certificate has {} members, need p^2 - 1 = {}",
            cert.members().len(),
            n_bases
        )));
    }
    if probs.len() != n_bases {
        return Err(Error::InconsistentProbabilities(format!(
            "{} probability rows for {} bases",
            probs.len(),
            n_bases
        )));
    }
    for (k, row) in probs.iter().enumerate() {
        if row.len() != d {
            return Err(Error::InconsistentProbabilities(format!(
                "row {k} has {} entries, need {d}",
                row.len()
            )));
        }
        let sum: f64 = row.iter().sum();
        if (sum - trace).abs() > 1e-6 * trace.abs().max(1.0) {
            return Err(Error::InconsistentProbabilities(format!(
                "row {k} sums to {sum}, expected trace {trace}"
            )));
        }
    }
    let mut w = CMatrix::zeros(d, d);
    for (f, row) in cert.members().iter().zip(probs) {
        for (state, &prob) in basis_states(f).iter().zip(row) {
            let c = Complex64::new(prob, 0.0);
            // rank-1 update W += prob |J><J|
            for a in 0..d {
                for b in 0..d {
                    w[(a, b)] += c * state[a] * state[b].conj();
                }
            }
        }
    }
    let shift = Complex64::new((d as f64 - 2.0) * trace / d as f64, 0.0);
    for a in 0..d {
        w[(a, a)] -= shift;
    }
    Ok(w)
}
