//! Weight-two Pauli observables and the stabilizer classes behind each basis.
//!
//! Every basis matrix `F` determines a class of `p^2` commuting two-qupit
//! Pauli operators whose joint eigenbasis is the Jamiolkowski basis of `F`.
//! A certificate of `n` matrices corresponds to `n` non-overlapping classes
//! of weight-two Pauli operators; a full certificate exhausts all
//! `(p^2 - 1)^2` weight-two labels.

use num_complex::Complex64;

use crate::clique::MubCertificate;
use crate::modp::{inv_mod, Prime, Sl2Matrix};
use crate::oracle::{basis_states, omega_pow, CMatrix};
use crate::{Error, Result};

/// A two-qupit Pauli operator `omega^-k (X^x1 (x) X^x2)(Z^z1 (x) Z^z2)` in
/// symplectic coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymplecticPauli {
    p: u64,
    pub x1: u64,
    pub x2: u64,
    pub z1: u64,
    pub z2: u64,
    /// Phase index `k` of the `omega^-k` prefactor.
    pub phase: u64,
}

impl SymplecticPauli {
    pub fn new(p: Prime, x1: u64, x2: u64, z1: u64, z2: u64, phase: u64) -> Self {
        let m = p.value();
        SymplecticPauli { p: m, x1: x1 % m, x2: x2 % m, z1: z1 % m, z2: z2 % m, phase: phase % m }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_identity_label(&self) -> bool {
        self.x1 == 0 && self.x2 == 0 && self.z1 == 0 && self.z2 == 0
    }

    /// Phase-stripped label `(x1, x2 | z1, z2)`.
    pub fn label(&self) -> (u64, u64, u64, u64) {
        (self.x1, self.x2, self.z1, self.z2)
    }

    /// Nontrivial on both sites?
    pub fn is_weight_two(&self) -> bool {
        (self.x1, self.z1) != (0, 0) && (self.x2, self.z2) != (0, 0)
    }
}

fn single_site(p: u64, x: u64, z: u64) -> CMatrix {
    let n = p as usize;
    let mut m = CMatrix::zeros(n, n);
    for k in 0..p {
        // X^x Z^z |k> = omega^(k z) |k + x>
        m[(((k + x) % p) as usize, k as usize)] = omega_pow(p, (k * z) as i64);
    }
    m
}

/// The `p^2 x p^2` unitary of a symplectic Pauli operator.
pub fn pauli_matrix(op: &SymplecticPauli) -> CMatrix {
    let p = op.p;
    let a = single_site(p, op.x1, op.z1);
    let b = single_site(p, op.x2, op.z2);
    a.kronecker(&b) * omega_pow(p, -(op.phase as i64))
}

/// Rank-`p` projector onto the `omega^k` eigenspace of a non-identity Pauli:
/// `(1/p) sum_m omega^(-m k) P^m`.
pub fn projector(op: &SymplecticPauli, k: u64) -> Result<CMatrix> {
    if op.is_identity_label() {
        return Err(Error::InvalidParameters(
            "projector onto an eigenspace of the identity is all-or-nothing".into(),
        ));
    }
    let p = op.p;
    let d = (p * p) as usize;
    let pm = pauli_matrix(op);
    let mut power = CMatrix::identity(d, d);
    let mut out = CMatrix::zeros(d, d);
    for m in 0..p {
        out += &power * omega_pow(p, -((m * k) as i64));
        power = &power * &pm;
    }
    Ok(out / Complex64::new(p as f64, 0.0))
}

/// The antisymmetric symplectic form: `g` and `g'` commute iff
/// `sum_i (x_i z'_i - x'_i z_i) = 0 (mod p)`.
pub fn symplectic_commute(a: &SymplecticPauli, b: &SymplecticPauli) -> bool {
    assert_eq!(a.p, b.p, "mismatched moduli");
    let p = a.p;
    let pos = (a.x1 * b.z1 + a.x2 * b.z2) % p;
    let neg = (b.x1 * a.z1 + b.x2 * a.z2) % p;
    pos == neg
}

/// The two commuting generators of the stabilizer class attached to `F`.
#[derive(Debug, Clone, Copy)]
pub struct StabilizerClass {
    pub f: Sl2Matrix,
    pub g: SymplecticPauli,
    pub g_prime: SymplecticPauli,
}

impl StabilizerClass {
    /// Phase-stripped labels of the `p^2 - 1` non-identity subgroup
    /// elements `g^a g'^b`.
    pub fn labels(&self) -> Vec<(u64, u64, u64, u64)> {
        let p = self.g.p;
        let mut out = Vec::with_capacity((p * p - 1) as usize);
        for a in 0..p {
            for b in 0..p {
                if a == 0 && b == 0 {
                    continue;
                }
                out.push((
                    (a * self.g.x1 + b * self.g_prime.x1) % p,
                    (a * self.g.x2 + b * self.g_prime.x2) % p,
                    (a * self.g.z1 + b * self.g_prime.z1) % p,
                    (a * self.g.z2 + b * self.g_prime.z2) % p,
                ));
            }
        }
        out
    }
}

/// Generators of the Pauli class of `F`, from the two-case closed form.
pub fn class_for(f: &Sl2Matrix) -> StabilizerClass {
    let p = f.modulus();
    let prime = Prime::with_cap(p, u64::MAX).expect("modulus is prime");
    let (g, g_prime) = if f.beta() != 0 {
        let beta_inv = inv_mod(f.beta(), p);
        (
            SymplecticPauli::new(prime, 1, 0, f.alpha() * beta_inv % p, p - beta_inv, 0),
            SymplecticPauli::new(prime, 0, 1, p - beta_inv, beta_inv * f.delta() % p, 0),
        )
    } else {
        (
            SymplecticPauli::new(prime, 1, f.alpha(), 0, f.gamma(), 0),
            SymplecticPauli::new(prime, 0, 0, 1, (p - f.delta()) % p, 0),
        )
    };
    StabilizerClass { f: *f, g, g_prime }
}

/// Outcome of matching projector products against the Jamiolkowski basis.
#[derive(Debug)]
pub struct EigenbasisReport {
    pub ok: bool,
    /// `mapping[u1 * p + u2]` is the Jamiolkowski index matched by the
    /// projector product `Pi_g[u1] Pi_g'[u2]`.
    pub mapping: Vec<Option<usize>>,
}

/// Checks that the products `Pi_g[u1] Pi_g'[u2]` are rank-1 and reproduce
/// the Jamiolkowski basis of `F` up to relabeling of `u`.
pub fn verify_eigenbasis(f: &Sl2Matrix) -> Result<EigenbasisReport> {
    let p = f.modulus();
    let class = class_for(f);
    let states = basis_states(f);
    let mut mapping = vec![None; (p * p) as usize];
    let mut ok = true;
    let projectors_g: Vec<CMatrix> =
        (0..p).map(|k| projector(&class.g, k)).collect::<Result<_>>()?;
    let projectors_gp: Vec<CMatrix> =
        (0..p).map(|k| projector(&class.g_prime, k)).collect::<Result<_>>()?;
    for u1 in 0..p {
        for u2 in 0..p {
            let product = &projectors_g[u1 as usize] * &projectors_gp[u2 as usize];
            if (product.trace().norm() - 1.0).abs() > 1e-8 {
                ok = false;
                continue;
            }
            let slot = (u1 * p + u2) as usize;
            for (v, state) in states.iter().enumerate() {
                // <J| Pi |J> = 1 iff the rank-1 product is |J><J|
                let image = &product * state;
                if (state.dotc(&image).norm() - 1.0).abs() <= 1e-8 {
                    mapping[slot] = Some(v);
                    break;
                }
            }
            if mapping[slot].is_none() {
                ok = false;
            }
        }
    }
    // the relabeling must be a bijection
    let mut seen: Vec<usize> = mapping.iter().flatten().copied().collect();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != mapping.len() {
        ok = false;
    }
    Ok(EigenbasisReport { ok, mapping })
}

/// Outcome of the class-disjointness check over a certificate.
#[derive(Debug)]
pub struct PartitionReport {
    pub disjoint: bool,
    pub all_weight_two: bool,
    pub distinct_labels: usize,
    /// For a full certificate of size `p^2 - 1`: did the classes exhaust all
    /// `(p^2 - 1)^2` weight-two labels?
    pub exhausts: Option<bool>,
}

impl PartitionReport {
    pub fn is_clean(&self) -> bool {
        self.disjoint && self.all_weight_two && self.exhausts.unwrap_or(true)
    }
}

/// Checks that the classes of the certificate members are pairwise disjoint
/// sets of weight-two labels, and exhaust the label space when the
/// certificate is full.
pub fn partition_check(cert: &MubCertificate) -> Result<PartitionReport> {
    if !cert.verified_graph() {
        return Err(Error::UnverifiedCertificate);
    }
    let p = cert.prime().value();
    let per_class = (p * p - 1) as usize;
    let mut all_labels = Vec::new();
    let mut all_weight_two = true;
    for f in cert.members() {
        let class = class_for(f);
        let labels = class.labels();
        debug_assert_eq!(labels.len(), per_class);
        for &(x1, x2, z1, z2) in &labels {
            if (x1, z1) == (0, 0) || (x2, z2) == (0, 0) {
                all_weight_two = false;
            }
        }
        all_labels.extend(labels);
    }
    let total = all_labels.len();
    all_labels.sort_unstable();
    all_labels.dedup();
    let disjoint = all_labels.len() == total;
    let exhausts = if cert.len() == per_class {
        Some(all_labels.len() == per_class * per_class)
    } else {
        None
    };
    Ok(PartitionReport { disjoint, all_weight_two, distinct_labels: all_labels.len(), exhausts })
}

/// CSV export: one row per class, `F` entries then the two generators.
pub fn export_observables_csv(cert: &MubCertificate) -> String {
    let mut out = String::from("alpha,beta,gamma,delta,g,g_prime\n");
    for f in cert.members() {
        let class = class_for(f);
        let fmt = |g: &SymplecticPauli| format!("({},{}|{},{})", g.x1, g.x2, g.z1, g.z2);
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            f.alpha(),
            f.beta(),
            f.gamma(),
            f.delta(),
            fmt(&class.g),
            fmt(&class.g_prime)
        ));
    }
    out
}

#[allow(dead_code)]
fn hermitian_rank(m: &CMatrix, threshold: f64) -> usize {
    let eig = m.clone().symmetric_eigen();
    eig.eigenvalues.iter().filter(|&&v| v > threshold).count()
}
