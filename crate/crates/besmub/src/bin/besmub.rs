//! Command-line front-end: graph export, clique search, certificate
//! verification, spectra, coset partitions, observables, and LMM
//! reconstruction.
//!
//! Exit codes: 0 success/verified, 1 verification failure, 2 usage error,
//! 3 budget exhausted without proof.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;

use besmub::clique::{
    self, MubCertificate, OracleCheck, Provenance, SearchBudget,
};
use besmub::graph::{export_dimacs, vertex_table_json, CayleyGraph};
use besmub::modp::Prime;
use besmub::oracle::{self, CMatrix};
use besmub::pauli;
use besmub::spectral;

const EXIT_OK: u8 = 0;
const EXIT_VERIFICATION_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "besmub",
    about = "Bipartite entangled stabilizer MUBs as maximum cliques of Cayley graphs on SL(2,Z_p)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Cayley graph and export DIMACS plus a vertex table.
    Graph {
        #[arg(long)]
        p: u64,
        /// DIMACS output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON vertex-table output path.
        #[arg(long)]
        vertex_table: Option<PathBuf>,
    },
    /// Find a clique certificate.
    Find(FindArgs),
    /// Verify a certificate JSON file.
    Verify {
        cert_path: PathBuf,
        /// Also check every cross-basis overlap against the quantum oracle.
        #[arg(long)]
        oracle: bool,
        /// Sample this many random cross pairs instead of checking all.
        #[arg(long)]
        samples: Option<usize>,
        /// Also run the weight-two Pauli class partition check.
        #[arg(long)]
        observables: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Compare the computed adjacency spectrum against the closed form.
    Spectrum {
        #[arg(long)]
        p: u64,
        /// Check the complement (Ramanujan) graph as well.
        #[arg(long)]
        complement: bool,
        #[arg(long)]
        json: bool,
    },
    /// Partition SL(2,Z_p) into p disjoint max-cliques (cosets of H_p).
    Partition {
        #[arg(long)]
        p: u64,
        /// Write each coset certificate to this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Export the Pauli observables of a certificate as CSV.
    Observables {
        cert_path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct a local maximally mixed operator from a probability table.
    Reconstruct {
        prob_path: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct FindArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum)]
    mode: FindMode,
    /// Constructive parameter s (first valid pair when omitted).
    #[arg(long)]
    s: Option<u64>,
    /// Constructive parameter t.
    #[arg(long)]
    t: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 50_000_000)]
    max_nodes: u64,
    #[arg(long, default_value_t = 300.0)]
    max_seconds: f64,
    /// Grow the result by searching its common neighborhood.
    #[arg(long)]
    extend: bool,
    /// Certificate JSON output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FindMode {
    Subgroup,
    Coset,
    Constructive,
    Exact,
    Heuristic,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> besmub::Result<u8> {
    match cli.command {
        Command::Graph { p, out, vertex_table } => cmd_graph(p, out, vertex_table),
        Command::Find(args) => cmd_find(args),
        Command::Verify { cert_path, oracle, samples, observables, seed } => {
            cmd_verify(cert_path, oracle, samples, observables, seed)
        }
        Command::Spectrum { p, complement, json } => cmd_spectrum(p, complement, json),
        Command::Partition { p, out_dir, json } => cmd_partition(p, out_dir, json),
        Command::Observables { cert_path, out } => cmd_observables(cert_path, out),
        Command::Reconstruct { prob_path, json } => cmd_reconstruct(prob_path, json),
    }
}

fn cmd_graph(p: u64, out: Option<PathBuf>, vertex_table: Option<PathBuf>) -> besmub::Result<u8> {
    let p = Prime::new(p)?;
    let g = CayleyGraph::build(p);
    let dimacs = export_dimacs(&g);
    match out {
        Some(path) => {
            fs::write(&path, &dimacs)?;
            println!("wrote {} ({} vertices, {} edges)", path.display(), g.n(), g.edge_count());
        }
        None => print!("{dimacs}"),
    }
    if let Some(path) = vertex_table {
        fs::write(&path, vertex_table_json(&g))?;
        println!("wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

fn cmd_find(args: FindArgs) -> besmub::Result<u8> {
    let p = Prime::new(args.p)?;
    let budget =
        SearchBudget { max_nodes: args.max_nodes, max_seconds: args.max_seconds, seed: args.seed };
    let mut budget_exhausted = false;

    if matches!(args.mode, FindMode::Coset) {
        let parts = clique::coset_partition(p)?;
        for (t, cert) in parts.iter().enumerate() {
            println!("coset t={t}: size {} provenance coset verified={}", cert.len(), cert.verified_graph());
        }
        if let Some(path) = args.out {
            fs::write(&path, serde_json::to_string_pretty(&parts)?)?;
            println!("wrote {}", path.display());
        }
        let all_ok = parts.iter().all(|c| c.verified_graph());
        return Ok(if all_ok { EXIT_OK } else { EXIT_VERIFICATION_FAILED });
    }

    let cert = match args.mode {
        FindMode::Subgroup => clique::subgroup_clique(p)?,
        FindMode::Constructive => {
            let (s, t) = match (args.s, args.t) {
                (Some(s), Some(t)) => (s, t),
                (None, None) => *clique::valid_constructive_params(p).first().ok_or_else(|| {
                    besmub::Error::InvalidParameters(format!("no valid (s, t) for p = {p}"))
                })?,
                _ => {
                    return Err(besmub::Error::InvalidParameters(
                        "--s and --t must be given together".into(),
                    ))
                }
            };
            clique::constructive_clique(p, s, t)?
        }
        FindMode::Exact => {
            let g = CayleyGraph::build(p);
            let outcome = clique::exact_max_clique(&g, &budget)?;
            budget_exhausted = !outcome.proven_optimal;
            println!(
                "exact search: {} nodes, optimality {}",
                outcome.nodes,
                if outcome.proven_optimal { "proven" } else { "not proven (budget)" }
            );
            outcome.certificate
        }
        FindMode::Heuristic => {
            let g = CayleyGraph::build(p);
            clique::heuristic_clique(&g, &budget)?
        }
        FindMode::Coset => unreachable!(),
    };

    let cert = if args.extend {
        let g = CayleyGraph::build(p);
        let outcome = clique::extend_clique(&g, &cert, &budget)?;
        if outcome.certificate.len() > cert.len() {
            println!("extended from {} to {}", cert.len(), outcome.certificate.len());
        }
        outcome.certificate
    } else {
        cert
    };

    let provenance = serde_json::to_value(cert.provenance())?;
    println!(
        "size {} provenance {} verified_graph={}",
        cert.len(),
        provenance.as_str().unwrap_or("?"),
        cert.verified_graph()
    );
    if let Some(path) = args.out {
        fs::write(&path, cert.to_json())?;
        println!("wrote {}", path.display());
    }
    if !cert.verified_graph() {
        return Ok(EXIT_VERIFICATION_FAILED);
    }
    Ok(if budget_exhausted { EXIT_BUDGET } else { EXIT_OK })
}

fn cmd_verify(
    cert_path: PathBuf,
    oracle_on: bool,
    samples: Option<usize>,
    observables: bool,
    seed: u64,
) -> besmub::Result<u8> {
    let mut cert = MubCertificate::from_json(&fs::read_to_string(&cert_path)?)?;
    let mode = if !oracle_on {
        OracleCheck::Off
    } else if let Some(pairs) = samples {
        OracleCheck::Sampled { pairs, seed }
    } else {
        OracleCheck::Exhaustive
    };
    let report = clique::verify_certificate(&cert, mode);
    cert.apply_report(&report);
    println!(
        "graph check: {} ({} violating pairs)",
        if report.graph_ok { "pass" } else { "FAIL" },
        report.graph_violations.len()
    );
    for &(i, j) in report.graph_violations.iter().take(20) {
        println!(
            "  violation: members {i} and {j}: {} vs {}",
            cert.members()[i],
            cert.members()[j]
        );
    }
    if let Some(oracle) = &report.oracle {
        println!(
            "oracle check: {} ({} overlaps, max deviation {:.3e})",
            if oracle.ok { "pass" } else { "FAIL" },
            oracle.checked,
            oracle.max_deviation
        );
    }
    let mut clean = report.is_clean();
    if observables {
        if report.graph_ok {
            let part = pauli::partition_check(&cert)?;
            println!(
                "observable classes: disjoint={} weight_two={} labels={}{}",
                part.disjoint,
                part.all_weight_two,
                part.distinct_labels,
                match part.exhausts {
                    Some(true) => " (exhausts the weight-two label space)",
                    Some(false) => " (does NOT exhaust the label space)",
                    None => "",
                }
            );
            clean &= part.is_clean();
        } else {
            println!("observable classes: skipped (graph check failed)");
        }
    }
    Ok(if clean { EXIT_OK } else { EXIT_VERIFICATION_FAILED })
}

fn cmd_spectrum(p: u64, complement: bool, json: bool) -> besmub::Result<u8> {
    let p = Prime::new(p)?;
    let g = CayleyGraph::build(p);
    let computed = spectral::computed_spectrum(&g)?;
    let expected = spectral::expected_spectrum(p);
    let ok = computed.matches(&expected, spectral::BIN_TOLERANCE);
    if json {
        println!("{}", computed.to_json());
    } else {
        println!("spectrum of Gamma(SL(2,Z_{p}), T):");
        for &(v, m) in &computed.pairs {
            println!("  {v:>10.6}  multiplicity {m}");
        }
        println!("matches closed form: {}", if ok { "yes" } else { "NO" });
        let bounds = spectral::spectral_bounds(p);
        println!(
            "bounds: chi in [{}, {}], alpha in [{}, {}]",
            bounds.chromatic_lower,
            bounds.chromatic_upper,
            bounds.independence_lower,
            bounds.independence_upper
        );
    }
    let mut all_ok = ok;
    if complement {
        let report = spectral::complement_spectrum_check(p)?;
        if !json {
            println!(
                "complement spectrum: {} / eigenvalue relation: {}",
                if report.spectrum_ok { "pass" } else { "FAIL" },
                if report.relation_ok { "pass" } else { "FAIL" }
            );
        }
        all_ok &= report.is_clean();
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_VERIFICATION_FAILED })
}

fn cmd_partition(p: u64, out_dir: Option<PathBuf>, json: bool) -> besmub::Result<u8> {
    let p = Prime::new(p)?;
    let parts = clique::coset_partition(p)?;
    let mut all: Vec<_> = parts.iter().flat_map(|c| c.members().to_vec()).collect();
    all.sort();
    all.dedup();
    let disjoint_cover = all.len() as u64 == p.group_order();
    let all_cliques = parts.iter().all(|c| c.verified_graph());
    if json {
        println!("{}", serde_json::to_string_pretty(&parts)?);
    } else {
        println!(
            "{} cosets of H_{p}, each of size {}; disjoint cover: {}; all cliques: {}",
            parts.len(),
            parts[0].len(),
            if disjoint_cover { "yes" } else { "NO" },
            if all_cliques { "yes" } else { "NO" }
        );
    }
    if let Some(dir) = out_dir {
        fs::create_dir_all(&dir)?;
        for (t, cert) in parts.iter().enumerate() {
            fs::write(dir.join(format!("coset_{t}.json")), cert.to_json())?;
        }
        println!("wrote {} certificates to {}", parts.len(), dir.display());
    }
    Ok(if disjoint_cover && all_cliques { EXIT_OK } else { EXIT_VERIFICATION_FAILED })
}

fn cmd_observables(cert_path: PathBuf, out: Option<PathBuf>) -> besmub::Result<u8> {
    let cert = MubCertificate::from_json(&fs::read_to_string(&cert_path)?)?;
    let csv = pauli::export_observables_csv(&cert);
    match out {
        Some(path) => {
            fs::write(&path, &csv)?;
            println!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(EXIT_OK)
}

/// On-disk probability table for `reconstruct`.
#[derive(Deserialize)]
struct ProbabilityTable {
    p: u64,
    /// Basis matrices in certificate member order.
    bases: Vec<[[u64; 2]; 2]>,
    /// `probs[k][j] = Tr(W Pi_j^k)`, one row of `p^2` numbers per basis.
    probs: Vec<Vec<f64>>,
    /// Trace of the operator; defaults to the sum of the first row.
    trace: Option<f64>,
    /// Optional reference operator as rows of `[re, im]` pairs, for error
    /// reporting.
    reference: Option<Vec<Vec<[f64; 2]>>>,
}

fn cmd_reconstruct(prob_path: PathBuf, json: bool) -> besmub::Result<u8> {
    let table: ProbabilityTable = serde_json::from_str(&fs::read_to_string(&prob_path)?)?;
    let p = Prime::new(table.p)?;
    let members = table
        .bases
        .iter()
        .map(|e| besmub::modp::Sl2Matrix::new(p, e[0][0], e[0][1], e[1][0], e[1][1]))
        .collect::<besmub::Result<Vec<_>>>()?;
    let mut cert = MubCertificate::new(p, members, Provenance::Imported)?;
    let report = clique::verify_certificate(&cert, OracleCheck::Off);
    cert.apply_report(&report);
    let trace = table.trace.unwrap_or_else(|| table.probs.first().map_or(0.0, |r| r.iter().sum()));
    let w = oracle::lmm_reconstruct(p, &cert, &table.probs, trace)?;
    let d = (p.value() * p.value()) as usize;
    println!("reconstructed a {d}x{d} operator with trace {:.6}", w.trace().re);
    if let Some(reference) = &table.reference {
        if reference.len() != d || reference.iter().any(|r| r.len() != d) {
            return Err(besmub::Error::DimensionMismatch(reference.len(), d));
        }
        let mut reference_m = CMatrix::zeros(d, d);
        for (i, row) in reference.iter().enumerate() {
            for (j, &[re, im]) in row.iter().enumerate() {
                reference_m[(i, j)] = Complex64::new(re, im);
            }
        }
        let err = (&w - &reference_m).norm();
        println!("Frobenius error vs reference: {err:.3e}");
        if err > oracle::TOL_RECONSTRUCT {
            return Ok(EXIT_VERIFICATION_FAILED);
        }
    }
    if json {
        let rows: Vec<Vec<[f64; 2]>> = (0..d)
            .map(|i| (0..d).map(|j| [w[(i, j)].re, w[(i, j)].im]).collect())
            .collect();
        println!("{}", serde_json::to_string(&rows)?);
    }
    Ok(EXIT_OK)
}
