//! The Cayley graph of `SL(2,Z_p)` with connection set `{F : Tr(F) != 2}`.
//!
//! Vertices are the group elements in lexicographic order; two vertices are
//! adjacent iff `Tr(F_i^-1 F_j) != 2 (mod p)`.  Adjacency is stored as a
//! symmetric bit-matrix so that clique search can intersect neighborhoods
//! word by word.

use serde::Serialize;

use crate::modp::{enumerate_sl2, Prime, Sl2Matrix};
use crate::{Error, Result};

/// Square symmetric bit-matrix backed by u64 words.
#[derive(Clone)]
pub struct BitMatrix {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        BitMatrix { n, words_per_row, bits: vec![0; n * words_per_row] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] |= 1 << (j % 64);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn row_degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// The Cayley graph `Gamma(G, T)` for `G = SL(2,Z_p)`,
/// `T = {F : Tr(F) != 2}`.
pub struct CayleyGraph {
    p: Prime,
    vertices: Vec<Sl2Matrix>,
    adjacency: BitMatrix,
}

impl CayleyGraph {
    /// Builds the graph by evaluating `Tr(F_i^-1 F_j)` for every pair.
    pub fn build(p: Prime) -> Self {
        let vertices = enumerate_sl2(p);
        let n = vertices.len();
        let mut adjacency = BitMatrix::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i].trace_of_inv_mul(&vertices[j]) != 2 % p.value() {
                    adjacency.set(i, j);
                    adjacency.set(j, i);
                }
            }
        }
        CayleyGraph { p, vertices, adjacency }
    }

    /// Complement on the same vertex set: edges iff `Tr(F_i^-1 F_j) = 2`,
    /// `i != j`.  This is the Ramanujan family with `|T| = p^2 - 1`.
    pub fn build_complement(p: Prime) -> Self {
        let vertices = enumerate_sl2(p);
        let n = vertices.len();
        let mut adjacency = BitMatrix::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i].trace_of_inv_mul(&vertices[j]) == 2 % p.value() {
                    adjacency.set(i, j);
                    adjacency.set(j, i);
                }
            }
        }
        CayleyGraph { p, vertices, adjacency }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Sl2Matrix] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Sl2Matrix {
        &self.vertices[i]
    }

    /// Position of a matrix in the lexicographic vertex order.
    pub fn index_of(&self, f: &Sl2Matrix) -> Option<usize> {
        self.vertices.binary_search(f).ok()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency.get(i, j)
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adjacency
    }

    pub fn neighbors_row(&self, i: usize) -> &[u64] {
        self.adjacency.row(i)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency.row_degree(i)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n()).map(|i| self.degree(i)).sum::<usize>() / 2
    }
}

/// A proper vertex coloring induced by the first row `(alpha, beta)`.
///
/// Two vertices sharing a first row satisfy `Tr(F_i^-1 F_j) = 2` and so are
/// never adjacent; there are `p^2 - 1` rows, each shared by `p` vertices.
pub struct VertexColoring {
    colors: Vec<usize>,
    num_colors: usize,
}

impl VertexColoring {
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }
}

/// Colors each vertex by its first row.
pub fn row_coloring(g: &CayleyGraph) -> VertexColoring {
    let mut colors = Vec::with_capacity(g.n());
    let mut num_colors = 0;
    let mut last_row = None;
    // vertices are sorted, so equal rows are consecutive
    for v in g.vertices() {
        let row = v.row();
        if last_row != Some(row) {
            if last_row.is_some() {
                num_colors += 1;
            }
            last_row = Some(row);
        }
        colors.push(num_colors);
    }
    VertexColoring { colors, num_colors: num_colors + 1 }
}

/// The color classes of [`row_coloring`]: `p^2 - 1` disjoint independent sets
/// of size `p` covering all vertices.
pub fn independent_row_sets(g: &CayleyGraph) -> Vec<Vec<usize>> {
    let coloring = row_coloring(g);
    let mut sets = vec![Vec::new(); coloring.num_colors()];
    for (v, &c) in coloring.colors().iter().enumerate() {
        sets[c].push(v);
    }
    sets
}

/// DIMACS undirected edge format.  1-based vertex `i` in the file is 0-based
/// vertex `i-1`; the mapping is repeated in the header comments.
pub fn export_dimacs(g: &CayleyGraph) -> String {
    let n = g.n();
    let m = g.edge_count();
    let mut out = String::new();
    out.push_str(&format!(
        "c Cayley graph of SL(2,Z_{}) with connection set {{F : Tr(F) != 2}}\n",
        g.prime()
    ));
    out.push_str("c vertex i (1-based) is element i-1 of the lexicographic SL(2,Z_p) order\n");
    out.push_str(&format!("p edge {n} {m}\n"));
    for i in 0..n {
        for j in i + 1..n {
            if g.adjacent(i, j) {
                out.push_str(&format!("e {} {}\n", i + 1, j + 1));
            }
        }
    }
    out
}

/// Parses DIMACS edge format back into `(n, edges)` with 0-based endpoints.
pub fn parse_dimacs(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut n = None;
    let mut edges = Vec::new();
    for line in text.lines() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("c") | None => {}
            Some("p") => {
                let bad = || Error::InvalidParameters(format!("bad problem line: {line}"));
                if parts.next() != Some("edge") {
                    return Err(bad());
                }
                let nv: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let _ne: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                n = Some(nv);
            }
            Some("e") => {
                let bad = || Error::InvalidParameters(format!("bad edge line: {line}"));
                let i: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let j: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if i == 0 || j == 0 {
                    return Err(bad());
                }
                edges.push((i - 1, j - 1));
            }
            Some(other) => {
                return Err(Error::InvalidParameters(format!("unknown line type: {other}")));
            }
        }
    }
    let n = n.ok_or_else(|| Error::InvalidParameters("missing problem line".into()))?;
    Ok((n, edges))
}

#[derive(Serialize)]
struct VertexTable {
    p: u64,
    vertices: Vec<[u64; 4]>,
}

/// JSON table mapping vertex index to `(alpha, beta, gamma, delta)`.
pub fn vertex_table_json(g: &CayleyGraph) -> String {
    let table = VertexTable {
        p: g.prime().value(),
        vertices: g
            .vertices()
            .iter()
            .map(|f| [f.alpha(), f.beta(), f.gamma(), f.delta()])
            .collect(),
    };
    serde_json::to_string_pretty(&table).expect("vertex table serializes")
}
