//! MaxCut graphs and the multi-qubit correlation encoding of binary variables.
//!
//! Each graph vertex `u` is assigned a distinct same-basis `k`-body Pauli
//! string `P_u` (e.g. `X_0 X_1`). A state then encodes the relaxed variables
//! `tanh(α ⟨P_u⟩)`, and rounding `x_u = sign⟨P_u⟩` yields a cut. With three
//! bases and `C(n, k)` qubit subsets per basis, `n` qubits hold `3·C(n, k)`
//! variables.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{Pauli, PauliString};
use crate::rng::Rng;
use crate::{Error, Result};

/// Default sharpness of the tanh relaxation.
pub const DEFAULT_ALPHA: f64 = 2.0;

/// Simple undirected graph; edges are stored with `u < v`, sorted, unique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b || a >= n_vertices || b >= n_vertices {
                return Err(Error::InvalidEdge(a, b));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { n_vertices, edges: set.into_iter().collect() })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }
}

/// Erdős–Rényi `G(n, p)`: each of the `C(n, 2)` pairs is an edge with probability `p`.
pub fn erdos_renyi(n_vertices: usize, p: f64, rng: &mut Rng) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut edges = Vec::new();
    for a in 0..n_vertices {
        for b in a + 1..n_vertices {
            if rng.random::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n_vertices, edges)
}

/// Reads an edge list: one `u v` pair per line, 0-indexed. Lines starting with
/// `#` are comments, except `# vertices N`, which fixes the vertex count
/// (otherwise it is one more than the largest index seen).
pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    let mut declared = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            if words.next() == Some("vertices") {
                declared = words.next().and_then(|w| w.parse::<usize>().ok());
            }
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|w| w.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        match nums[..] {
            [a, b] => edges.push((a, b)),
            _ => return Err(Error::Config(format!("{}:{}: expected `u v`", path.display(), lineno + 1))),
        }
    }
    let seen = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    Graph::new(declared.unwrap_or(seen).max(seen), edges)
}

pub fn write_edge_list(graph: &Graph, path: &Path) -> Result<()> {
    let mut text = format!("# vertices {}\n", graph.n_vertices);
    for (a, b) in &graph.edges {
        text.push_str(&format!("{a} {b}\n"));
    }
    fs::write(path, text)?;
    Ok(())
}

/// `Σ_{(u,v)∈E} (1 − x_u x_v) / 2` for `x ∈ {±1}^V`.
pub fn cut_value(graph: &Graph, assignment: &[i8]) -> Result<f64> {
    if assignment.len() != graph.n_vertices {
        return Err(Error::DimensionMismatch { expected: graph.n_vertices, got: assignment.len() });
    }
    Ok(graph
        .edges
        .iter()
        .map(|&(a, b)| (1.0 - f64::from(assignment[a]) * f64::from(assignment[b])) / 2.0)
        .sum())
}

/// Exhaustive optimum for graphs of at most 24 vertices.
pub fn brute_force_maxcut(graph: &Graph) -> Result<f64> {
    let n = graph.n_vertices;
    if n > 24 {
        return Err(Error::InvalidModel(format!("brute force limited to 24 vertices, got {n}")));
    }
    if n == 0 {
        return Ok(0.0);
    }
    // vertex 0 fixed on one side by symmetry
    let best = (0..1u32 << (n - 1))
        .map(|mask| {
            graph
                .edges
                .iter()
                .filter(|&&(a, b)| {
                    let side = |v: usize| v > 0 && mask >> (v - 1) & 1 == 1;
                    side(a) != side(b)
                })
                .count()
        })
        .max()
        .unwrap_or(0);
    Ok(best as f64)
}

/// Assignment of graph vertices to `k`-body correlators on `n` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxCutEncoding {
    pub n_qubits: usize,
    pub k: usize,
    pub alpha: f64,
    /// `variables[u]` is the correlator encoding vertex `u`.
    pub variables: Vec<PauliString>,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for q in start..n {
            cur.push(q);
            rec(q + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl MaxCutEncoding {
    /// Number of encodable variables, `3·C(n, k)`.
    pub fn capacity(n_qubits: usize, k: usize) -> usize {
        3 * binomial(n_qubits, k)
    }

    /// Assigns vertices basis-major (all X correlators, then Y, then Z), each
    /// basis enumerating qubit subsets in lexicographic order.
    pub fn new(n_vertices: usize, n_qubits: usize, k: usize, alpha: f64) -> Result<Self> {
        if k < 2 || k > n_qubits {
            return Err(Error::InvalidModel(format!("encoding order k={k} needs 2 <= k <= n={n_qubits}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidModel(format!("alpha must be positive, got {alpha}")));
        }
        let capacity = Self::capacity(n_qubits, k);
        if capacity < n_vertices {
            return Err(Error::CapacityExceeded { capacity, required: n_vertices });
        }
        let subsets = k_subsets(n_qubits, k);
        let variables = [Pauli::X, Pauli::Y, Pauli::Z]
            .into_iter()
            .flat_map(|op| subsets.iter().map(move |qs| PauliString::on_qubits(n_qubits, qs, op)))
            .take(n_vertices)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n_qubits, k, alpha, variables })
    }

    pub fn n_vertices(&self) -> usize {
        self.variables.len()
    }

    /// Relaxed loss `Σ_{(u,v)} tanh(α c_u) tanh(α c_v)` (to be minimized) for correlators `c`.
    pub fn objective(&self, graph: &Graph, correlators: &[f64]) -> Result<f64> {
        self.check(graph, correlators)?;
        let t: Vec<f64> = correlators.iter().map(|c| (self.alpha * c).tanh()).collect();
        Ok(graph.edges.iter().map(|&(a, b)| t[a] * t[b]).sum())
    }

    /// `∂L/∂c_u` of [`MaxCutEncoding::objective`].
    pub fn objective_gradient(&self, graph: &Graph, correlators: &[f64]) -> Result<Vec<f64>> {
        self.check(graph, correlators)?;
        let t: Vec<f64> = correlators.iter().map(|c| (self.alpha * c).tanh()).collect();
        let mut g = vec![0.0; t.len()];
        for &(a, b) in &graph.edges {
            g[a] += t[b] * self.alpha * (1.0 - t[a] * t[a]);
            g[b] += t[a] * self.alpha * (1.0 - t[b] * t[b]);
        }
        Ok(g)
    }

    /// `x_u = sign(c_u)`, ties broken to `+1`.
    pub fn round(&self, correlators: &[f64]) -> Vec<i8> {
        correlators.iter().map(|&c| if c < 0.0 { -1 } else { 1 }).collect()
    }

    fn check(&self, graph: &Graph, correlators: &[f64]) -> Result<()> {
        if graph.n_vertices != self.variables.len() {
            return Err(Error::DimensionMismatch { expected: self.variables.len(), got: graph.n_vertices });
        }
        if correlators.len() != self.variables.len() {
            return Err(Error::DimensionMismatch { expected: self.variables.len(), got: correlators.len() });
        }
        Ok(())
    }
}
