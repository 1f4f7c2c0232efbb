use serde::{Deserialize, Serialize};

use super::Circuit;
use crate::qsim::GateKind;
use crate::rng::Rng;
use crate::{Error, Result};

/// One `(G_l, W_l)` pair: a simulatable block followed by a diagonal block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignLayer {
    pub g: Circuit,
    pub w: Circuit,
}

/// The sign ansatz `Π_l W_l G_l |0⟩` followed by a trailing Ry block.
///
/// `G_1 = H^{⊗n}`; later `G_l` are per-qubit Ry layers; every `W_l` is a
/// per-qubit Rz layer plus one Rzz per edge. Layer `l` owns the Ry block that
/// follows its `W_l`: that block is `G_{l+1}` for `l < L` and the trailing
/// block for `l = L`, so each layer carries `2n + |E|` parameters.
///
/// Parameter names: `g{l}_ry{q}`, `w{l}_rz{q}`, `w{l}_rzz{a}_{b}`; the
/// trailing block uses `g{L+1}_ry{q}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignAnsatz {
    pub n_qubits: usize,
    pub edges: Vec<(usize, usize)>,
    pub layers: Vec<SignLayer>,
    pub trailing: Circuit,
}

fn ry_block(n: usize, l: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push_param(GateKind::Ry, &[q], &format!("g{l}_ry{q}"), 1.0);
    }
    c
}

fn w_block(n: usize, l: usize, edges: &[(usize, usize)]) -> Circuit {
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push_param(GateKind::Rz, &[q], &format!("w{l}_rz{q}"), 1.0);
    }
    for &(a, b) in edges {
        c.push_param(GateKind::Rzz, &[a, b], &format!("w{l}_rzz{a}_{b}"), 1.0);
    }
    c
}

/// Builds an `L`-layer sign ansatz with all parameters at zero.
pub fn build_sign_ansatz(n: usize, edges: &[(usize, usize)], n_layers: usize) -> Result<SignAnsatz> {
    if n == 0 || n_layers == 0 {
        return Err(Error::InvalidAnsatz("sign ansatz needs n >= 1 and L >= 1".into()));
    }
    let mut clean: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in edges {
        if a == b || a >= n || b >= n {
            return Err(Error::InvalidEdge(a, b));
        }
        let e = (a.min(b), a.max(b));
        if !clean.contains(&e) {
            clean.push(e);
        }
    }
    let mut g1 = Circuit::new(n);
    for q in 0..n {
        g1.push(GateKind::H, &[q]);
    }
    let mut ansatz = SignAnsatz {
        n_qubits: n,
        layers: vec![SignLayer { g: g1, w: w_block(n, 1, &clean) }],
        trailing: ry_block(n, 2),
        edges: clean,
    };
    for _ in 1..n_layers {
        ansatz.push_layer();
    }
    Ok(ansatz)
}

impl SignAnsatz {
    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    /// Layer `l`, 1-based.
    pub fn layer(&self, l: usize) -> Result<&SignLayer> {
        l.checked_sub(1)
            .and_then(|i| self.layers.get(i))
            .ok_or_else(|| Error::InvalidAnsatz(format!("no layer {l}")))
    }

    pub fn layer_mut(&mut self, l: usize) -> Result<&mut SignLayer> {
        l.checked_sub(1)
            .and_then(|i| self.layers.get_mut(i))
            .ok_or_else(|| Error::InvalidAnsatz(format!("no layer {l}")))
    }

    /// Promotes the trailing Ry block to `G_{L+1}`, appends a zero `W_{L+1}`
    /// and a fresh trailing block. Returns the new layer index.
    pub fn push_layer(&mut self) -> usize {
        let n = self.n_qubits;
        let l = self.layers.len() + 1;
        let g = std::mem::replace(&mut self.trailing, ry_block(n, l + 1));
        self.layers.push(SignLayer { g, w: w_block(n, l, &self.edges) });
        l
    }

    /// `W_l G_l ⋯ W_1 G_1` without the trailing block: the state that the
    /// amplitude model multiplies.
    pub fn hybrid_circuit(&self, up_to_layer: usize) -> Result<Circuit> {
        self.layer(up_to_layer)?;
        let mut c = Circuit::new(self.n_qubits);
        for layer in &self.layers[..up_to_layer] {
            c.extend(&layer.g)?;
            c.extend(&layer.w)?;
        }
        Ok(c)
    }

    /// Every block including the trailing Ry layer.
    pub fn full_circuit(&self) -> Result<Circuit> {
        let mut c = self.hybrid_circuit(self.n_layers())?;
        c.extend(&self.trailing)?;
        Ok(c)
    }

    pub fn w_param_names(&self, l: usize) -> Result<Vec<String>> {
        Ok(self.layer(l)?.w.param_names())
    }

    pub fn g_param_names(&self, l: usize) -> Result<Vec<String>> {
        Ok(self.layer(l)?.g.param_names())
    }

    /// The Ry block owned by layer `l` (`G_{l+1}` or the trailing block).
    pub fn owned_ry(&self, l: usize) -> Result<&Circuit> {
        self.layer(l)?;
        Ok(if l == self.n_layers() { &self.trailing } else { &self.layers[l].g })
    }

    /// Parameters owned by layer `l`: its W block followed by its Ry block.
    pub fn layer_param_names(&self, l: usize) -> Result<Vec<String>> {
        let mut names = self.w_param_names(l)?;
        names.extend(self.owned_ry(l)?.param_names());
        Ok(names)
    }

    pub fn n_params(&self) -> usize {
        self.blocks().map(|c| c.n_params()).sum()
    }

    fn blocks(&self) -> impl Iterator<Item = &Circuit> {
        self.layers.iter().flat_map(|l| [&l.g, &l.w]).chain(std::iter::once(&self.trailing))
    }

    fn blocks_mut(&mut self) -> impl Iterator<Item = &mut Circuit> {
        self.layers.iter_mut().flat_map(|l| [&mut l.g, &mut l.w]).chain(std::iter::once(&mut self.trailing))
    }

    pub fn param(&self, name: &str) -> Result<f64> {
        self.blocks()
            .find_map(|c| c.params.get(name).copied())
            .ok_or_else(|| Error::UnknownParameter(name.to_string()))
    }

    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        for c in self.blocks_mut() {
            if let Some(v) = c.params.get_mut(name) {
                *v = value;
                return Ok(());
            }
        }
        Err(Error::UnknownParameter(name.to_string()))
    }

    /// Copies every parameter of `source` whose name exists here.
    pub fn update_from(&mut self, source: &Circuit) -> Result<()> {
        for (name, &v) in &source.params {
            self.set_param(name, v)?;
        }
        Ok(())
    }

    /// `U(−2π, 2π)` for every parameter.
    pub fn randomize(&mut self, rng: &mut Rng) {
        self.blocks_mut().for_each(|c| c.randomize_default(rng));
    }

    /// Structural check: W blocks diagonal, G blocks from {H, Ry} with `G_1`
    /// all-Hadamard, parameter names disjoint across blocks.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for (i, layer) in self.layers.iter().enumerate() {
            let l = i + 1;
            if !layer.w.is_diagonal() {
                return Err(Error::InvalidAnsatz(format!("W_{l} contains a non-diagonal gate")));
            }
            let allowed = |k: GateKind| if l == 1 { k == GateKind::H } else { matches!(k, GateKind::H | GateKind::Ry) };
            if !layer.g.gates.iter().all(|g| allowed(g.kind)) {
                return Err(Error::InvalidAnsatz(format!("G_{l} contains a gate outside the simulatable set")));
            }
        }
        if !self.trailing.gates.iter().all(|g| g.kind == GateKind::Ry) {
            return Err(Error::InvalidAnsatz("trailing block must be Ry only".into()));
        }
        for c in self.blocks() {
            c.validate()?;
            for name in c.params.keys() {
                if !seen.insert(name.clone()) {
                    return Err(Error::InvalidAnsatz(format!("parameter `{name}` shared across blocks")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_counts() {
        let chain = build_sign_ansatz(3, &[(0, 1), (1, 2)], 1).unwrap();
        assert_eq!(chain.n_params(), 8);
        let edges: Vec<(usize, usize)> = (0..5).map(|i| (i, i + 1)).chain((0..4).map(|i| (i, i + 2))).collect();
        assert_eq!(build_sign_ansatz(6, &edges, 1).unwrap().n_params(), 21);
        let two = build_sign_ansatz(3, &[(0, 1), (1, 2)], 2).unwrap();
        assert_eq!(two.n_params(), 16);
        let w1 = two.w_param_names(1).unwrap();
        let w2 = two.w_param_names(2).unwrap();
        assert!(w1.iter().all(|n| !w2.contains(n)));
        assert_eq!(two.layer_param_names(1).unwrap().len(), 8);
        two.validate().unwrap();
    }

    #[test]
    fn rejects_bad_edges_and_non_diagonal_w() {
        assert!(matches!(build_sign_ansatz(3, &[(0, 3)], 1), Err(Error::InvalidEdge(0, 3))));
        let mut a = build_sign_ansatz(2, &[(0, 1)], 1).unwrap();
        a.layers[0].w.push_param(GateKind::Rx, &[0], "bad", 1.0);
        assert!(a.validate().is_err());
    }

    #[test]
    fn hybrid_circuit_omits_trailing_block() {
        let a = build_sign_ansatz(3, &[(0, 1)], 1).unwrap();
        let hyb = a.hybrid_circuit(1).unwrap();
        assert_eq!(hyb.count_gates(GateKind::Ry), 0);
        assert_eq!(a.full_circuit().unwrap().count_gates(GateKind::Ry), 3);
    }
}
