//! Layered circuit representation: tensor layers of contiguous gate blocks and
//! controlled-not layers on disjoint line pairs.

mod builder;
mod format;
mod gate;
pub mod random;

pub use builder::{permutation_layers, CircuitBuilder};
pub use format::{CircuitFile, FORMAT_VERSION};
pub use gate::{
    diag, digit_bits, hadamard, pauli_x, pauli_z, phase, qudigit_fourier, GateKind, Residue,
};

use serde::{Deserialize, Serialize};

use crate::arith::poly::lcm;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("gates overlap or leave the register: {0}")]
    Placement(String),
    #[error("invalid circuit: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("circuit format error: {0}")]
    Format(String),
    #[error("unsupported gate {0}")]
    Unsupported(String),
}

/// One entry of a tensor layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "block", rename_all = "snake_case")]
pub enum Block {
    Identity { width: usize },
    Gate(GateKind),
}

impl Block {
    pub fn num_lines(&self) -> usize {
        match self {
            Block::Identity { width } => *width,
            Block::Gate(g) => g.num_lines(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "layer", rename_all = "snake_case")]
pub enum Layer {
    /// Kronecker product of the blocks, top line first.
    Tensor { blocks: Vec<Block> },
    /// Simultaneous controlled-nots on (control, target) pairs.
    Cnot { pairs: Vec<(usize, usize)> },
}

impl Layer {
    /// Iterates gates with their first line.
    pub fn gates(&self) -> Vec<(usize, &GateKind)> {
        let mut out = Vec::new();
        if let Layer::Tensor { blocks } = self {
            let mut line = 0;
            for b in blocks {
                if let Block::Gate(g) = b {
                    out.push((line, g));
                }
                line += b.num_lines();
            }
        }
        out
    }

    pub fn inverse(&self) -> Layer {
        match self {
            Layer::Tensor { blocks } => Layer::Tensor {
                blocks: blocks
                    .iter()
                    .map(|b| match b {
                        Block::Gate(g) => Block::Gate(g.inverse()),
                        other => other.clone(),
                    })
                    .collect(),
            },
            Layer::Cnot { .. } => self.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub layer: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.layer {
            Some(i) => write!(f, "layer {i}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// A circuit over `num_inputs + num_work` lines; work lines follow the inputs
/// and start at 0. `field_order` is an N such that every gate entry lies in Q(ζ_N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCircuit {
    pub num_inputs: usize,
    pub num_work: usize,
    pub field_order: u32,
    pub layers: Vec<Layer>,
}

impl LayeredCircuit {
    pub fn new(num_inputs: usize, num_work: usize, layers: Vec<Layer>) -> Self {
        let mut c = LayeredCircuit {
            num_inputs,
            num_work,
            field_order: 1,
            layers,
        };
        c.field_order = c.required_order();
        c
    }

    pub fn empty(num_lines: usize) -> Self {
        Self::new(num_lines, 0, Vec::new())
    }

    pub fn num_lines(&self) -> usize {
        self.num_inputs + self.num_work
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Gates spanning at least two lines; each controlled-not pair counts once.
    pub fn multiline_gate_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| match l {
                Layer::Tensor { .. } => l.gates().iter().filter(|(_, g)| g.num_lines() >= 2).count(),
                Layer::Cnot { pairs } => pairs.len(),
            })
            .sum()
    }

    /// Distinct one-qubit matrices used; reported as metadata.
    pub fn one_qubit_gate_types(&self) -> usize {
        let mut seen: Vec<&crate::arith::Matrix> = Vec::new();
        for l in &self.layers {
            for (_, g) in l.gates() {
                if let GateKind::OneQubit { matrix } = g {
                    if !seen.contains(&matrix) {
                        seen.push(matrix);
                    }
                }
            }
        }
        seen.len()
    }

    fn required_order(&self) -> u32 {
        self.layers
            .iter()
            .flat_map(|l| l.gates())
            .fold(1, |acc, (_, g)| lcm(acc, g.field_order()))
    }

    pub fn inverse(&self) -> LayeredCircuit {
        LayeredCircuit {
            num_inputs: self.num_inputs,
            num_work: self.num_work,
            field_order: self.field_order,
            layers: self.layers.iter().rev().map(Layer::inverse).collect(),
        }
    }

    /// `self` followed by `other`; both must span the same lines.
    pub fn compose(&self, other: &LayeredCircuit) -> Result<LayeredCircuit, CircuitError> {
        if self.num_lines() != other.num_lines() {
            return Err(CircuitError::Placement(format!(
                "cannot compose circuits on {} and {} lines",
                self.num_lines(),
                other.num_lines()
            )));
        }
        let mut layers = self.layers.clone();
        layers.extend(other.layers.iter().cloned());
        Ok(LayeredCircuit {
            num_inputs: self.num_inputs,
            num_work: self.num_work,
            field_order: lcm(self.field_order, other.field_order),
            layers,
        })
    }

    /// Every invariant violation, tagged with its layer.
    pub fn violations(&self) -> Vec<Violation> {
        let total = self.num_lines();
        let mut out = Vec::new();
        let mut push = |layer: Option<usize>, message: String| out.push(Violation { layer, message });
        if self.field_order == 0 {
            push(None, "field order must be positive".into());
        }
        for (i, layer) in self.layers.iter().enumerate() {
            match layer {
                Layer::Tensor { blocks } => {
                    let span: usize = blocks.iter().map(Block::num_lines).sum();
                    if span != total {
                        push(Some(i), format!("blocks span {span} lines, circuit has {total}"));
                    }
                    for b in blocks {
                        match b {
                            Block::Identity { width: 0 } => {
                                push(Some(i), "identity block of width 0".into())
                            }
                            Block::Identity { .. } => {}
                            Block::Gate(g) => {
                                if let Err(e) = g.check() {
                                    push(Some(i), format!("{}: {e}", g.name()));
                                } else if self.field_order != 0
                                    && !self.field_order.is_multiple_of(g.field_order())
                                {
                                    push(
                                        Some(i),
                                        format!(
                                            "{} entries need order {}, circuit order is {}",
                                            g.name(),
                                            g.field_order(),
                                            self.field_order
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
                Layer::Cnot { pairs } => {
                    let mut used = vec![false; total];
                    for &(c, t) in pairs {
                        if c >= total || t >= total {
                            push(Some(i), format!("pair ({c},{t}) leaves the register"));
                            continue;
                        }
                        if c == t {
                            push(Some(i), format!("pair ({c},{t}) uses one line twice"));
                            continue;
                        }
                        for l in [c, t] {
                            if std::mem::replace(&mut used[l], true) {
                                push(Some(i), format!("line {l} appears in two pairs"));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(CircuitError::Invalid(v))
        }
    }
}

/// Number of stages of spaced controlled-nots needed to realize the layer:
/// pairs in one stage must occupy disjoint line intervals. Greedy interval
/// partitioning, which is optimal for interval graphs.
pub fn cnot_layer_depth(pairs: &[(usize, usize)]) -> usize {
    let mut intervals: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    intervals.sort();
    let mut stage_ends: Vec<usize> = Vec::new();
    for (lo, hi) in intervals {
        match stage_ends.iter_mut().find(|end| **end < lo) {
            Some(end) => *end = hi,
            None => stage_ends.push(hi),
        }
    }
    stage_ends.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_layer(n: usize) -> Layer {
        Layer::Tensor {
            blocks: (0..n).map(|_| Block::Gate(GateKind::one_qubit(hadamard()))).collect(),
        }
    }

    #[test]
    fn empty_circuit_is_valid() {
        assert!(LayeredCircuit::empty(3).validate().is_ok());
    }

    #[test]
    fn short_tensor_layer_is_reported() {
        let c = LayeredCircuit::new(3, 0, vec![h_layer(2)]);
        let v = c.violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].layer, Some(0));
    }

    #[test]
    fn overlapping_pairs_are_reported() {
        let c = LayeredCircuit::new(3, 0, vec![Layer::Cnot { pairs: vec![(0, 1), (1, 2)] }]);
        assert!(!c.violations().is_empty());
    }

    #[test]
    fn depth_and_multiline_counts() {
        let c = LayeredCircuit::new(4, 0, vec![h_layer(4)]);
        assert_eq!(c.depth(), 1);
        assert_eq!(c.multiline_gate_count(), 0);
        assert_eq!(c.one_qubit_gate_types(), 1);
        assert_eq!(c.field_order, 8);
    }

    #[test]
    fn inverse_is_involutive() {
        let c = LayeredCircuit::new(
            3,
            0,
            vec![
                Layer::Tensor {
                    blocks: vec![
                        Block::Gate(GateKind::one_qubit(phase(8, 1))),
                        Block::Gate(GateKind::QudigitM { q: 3, inputs: 0, power: 1 }),
                    ],
                },
                Layer::Cnot { pairs: vec![(0, 2)] },
            ],
        );
        assert!(c.validate().is_ok());
        let inv = c.inverse();
        assert_eq!(inv.depth(), c.depth());
        assert_eq!(inv.multiline_gate_count(), c.multiline_gate_count());
        assert_eq!(inv.inverse(), c);
        assert_eq!(Layer::Cnot { pairs: vec![(1, 0)] }.inverse(), Layer::Cnot { pairs: vec![(1, 0)] });
    }

    /// Exhaustive minimum stage count: try every assignment of pairs to stages.
    fn brute_stages(pairs: &[(usize, usize)]) -> usize {
        let iv: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let n = iv.len();
        if n == 0 {
            return 0;
        }
        for k in 1..=n {
            let mut assign = vec![0usize; n];
            loop {
                let ok = (0..n).all(|i| {
                    (0..i).all(|j| assign[i] != assign[j] || iv[i].1 < iv[j].0 || iv[j].1 < iv[i].0)
                });
                if ok {
                    return k;
                }
                let mut p = 0;
                while p < n {
                    assign[p] += 1;
                    if assign[p] < k {
                        break;
                    }
                    assign[p] = 0;
                    p += 1;
                }
                if p == n {
                    break;
                }
            }
        }
        n
    }

    #[test]
    fn cnot_depth_small_cases() {
        assert_eq!(cnot_layer_depth(&[(0, 1)]), 1);
        assert_eq!(cnot_layer_depth(&[(0, 1), (2, 3), (4, 5)]), 1);
        // nested pairs (1→6),(2→5),(3→4) on six lines
        let nested = [(0, 5), (1, 4), (2, 3)];
        assert_eq!(cnot_layer_depth(&nested), brute_stages(&nested));
        assert_eq!(cnot_layer_depth(&nested), 3);
    }

    #[test]
    fn cnot_depth_matches_exhaustive_search() {
        // all disjoint pair sets on up to six lines, both orientations
        fn rec(free: Vec<usize>, acc: &mut Vec<(usize, usize)>, all: &mut Vec<Vec<(usize, usize)>>) {
            all.push(acc.clone());
            for i in 0..free.len() {
                for j in 0..free.len() {
                    if i == j || (!acc.is_empty() && (free[i], free[j]) < *acc.last().unwrap()) {
                        continue;
                    }
                    let rest: Vec<usize> =
                        free.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, &v)| v).collect();
                    acc.push((free[i], free[j]));
                    rec(rest, acc, all);
                    acc.pop();
                }
            }
        }
        let mut all = Vec::new();
        rec((0..6).collect(), &mut Vec::new(), &mut all);
        assert!(all.len() > 100);
        for pairs in all {
            assert_eq!(cnot_layer_depth(&pairs), brute_stages(&pairs), "{pairs:?}");
        }
    }
}
