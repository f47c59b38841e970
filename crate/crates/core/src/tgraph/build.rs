//! Gate handlers turning a graph for |ψ⟩ into a graph for L|ψ⟩, layer by
//! layer, starting from the chain for |z⟩.

use crate::arith::{Cyclotomic, Matrix};
use crate::circuit::{GateKind, Layer, LayeredCircuit};
use crate::sim::index_to_bits;

use super::{ColorLiteral, ColorProduct, EdgeId, GraphError, NodeId, NodeKind, TensorGraph};

/// Largest node count a build may reach.
pub const NODE_CAP: usize = 200_000;

/// Graph whose amplitude function is `c` applied to basis state `z` (line 0
/// most significant). Only one-qubit, controlled, fanout and controlled-not
/// layers have handlers.
pub fn build_from_circuit(c: &LayeredCircuit, z: u64) -> Result<TensorGraph, GraphError> {
    build_from_circuit_capped(c, z, NODE_CAP)
}

pub fn build_from_circuit_capped(c: &LayeredCircuit, z: u64, node_cap: usize) -> Result<TensorGraph, GraphError> {
    let n = c.num_lines();
    if n < 64 && z >> n != 0 {
        return Err(GraphError::BadBasis { index: z, lines: n });
    }
    c.validate().map_err(|e| GraphError::Structure(e.to_string()))?;
    let mut g = TensorGraph::chain(&index_to_bits(z, n));
    g.node_cap = node_cap;
    for layer in &c.layers {
        g.apply_layer(layer)?;
    }
    Ok(g)
}

fn apply2(m: &Matrix, v: &[Cyclotomic; 2]) -> [Cyclotomic; 2] {
    let row = |r: usize| &(m.get(r, 0) * &v[0]) + &(m.get(r, 1) * &v[1]);
    [row(0), row(1)]
}

/// U − I.
fn minus_identity(m: &Matrix) -> Matrix {
    let mut out = m.clone();
    for i in 0..2 {
        out.set(i, i, m.get(i, i) - &Cyclotomic::one(1));
    }
    out
}

/// A good term between an arrival at the top of a span and a departure at the
/// bottom: every node on a path between them.
struct Term {
    start: NodeId,
    end: NodeId,
    members: Vec<bool>,
}

impl TensorGraph {
    pub fn apply_layer(&mut self, layer: &Layer) -> Result<(), GraphError> {
        match layer {
            Layer::Cnot { pairs } => {
                for &(c, t) in pairs {
                    self.apply_cnot(c, t);
                    self.check_size()?;
                }
                Ok(())
            }
            Layer::Tensor { .. } => {
                for (start, gate) in layer.gates() {
                    self.apply_gate(start, gate)?;
                }
                Ok(())
            }
        }
    }

    fn apply_gate(&mut self, start: usize, gate: &GateKind) -> Result<(), GraphError> {
        match gate {
            GateKind::OneQubit { matrix } => {
                self.apply_one_qubit(start, matrix);
                Ok(())
            }
            GateKind::ControlledU { controls: 0, matrix } => {
                self.apply_one_qubit(start, matrix);
                Ok(())
            }
            GateKind::ControlledU { controls, matrix } => self.apply_controlled(start, *controls, matrix),
            GateKind::Fanout { arity: 0 } => Ok(()),
            GateKind::Fanout { arity } => self.apply_fanout(start, *arity),
            other => Err(GraphError::Unsupported(other.name().to_string())),
        }
    }

    fn check_size(&self) -> Result<(), GraphError> {
        if self.nodes.len() > self.node_cap {
            return Err(GraphError::CapExceeded {
                what: "node count",
                cap: self.node_cap as u128,
            });
        }
        Ok(())
    }

    fn edges_on(&self, line: usize) -> Vec<EdgeId> {
        (0..self.vertical.len()).filter(|&e| self.vertical[e].line == line).collect()
    }

    pub fn apply_one_qubit(&mut self, line: usize, m: &Matrix) {
        for e in self.edges_on(line) {
            let edge = self.edge_mut(e);
            edge.amp = apply2(m, &edge.amp);
        }
    }

    /// Good terms spanning lines `first..=last`.
    fn terms(&self, first: usize, last: usize) -> Vec<Term> {
        let n = self.nodes.len();
        let starts: Vec<NodeId> = (0..n)
            .filter(|&i| self.nodes[i].height == first && self.nodes[i].kind == NodeKind::Arrival)
            .collect();
        let ends: Vec<NodeId> = (0..n)
            .filter(|&i| self.nodes[i].height == last + 1 && self.nodes[i].kind == NodeKind::Departure)
            .collect();
        let backward: Vec<Vec<bool>> = ends.iter().map(|&v| self.span_reach(v, first, last, false)).collect();
        let mut out = Vec::new();
        for &u in &starts {
            let fwd = self.span_reach(u, first, last, true);
            for (&v, bwd) in ends.iter().zip(&backward) {
                if !fwd[v] {
                    continue;
                }
                let members: Vec<bool> = fwd.iter().zip(bwd).map(|(a, b)| *a && *b).collect();
                out.push(Term { start: u, end: v, members });
            }
        }
        out
    }

    /// Nodes reachable from `from` without leaving heights `first..=last+1`.
    fn span_reach(&self, from: NodeId, first: usize, last: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            let node = self.nodes[x];
            let next: Vec<NodeId> = match (forward, node.kind) {
                (true, NodeKind::Arrival) => self.h_out[x].clone(),
                (true, NodeKind::Departure) if node.height <= last => {
                    self.v_out[x].map(|e| self.vertical[e].to).into_iter().collect()
                }
                (false, NodeKind::Departure) => self.h_in[x].clone(),
                (false, NodeKind::Arrival) if node.height > first => {
                    self.v_in[x].map(|e| self.vertical[e].from).into_iter().collect()
                }
                _ => Vec::new(),
            };
            for y in next {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Adds a copy of `term` hung between its own start and end, with each
    /// copied vertical edge's amplitudes replaced by `amp`.
    fn copy_term(&mut self, term: &Term, amp: &dyn Fn(&super::VerticalEdge) -> [Cyclotomic; 2]) {
        let members: Vec<NodeId> = (0..term.members.len()).filter(|&i| term.members[i]).collect();
        let mut map = vec![usize::MAX; term.members.len()];
        for &x in &members {
            map[x] = if x == term.start || x == term.end {
                x
            } else {
                let node = self.nodes[x];
                self.add_node(node.height, node.kind)
            };
        }
        for &x in &members {
            match self.nodes[x].kind {
                NodeKind::Arrival => {
                    for d in self.h_out[x].clone() {
                        // nodes added by earlier copies lie outside the term
                        if term.members.get(d).copied().unwrap_or(false) {
                            self.add_horizontal(map[x], map[d]).unwrap();
                        }
                    }
                }
                NodeKind::Departure if x != term.end => {
                    let e = self.v_out[x].expect("departure inside a term has a vertical edge");
                    let edge = self.vertical[e].clone();
                    self.add_vertical(map[x], map[edge.to], edge.colors.clone(), amp(&edge))
                        .unwrap();
                }
                NodeKind::Departure => {}
            }
        }
    }

    /// ∧_m(U) on lines `start..=start+m`: each good term gains a twin carrying
    /// (U − I) on the target, projected onto |1⟩ on the controls.
    pub fn apply_controlled(&mut self, start: usize, controls: usize, u: &Matrix) -> Result<(), GraphError> {
        let target = start + controls;
        let delta = minus_identity(u);
        let amp = |e: &super::VerticalEdge| {
            if e.line == target {
                apply2(&delta, &e.amp)
            } else {
                [Cyclotomic::zero(1), e.amp[1].clone()]
            }
        };
        for term in self.terms(start, target) {
            self.copy_term(&term, &amp);
            self.check_size()?;
        }
        Ok(())
    }

    /// Fanout on lines `start..=start+arity`, control last: the original terms
    /// keep the control at |0⟩, the twins take the control at |1⟩ with every
    /// other line flipped.
    pub fn apply_fanout(&mut self, start: usize, arity: usize) -> Result<(), GraphError> {
        let control = start + arity;
        let originals = self.edges_on(control);
        let amp = |e: &super::VerticalEdge| {
            if e.line == control {
                [Cyclotomic::zero(1), e.amp[1].clone()]
            } else {
                [e.amp[1].clone(), e.amp[0].clone()]
            }
        };
        for term in self.terms(start, control) {
            self.copy_term(&term, &amp);
            self.check_size()?;
        }
        for e in originals {
            self.edge_mut(e).amp[1] = Cyclotomic::zero(1);
        }
        Ok(())
    }

    /// Controlled-not with a fresh color c: every edge on either line is
    /// multiplied by c and gains a parallel twin multiplied by c̃. On the
    /// control the pair splits (α, 0) / (0, γ); on the target the twin swaps
    /// the amplitudes. Mixed choices meet c·c̃ = 0.
    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let id = self.fresh_color();
        let c = ColorProduct::literal(ColorLiteral::color(id));
        let anti = ColorProduct::literal(ColorLiteral::anticolor(id));
        for (line, is_control) in [(control, true), (target, false)] {
            for e in self.edges_on(line) {
                let edge = self.vertical[e].clone();
                let twin_amp = if is_control {
                    [Cyclotomic::zero(1), edge.amp[1].clone()]
                } else {
                    [edge.amp[1].clone(), edge.amp[0].clone()]
                };
                let d = self.add_node(line, NodeKind::Departure);
                for a in self.h_in[edge.from].clone() {
                    self.add_horizontal(a, d).unwrap();
                }
                let a = self.add_node(line + 1, NodeKind::Arrival);
                for x in self.h_out[edge.to].clone() {
                    self.add_horizontal(a, x).unwrap();
                }
                self.add_vertical(d, a, edge.colors.mul(&anti), twin_amp).unwrap();
                let orig = self.edge_mut(e);
                orig.colors = orig.colors.mul(&c);
                if is_control {
                    orig.amp[1] = Cyclotomic::zero(1);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ratio, sqrt_of_integer};
    use crate::circuit::{hadamard, CircuitBuilder};
    use crate::tgraph::amplitude_dp;

    #[test]
    fn hadamard_on_zero_is_one_edge() {
        let mut b = CircuitBuilder::new(1);
        b.tensor(vec![(0, GateKind::one_qubit(hadamard()))]).unwrap();
        let g = build_from_circuit(&b.finish(1), 0).unwrap();
        assert_eq!(g.vertical_edges().len(), 1);
        let r = sqrt_of_integer(2).div_rational(&ratio(2, 1));
        assert_eq!(g.vertical_edges()[0].amp, [r.clone(), r]);
    }

    #[test]
    fn cnot_colors_two_lines() {
        let mut b = CircuitBuilder::new(3);
        b.tensor(vec![(0, GateKind::one_qubit(hadamard()))]).unwrap();
        b.cnot(vec![(0, 2)]).unwrap();
        let g = build_from_circuit(&b.finish(3), 0).unwrap();
        g.validate().unwrap();
        let rep = g.check_color_consistency();
        assert!(rep.consistent(), "{:?}", rep.violations);
        assert_eq!(rep.color_lines[&0].iter().copied().collect::<Vec<_>>(), vec![0, 2]);
        let r = sqrt_of_integer(2).div_rational(&ratio(2, 1));
        assert_eq!(amplitude_dp(&g, 0b101).unwrap(), r);
        assert_eq!(amplitude_dp(&g, 0b100).unwrap(), Cyclotomic::zero(1));
    }

    #[test]
    fn random_circuits_match_the_simulator() {
        use crate::circuit::random::{random_circuit, GateSet};
        use crate::sim::CompiledCircuit;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let lines = rng.gen_range(1..=5);
            let depth = rng.gen_range(0..=4);
            let c = random_circuit(&mut rng, lines, depth, GateSet::Standard);
            let z = rng.gen_range(0..1u64 << lines);
            let g = build_from_circuit(&c, z).unwrap();
            g.validate().unwrap();
            assert!(g.check_color_consistency().consistent());
            let out = CompiledCircuit::new(&c).unwrap().run_basis(z);
            for x in 0..1u64 << lines {
                assert_eq!(amplitude_dp(&g, x).unwrap(), out.amplitude(x), "{c:?} z={z} x={x}");
            }
        }
    }

    #[test]
    fn node_cap_is_enforced() {
        let mut b = CircuitBuilder::new(4);
        for _ in 0..6 {
            b.tensor(vec![(0, GateKind::one_qubit(hadamard())), (1, GateKind::toffoli(2))]).unwrap();
        }
        let c = b.finish(4);
        assert!(matches!(
            build_from_circuit_capped(&c, 0, 50),
            Err(GraphError::CapExceeded { what: "node count", .. })
        ));
        assert!(build_from_circuit(&c, 0).is_ok());
    }

    #[test]
    fn unlowered_gates_are_rejected() {
        let mut b = CircuitBuilder::new(3);
        b.tensor(vec![(0, GateKind::modq(3, 2))]).unwrap();
        assert!(matches!(
            build_from_circuit(&b.finish(3), 0),
            Err(GraphError::Unsupported(_))
        ));
    }
}
