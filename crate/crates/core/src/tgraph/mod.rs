//! Colored tensor graphs: every source-to-terminal path spells a product
//! vector, the graph's vector is the sum over paths, and colored edges let
//! paths cancel in pairs.
//!
//! Nodes are stored split: at each height an *arrival* receives the vertical
//! edge from above and a *departure* emits the vertical edge below, with
//! horizontal edges running only from arrivals to departures. Any graph with
//! chains of horizontal edges has an equivalent split form; the split form
//! makes good terms explicit (an arrival never has horizontal in-edges, a
//! departure never has horizontal out-edges).

mod build;
mod colors;
mod eval;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::arith::{ratio, sqrt_of_integer, Cyclotomic};
use crate::sim::StateVector;

pub use build::{build_from_circuit, build_from_circuit_capped, NODE_CAP};
pub use colors::{ColorLiteral, ColorProduct, ColorSum};
pub use eval::{
    amplitude_dp, amplitude_dp_capped, amplitude_pathsum, amplitude_pathsum_capped, COLOR_SUM_CAP,
    PATH_CAP,
};

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("malformed tensor graph: {0}")]
    Structure(String),
    #[error("gate {0} has no tensor-graph handler; lower the circuit first")]
    Unsupported(String),
    #[error("{what} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, cap: u128 },
    #[error("amplitude keeps unresolved colors: {0}")]
    UnresolvedColors(String),
    #[error("basis state {index} does not fit {lines} lines")]
    BadBasis { index: u64, lines: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Arrival,
    Departure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Node {
    pub height: usize,
    pub kind: NodeKind,
}

/// Vertical edge on line `line`, from a departure at height `line` to an
/// arrival at height `line + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub line: usize,
    pub colors: ColorProduct,
    /// Amplitudes of |0⟩ and |1⟩.
    pub amp: [Cyclotomic; 2],
}

#[derive(Clone, Debug)]
pub struct TensorGraph {
    num_lines: usize,
    nodes: Vec<Node>,
    horizontal: Vec<(NodeId, NodeId)>,
    vertical: Vec<VerticalEdge>,
    h_out: Vec<Vec<NodeId>>,
    h_in: Vec<Vec<NodeId>>,
    v_out: Vec<Option<EdgeId>>,
    v_in: Vec<Option<EdgeId>>,
    source: NodeId,
    terminal: NodeId,
    next_color: u32,
    node_cap: usize,
}

/// Structural color checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColorReport {
    /// Lines on which each color id occurs.
    pub color_lines: BTreeMap<u32, BTreeSet<usize>>,
    pub max_colors_per_line: usize,
    pub violations: Vec<String>,
}

impl ColorReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TensorGraph {
    /// Source arrival at height 0 and terminal departure at height
    /// `num_lines`, not yet connected.
    pub fn new(num_lines: usize) -> Self {
        let mut g = TensorGraph {
            num_lines,
            nodes: Vec::new(),
            horizontal: Vec::new(),
            vertical: Vec::new(),
            h_out: Vec::new(),
            h_in: Vec::new(),
            v_out: Vec::new(),
            v_in: Vec::new(),
            source: 0,
            terminal: 0,
            next_color: 0,
            node_cap: NODE_CAP,
        };
        g.source = g.add_node(0, NodeKind::Arrival);
        g.terminal = g.add_node(num_lines, NodeKind::Departure);
        g
    }

    /// Single-path chain for the basis state `bits` (line 0 first).
    pub fn chain(bits: &[u8]) -> Self {
        let n = bits.len();
        let mut g = Self::new(n);
        let mut arrival = g.source;
        for (line, &b) in bits.iter().enumerate() {
            let d = g.add_node(line, NodeKind::Departure);
            g.add_horizontal(arrival, d).unwrap();
            let a = g.add_node(line + 1, NodeKind::Arrival);
            let amp = if b == 0 {
                [Cyclotomic::one(1), Cyclotomic::zero(1)]
            } else {
                [Cyclotomic::zero(1), Cyclotomic::one(1)]
            };
            g.add_vertical(d, a, ColorProduct::one(), amp).unwrap();
            arrival = a;
        }
        let t = g.terminal;
        g.add_horizontal(arrival, t).unwrap();
        g
    }

    pub fn num_lines(&self) -> usize {
        self.num_lines
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn terminal(&self) -> NodeId {
        self.terminal
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn horizontal_edges(&self) -> &[(NodeId, NodeId)] {
        &self.horizontal
    }

    pub fn vertical_edges(&self) -> &[VerticalEdge] {
        &self.vertical
    }

    pub fn vertical_out(&self, d: NodeId) -> Option<EdgeId> {
        self.v_out[d]
    }

    pub fn horizontal_out(&self, a: NodeId) -> &[NodeId] {
        &self.h_out[a]
    }

    pub fn horizontal_in(&self, d: NodeId) -> &[NodeId] {
        &self.h_in[d]
    }

    pub fn add_node(&mut self, height: usize, kind: NodeKind) -> NodeId {
        self.nodes.push(Node { height, kind });
        self.h_out.push(Vec::new());
        self.h_in.push(Vec::new());
        self.v_out.push(None);
        self.v_in.push(None);
        self.nodes.len() - 1
    }

    pub fn add_horizontal(&mut self, a: NodeId, d: NodeId) -> Result<(), GraphError> {
        let (na, nd) = (self.nodes[a], self.nodes[d]);
        if na.kind != NodeKind::Arrival || nd.kind != NodeKind::Departure || na.height != nd.height {
            return Err(GraphError::Structure(format!(
                "horizontal edge {a} -> {d} must join an arrival to a departure of equal height"
            )));
        }
        self.horizontal.push((a, d));
        self.h_out[a].push(d);
        self.h_in[d].push(a);
        Ok(())
    }

    pub fn add_vertical(
        &mut self,
        d: NodeId,
        a: NodeId,
        colors: ColorProduct,
        amp: [Cyclotomic; 2],
    ) -> Result<EdgeId, GraphError> {
        let (nd, na) = (self.nodes[d], self.nodes[a]);
        if nd.kind != NodeKind::Departure || na.kind != NodeKind::Arrival || na.height != nd.height + 1 {
            return Err(GraphError::Structure(format!(
                "vertical edge {d} -> {a} must run from a departure one height down to an arrival"
            )));
        }
        if self.v_out[d].is_some() || self.v_in[a].is_some() {
            return Err(GraphError::Structure(format!("vertical degree above 1 at edge {d} -> {a}")));
        }
        let id = self.vertical.len();
        self.vertical.push(VerticalEdge {
            from: d,
            to: a,
            line: nd.height,
            colors,
            amp,
        });
        self.v_out[d] = Some(id);
        self.v_in[a] = Some(id);
        Ok(id)
    }

    pub(crate) fn edge_mut(&mut self, e: EdgeId) -> &mut VerticalEdge {
        &mut self.vertical[e]
    }

    pub(crate) fn fresh_color(&mut self) -> u32 {
        self.next_color += 1;
        self.next_color - 1
    }

    pub fn colors_used(&self) -> u32 {
        self.next_color
    }

    /// Checks the defining conditions: one source, one terminal, every other
    /// arrival fed by a vertical edge and every other departure feeding one,
    /// and every node on some source-to-terminal path.
    pub fn validate(&self) -> Result<(), GraphError> {
        let bad = |m: String| Err(GraphError::Structure(m));
        for (id, n) in self.nodes.iter().enumerate() {
            match n.kind {
                NodeKind::Arrival if id != self.source && self.v_in[id].is_none() => {
                    return bad(format!("arrival {id} has no vertical in-edge"));
                }
                NodeKind::Departure if id != self.terminal && self.v_out[id].is_none() => {
                    return bad(format!("departure {id} has no vertical out-edge"));
                }
                _ => {}
            }
        }
        if self.v_in[self.source].is_some() || self.v_out[self.terminal].is_some() {
            return bad("source or terminal carries a vertical edge".into());
        }
        let fwd = self.reach(self.source, true);
        let bwd = self.reach(self.terminal, false);
        if let Some(id) = (0..self.nodes.len()).find(|&i| !fwd[i] || !bwd[i]) {
            return bad(format!("node {id} lies on no source-to-terminal path"));
        }
        Ok(())
    }

    fn reach(&self, from: NodeId, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(n) = stack.pop() {
            let next: Vec<NodeId> = if forward {
                match self.nodes[n].kind {
                    NodeKind::Arrival => self.h_out[n].clone(),
                    NodeKind::Departure => self.v_out[n].map(|e| self.vertical[e].to).into_iter().collect(),
                }
            } else {
                match self.nodes[n].kind {
                    NodeKind::Departure => self.h_in[n].clone(),
                    NodeKind::Arrival => self.v_in[n].map(|e| self.vertical[e].from).into_iter().collect(),
                }
            };
            for m in next {
                if !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        seen
    }

    /// Node ids at each height, arrivals before departures.
    pub fn nodes_by_height(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.num_lines + 1];
        for kind in [NodeKind::Arrival, NodeKind::Departure] {
            for (id, n) in self.nodes.iter().enumerate() {
                if n.kind == kind {
                    out[n.height].push(id);
                }
            }
        }
        out
    }

    /// Largest number of nodes at one height, arrivals and departures both
    /// counted.
    pub fn width(&self) -> usize {
        self.nodes_by_height().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of source-to-terminal paths, saturating.
    pub fn path_count(&self) -> u128 {
        let mut count = vec![0u128; self.nodes.len()];
        count[self.source] = 1;
        for level in self.nodes_by_height() {
            for n in level {
                let c = match self.nodes[n].kind {
                    NodeKind::Arrival => match self.v_in[n] {
                        Some(e) => count[self.vertical[e].from],
                        None => count[n],
                    },
                    NodeKind::Departure => self.h_in[n]
                        .iter()
                        .fold(0u128, |acc, &a| acc.saturating_add(count[a])),
                };
                count[n] = c;
            }
        }
        count[self.terminal]
    }

    pub fn check_color_consistency(&self) -> ColorReport {
        let mut report = ColorReport::default();
        let mut per_line: Vec<Option<BTreeSet<u32>>> = vec![None; self.num_lines];
        for e in &self.vertical {
            if e.colors.is_annihilated() {
                report
                    .violations
                    .push(format!("edge {} -> {} carries an annihilated product", e.from, e.to));
                continue;
            }
            let ids: BTreeSet<u32> = e.colors.ids().collect();
            for &id in &ids {
                report.color_lines.entry(id).or_default().insert(e.line);
            }
            match &per_line[e.line] {
                None => per_line[e.line] = Some(ids),
                Some(prev) if *prev != ids => report.violations.push(format!(
                    "line {} mixes color sets {:?} and {:?}",
                    e.line, prev, ids
                )),
                _ => {}
            }
        }
        for (id, lines) in &report.color_lines {
            if lines.len() != 2 {
                report
                    .violations
                    .push(format!("color {id} occurs on {} lines, expected 2", lines.len()));
            }
        }
        report.max_colors_per_line = per_line.iter().flatten().map(BTreeSet::len).max().unwrap_or(0);
        report
    }

    /// Most colors open at once: a color is open strictly between its two
    /// lines and on the later one.
    pub fn color_depth(&self) -> usize {
        let report = self.check_color_consistency();
        let mut open = vec![0usize; self.num_lines + 1];
        for lines in report.color_lines.values() {
            let lo = *lines.iter().next().unwrap();
            let hi = *lines.iter().last().unwrap();
            for h in lo + 1..=hi {
                open[h] += 1;
            }
        }
        open.into_iter().max().unwrap_or(0)
    }

    /// Every source-to-terminal path as its vertical edges, top first.
    pub fn paths(&self, cap: u128) -> Result<Vec<Vec<EdgeId>>, GraphError> {
        if self.path_count() > cap {
            return Err(GraphError::CapExceeded { what: "path count", cap });
        }
        let mut out = Vec::new();
        let mut stack: Vec<(NodeId, Vec<EdgeId>)> = vec![(self.source, Vec::new())];
        while let Some((n, path)) = stack.pop() {
            if n == self.terminal {
                out.push(path);
                continue;
            }
            match self.nodes[n].kind {
                NodeKind::Arrival => {
                    for &d in self.h_out[n].iter().rev() {
                        stack.push((d, path.clone()));
                    }
                }
                NodeKind::Departure => {
                    if let Some(e) = self.v_out[n] {
                        let mut p = path;
                        p.push(e);
                        stack.push((self.vertical[e].to, p));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Coefficient and color product of basis state `x` along one path.
    pub fn path_term(&self, path: &[EdgeId], x: u64) -> (Cyclotomic, ColorProduct) {
        let mut amp = Cyclotomic::one(1);
        let mut colors = ColorProduct::one();
        for &e in path {
            let edge = &self.vertical[e];
            let bit = (x >> (self.num_lines - 1 - edge.line)) & 1;
            amp = &amp * &edge.amp[bit as usize];
            colors = colors.mul(&edge.colors);
        }
        (amp, colors)
    }

    /// Product vector spelled by one path, with its color product.
    pub fn path_vector(&self, path: &[EdgeId]) -> (ColorProduct, StateVector) {
        let colors = path
            .iter()
            .fold(ColorProduct::one(), |acc, &e| acc.mul(&self.vertical[e].colors));
        let entries: Vec<(u64, Cyclotomic)> = (0..1u64 << self.num_lines)
            .map(|x| (x, self.path_term(path, x).0))
            .collect();
        (colors, StateVector::from_entries(self.num_lines, entries))
    }

    /// Line-oriented dump: nodes, then horizontal and vertical edges.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "tensor-graph lines {} nodes {} source {} terminal {}",
            self.num_lines,
            self.nodes.len(),
            self.source,
            self.terminal
        );
        for (id, n) in self.nodes.iter().enumerate() {
            let kind = match n.kind {
                NodeKind::Arrival => "arrival",
                NodeKind::Departure => "departure",
            };
            let _ = writeln!(s, "node {id} height {} {kind}", n.height);
        }
        for (a, d) in &self.horizontal {
            let _ = writeln!(s, "h {a} -> {d}");
        }
        for e in &self.vertical {
            let _ = writeln!(
                s,
                "v {} -> {} line {} colors {} amp {} {}",
                e.from, e.to, e.line, e.colors, e.amp[0], e.amp[1]
            );
        }
        s
    }

    /// Graphviz rendering; vertical edges are labelled `{colors} amp0,amp1`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph tensor_graph {\n  rankdir=TB;\n  node [shape=point];\n");
        for level in self.nodes_by_height() {
            let ids: Vec<String> = level.iter().map(|n| format!("n{n}")).collect();
            let _ = writeln!(s, "  {{ rank=same; {} }}", ids.join("; "));
        }
        let _ = writeln!(s, "  n{} [shape=circle, label=\"s\"];", self.source);
        let _ = writeln!(s, "  n{} [shape=circle, label=\"t\"];", self.terminal);
        for (a, d) in &self.horizontal {
            let _ = writeln!(s, "  n{a} -> n{d} [style=dashed];");
        }
        for e in &self.vertical {
            let _ = writeln!(
                s,
                "  n{} -> n{} [label=\"{{{}}} {},{}\"];",
                e.from,
                e.to,
                e.colors,
                short(&e.amp[0]),
                short(&e.amp[1])
            );
        }
        s.push_str("}\n");
        s
    }
}

/// Rationals as `p/q`, everything else in the exact cyclotomic form.
fn short(c: &Cyclotomic) -> String {
    match c.to_rational() {
        Some(r) => r.to_string(),
        None => c.to_string(),
    }
}

fn amp(a: Cyclotomic, b: Cyclotomic) -> [Cyclotomic; 2] {
    [a, b]
}

/// Two disjoint chains joined at the source and terminal: the left one spells
/// |1⟩ ⊗ (|0⟩+|1⟩)/√2 ⊗ ½|0⟩ and the right one |0⟩ ⊗ (|0⟩−|1⟩)/√2 ⊗ ½|0⟩.
pub fn two_path_example() -> TensorGraph {
    let r = sqrt_of_integer(2).div_rational(&ratio(2, 1));
    let half = Cyclotomic::from_rational(&ratio(1, 2), 1);
    let (zero, one) = (Cyclotomic::zero(1), Cyclotomic::one(1));
    let left = [
        amp(zero.clone(), one.clone()),
        amp(r.clone(), r.clone()),
        amp(half.clone(), zero.clone()),
    ];
    let right = [amp(one, zero.clone()), amp(r.clone(), -&r), amp(half, zero)];
    let mut g = TensorGraph::new(3);
    for chain in [left, right] {
        let mut arrival = g.source;
        for (line, a) in chain.into_iter().enumerate() {
            let d = g.add_node(line, NodeKind::Departure);
            g.add_horizontal(arrival, d).unwrap();
            let next = g.add_node(line + 1, NodeKind::Arrival);
            g.add_vertical(d, next, ColorProduct::one(), a).unwrap();
            arrival = next;
        }
        let t = g.terminal;
        g.add_horizontal(arrival, t).unwrap();
    }
    g
}

/// Three lines, one color `b` (id 0). Top: left edge {b}(−1/√2,−1/√2), right
/// edge {b̃}(1/√2,−1/√2), both feeding the shared middle edge {1}(−1/√2,1/√2);
/// bottom: left edge {b}(1,0), right edge {b̃}(0,1).
pub fn colored_example() -> TensorGraph {
    let r = sqrt_of_integer(2).div_rational(&ratio(2, 1));
    let (zero, one) = (Cyclotomic::zero(1), Cyclotomic::one(1));
    let b = ColorProduct::literal(ColorLiteral::color(0));
    let nb = ColorProduct::literal(ColorLiteral::anticolor(0));
    let mut g = TensorGraph::new(3);
    g.next_color = 1;
    let (s, t) = (g.source, g.terminal);
    let dl0 = g.add_node(0, NodeKind::Departure);
    let dr0 = g.add_node(0, NodeKind::Departure);
    g.add_horizontal(s, dl0).unwrap();
    g.add_horizontal(s, dr0).unwrap();
    let al1 = g.add_node(1, NodeKind::Arrival);
    let ar1 = g.add_node(1, NodeKind::Arrival);
    g.add_vertical(dl0, al1, b.clone(), amp(-&r, -&r)).unwrap();
    g.add_vertical(dr0, ar1, nb.clone(), amp(r.clone(), -&r)).unwrap();
    let d1 = g.add_node(1, NodeKind::Departure);
    g.add_horizontal(al1, d1).unwrap();
    g.add_horizontal(ar1, d1).unwrap();
    let a2 = g.add_node(2, NodeKind::Arrival);
    g.add_vertical(d1, a2, ColorProduct::one(), amp(-&r, r.clone())).unwrap();
    let dl2 = g.add_node(2, NodeKind::Departure);
    let dr2 = g.add_node(2, NodeKind::Departure);
    g.add_horizontal(a2, dl2).unwrap();
    g.add_horizontal(a2, dr2).unwrap();
    let al3 = g.add_node(3, NodeKind::Arrival);
    let ar3 = g.add_node(3, NodeKind::Arrival);
    g.add_vertical(dl2, al3, b, amp(one.clone(), zero.clone())).unwrap();
    g.add_vertical(dr2, ar3, nb, amp(zero, one)).unwrap();
    g.add_horizontal(al3, t).unwrap();
    g.add_horizontal(ar3, t).unwrap();
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_is_valid_and_narrow() {
        let g = TensorGraph::chain(&[1, 0, 1]);
        g.validate().unwrap();
        assert_eq!(g.width(), 2);
        assert_eq!(g.path_count(), 1);
        let amps: Vec<(Cyclotomic, Cyclotomic)> = g
            .vertical_edges()
            .iter()
            .map(|e| (e.amp[0].clone(), e.amp[1].clone()))
            .collect();
        let (o, z) = (Cyclotomic::one(1), Cyclotomic::zero(1));
        assert_eq!(amps, vec![(z.clone(), o.clone()), (o.clone(), z.clone()), (z, o)]);
        assert_eq!(g.color_depth(), 0);
    }

    #[test]
    fn examples_are_well_formed() {
        for g in [two_path_example(), colored_example()] {
            g.validate().unwrap();
            assert!(g.check_color_consistency().consistent());
        }
        assert_eq!(two_path_example().path_count(), 2);
        assert_eq!(colored_example().path_count(), 4);
        assert_eq!(colored_example().color_depth(), 1);
    }

    #[test]
    fn structural_errors() {
        let mut g = TensorGraph::new(1);
        let d = g.add_node(0, NodeKind::Departure);
        assert!(g.add_horizontal(d, g.source()).is_err());
        let a = g.add_node(1, NodeKind::Arrival);
        let one = [Cyclotomic::one(1), Cyclotomic::zero(1)];
        g.add_vertical(d, a, ColorProduct::one(), one.clone()).unwrap();
        assert!(g.add_vertical(d, a, ColorProduct::one(), one).is_err());
        // not yet linked to the source or terminal
        assert!(g.validate().is_err());
    }

    #[test]
    fn dumps_mention_every_edge() {
        let g = colored_example();
        assert_eq!(g.dump().lines().filter(|l| l.starts_with("v ")).count(), 5);
        assert!(g.to_dot().contains("{~c0} 0,1"));
    }
}
