//! Gate placement by logical wire. Wires are moved between lines with
//! controlled-not permutations so multi-line gates see contiguous spans.

use crate::arith::Matrix;
use crate::circuit::{CircuitBuilder, CircuitError, GateKind, Layer, LayeredCircuit};

#[derive(Clone, Debug)]
pub struct Checkpoint {
    layers: usize,
    line_of: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct WireBuilder {
    layers: Vec<Layer>,
    line_of: Vec<usize>,
}

impl WireBuilder {
    /// Wire `i` starts on line `i`.
    pub fn new(wires: usize) -> Self {
        WireBuilder {
            layers: Vec::new(),
            line_of: (0..wires).collect(),
        }
    }

    pub fn lines(&self) -> usize {
        self.line_of.len()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn line(&self, wire: usize) -> usize {
        self.line_of[wire]
    }

    fn push(&mut self, b: CircuitBuilder) {
        self.layers.extend(b.finish(0).layers);
    }

    fn fresh(&self) -> CircuitBuilder {
        CircuitBuilder::new(self.lines())
    }

    /// Puts wire `order[i]` on line `i`; always six layers.
    pub fn arrange(&mut self, order: &[usize]) -> Result<(), CircuitError> {
        let n = self.lines();
        if order.len() != n {
            return Err(CircuitError::Placement(format!(
                "arrangement lists {} of {n} wires",
                order.len()
            )));
        }
        let mut dest = vec![usize::MAX; n];
        for (new_line, &w) in order.iter().enumerate() {
            if w >= n || dest[self.line_of[w]] != usize::MAX {
                return Err(CircuitError::Placement(format!("{order:?} is not a wire order")));
            }
            dest[self.line_of[w]] = new_line;
        }
        let mut b = self.fresh();
        b.permute(&dest)?;
        self.push(b);
        for (new_line, &w) in order.iter().enumerate() {
            self.line_of[w] = new_line;
        }
        Ok(())
    }

    /// Full wire order: `before`, then `group`, then the remaining wires in
    /// their current line order.
    pub fn order_with(&self, before: &[usize], group: &[usize]) -> Vec<usize> {
        let mut rest: Vec<usize> = (0..self.lines()).collect();
        rest.sort_by_key(|&w| self.line_of[w]);
        rest.retain(|w| !before.contains(w) && !group.contains(w));
        let mut out = before.to_vec();
        out.extend_from_slice(group);
        out.extend(rest);
        out
    }

    fn span(&self, wires: &[usize]) -> Result<usize, CircuitError> {
        let start = self.line_of[wires[0]];
        for (i, &w) in wires.iter().enumerate() {
            if self.line_of[w] != start + i {
                return Err(CircuitError::Placement(format!(
                    "wires {wires:?} are not on consecutive lines"
                )));
            }
        }
        Ok(start)
    }

    /// One tensor layer; each gate acts on the listed wires in order.
    pub fn gates(&mut self, gates: Vec<(Vec<usize>, GateKind)>) -> Result<(), CircuitError> {
        let mut placed = Vec::new();
        for (wires, g) in gates {
            if wires.len() != g.num_lines() {
                return Err(CircuitError::Placement(format!(
                    "{} on {} lines given {} wires",
                    g.name(),
                    g.num_lines(),
                    wires.len()
                )));
            }
            placed.push((self.span(&wires)?, g));
        }
        let mut b = self.fresh();
        b.tensor(placed)?;
        self.push(b);
        Ok(())
    }

    /// One tensor layer applying `m` to each listed wire.
    pub fn each(&mut self, wires: &[usize], m: &Matrix) -> Result<(), CircuitError> {
        self.gates(
            wires
                .iter()
                .map(|&w| (vec![w], GateKind::one_qubit(m.clone())))
                .collect(),
        )
    }

    pub fn cnots(&mut self, pairs: &[(usize, usize)]) -> Result<(), CircuitError> {
        let mut b = self.fresh();
        b.cnot(pairs.iter().map(|&(c, t)| (self.line_of[c], self.line_of[t])).collect())?;
        self.push(b);
        Ok(())
    }

    pub fn identity_layers(&mut self, count: usize) {
        for _ in 0..count {
            let mut b = self.fresh();
            b.identity_layer();
            self.push(b);
        }
    }

    /// Appends `c` acting on `wires`, which must sit on consecutive lines.
    pub fn embed(&mut self, c: &LayeredCircuit, wires: &[usize]) -> Result<(), CircuitError> {
        if c.num_lines() != wires.len() {
            return Err(CircuitError::Placement(format!(
                "{}-line circuit on {} wires",
                c.num_lines(),
                wires.len()
            )));
        }
        let start = self.span(wires)?;
        let mut b = self.fresh();
        b.append_at(c, start)?;
        self.push(b);
        Ok(())
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            layers: self.layers.len(),
            line_of: self.line_of.clone(),
        }
    }

    /// Moves every wire back to its line at `cp`.
    pub fn restore(&mut self, cp: &Checkpoint) -> Result<(), CircuitError> {
        let mut order: Vec<usize> = (0..self.lines()).collect();
        order.sort_by_key(|&w| cp.line_of[w]);
        self.arrange(&order)
    }

    /// Appends the inverse of the layers between two checkpoints. The current
    /// layout must be the one at `to`; afterwards it is the one at `from`.
    pub fn undo(&mut self, from: &Checkpoint, to: &Checkpoint) -> Result<(), CircuitError> {
        if self.line_of != to.line_of {
            return Err(CircuitError::Placement(
                "wire layout differs from the one being undone".into(),
            ));
        }
        let inv: Vec<Layer> = self.layers[from.layers..to.layers]
            .iter()
            .rev()
            .map(Layer::inverse)
            .collect();
        self.layers.extend(inv);
        self.line_of = from.line_of.clone();
        Ok(())
    }

    /// Finishes with the first `num_inputs` wires as inputs. Every wire must
    /// be back on its own line.
    pub fn finish(self, num_inputs: usize) -> Result<LayeredCircuit, CircuitError> {
        if self.line_of.iter().enumerate().any(|(w, &l)| w != l) {
            return Err(CircuitError::Placement("wires not returned to their lines".into()));
        }
        let n = self.lines();
        Ok(LayeredCircuit::new(num_inputs, n - num_inputs, self.layers))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::CompiledCircuit;

    #[test]
    fn arrange_moves_wires_and_undo_restores() {
        let mut wb = WireBuilder::new(4);
        let cp0 = wb.checkpoint();
        wb.arrange(&[2, 0, 3, 1]).unwrap();
        assert_eq!(wb.line(2), 0);
        wb.cnots(&[(2, 1)]).unwrap();
        let cp1 = wb.checkpoint();
        wb.undo(&cp0, &cp1).unwrap();
        let c = wb.finish(4).unwrap();
        assert_eq!(c.depth(), 14);
        let sim = CompiledCircuit::new(&c).unwrap();
        for x in 0..16 {
            assert_eq!(sim.run_basis(x).as_basis(), Some(x));
        }
    }

    #[test]
    fn gates_need_consecutive_wires() {
        let mut wb = WireBuilder::new(3);
        assert!(wb.gates(vec![(vec![0, 2], GateKind::toffoli(1))]).is_err());
        wb.arrange(&[0, 2, 1]).unwrap();
        assert!(wb.gates(vec![(vec![0, 2], GateKind::toffoli(1))]).is_ok());
        assert!(wb.finish(3).is_err());
    }
}
