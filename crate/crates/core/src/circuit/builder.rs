use super::{Block, CircuitError, GateKind, Layer, LayeredCircuit};

/// Incremental construction of a layered circuit on a fixed number of lines.
#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    lines: usize,
    layers: Vec<Layer>,
}

impl CircuitBuilder {
    pub fn new(lines: usize) -> Self {
        CircuitBuilder {
            lines,
            layers: Vec::new(),
        }
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Adds a tensor layer with each gate starting at the given line; the gaps
    /// are filled with identity blocks.
    pub fn tensor(&mut self, mut gates: Vec<(usize, GateKind)>) -> Result<&mut Self, CircuitError> {
        gates.sort_by_key(|(start, _)| *start);
        let mut blocks = Vec::new();
        let mut line = 0;
        for (start, g) in gates {
            if start < line {
                return Err(CircuitError::Placement(format!(
                    "{} at line {start} overlaps the previous gate ending at {line}",
                    g.name()
                )));
            }
            if start > line {
                blocks.push(Block::Identity { width: start - line });
            }
            line = start + g.num_lines();
            blocks.push(Block::Gate(g));
        }
        if line > self.lines {
            return Err(CircuitError::Placement(format!(
                "gates reach line {line} on a {}-line register",
                self.lines
            )));
        }
        if line < self.lines {
            blocks.push(Block::Identity {
                width: self.lines - line,
            });
        }
        self.layers.push(Layer::Tensor { blocks });
        Ok(self)
    }

    /// A tensor layer with no gates.
    pub fn identity_layer(&mut self) -> &mut Self {
        self.layers.push(Layer::Tensor {
            blocks: vec![Block::Identity { width: self.lines }],
        });
        self
    }

    pub fn cnot(&mut self, pairs: Vec<(usize, usize)>) -> Result<&mut Self, CircuitError> {
        let mut used = vec![false; self.lines];
        for &(c, t) in &pairs {
            if c >= self.lines || t >= self.lines || c == t {
                return Err(CircuitError::Placement(format!("bad controlled-not pair ({c},{t})")));
            }
            for l in [c, t] {
                if std::mem::replace(&mut used[l], true) {
                    return Err(CircuitError::Placement(format!("line {l} used twice in one layer")));
                }
            }
        }
        self.layers.push(Layer::Cnot { pairs });
        Ok(self)
    }

    /// Moves the content of line `i` to line `dest[i]`; always six layers.
    pub fn permute(&mut self, dest: &[usize]) -> Result<&mut Self, CircuitError> {
        if dest.len() != self.lines {
            return Err(CircuitError::Placement(format!(
                "permutation of {} lines on a {}-line register",
                dest.len(),
                self.lines
            )));
        }
        self.layers.extend(permutation_layers(dest)?);
        Ok(self)
    }

    pub fn push_layer(&mut self, layer: Layer) -> &mut Self {
        self.layers.push(layer);
        self
    }

    /// Appends the layers of `c`, placed on lines `offset..offset + c.num_lines()`.
    pub fn append_at(&mut self, c: &LayeredCircuit, offset: usize) -> Result<&mut Self, CircuitError> {
        let width = c.num_lines();
        if offset + width > self.lines {
            return Err(CircuitError::Placement(format!(
                "{width}-line circuit at offset {offset} exceeds {} lines",
                self.lines
            )));
        }
        for layer in &c.layers {
            let placed = match layer {
                Layer::Tensor { blocks } => {
                    let mut out = Vec::new();
                    if offset > 0 {
                        out.push(Block::Identity { width: offset });
                    }
                    out.extend(blocks.iter().cloned());
                    let rest = self.lines - offset - width;
                    if rest > 0 {
                        out.push(Block::Identity { width: rest });
                    }
                    Layer::Tensor { blocks: merge_identities(out) }
                }
                Layer::Cnot { pairs } => Layer::Cnot {
                    pairs: pairs.iter().map(|&(a, b)| (a + offset, b + offset)).collect(),
                },
            };
            self.layers.push(placed);
        }
        Ok(self)
    }

    pub fn append(&mut self, c: &LayeredCircuit) -> Result<&mut Self, CircuitError> {
        if c.num_lines() != self.lines {
            return Err(CircuitError::Placement(format!(
                "appending a {}-line circuit to {} lines",
                c.num_lines(),
                self.lines
            )));
        }
        self.append_at(c, 0)
    }

    pub fn finish(self, num_inputs: usize) -> LayeredCircuit {
        assert!(num_inputs <= self.lines);
        LayeredCircuit::new(num_inputs, self.lines - num_inputs, self.layers)
    }
}

fn merge_identities(blocks: Vec<Block>) -> Vec<Block> {
    let mut out: Vec<Block> = Vec::new();
    for b in blocks {
        if let (Some(Block::Identity { width: w }), Block::Identity { width }) = (out.last_mut(), &b) {
            *w += width;
            continue;
        }
        out.push(b);
    }
    out
}

/// Six controlled-not layers moving the content of line `i` to line `dest[i]`.
/// The permutation is split into two involutions, each a set of disjoint
/// swaps, and a swap is three controlled-nots.
pub fn permutation_layers(dest: &[usize]) -> Result<Vec<Layer>, CircuitError> {
    let n = dest.len();
    let mut seen = vec![false; n];
    for &d in dest {
        if d >= n || std::mem::replace(&mut seen[d], true) {
            return Err(CircuitError::Placement(format!("{dest:?} is not a permutation")));
        }
    }
    let mut first = Vec::new();
    let mut second = Vec::new();
    let mut visited = vec![false; n];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut cycle = vec![start];
        visited[start] = true;
        let mut cur = dest[start];
        while cur != start {
            visited[cur] = true;
            cycle.push(cur);
            cur = dest[cur];
        }
        let len = cycle.len();
        if len == 1 {
            continue;
        }
        // a_i -> a_{-i}, then a_i -> a_{1-i}: composite a_i -> a_{i+1}
        for i in 0..len {
            let j = (len - i) % len;
            if i < j {
                first.push((cycle[i], cycle[j]));
            }
            let j = (len + 1 - i) % len;
            if i < j {
                second.push((cycle[i], cycle[j]));
            }
        }
    }
    let mut layers = Vec::with_capacity(6);
    for swaps in [first, second] {
        let fwd: Vec<(usize, usize)> = swaps.clone();
        let back: Vec<(usize, usize)> = swaps.iter().map(|&(a, b)| (b, a)).collect();
        layers.push(Layer::Cnot { pairs: fwd.clone() });
        layers.push(Layer::Cnot { pairs: back });
        layers.push(Layer::Cnot { pairs: fwd });
    }
    Ok(layers)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Tracks where line contents end up under classical controlled-not semantics.
    fn apply_classical(layers: &[Layer], bits: &mut [u8]) {
        for l in layers {
            if let Layer::Cnot { pairs } = l {
                for &(c, t) in pairs {
                    bits[t] ^= bits[c];
                }
            }
        }
    }

    #[test]
    fn permutations_move_contents() {
        let perms: Vec<Vec<usize>> = vec![
            vec![0, 1, 2],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![3, 0, 4, 1, 2],
            vec![5, 4, 3, 2, 1, 0],
            vec![2, 3, 4, 5, 6, 0, 1],
        ];
        for dest in perms {
            let layers = permutation_layers(&dest).unwrap();
            assert_eq!(layers.len(), 6);
            let n = dest.len();
            for x in 0..(1u32 << n) {
                let mut bits: Vec<u8> = (0..n).map(|i| ((x >> i) & 1) as u8).collect();
                let orig = bits.clone();
                apply_classical(&layers, &mut bits);
                for i in 0..n {
                    assert_eq!(bits[dest[i]], orig[i], "{dest:?}");
                }
            }
        }
    }

    #[test]
    fn tensor_rejects_overlap() {
        let mut b = CircuitBuilder::new(3);
        let err = b.tensor(vec![(0, GateKind::toffoli(1)), (1, GateKind::toffoli(1))]);
        assert!(err.is_err());
        assert!(b.tensor(vec![(1, GateKind::toffoli(1))]).is_ok());
        let c = b.finish(3);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn append_at_offset() {
        let mut inner = CircuitBuilder::new(2);
        inner.tensor(vec![(0, GateKind::toffoli(1))]).unwrap();
        inner.cnot(vec![(1, 0)]).unwrap();
        let inner = inner.finish(2);
        let mut outer = CircuitBuilder::new(5);
        outer.append_at(&inner, 2).unwrap();
        let c = outer.finish(5);
        assert!(c.validate().is_ok());
        assert_eq!(c.layers[1], Layer::Cnot { pairs: vec![(3, 2)] });
    }
}
