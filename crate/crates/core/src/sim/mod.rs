//! Exact sparse state-vector simulation and dense operator materialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::arith::poly::lcm;
use crate::arith::Cyclotomic;
use crate::circuit::{Block, CircuitError, GateKind, Layer, LayeredCircuit};

/// Default line limit for dense operator materialization.
pub const DENSE_LINE_CAP: usize = 12;
/// Default line limit for sparse simulation.
pub const SPARSE_LINE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("layer spans {layer} lines but the state has {state}")]
    SpanMismatch { layer: usize, state: usize },
    #[error("{lines} lines exceed the cap of {cap}")]
    CapExceeded { lines: usize, cap: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Sparse amplitudes keyed by basis index; line 0 is the most significant bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    num_lines: usize,
    entries: BTreeMap<u64, Cyclotomic>,
}

impl StateVector {
    pub fn basis(num_lines: usize, index: u64) -> Self {
        assert!(num_lines < 64, "at most 63 lines are supported");
        assert!(index >> num_lines == 0, "basis index out of range");
        let mut entries = BTreeMap::new();
        entries.insert(index, Cyclotomic::one(1));
        StateVector { num_lines, entries }
    }

    /// Builds a state from bits, first entry = line 0.
    pub fn from_bits(bits: &[u8]) -> Self {
        Self::basis(bits.len(), bits_to_index(bits))
    }

    pub fn from_entries(num_lines: usize, entries: impl IntoIterator<Item = (u64, Cyclotomic)>) -> Self {
        let mut out = StateVector {
            num_lines,
            entries: BTreeMap::new(),
        };
        for (i, a) in entries {
            out.add_to(i, a);
        }
        out
    }

    pub fn num_lines(&self) -> usize {
        self.num_lines
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Nonzero entries in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = (&u64, &Cyclotomic)> {
        self.entries.iter()
    }

    pub fn amplitude(&self, index: u64) -> Cyclotomic {
        self.entries
            .get(&index)
            .cloned()
            .unwrap_or_else(|| Cyclotomic::zero(1))
    }

    /// |⟨z|ψ⟩|², a totally real element.
    pub fn projection_probability(&self, z: u64) -> Cyclotomic {
        self.amplitude(z).abs2()
    }

    /// Σ a·conj(a) over the support.
    pub fn norm_squared(&self) -> Cyclotomic {
        self.entries
            .values()
            .fold(Cyclotomic::zero(1), |acc, a| &acc + &a.abs2())
    }

    /// The single basis index holding all weight, if the state is a basis state
    /// with amplitude exactly 1.
    pub fn as_basis(&self) -> Option<u64> {
        if self.entries.len() == 1 {
            let (i, a) = self.entries.iter().next().unwrap();
            if a.is_one() {
                return Some(*i);
            }
        }
        None
    }

    fn add_to(&mut self, index: u64, value: Cyclotomic) {
        if value.is_zero() {
            return;
        }
        match self.entries.entry(index) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &value;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// `index : amplitude` lines, ascending.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, a) in &self.entries {
            let _ = writeln!(s, "{i} : {a}");
        }
        s
    }

    /// Parses the dump format.
    pub fn parse_dump(num_lines: usize, text: &str) -> Option<Self> {
        let mut entries = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (i, a) = line.split_once(" : ")?;
            entries.push((i.trim().parse().ok()?, a.trim().parse().ok()?));
        }
        Some(Self::from_entries(num_lines, entries))
    }

    pub fn apply_layer(&self, layer: &Layer) -> Result<StateVector, SimError> {
        let prepared = PreparedLayer::new(layer, self.num_lines, 1)?;
        Ok(prepared.apply(self))
    }
}

pub fn bits_to_index(bits: &[u8]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b & 1))
}

pub fn index_to_bits(index: u64, num_lines: usize) -> Vec<u8> {
    (0..num_lines)
        .map(|l| ((index >> (num_lines - 1 - l)) & 1) as u8)
        .collect()
}

/// A gate ready for repeated application: columns promoted to one order.
enum Prepared {
    Identity,
    Perm(GateKind),
    Controlled {
        ctl: u64,
        cols: [Vec<(u64, Cyclotomic)>; 2],
    },
    Table(Vec<Vec<(u64, Cyclotomic)>>),
}

struct PreparedBlock {
    shift: usize,
    width: usize,
    gate: Prepared,
}

enum PreparedLayer {
    Tensor(Vec<PreparedBlock>),
    Cnot(Vec<(u64, u64)>),
}

fn promote_col(col: Vec<(u64, Cyclotomic)>, order: u32) -> Vec<(u64, Cyclotomic)> {
    col.into_iter()
        .map(|(r, v)| {
            let n = lcm(order, v.order());
            (r, v.promote(n).expect("order multiple"))
        })
        .collect()
}

impl PreparedLayer {
    fn new(layer: &Layer, num_lines: usize, order: u32) -> Result<Self, SimError> {
        match layer {
            Layer::Tensor { blocks } => {
                let span: usize = blocks.iter().map(Block::num_lines).sum();
                if span != num_lines {
                    return Err(SimError::SpanMismatch {
                        layer: span,
                        state: num_lines,
                    });
                }
                let mut out = Vec::new();
                let mut line = 0;
                for b in blocks {
                    let width = b.num_lines();
                    let shift = num_lines - line - width;
                    line += width;
                    let gate = match b {
                        Block::Identity { .. } => Prepared::Identity,
                        Block::Gate(
                            g @ (GateKind::Fanout { .. }
                            | GateKind::ModQ { .. }
                            | GateKind::QudigitM { .. }
                            | GateKind::QudigitF { .. }),
                        ) => Prepared::Perm(g.clone()),
                        Block::Gate(GateKind::ControlledU { matrix, .. }) => {
                            let ctl = ((1u64 << width) - 1) & !1;
                            let col = |c: usize| {
                                promote_col(
                                    (0..2)
                                        .filter(|&r| !matrix.get(r, c).is_zero())
                                        .map(|r| (r as u64, matrix.get(r, c).clone()))
                                        .collect(),
                                    order,
                                )
                            };
                            Prepared::Controlled {
                                ctl,
                                cols: [col(0), col(1)],
                            }
                        }
                        Block::Gate(g) => Prepared::Table(
                            (0..1u64 << width)
                                .map(|x| promote_col(g.column(x), order))
                                .collect(),
                        ),
                    };
                    if !matches!(gate, Prepared::Identity) {
                        out.push(PreparedBlock { shift, width, gate });
                    }
                }
                Ok(PreparedLayer::Tensor(out))
            }
            Layer::Cnot { pairs } => {
                for &(c, t) in pairs {
                    if c >= num_lines || t >= num_lines {
                        return Err(SimError::SpanMismatch {
                            layer: c.max(t) + 1,
                            state: num_lines,
                        });
                    }
                }
                Ok(PreparedLayer::Cnot(
                    pairs
                        .iter()
                        .map(|&(c, t)| {
                            (1u64 << (num_lines - 1 - c), 1u64 << (num_lines - 1 - t))
                        })
                        .collect(),
                ))
            }
        }
    }

    fn apply(&self, s: &StateVector) -> StateVector {
        match self {
            PreparedLayer::Cnot(pairs) => StateVector {
                num_lines: s.num_lines,
                entries: s
                    .entries
                    .iter()
                    .map(|(&i, a)| {
                        let mut j = i;
                        for &(c, t) in pairs {
                            if i & c != 0 {
                                j ^= t;
                            }
                        }
                        (j, a.clone())
                    })
                    .collect(),
            },
            PreparedLayer::Tensor(blocks) => {
                // permutations compose into one pass
                let mut cur = s.clone();
                let mut perm_run: Vec<&PreparedBlock> = Vec::new();
                for b in blocks {
                    if let Prepared::Perm(_) = b.gate {
                        perm_run.push(b);
                        continue;
                    }
                    cur = apply_perms(&cur, &perm_run);
                    perm_run.clear();
                    cur = apply_mixing(&cur, b);
                }
                apply_perms(&cur, &perm_run)
            }
        }
    }
}

fn local_mask(width: usize) -> u64 {
    (1u64 << width) - 1
}

fn apply_perms(s: &StateVector, blocks: &[&PreparedBlock]) -> StateVector {
    if blocks.is_empty() {
        return s.clone();
    }
    let entries = s
        .entries
        .iter()
        .map(|(&i, a)| {
            let mut j = i;
            for b in blocks {
                if let Prepared::Perm(g) = &b.gate {
                    let m = local_mask(b.width) << b.shift;
                    let local = (i & m) >> b.shift;
                    let image = g.permute_basis(local).expect("permuting gate");
                    j = (j & !m) | (image << b.shift);
                }
            }
            (j, a.clone())
        })
        .collect();
    StateVector {
        num_lines: s.num_lines,
        entries,
    }
}

fn apply_mixing(s: &StateVector, b: &PreparedBlock) -> StateVector {
    let m = local_mask(b.width) << b.shift;
    let mut out = StateVector {
        num_lines: s.num_lines,
        entries: BTreeMap::new(),
    };
    for (&i, a) in &s.entries {
        let local = (i & m) >> b.shift;
        let rest = i & !m;
        match &b.gate {
            Prepared::Controlled { ctl, cols } => {
                if local & ctl != *ctl {
                    out.add_to(i, a.clone());
                } else {
                    for (r, v) in &cols[(local & 1) as usize] {
                        let j = rest | (((local & !1) | r) << b.shift);
                        out.add_to(j, a * v);
                    }
                }
            }
            Prepared::Table(cols) => {
                for (r, v) in &cols[local as usize] {
                    out.add_to(rest | (r << b.shift), a * v);
                }
            }
            _ => unreachable!(),
        }
    }
    out
}

/// Applies every layer in order; the circuit must be valid.
pub fn apply_circuit(s: &StateVector, c: &LayeredCircuit) -> Result<StateVector, SimError> {
    if c.num_lines() != s.num_lines {
        return Err(SimError::SpanMismatch {
            layer: c.num_lines(),
            state: s.num_lines,
        });
    }
    c.validate()?;
    let prepared = prepare(c)?;
    Ok(run_prepared(s, &prepared))
}

/// Simulation with an explicit line cap.
pub fn apply_circuit_capped(
    s: &StateVector,
    c: &LayeredCircuit,
    cap: usize,
) -> Result<StateVector, SimError> {
    if c.num_lines() > cap {
        return Err(SimError::CapExceeded {
            lines: c.num_lines(),
            cap,
        });
    }
    apply_circuit(s, c)
}

/// A circuit compiled for repeated simulation of many inputs.
pub struct CompiledCircuit {
    num_lines: usize,
    layers: Vec<PreparedLayer>,
}

impl CompiledCircuit {
    pub fn new(c: &LayeredCircuit) -> Result<Self, SimError> {
        c.validate()?;
        Ok(CompiledCircuit {
            num_lines: c.num_lines(),
            layers: prepare(c)?,
        })
    }

    pub fn num_lines(&self) -> usize {
        self.num_lines
    }

    pub fn run(&self, s: &StateVector) -> StateVector {
        assert_eq!(s.num_lines, self.num_lines, "state and circuit sizes differ");
        run_prepared(s, &self.layers)
    }

    pub fn run_basis(&self, index: u64) -> StateVector {
        self.run(&StateVector::basis(self.num_lines, index))
    }
}

fn prepare(c: &LayeredCircuit) -> Result<Vec<PreparedLayer>, SimError> {
    c.layers
        .iter()
        .map(|l| PreparedLayer::new(l, c.num_lines(), c.field_order))
        .collect()
}

fn run_prepared(s: &StateVector, layers: &[PreparedLayer]) -> StateVector {
    let mut cur = s.clone();
    for l in layers {
        cur = l.apply(&cur);
    }
    cur
}

/// Full operator of a circuit, stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseOperator {
    num_lines: usize,
    columns: Vec<StateVector>,
}

impl DenseOperator {
    pub fn dim(&self) -> usize {
        1 << self.num_lines
    }

    pub fn num_lines(&self) -> usize {
        self.num_lines
    }

    pub fn get(&self, row: u64, col: u64) -> Cyclotomic {
        self.columns[col as usize].amplitude(row)
    }

    pub fn column(&self, col: u64) -> &StateVector {
        &self.columns[col as usize]
    }

    pub fn identity(num_lines: usize) -> Self {
        DenseOperator {
            num_lines,
            columns: (0..1u64 << num_lines)
                .map(|i| StateVector::basis(num_lines, i))
                .collect(),
        }
    }

    /// Materializes a gate on its own lines.
    pub fn of_gate(g: &GateKind) -> Self {
        let w = g.num_lines();
        DenseOperator {
            num_lines: w,
            columns: (0..1u64 << w)
                .map(|x| StateVector::from_entries(w, g.column(x)))
                .collect(),
        }
    }

    /// `self · other` (apply `other` first).
    pub fn mul(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.num_lines, other.num_lines);
        let columns = other
            .columns
            .par_iter()
            .map(|col| {
                let mut acc = StateVector {
                    num_lines: self.num_lines,
                    entries: BTreeMap::new(),
                };
                for (&k, a) in &col.entries {
                    for (&r, v) in &self.columns[k as usize].entries {
                        acc.add_to(r, a * v);
                    }
                }
                acc
            })
            .collect();
        DenseOperator {
            num_lines: self.num_lines,
            columns,
        }
    }

    pub fn adjoint(&self) -> DenseOperator {
        let mut cols: Vec<Vec<(u64, Cyclotomic)>> = vec![Vec::new(); self.dim()];
        for (c, col) in self.columns.iter().enumerate() {
            for (&r, v) in &col.entries {
                cols[r as usize].push((c as u64, v.conj()));
            }
        }
        DenseOperator {
            num_lines: self.num_lines,
            columns: cols
                .into_iter()
                .map(|e| StateVector::from_entries(self.num_lines, e))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.columns
            .iter()
            .enumerate()
            .all(|(i, c)| c.as_basis() == Some(i as u64))
    }

    pub fn is_unitary(&self) -> bool {
        self.adjoint().mul(self).is_identity()
    }
}

/// Column `b` is the circuit applied to basis state `b`.
pub fn to_unitary(c: &LayeredCircuit) -> Result<DenseOperator, SimError> {
    to_unitary_capped(c, DENSE_LINE_CAP)
}

pub fn to_unitary_capped(c: &LayeredCircuit, cap: usize) -> Result<DenseOperator, SimError> {
    if c.num_lines() > cap {
        return Err(SimError::CapExceeded {
            lines: c.num_lines(),
            cap,
        });
    }
    let compiled = CompiledCircuit::new(c)?;
    let columns = (0..1u64 << c.num_lines())
        .into_par_iter()
        .map(|b| compiled.run_basis(b))
        .collect();
    Ok(DenseOperator {
        num_lines: c.num_lines(),
        columns,
    })
}
