//! Constant-depth constructions between fanout, parity, MOD_q and the
//! qudigit gates, each paired with the operator it realizes.

mod constructions;
pub mod decompose;
mod lower;
pub mod matrices;
pub mod registry;
mod wires;

use std::fmt;
use std::sync::Arc;

use crate::circuit::{GateKind, LayeredCircuit};

pub use constructions::*;
pub use lower::{lower_result, lower_to_primitives};
pub use wires::{Checkpoint, WireBuilder};

/// A reversible classical map on the target lines' basis index.
pub type BasisMap = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// The operator a construction realizes on its target lines.
#[derive(Clone)]
pub enum TargetSpec {
    Gate(GateKind),
    Circuit(LayeredCircuit),
    /// Preceded by H on the first line, maps |0^n⟩ to (|0^n⟩ + |1^n⟩)/√2.
    CatState { n: usize },
    Map { name: String, map: BasisMap },
}

impl TargetSpec {
    pub fn describe(&self) -> String {
        match self {
            TargetSpec::Gate(g) => format!("{} on {} lines", g.name(), g.num_lines()),
            TargetSpec::Circuit(c) => format!("circuit on {} lines, depth {}", c.num_lines(), c.depth()),
            TargetSpec::CatState { n } => format!("cat state on {n} lines"),
            TargetSpec::Map { name, .. } => name.clone(),
        }
    }
}

impl fmt::Debug for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::Gate(g) => f.debug_tuple("Gate").field(g).finish(),
            TargetSpec::Circuit(c) => f.debug_tuple("Circuit").field(c).finish(),
            TargetSpec::CatState { n } => f.debug_struct("CatState").field("n", n).finish(),
            TargetSpec::Map { name, .. } => f.debug_struct("Map").field("name", name).finish(),
        }
    }
}

/// Which basis inputs on the target lines the realization is claimed for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputDomain {
    All,
    /// Target lines split into k-bit digit blocks, each holding a value < q.
    Digits { q: u32 },
}

impl InputDomain {
    pub fn contains(&self, x: u64, target_lines: usize) -> bool {
        match *self {
            InputDomain::All => true,
            InputDomain::Digits { q } => {
                let k = crate::circuit::digit_bits(q);
                let blocks = target_lines / k;
                (0..blocks).all(|i| (x >> (i * k)) & ((1 << k) - 1) < u64::from(q))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub name: String,
    /// One-line account of how the circuit is wired.
    pub description: String,
    pub circuit: LayeredCircuit,
    pub target_lines: Vec<usize>,
    /// Lines that start and must end at 0.
    pub work_lines: Vec<usize>,
    pub target: TargetSpec,
    pub domain: InputDomain,
}

impl ConstructionResult {
    /// Target lines first, work lines after.
    pub fn new(
        name: impl Into<String>,
        description: impl Into<String>,
        circuit: LayeredCircuit,
        num_targets: usize,
        target: TargetSpec,
    ) -> Self {
        let lines = circuit.num_lines();
        ConstructionResult {
            name: name.into(),
            description: description.into(),
            circuit,
            target_lines: (0..num_targets).collect(),
            work_lines: (num_targets..lines).collect(),
            target,
            domain: InputDomain::All,
        }
    }

    pub fn with_domain(mut self, domain: InputDomain) -> Self {
        self.domain = domain;
        self
    }

    pub fn report(&self) -> ConstructionReport {
        ConstructionReport {
            name: self.name.clone(),
            description: self.description.clone(),
            target: self.target.describe(),
            lines: self.circuit.num_lines(),
            target_lines: self.target_lines.len(),
            work_lines: self.work_lines.len(),
            depth: self.circuit.depth(),
            multiline_gates: self.circuit.multiline_gate_count(),
            one_qubit_gate_types: self.circuit.one_qubit_gate_types(),
            field_order: self.circuit.field_order,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstructionReport {
    pub name: String,
    pub description: String,
    pub target: String,
    pub lines: usize,
    pub target_lines: usize,
    pub work_lines: usize,
    pub depth: usize,
    pub multiline_gates: usize,
    pub one_qubit_gate_types: usize,
    pub field_order: u32,
}

impl fmt::Display for ConstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "construction: {}", self.name)?;
        writeln!(f, "  wiring: {}", self.description)?;
        writeln!(f, "  realizes: {}", self.target)?;
        writeln!(
            f,
            "  lines: {} ({} target, {} work)",
            self.lines, self.target_lines, self.work_lines
        )?;
        writeln!(f, "  depth: {}", self.depth)?;
        writeln!(f, "  multi-line gates: {}", self.multiline_gates)?;
        writeln!(f, "  one-qubit gate types: {}", self.one_qubit_gate_types)?;
        write!(f, "  field order: {}", self.field_order)
    }
}
