//! Exact acceptance decisions: given F, an observed basis state z and an
//! input x, look at a = ⟨z|F|x, 0…0⟩ and its probability p = |a|².
//!
//! * `N`: accept iff a ≠ 0.
//! * `E`: accept if p = 1, reject if p = 0, otherwise the promise fails.
//! * `B`: accept if p > 3/4, reject if p < 1/4, otherwise the promise fails.
//!   Only circuits with rational entries are admitted so p is rational.

use std::fmt;
use std::str::FromStr;

use crate::arith::{ratio, Cyclotomic, Rational};
use crate::circuit::LayeredCircuit;
use crate::sim::{CompiledCircuit, SimError};
use crate::synth::{lower_to_primitives, SynthError};
use crate::tgraph::{amplitude_dp_capped, build_from_circuit, GraphError, COLOR_SUM_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    N,
    E,
    B,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "N" => Ok(Mode::N),
            "E" => Ok(Mode::E),
            "B" => Ok(Mode::B),
            _ => Err(format!("unknown mode {s:?}; expected N, E or B")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Simulator,
    TensorGraph,
}

impl FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sim" | "simulator" => Ok(Engine::Simulator),
            "graph" | "tensor-graph" | "tensorgraph" => Ok(Engine::TensorGraph),
            _ => Err(format!("unknown engine {s:?}; expected sim or graph")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
    /// The probability falls where the mode's promise forbids it.
    Invalid,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
            Verdict::Invalid => "invalid",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LangError {
    #[error("{0}")]
    Shape(String),
    #[error("bounded-error mode needs rational gate entries; circuit field order is {0}")]
    Irrational(u32),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Synth(#[from] SynthError),
}

/// The circuit's first `num_inputs` lines take `x`; its work lines start at 0.
/// `z` ranges over all lines, line 0 most significant.
#[derive(Clone, Debug)]
pub struct AcceptanceQuery {
    pub circuit: LayeredCircuit,
    pub z: u64,
    pub x: u64,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub amplitude: Cyclotomic,
    pub probability: Cyclotomic,
}

impl AcceptanceQuery {
    fn check(&self) -> Result<(), LangError> {
        let c = &self.circuit;
        let lines = c.num_lines();
        if lines >= 64 || self.z >> lines != 0 {
            return Err(LangError::Shape(format!("z = {} does not fit {lines} lines", self.z)));
        }
        if self.x >> c.num_inputs != 0 {
            return Err(LangError::Shape(format!(
                "x = {} does not fit {} input lines",
                self.x, c.num_inputs
            )));
        }
        if self.mode == Mode::B && c.field_order != 1 {
            return Err(LangError::Irrational(c.field_order));
        }
        Ok(())
    }

    /// Basis index of |x, 0…0⟩.
    pub fn input_index(&self) -> u64 {
        self.x << self.circuit.num_work
    }
}

/// ⟨z|F|x, 0…0⟩ by the chosen engine. The tensor-graph route builds the graph
/// of F⁻¹|z⟩ (after lowering qudigit and MOD_q gates onto extra zero lines)
/// and conjugates ⟨x, 0…0|F⁻¹|z⟩.
pub fn amplitude(q: &AcceptanceQuery, engine: Engine) -> Result<Cyclotomic, LangError> {
    q.check()?;
    match engine {
        Engine::Simulator => {
            let sim = CompiledCircuit::new(&q.circuit)?;
            Ok(sim.run_basis(q.input_index()).amplitude(q.z))
        }
        Engine::TensorGraph => {
            let lowered = lower_to_primitives(&q.circuit)?;
            let pad = lowered.num_lines() - q.circuit.num_lines();
            let g = build_from_circuit(&lowered.inverse(), q.z << pad)?;
            let a = amplitude_dp_capped(&g, q.input_index() << pad, COLOR_SUM_CAP)?;
            Ok(a.conj())
        }
    }
}

pub fn decide(q: &AcceptanceQuery, engine: Engine) -> Result<Decision, LangError> {
    let a = amplitude(q, engine)?;
    let p = a.abs2();
    let verdict = match q.mode {
        Mode::N => {
            if a.is_zero() {
                Verdict::Reject
            } else {
                Verdict::Accept
            }
        }
        Mode::E => {
            if p.is_one() {
                Verdict::Accept
            } else if p.is_zero() {
                Verdict::Reject
            } else {
                Verdict::Invalid
            }
        }
        Mode::B => {
            let r: Rational = p
                .to_rational()
                .ok_or(LangError::Irrational(q.circuit.field_order))?;
            if r > ratio(3, 4) {
                Verdict::Accept
            } else if r < ratio(1, 4) {
                Verdict::Reject
            } else {
                Verdict::Invalid
            }
        }
    };
    Ok(Decision {
        verdict,
        amplitude: a,
        probability: p,
    })
}
