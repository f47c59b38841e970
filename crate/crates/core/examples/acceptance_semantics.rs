//! Exact acceptance decisions in the N, E and B modes with both engines.

use qacc::circuit::random::pythagorean;
use qacc::circuit::{pauli_x, CircuitBuilder, GateKind};
use qacc::lang::{decide, AcceptanceQuery, Engine, Mode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // one input line x, one work line: rotate the work line by a 3-4-5
    // rotation when x = 1, otherwise flip it
    let mut b = CircuitBuilder::new(2);
    b.tensor(vec![(0, GateKind::controlled(1, pythagorean(false)))])?;
    b.tensor(vec![(0, GateKind::one_qubit(pauli_x()))])?;
    b.tensor(vec![(0, GateKind::controlled(1, pauli_x()))])?;
    b.tensor(vec![(0, GateKind::one_qubit(pauli_x()))])?;
    let c = b.finish(1);

    for x in 0..2u64 {
        for z in 0..4u64 {
            for mode in [Mode::N, Mode::E, Mode::B] {
                let q = AcceptanceQuery { circuit: c.clone(), z, x, mode };
                let sim = decide(&q, Engine::Simulator)?;
                let graph = decide(&q, Engine::TensorGraph)?;
                assert_eq!(sim, graph);
                println!(
                    "x={x} z={z:02b} {mode:?}: {} (p = {})",
                    sim.verdict,
                    sim.probability.to_rational().map(|r| r.to_string()).unwrap_or_default()
                );
            }
        }
    }
    Ok(())
}
