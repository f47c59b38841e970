//! Tensor graphs: build the graph of a small circuit, read amplitudes by the
//! width dynamic program and by path sums, and look at the worked examples.

use qacc::circuit::{hadamard, CircuitBuilder, GateKind};
use qacc::sim::{CompiledCircuit};
use qacc::tgraph::{amplitude_dp, amplitude_pathsum, build_from_circuit, colored_example};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // H on every line, a controlled-not pair, then a Toffoli
    let mut b = CircuitBuilder::new(3);
    b.tensor((0..3).map(|l| (l, GateKind::one_qubit(hadamard()))).collect())?;
    b.cnot(vec![(0, 2)])?;
    b.tensor(vec![(0, GateKind::toffoli(2))])?;
    let c = b.finish(3);

    let z = 0b010;
    let g = build_from_circuit(&c, z)?;
    println!("nodes {}, width {}, paths {}, colors {}", g.nodes().len(), g.width(), g.path_count(), g.colors_used());
    let report = g.check_color_consistency();
    println!("color consistent: {}", report.consistent());

    let out = CompiledCircuit::new(&c)?.run_basis(z);
    for x in 0..8 {
        let dp = amplitude_dp(&g, x)?;
        let paths = amplitude_pathsum(&g, x)?;
        println!("<{x:03b}|C|{z:03b}> = {:.4}  (paths agree {}, simulator agrees {})", dp.to_complex(), dp == paths, dp == out.amplitude(x));
    }

    let colored = colored_example();
    println!("{}", colored.dump());
    println!("colored example, |100>: {}", amplitude_dp(&colored, 0b100)?.to_complex());
    println!("{}", colored.to_dot());
    Ok(())
}
