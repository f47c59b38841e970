//! Cat states, fanout and parity: build each construction and check it exactly.

use qacc::equiv::check_realization;
use qacc::sim::{to_unitary, DenseOperator};
use qacc::circuit::GateKind;
use qacc::synth::{cat_log_depth, fanout_from_parity, parity_from_fanout, parity_via_pi_shifts};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in [2, 5, 8] {
        let r = cat_log_depth(n)?;
        let rep = check_realization(&r)?;
        println!("cat state n={n}: depth {}, realized {}", r.circuit.depth(), rep.realized());
    }

    for n in 1..=4 {
        let parity = parity_from_fanout(n)?;
        let fanout = fanout_from_parity(n)?;
        let same_parity = to_unitary(&parity.circuit)? == DenseOperator::of_gate(&GateKind::modq(2, n));
        let same_fanout = to_unitary(&fanout.circuit)? == DenseOperator::of_gate(&GateKind::Fanout { arity: n });
        println!("n={n}: H.F.H = MOD_2 {same_parity}, H.MOD_2.H = F {same_fanout}");
    }

    let kickback = parity_via_pi_shifts(4)?;
    println!("{}", kickback.report());
    println!("{}", check_realization(&kickback)?);
    Ok(())
}
