//! The qudigit equivalences: Fourier conjugation of base-q fanout gives the
//! digit-sum adder, the adder comes from MOD_q residue tests, and binary fanout
//! comes from base-q fanout.

use qacc::circuit::GateKind;
use qacc::equiv::check_realization;
use qacc::sim::{to_unitary, DenseOperator};
use qacc::synth::{f_from_fq, mod_hat, mq_from_fq_conjugation, mq_from_modq};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (q, n) in [(2, 2), (3, 2), (5, 1)] {
        let r = mq_from_fq_conjugation(q, n)?;
        let exact = to_unitary(&r.circuit)? == DenseOperator::of_gate(&GateKind::QudigitM { q, inputs: n, power: 1 });
        println!("H_q^-1 F_q H_q = M_q for q={q}, n={n}: {exact}");
    }

    for r in 0..3 {
        let c = mod_hat(3, r, 2)?;
        let rep = check_realization(&c)?;
        println!("MOD-hat r={r}: {} inputs, realized {}", rep.checked_inputs, rep.realized());
    }

    let adder = mq_from_modq(3, 2)?;
    println!("{}", adder.report());
    println!("{}", check_realization(&adder)?);

    for n in 1..=3 {
        let f = f_from_fq(3, n)?;
        println!("fanout n={n} from F_3: {} lines, realized {}", f.circuit.num_lines(), check_realization(&f)?.realized());
    }
    Ok(())
}
