//! MOD_q from parity gates: realization, depth independent of n, and the
//! cycle matrices for q = 3.

use qacc::equiv::{check_constant_depth, check_realization};
use qacc::synth::matrices::cycle_matrices;
use qacc::synth::modq_from_parity;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for q in [2, 3, 5] {
        let profile = check_constant_depth(|n| modq_from_parity(q, n), &[1, 2, 3, 4, 5, 6])?;
        println!("q={q}: depths {:?}, constant {}", profile.depths, profile.constant);
    }

    let r = modq_from_parity(3, 3)?;
    let rep = check_realization(&r)?;
    println!("{}\n{rep}", r.report());

    let cm = cycle_matrices(3);
    for (name, m) in [("M", &cm.m), ("T", &cm.t), ("D", &cm.d)] {
        println!("{name}:");
        for row in m.rows() {
            let cells: Vec<String> = row.iter().map(|c| format!("{:.3}", c.to_complex())).collect();
            println!("  [{}]", cells.join(", "));
        }
    }
    println!("T^dag D T = M: {}", cm.t.adjoint().mul(&cm.d).mul(&cm.t) == cm.m);
    Ok(())
}
