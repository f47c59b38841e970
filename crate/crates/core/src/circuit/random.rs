//! Random layered circuits for cross-checks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{hadamard, pauli_x, pauli_z, phase, CircuitBuilder, GateKind, LayeredCircuit};
use crate::arith::{ratio, Cyclotomic, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateSet {
    /// H, X, the eighth-root phase, Toffoli and fanout on up to 3 lines.
    Standard,
    /// Gates with rational entries only: X, Z, two Pythagorean rotations,
    /// Toffoli, controlled rotations and fanout on up to 3 lines.
    Rational,
}

/// [[3/5, −4/5], [4/5, 3/5]], optionally with the second column negated.
pub fn pythagorean(reflect: bool) -> Matrix {
    let r = |n, d| Cyclotomic::from_rational(&ratio(n, d), 1);
    let s = if reflect { -1 } else { 1 };
    Matrix::from_rows(vec![vec![r(3, 5), r(-4 * s, 5)], vec![r(4, 5), r(3 * s, 5)]]).unwrap()
}

fn one_qubit<R: Rng>(rng: &mut R, set: GateSet) -> Matrix {
    match set {
        GateSet::Standard => match rng.gen_range(0..3) {
            0 => hadamard(),
            1 => pauli_x(),
            _ => phase(8, 1),
        },
        GateSet::Rational => match rng.gen_range(0..4) {
            0 => pauli_x(),
            1 => pauli_z(),
            2 => pythagorean(false),
            _ => pythagorean(true),
        },
    }
}

fn multi_line<R: Rng>(rng: &mut R, set: GateSet, width: usize) -> GateKind {
    match rng.gen_range(0..3) {
        0 => GateKind::Fanout { arity: width - 1 },
        1 if set == GateSet::Rational => GateKind::controlled(width - 1, pythagorean(rng.gen())),
        _ => GateKind::toffoli(width - 1),
    }
}

/// `layers` random layers on `lines` lines: about a third are controlled-not
/// layers, the rest tensor layers mixing one-qubit and 2–3 line gates.
pub fn random_circuit<R: Rng>(rng: &mut R, lines: usize, layers: usize, set: GateSet) -> LayeredCircuit {
    let mut b = CircuitBuilder::new(lines);
    for _ in 0..layers {
        if lines >= 2 && rng.gen_ratio(1, 3) {
            let mut order: Vec<usize> = (0..lines).collect();
            order.shuffle(rng);
            let count = rng.gen_range(1..=lines / 2);
            let pairs = order.chunks(2).take(count).map(|p| (p[0], p[1])).collect();
            b.cnot(pairs).unwrap();
            continue;
        }
        let mut gates = Vec::new();
        let mut line = 0;
        while line < lines {
            let room = lines - line;
            match rng.gen_range(0..4) {
                0 => line += 1,
                1 | 2 => {
                    gates.push((line, GateKind::one_qubit(one_qubit(rng, set))));
                    line += 1;
                }
                _ if room >= 2 => {
                    let width = rng.gen_range(2..=room.min(3));
                    gates.push((line, multi_line(rng, set, width)));
                    line += width;
                }
                _ => line += 1,
            }
        }
        b.tensor(gates).unwrap();
    }
    b.finish(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_circuits_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for set in [GateSet::Standard, GateSet::Rational] {
            for _ in 0..50 {
                let c = random_circuit(&mut rng, 5, 4, set);
                c.validate().unwrap();
                assert_eq!(c.depth(), 4);
            }
        }
    }

    #[test]
    fn rational_set_stays_rational() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            assert_eq!(random_circuit(&mut rng, 4, 5, GateSet::Rational).field_order, 1);
        }
        assert!(pythagorean(false).is_unitary() && pythagorean(true).is_unitary());
    }
}
