//! Exact decomposition of small unitaries into one-qubit gates, controlled
//! gates and controlled-not layers.

use crate::arith::{sqrt_of_rational, Cyclotomic, Matrix};
use crate::circuit::{diag, pauli_x, Block, CircuitBuilder, GateKind, Layer, LayeredCircuit};

/// Bit of `state` on line `line` of a `w`-line block (line 0 most significant).
fn bit(state: usize, line: usize, w: usize) -> usize {
    (state >> (w - 1 - line)) & 1
}

/// Layers applying the 2×2 `u` to line `p` of a `w`-line block, conditioned
/// on every other line matching `pattern` (a full basis state; its bit at `p`
/// is ignored).
pub fn pattern_controlled(w: usize, p: usize, pattern: usize, u: &Matrix) -> Vec<Layer> {
    let last = w - 1;
    let mut b = CircuitBuilder::new(w);
    if w == 1 {
        b.tensor(vec![(0, GateKind::one_qubit(u.clone()))]).unwrap();
        return b.finish(w).layers;
    }
    let swap = p != last;
    if swap {
        b.cnot(vec![(p, last)]).unwrap();
        b.cnot(vec![(last, p)]).unwrap();
        b.cnot(vec![(p, last)]).unwrap();
    }
    // after the swap, line p carries what was on the last line
    let ctl_bit = |line: usize| {
        let src = if swap && line == p { last } else { line };
        bit(pattern, src, w)
    };
    let flips: Vec<(usize, GateKind)> = (0..last)
        .filter(|&l| ctl_bit(l) == 0)
        .map(|l| (l, GateKind::one_qubit(pauli_x())))
        .collect();
    if !flips.is_empty() {
        b.tensor(flips.clone()).unwrap();
    }
    b.tensor(vec![(0, GateKind::controlled(last, u.clone()))]).unwrap();
    if !flips.is_empty() {
        b.tensor(flips).unwrap();
    }
    if swap {
        b.cnot(vec![(p, last)]).unwrap();
        b.cnot(vec![(last, p)]).unwrap();
        b.cnot(vec![(p, last)]).unwrap();
    }
    b.finish(w).layers
}

/// Phase `phase` on the single basis state `s`.
fn state_phase(w: usize, s: usize, phase: &Cyclotomic) -> Vec<Layer> {
    let one = Cyclotomic::one(1);
    let u = if bit(s, w - 1, w) == 1 {
        diag(&[one, phase.clone()])
    } else {
        diag(&[phase.clone(), one])
    };
    pattern_controlled(w, w - 1, s, &u)
}

/// Two-level unitary `g` (2×2, in the basis (a, b)) on states `a`, `b` that
/// differ in exactly one line.
fn two_level(w: usize, a: usize, b: usize, g: &Matrix) -> Vec<Layer> {
    let diff = a ^ b;
    debug_assert_eq!(diff.count_ones(), 1);
    let p = w - 1 - diff.trailing_zeros() as usize;
    let u = if bit(a, p, w) == 0 {
        g.clone()
    } else {
        let mut s = Matrix::zeros(2);
        for r in 0..2 {
            for c in 0..2 {
                s.set(1 - r, 1 - c, g.get(r, c).clone());
            }
        }
        s
    };
    pattern_controlled(w, p, a, &u)
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Givens elimination along the Gray-code order, so every rotation acts on
/// two states differing in one line. Returns `None` when a normalization
/// would leave the cyclotomic field.
pub fn givens(m: &Matrix) -> Option<LayeredCircuit> {
    let w = m.num_lines()?;
    let n = m.dim();
    let mut u = m.clone();
    let mut rotations: Vec<(usize, usize, Matrix)> = Vec::new();
    for ci in 0..n {
        let col = gray(ci);
        for i in (ci + 1..n).rev() {
            let (a, b) = (gray(i - 1), gray(i));
            let y = u.get(b, col).clone();
            if y.is_zero() {
                continue;
            }
            let x = u.get(a, col).clone();
            let norm2 = &x.abs2() + &y.abs2();
            let n2 = norm2.to_rational()?;
            // 1/r = r/r²
            let inv = sqrt_of_rational(&n2)?.div_rational(&n2);
            let inv_r = |v: &Cyclotomic| v * &inv;
            // G = [[x*, y*], [-y, x]] / r
            let g00 = inv_r(&x.conj());
            let g01 = inv_r(&y.conj());
            let g10 = inv_r(&(-&y));
            let g11 = inv_r(&x);
            for c in 0..n {
                let (ua, ub) = (u.get(a, c).clone(), u.get(b, c).clone());
                if ua.is_zero() && ub.is_zero() {
                    continue;
                }
                u.set(a, c, &(&g00 * &ua) + &(&g01 * &ub));
                u.set(b, c, &(&g10 * &ua) + &(&g11 * &ub));
            }
            let g = Matrix::from_rows(vec![vec![g00, g01], vec![g10, g11]]).unwrap();
            rotations.push((a, b, g));
        }
    }
    // u is now diagonal
    let mut b = CircuitBuilder::new(w);
    for s in 0..n {
        let phase = u.get(s, s);
        if !phase.is_one() {
            for l in state_phase(w, s, phase) {
                b.push_layer(l);
            }
        }
    }
    for (a, bb, g) in rotations.iter().rev() {
        for l in two_level(w, *a, *bb, &g.adjoint()) {
            b.push_layer(l);
        }
    }
    Some(simplify(&b.finish(w)))
}

/// Exact realization of a small unitary: Givens rotations when they stay in
/// the field, otherwise the matrix itself as one block gate.
pub fn decompose_unitary(m: &Matrix) -> LayeredCircuit {
    if let Some(c) = givens(m) {
        return c;
    }
    let w = m.num_lines().expect("dimension must be a power of two");
    let mut b = CircuitBuilder::new(w);
    if w == 1 {
        b.tensor(vec![(0, GateKind::one_qubit(m.clone()))]).unwrap();
    } else {
        b.tensor(vec![(0, GateKind::Unitary { matrix: m.clone() })]).unwrap();
    }
    b.finish(w)
}

/// Basis permutation on `w` lines (state `j` ↦ `perm[j]`) as a product of
/// transpositions, each routed along a Gray path of pattern-controlled X gates.
pub fn permutation_circuit(w: usize, perm: &[usize]) -> LayeredCircuit {
    assert_eq!(perm.len(), 1 << w);
    let x = pauli_x();
    let mut b = CircuitBuilder::new(w);
    let emit_swap = |s: usize, t: usize, b: &mut CircuitBuilder| {
        // walk s toward t one bit at a time: s = g0, g1, ..., gm = t
        let mut path = vec![s];
        let mut cur = s;
        for line in 0..w {
            let mask = 1 << (w - 1 - line);
            if (cur ^ t) & mask != 0 {
                cur ^= mask;
                path.push(cur);
            }
        }
        let steps: Vec<(usize, usize)> = path.windows(2).map(|p| (p[0], p[1])).collect();
        let mut seq: Vec<(usize, usize)> = steps.clone();
        seq.extend(steps.iter().rev().skip(1));
        for (a, c) in seq {
            let p = w - 1 - (a ^ c).trailing_zeros() as usize;
            for l in pattern_controlled(w, p, a, &x) {
                b.push_layer(l);
            }
        }
    };
    // realize perm as product of transpositions: track current arrangement
    let n = perm.len();
    let mut cur: Vec<usize> = (0..n).collect(); // cur[state] = which original state sits there
    let mut pos: Vec<usize> = (0..n).collect(); // pos[original] = where it sits
    for target in 0..n {
        // original state `src` must end at perm[src]; fix position `target`
        let src = perm.iter().position(|&p| p == target).unwrap();
        let at = pos[src];
        if at != target {
            emit_swap(at, target, &mut b);
            let other = cur[target];
            cur.swap(at, target);
            pos[src] = target;
            pos[other] = at;
        }
    }
    simplify(&b.finish(w))
}

/// Peephole cleanup: cancels equal adjacent controlled-not layers and merges
/// adjacent layers made only of one-qubit gates.
pub fn simplify(c: &LayeredCircuit) -> LayeredCircuit {
    let w = c.num_lines();
    let one_qubit_only = |l: &Layer| match l {
        Layer::Tensor { blocks } => blocks
            .iter()
            .all(|b| matches!(b, Block::Identity { .. } | Block::Gate(GateKind::OneQubit { .. }))),
        _ => false,
    };
    let per_line = |l: &Layer| -> Vec<Option<Matrix>> {
        let mut out = vec![None; w];
        if let Layer::Tensor { .. } = l {
            for (line, g) in l.gates() {
                if let GateKind::OneQubit { matrix } = g {
                    out[line] = Some(matrix.clone());
                }
            }
        }
        out
    };
    let mut out: Vec<Layer> = Vec::new();
    for l in &c.layers {
        let l = l.clone();
        if let Some(prev) = out.last() {
            if matches!(l, Layer::Cnot { .. }) && *prev == l {
                out.pop();
                continue;
            }
            if one_qubit_only(prev) && one_qubit_only(&l) {
                let a = per_line(prev);
                let b2 = per_line(&l);
                let mut gates = Vec::new();
                for line in 0..w {
                    let m = match (&a[line], &b2[line]) {
                        (None, None) => continue,
                        (Some(x), None) | (None, Some(x)) => x.clone(),
                        (Some(x), Some(y)) => y.mul(x),
                    };
                    if !m.is_identity() {
                        gates.push((line, GateKind::one_qubit(m)));
                    }
                }
                out.pop();
                if !gates.is_empty() {
                    let mut b = CircuitBuilder::new(w);
                    b.tensor(gates).unwrap();
                    out.extend(b.finish(w).layers);
                }
                continue;
            }
        }
        if let Layer::Cnot { pairs } = &l {
            if pairs.is_empty() {
                continue;
            }
        }
        if let Layer::Tensor { blocks } = &l {
            if blocks.iter().all(|b| matches!(b, Block::Identity { .. })) {
                continue;
            }
        }
        out.push(l);
    }
    LayeredCircuit::new(c.num_inputs, c.num_work, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{to_unitary, DenseOperator};
    use crate::synth::matrices::cycle_matrices;

    fn operator_of(m: &Matrix) -> DenseOperator {
        let w = m.num_lines().unwrap();
        let mut b = CircuitBuilder::new(w);
        b.tensor(vec![(0, GateKind::Unitary { matrix: m.clone() })]).unwrap();
        to_unitary(&b.finish(w)).unwrap()
    }

    #[test]
    fn permutations_are_exact() {
        let perms: Vec<Vec<usize>> = vec![
            vec![1, 0],
            vec![0, 2, 1, 3],
            vec![3, 0, 1, 2],
            vec![1, 2, 0, 3, 5, 6, 4, 7],
            vec![7, 6, 5, 4, 3, 2, 1, 0],
        ];
        for p in perms {
            let w = p.len().trailing_zeros() as usize;
            let c = permutation_circuit(w, &p);
            let u = to_unitary(&c).unwrap();
            assert_eq!(u, operator_of(&Matrix::permutation(&p)), "{p:?}");
        }
    }

    #[test]
    fn givens_on_fourier_and_cycle_diagonalizers() {
        for q in [2u32, 3, 4] {
            let t = cycle_matrices(q).t;
            let c = givens(&t).expect("exact decomposition");
            assert_eq!(to_unitary(&c).unwrap(), operator_of(&t), "T for q = {q}");
            let h = crate::circuit::qudigit_fourier(q, false);
            let c = givens(&h).expect("exact decomposition");
            assert_eq!(to_unitary(&c).unwrap(), operator_of(&h), "H for q = {q}");
        }
    }

    #[test]
    fn decompose_always_exact() {
        for q in [3u32, 5] {
            let t = cycle_matrices(q).t;
            let c = decompose_unitary(&t);
            assert_eq!(to_unitary(&c).unwrap(), operator_of(&t));
        }
    }
}
