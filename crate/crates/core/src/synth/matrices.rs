//! The cycle matrix M, its diagonalizer T and eigenvalue matrix D for a
//! k = ⌈log₂ q⌉ bit register, with T†·D·T = M.

use crate::arith::{ratio, sqrt_of_integer, Cyclotomic, Matrix};
use crate::circuit::digit_bits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleMatrices {
    pub q: u32,
    /// Basis permutation |c⟩ ↦ |c − 1 mod q⟩ on c < q, identity on c ≥ q.
    pub m: Matrix,
    pub t: Matrix,
    pub d: Matrix,
}

/// Number of register states outside the cycle.
fn fixed_states(q: u32) -> usize {
    (1usize << digit_bits(q)) - q as usize
}

pub fn cycle_matrices(q: u32) -> CycleMatrices {
    let k = digit_bits(q);
    let dim = 1usize << k;
    let f = fixed_states(q);
    let qs = q as usize;

    let mut perm: Vec<usize> = (0..dim).collect();
    for (c, p) in perm.iter_mut().enumerate().take(qs) {
        *p = (c + qs - 1) % qs;
    }
    let m = Matrix::permutation(&perm);

    let inv_sqrt = sqrt_of_integer(u64::from(q)).scale(&ratio(1, q as i64));
    let mut t = Matrix::zeros(dim);
    for r in 0..f {
        t.set(r, qs + r, Cyclotomic::one(1));
    }
    for j in 0..qs {
        for c in 0..qs {
            let e = -((j * (c + 1)) as i64);
            t.set(f + j, c, &Cyclotomic::root(q, e) * &inv_sqrt);
        }
    }

    let mut d = Matrix::identity(dim);
    for j in 0..qs {
        d.set(f + j, f + j, Cyclotomic::root(q, j as i64));
    }
    CycleMatrices { q, m, t, d }
}

/// Eigenvalue of D on register state `y`.
pub fn d_entry(q: u32, y: usize) -> Cyclotomic {
    let f = fixed_states(q);
    if y < f {
        Cyclotomic::one(1)
    } else {
        Cyclotomic::root(q, (y - f) as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalization_holds() {
        for q in 2..=8 {
            let cm = cycle_matrices(q);
            assert!(cm.t.is_unitary(), "q = {q}");
            assert_eq!(cm.t.adjoint().mul(&cm.d).mul(&cm.t), cm.m, "q = {q}");
            assert!(cm.m.mul(&Matrix::identity(cm.m.dim())) == cm.m);
        }
    }

    #[test]
    fn m_has_period_q_on_zero() {
        for q in 2..=7u32 {
            let cm = cycle_matrices(q);
            let mut p = Matrix::identity(cm.m.dim());
            for s in 1..=q {
                p = cm.m.mul(&p);
                assert_eq!(p.get(0, 0).is_one(), s == q, "q = {q}, s = {s}");
            }
        }
    }
}
