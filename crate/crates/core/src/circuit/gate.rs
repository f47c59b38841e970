use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::poly::lcm as lcm_order;
use crate::arith::{sqrt_of_integer, Cyclotomic, Matrix};

/// Which input sums make a ModQ gate flip its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Residue {
    /// Sum not divisible by q (the plain MOD_q gate).
    NonZero,
    /// Sum congruent to the given residue.
    Exactly(u32),
}

/// A gate acting on a contiguous block of lines. Controls come first and the
/// target (or the digit `b`) occupies the last line or block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gate")]
pub enum GateKind {
    OneQubit {
        matrix: Matrix,
    },
    /// ∧_m(U): applies U to the last line when all `controls` lines are 1.
    ControlledU {
        controls: usize,
        matrix: Matrix,
    },
    /// |y_1..y_m, x⟩ ↦ |y_1⊕x, .., y_m⊕x, x⟩.
    Fanout {
        arity: usize,
    },
    /// Flips the last line when `residue` holds for the sum of the `inputs`
    /// lines mod q (inverted when `negated`).
    ModQ {
        q: u32,
        inputs: usize,
        residue: Residue,
        negated: bool,
    },
    /// Fourier transform on one qudigit block; `adjoint` selects H_q^{-1}.
    QudigitH {
        q: u32,
        adjoint: bool,
    },
    /// |x_1..x_n, b⟩ ↦ |x_1..x_n, (b + power·Σx_i) mod q⟩ on digit blocks.
    QudigitM {
        q: u32,
        inputs: usize,
        power: u32,
    },
    /// |x_1..x_n, b⟩ ↦ |(x_1 + power·b) mod q, .., b⟩ on digit blocks.
    QudigitF {
        q: u32,
        inputs: usize,
        power: u32,
    },
    /// Fixed-size block kept as an explicit unitary.
    Unitary {
        matrix: Matrix,
    },
}

/// Number of qubits encoding one qudigit.
pub fn digit_bits(q: u32) -> usize {
    assert!(q >= 2);
    (u32::BITS - (q - 1).leading_zeros()) as usize
}

impl GateKind {
    pub fn one_qubit(matrix: Matrix) -> Self {
        GateKind::OneQubit { matrix }
    }

    pub fn controlled(controls: usize, matrix: Matrix) -> Self {
        GateKind::ControlledU { controls, matrix }
    }

    pub fn toffoli(controls: usize) -> Self {
        GateKind::ControlledU {
            controls,
            matrix: pauli_x(),
        }
    }

    pub fn modq(q: u32, inputs: usize) -> Self {
        GateKind::ModQ {
            q,
            inputs,
            residue: Residue::NonZero,
            negated: false,
        }
    }

    pub fn mod_qr(q: u32, r: u32, inputs: usize) -> Self {
        GateKind::ModQ {
            q,
            inputs,
            residue: Residue::Exactly(r),
            negated: false,
        }
    }

    /// ¬MOD_q, i.e. MOD_{q,0}.
    pub fn neg_modq(q: u32, inputs: usize) -> Self {
        GateKind::ModQ {
            q,
            inputs,
            residue: Residue::NonZero,
            negated: true,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::OneQubit { .. } => "OneQubit",
            GateKind::ControlledU { .. } => "ControlledU",
            GateKind::Fanout { .. } => "Fanout",
            GateKind::ModQ { .. } => "ModQ",
            GateKind::QudigitH { .. } => "QudigitH",
            GateKind::QudigitM { .. } => "QudigitM",
            GateKind::QudigitF { .. } => "QudigitF",
            GateKind::Unitary { .. } => "Unitary",
        }
    }

    pub fn num_lines(&self) -> usize {
        match self {
            GateKind::OneQubit { .. } => 1,
            GateKind::ControlledU { controls, .. } => controls + 1,
            GateKind::Fanout { arity } => arity + 1,
            GateKind::ModQ { inputs, .. } => inputs + 1,
            GateKind::QudigitH { q, .. } => digit_bits(*q),
            GateKind::QudigitM { q, inputs, .. } | GateKind::QudigitF { q, inputs, .. } => {
                (inputs + 1) * digit_bits(*q)
            }
            GateKind::Unitary { matrix } => matrix.num_lines().unwrap_or(0),
        }
    }

    /// Whether the gate maps basis states to basis states.
    pub fn is_basis_permuting(&self) -> bool {
        match self {
            GateKind::Fanout { .. }
            | GateKind::ModQ { .. }
            | GateKind::QudigitM { .. }
            | GateKind::QudigitF { .. } => true,
            GateKind::QudigitH { .. } => false,
            GateKind::OneQubit { matrix }
            | GateKind::ControlledU { matrix, .. }
            | GateKind::Unitary { matrix } => matrix.as_permutation().is_some(),
        }
    }

    pub fn inverse(&self) -> GateKind {
        match self {
            GateKind::OneQubit { matrix } => GateKind::OneQubit {
                matrix: matrix.adjoint(),
            },
            GateKind::ControlledU { controls, matrix } => GateKind::ControlledU {
                controls: *controls,
                matrix: matrix.adjoint(),
            },
            GateKind::Unitary { matrix } => GateKind::Unitary {
                matrix: matrix.adjoint(),
            },
            GateKind::QudigitH { q, adjoint } => GateKind::QudigitH {
                q: *q,
                adjoint: !adjoint,
            },
            GateKind::QudigitM { q, inputs, power } => GateKind::QudigitM {
                q: *q,
                inputs: *inputs,
                power: (q - power % q) % q,
            },
            GateKind::QudigitF { q, inputs, power } => GateKind::QudigitF {
                q: *q,
                inputs: *inputs,
                power: (q - power % q) % q,
            },
            GateKind::Fanout { .. } | GateKind::ModQ { .. } => self.clone(),
        }
    }

    /// Smallest cyclotomic order containing every matrix entry of the gate.
    pub fn field_order(&self) -> u32 {
        match self {
            GateKind::OneQubit { matrix }
            | GateKind::ControlledU { matrix, .. }
            | GateKind::Unitary { matrix } => matrix.field_order(),
            GateKind::QudigitH { q, .. } => lcm_order(*q, sqrt_of_integer_order(*q)),
            _ => 1,
        }
    }

    /// Parameter and unitarity checks, independent of placement.
    pub fn check(&self) -> Result<(), String> {
        let unitary = |m: &Matrix, want: usize| -> Result<(), String> {
            if m.dim() != want {
                return Err(format!("matrix dimension {} (expected {want})", m.dim()));
            }
            if !m.is_unitary() {
                return Err("matrix is not unitary".into());
            }
            Ok(())
        };
        match self {
            GateKind::OneQubit { matrix } => unitary(matrix, 2),
            GateKind::ControlledU { controls, matrix } => {
                if *controls == 0 {
                    return Err("controlled gate needs at least one control".into());
                }
                unitary(matrix, 2)
            }
            GateKind::Unitary { matrix } => {
                if matrix.num_lines().is_none_or(|k| k == 0) {
                    return Err("unitary block must have dimension 2^k with k >= 1".into());
                }
                unitary(matrix, matrix.dim())
            }
            GateKind::Fanout { arity } => {
                if *arity == 0 {
                    Err("fanout arity must be positive".into())
                } else {
                    Ok(())
                }
            }
            GateKind::ModQ { q, residue, .. } => {
                if *q < 2 {
                    return Err(format!("modulus {q} < 2"));
                }
                if let Residue::Exactly(r) = residue {
                    if r >= q {
                        return Err(format!("residue {r} out of range for q = {q}"));
                    }
                }
                Ok(())
            }
            GateKind::QudigitH { q, .. } => {
                if *q < 2 {
                    Err(format!("modulus {q} < 2"))
                } else {
                    Ok(())
                }
            }
            GateKind::QudigitM { q, power, .. } | GateKind::QudigitF { q, power, .. } => {
                if *q < 2 {
                    Err(format!("modulus {q} < 2"))
                } else if power >= q {
                    Err(format!("power {power} out of range for q = {q}"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Image of a local basis state under a basis-permuting gate. Bit 0 of the
    /// local index is the last line of the block.
    pub fn permute_basis(&self, x: u64) -> Option<u64> {
        let w = self.num_lines();
        match self {
            GateKind::Fanout { .. } => {
                if x & 1 == 1 {
                    Some(x ^ (mask(w) & !1))
                } else {
                    Some(x)
                }
            }
            GateKind::ModQ {
                q,
                residue,
                negated,
                ..
            } => {
                let sum = u64::from((x >> 1).count_ones());
                let r = sum % u64::from(*q);
                let hit = match residue {
                    Residue::NonZero => r != 0,
                    Residue::Exactly(t) => r == u64::from(*t),
                };
                Some(if hit != *negated { x ^ 1 } else { x })
            }
            GateKind::QudigitM { q, inputs, power } => {
                let k = digit_bits(*q);
                let q64 = u64::from(*q);
                let b = x & mask(k);
                if b >= q64 {
                    return Some(x);
                }
                let mut sum = 0u64;
                for i in 0..*inputs {
                    let d = digit(x, k, *inputs, i);
                    if d < q64 {
                        sum += d;
                    }
                }
                let nb = (b + u64::from(*power) * sum) % q64;
                Some((x & !mask(k)) | nb)
            }
            GateKind::QudigitF { q, inputs, power } => {
                let k = digit_bits(*q);
                let q64 = u64::from(*q);
                let b = x & mask(k);
                if b >= q64 {
                    return Some(x);
                }
                let mut out = x;
                for i in 0..*inputs {
                    let d = digit(x, k, *inputs, i);
                    if d < q64 {
                        let nd = (d + u64::from(*power) * b) % q64;
                        let shift = (inputs - i) * k;
                        out = (out & !(mask(k) << shift)) | (nd << shift);
                    }
                }
                Some(out)
            }
            GateKind::OneQubit { matrix }
            | GateKind::ControlledU { matrix, .. }
            | GateKind::Unitary { matrix } => {
                let perm = matrix.as_permutation()?;
                match self {
                    GateKind::ControlledU { .. } => {
                        let ctl = mask(w) & !1;
                        if x & ctl == ctl {
                            Some((x & !1) | perm[(x & 1) as usize] as u64)
                        } else {
                            Some(x)
                        }
                    }
                    _ => Some(perm[x as usize] as u64),
                }
            }
            GateKind::QudigitH { .. } => None,
        }
    }

    /// Column `x` of the gate's local operator as sparse (row, amplitude) pairs.
    pub fn column(&self, x: u64) -> Vec<(u64, Cyclotomic)> {
        if let Some(y) = self.permute_basis(x) {
            return vec![(y, Cyclotomic::one(1))];
        }
        let w = self.num_lines();
        match self {
            GateKind::OneQubit { matrix } | GateKind::Unitary { matrix } => (0..matrix.dim())
                .filter_map(|r| {
                    let v = matrix.get(r, x as usize);
                    (!v.is_zero()).then(|| (r as u64, v.clone()))
                })
                .collect(),
            GateKind::ControlledU { matrix, .. } => {
                let ctl = mask(w) & !1;
                if x & ctl != ctl {
                    return vec![(x, Cyclotomic::one(1))];
                }
                (0..2u64)
                    .filter_map(|r| {
                        let v = matrix.get(r as usize, (x & 1) as usize);
                        (!v.is_zero()).then(|| ((x & !1) | r, v.clone()))
                    })
                    .collect()
            }
            GateKind::QudigitH { q, adjoint } => {
                let m = qudigit_fourier(*q, *adjoint);
                (0..m.dim())
                    .filter_map(|r| {
                        let v = m.get(r, x as usize);
                        (!v.is_zero()).then(|| (r as u64, v.clone()))
                    })
                    .collect()
            }
            _ => unreachable!("basis-permuting gates handled above"),
        }
    }

    /// The full local operator; only sensible for small blocks.
    pub fn dense(&self) -> Matrix {
        let w = self.num_lines();
        assert!(w <= 12, "dense matrix of a {w}-line gate requested");
        let dim = 1usize << w;
        let mut m = Matrix::zeros(dim);
        for c in 0..dim {
            for (r, v) in self.column(c as u64) {
                m.set(r as usize, c, v);
            }
        }
        m
    }
}

fn mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Digit `i` (0-based, most significant first) among `inputs` input digits
/// followed by the `b` digit.
fn digit(x: u64, k: usize, inputs: usize, i: usize) -> u64 {
    (x >> ((inputs - i) * k)) & mask(k)
}

fn sqrt_of_integer_order(q: u32) -> u32 {
    sqrt_of_integer(u64::from(q)).order()
}

/// H_q (or its inverse) on the 2^k-dimensional register: Fourier on the first
/// q basis states, identity on non-qudigit states.
pub fn qudigit_fourier(q: u32, adjoint: bool) -> Arc<Matrix> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(u32, bool), Arc<Matrix>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().unwrap().get(&(q, adjoint)) {
        return m.clone();
    }
    let k = digit_bits(q);
    let dim = 1usize << k;
    let inv_sqrt = sqrt_of_integer(u64::from(q)).div_rational(&crate::arith::ratio(q as i64, 1));
    let mut m = Matrix::identity(dim);
    let sign = if adjoint { -1 } else { 1 };
    for a in 0..q as usize {
        for b in 0..q as usize {
            let phase = Cyclotomic::root(q, sign * (a * b) as i64);
            m.set(b, a, &phase * &inv_sqrt);
        }
    }
    let m = Arc::new(m);
    cache.lock().unwrap().insert((q, adjoint), m.clone());
    m
}

pub fn pauli_x() -> Matrix {
    Matrix::permutation(&[1, 0])
}

pub fn pauli_z() -> Matrix {
    diag(&[Cyclotomic::one(1), Cyclotomic::from_int(-1, 1)])
}

pub fn hadamard() -> Matrix {
    let s = sqrt_of_integer(2).scale(&crate::arith::ratio(1, 2));
    Matrix::from_rows(vec![vec![s.clone(), s.clone()], vec![s.clone(), -s]]).unwrap()
}

/// diag(1, ζ_order^power).
pub fn phase(order: u32, power: i64) -> Matrix {
    diag(&[Cyclotomic::one(1), Cyclotomic::root(order, power)])
}

pub fn diag(entries: &[Cyclotomic]) -> Matrix {
    let mut m = Matrix::zeros(entries.len());
    for (i, e) in entries.iter().enumerate() {
        m.set(i, i, e.clone());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_counts() {
        assert_eq!(GateKind::toffoli(2).num_lines(), 3);
        assert_eq!(GateKind::Fanout { arity: 3 }.num_lines(), 4);
        assert_eq!(GateKind::modq(3, 4).num_lines(), 5);
        assert_eq!(GateKind::QudigitH { q: 3, adjoint: false }.num_lines(), 2);
        assert_eq!(GateKind::QudigitM { q: 5, inputs: 2, power: 1 }.num_lines(), 9);
        assert_eq!(digit_bits(2), 1);
        assert_eq!(digit_bits(4), 2);
        assert_eq!(digit_bits(5), 3);
    }

    #[test]
    fn modq_semantics() {
        let g = GateKind::modq(2, 2);
        assert_eq!(g.permute_basis(0b110), Some(0b110));
        assert_eq!(g.permute_basis(0b100), Some(0b101));
        let g = GateKind::neg_modq(3, 3);
        assert_eq!(g.permute_basis(0b1110), Some(0b1111));
        assert_eq!(g.permute_basis(0b0000), Some(0b0001));
        assert_eq!(g.permute_basis(0b0100), Some(0b0100));
    }

    #[test]
    fn fanout_semantics() {
        let g = GateKind::Fanout { arity: 3 };
        assert_eq!(g.permute_basis(0b0001), Some(0b1111));
        assert_eq!(g.permute_basis(0b0100), Some(0b0100));
    }

    #[test]
    fn qudigit_m_table() {
        // q = 3, one input digit: blocks x, b with 00,01,10 = 0,1,2
        let g = GateKind::QudigitM { q: 3, inputs: 1, power: 1 };
        for x in 0..3u64 {
            for b in 0..3u64 {
                assert_eq!(g.permute_basis((x << 2) | b), Some((x << 2) | ((b + x) % 3)));
            }
        }
        // non-qudigit states stay fixed
        assert_eq!(g.permute_basis(0b0111), Some(0b0111));
        assert_eq!(g.permute_basis(0b1101), Some(0b1101));
    }

    #[test]
    fn every_gate_kind_is_unitary() {
        let gates = vec![
            GateKind::one_qubit(hadamard()),
            GateKind::controlled(2, phase(8, 1)),
            GateKind::Fanout { arity: 2 },
            GateKind::mod_qr(3, 1, 3),
            GateKind::QudigitH { q: 3, adjoint: false },
            GateKind::QudigitH { q: 5, adjoint: true },
            GateKind::QudigitM { q: 3, inputs: 2, power: 2 },
            GateKind::QudigitF { q: 3, inputs: 2, power: 1 },
            GateKind::QudigitF { q: 4, inputs: 1, power: 3 },
        ];
        for g in gates {
            let d = g.dense();
            assert!(d.is_unitary(), "{} not unitary", g.name());
            assert!(d.mul(&g.inverse().dense()).is_identity(), "{} inverse", g.name());
        }
    }

    #[test]
    fn fourier_q2_is_hadamard() {
        assert_eq!(*qudigit_fourier(2, false), hadamard());
    }
}
