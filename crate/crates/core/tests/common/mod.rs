//! Test-side reference simulator, written from the gate definitions and kept
//! apart from the library's simulator so the two can be compared.

#![allow(dead_code)]

use std::collections::BTreeMap;

use qacc::arith::{ratio, sqrt_of_integer, Cyclotomic};
use qacc::circuit::{Block, GateKind, Layer, LayeredCircuit, Residue};
use qacc::synth::ConstructionResult;

pub type State = BTreeMap<u64, Cyclotomic>;

fn bits_for(q: u32) -> usize {
    let mut k = 0;
    while (1u32 << k) < q {
        k += 1;
    }
    k.max(1)
}

fn low(w: usize) -> u64 {
    (1u64 << w) - 1
}

/// Column `x` of a gate on its own `w` lines; bit 0 is the block's last line.
pub fn gate_column(g: &GateKind, x: u64) -> Vec<(u64, Cyclotomic)> {
    let one = || Cyclotomic::one(1);
    match g {
        GateKind::OneQubit { matrix } | GateKind::Unitary { matrix } => (0..matrix.dim() as u64)
            .map(|r| (r, matrix.get(r as usize, x as usize).clone()))
            .collect(),
        GateKind::ControlledU { controls, matrix } => {
            let ctl = low(*controls) << 1;
            if x & ctl != ctl {
                return vec![(x, one())];
            }
            let t = (x & 1) as usize;
            vec![
                (x & !1, matrix.get(0, t).clone()),
                (x | 1, matrix.get(1, t).clone()),
            ]
        }
        GateKind::Fanout { arity } => {
            if x & 1 == 1 {
                vec![(x ^ (low(*arity) << 1), one())]
            } else {
                vec![(x, one())]
            }
        }
        GateKind::ModQ { q, residue, negated, .. } => {
            let s = (x >> 1).count_ones() % q;
            let hit = match residue {
                Residue::NonZero => s != 0,
                Residue::Exactly(r) => s == *r,
            };
            vec![(if hit ^ negated { x ^ 1 } else { x }, one())]
        }
        GateKind::QudigitH { q, adjoint } => {
            let q64 = u64::from(*q);
            if x >= q64 {
                return vec![(x, one())];
            }
            let norm = sqrt_of_integer(q64).div_rational(&ratio(i64::from(*q), 1));
            let sign = if *adjoint { -1 } else { 1 };
            (0..q64)
                .map(|y| (y, &Cyclotomic::root(*q, sign * (x * y) as i64) * &norm))
                .collect()
        }
        GateKind::QudigitM { q, inputs, power } | GateKind::QudigitF { q, inputs, power } => {
            let k = bits_for(*q);
            let q64 = u64::from(*q);
            let digits: Vec<u64> = (0..=*inputs).rev().map(|i| (x >> (i * k)) & low(k)).collect();
            let b = digits[*inputs];
            if b >= q64 {
                return vec![(x, one())];
            }
            let p = u64::from(*power);
            let mut out = digits.clone();
            if matches!(g, GateKind::QudigitM { .. }) {
                let sum: u64 = digits[..*inputs].iter().filter(|&&d| d < q64).sum();
                out[*inputs] = (b + p * sum) % q64;
            } else {
                for d in out[..*inputs].iter_mut().filter(|d| **d < q64) {
                    *d = (*d + p * b) % q64;
                }
            }
            let y = out.iter().fold(0, |acc, d| (acc << k) | d);
            vec![(y, one())]
        }
    }
}

fn apply_block(state: &State, g: &GateKind, first: usize, lines: usize) -> State {
    let w = g.num_lines();
    let shift = lines - first - w;
    let mut out = State::new();
    for (x, a) in state {
        let local = (x >> shift) & low(w);
        let rest = x & !(low(w) << shift);
        for (y, v) in gate_column(g, local) {
            if v.is_zero() {
                continue;
            }
            let e = out.entry(rest | (y << shift)).or_insert_with(|| Cyclotomic::zero(1));
            *e = &*e + &(a * &v);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn run(c: &LayeredCircuit, input: &State) -> State {
    let n = c.num_lines();
    let mut s = input.clone();
    for layer in &c.layers {
        match layer {
            Layer::Tensor { blocks } => {
                let mut first = 0;
                for b in blocks {
                    if let Block::Gate(g) = b {
                        s = apply_block(&s, g, first, n);
                    }
                    first += b.num_lines();
                }
            }
            Layer::Cnot { pairs } => {
                s = s
                    .into_iter()
                    .map(|(x, a)| {
                        let mut y = x;
                        for &(ctl, tgt) in pairs {
                            if (x >> (n - 1 - ctl)) & 1 == 1 {
                                y ^= 1 << (n - 1 - tgt);
                            }
                        }
                        (y, a)
                    })
                    .collect();
            }
        }
    }
    s
}

pub fn basis(x: u64) -> State {
    State::from([(x, Cyclotomic::one(1))])
}

pub fn run_basis(c: &LayeredCircuit, x: u64) -> State {
    run(c, &basis(x))
}

/// Places the bits of `x` (most significant first) onto `lines` of an
/// `total`-line register.
pub fn place(x: u64, lines: &[usize], total: usize) -> u64 {
    let m = lines.len();
    lines
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &l)| acc | (((x >> (m - 1 - i)) & 1) << (total - 1 - l)))
}

/// Checks that `r.circuit` maps every target input accepted by `admit`, with
/// work lines at 0, to the basis state `expect(x)` with work lines back at 0.
pub fn realizes_map(
    r: &ConstructionResult,
    admit: impl Fn(u64) -> bool,
    expect: impl Fn(u64) -> u64,
) -> Result<usize, String> {
    let total = r.circuit.num_lines();
    let nt = r.target_lines.len();
    let mut checked = 0;
    for x in (0..1u64 << nt).filter(|&x| admit(x)) {
        let out = run_basis(&r.circuit, place(x, &r.target_lines, total));
        let want = place(expect(x), &r.target_lines, total);
        if out.len() != 1 || !out.get(&want).is_some_and(Cyclotomic::is_one) {
            return Err(format!("{}: input {x:b} gives {} terms", r.name, out.len()));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Digit blocks of `k` bits below q, most significant block first.
pub fn digits_ok(x: u64, blocks: usize, k: usize, q: u32) -> bool {
    (0..blocks).all(|i| (x >> (i * k)) & low(k) < u64::from(q))
}

pub fn digit_sum(x: u64, blocks: usize, k: usize) -> u64 {
    (0..blocks).map(|i| (x >> (i * k)) & low(k)).sum()
}
