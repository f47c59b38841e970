use std::sync::Arc;

use super::decompose::{decompose_unitary, permutation_circuit};
use super::matrices::{cycle_matrices, d_entry};
use super::{ConstructionResult, InputDomain, TargetSpec, WireBuilder};
use crate::arith::Cyclotomic;
use crate::circuit::{
    diag, digit_bits, hadamard, pauli_x, qudigit_fourier, CircuitError, GateKind, Layer,
    LayeredCircuit,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthError {
    #[error("bad parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

fn require(ok: bool, what: &str) -> Result<(), SynthError> {
    if ok {
        Ok(())
    } else {
        Err(SynthError::Parameter(what.to_string()))
    }
}

/// Gate used to copy register bits onto work lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CopyPrimitive {
    Fanout,
    /// Fanout rebuilt as an H-conjugated parity gate.
    #[default]
    Parity,
}

/// Cat state in ⌈log₂ n⌉ controlled-not layers; line `i` receives a copy of
/// line `i - 2^t` in layer `t`.
pub fn cat_log_depth(n: usize) -> Result<ConstructionResult, SynthError> {
    require(n >= 1, "cat state needs n >= 1")?;
    let mut layers = Vec::new();
    let mut span = 1;
    while span < n {
        let pairs = (0..span).filter(|i| i + span < n).map(|i| (i, i + span)).collect();
        layers.push(Layer::Cnot { pairs });
        span *= 2;
    }
    Ok(ConstructionResult::new(
        "cat_log_depth",
        "doubling cascade of controlled-not layers from line 0",
        LayeredCircuit::new(n, 0, layers),
        n,
        TargetSpec::CatState { n },
    ))
}

/// MOD_2 on n inputs: H on every line, Fanout controlled by the target, H again.
pub fn parity_from_fanout(n: usize) -> Result<ConstructionResult, SynthError> {
    require(n >= 1, "parity needs n >= 1")?;
    let all: Vec<usize> = (0..=n).collect();
    let mut wb = WireBuilder::new(n + 1);
    wb.each(&all, &hadamard())?;
    wb.gates(vec![(all.clone(), GateKind::Fanout { arity: n })])?;
    wb.each(&all, &hadamard())?;
    Ok(ConstructionResult::new(
        "parity_from_fanout",
        "H layer, fanout from the target, H layer",
        wb.finish(n + 1)?,
        n + 1,
        TargetSpec::Gate(GateKind::modq(2, n)),
    ))
}

/// Fanout onto n lines: H on every line, MOD_2 into the control, H again.
pub fn fanout_from_parity(n: usize) -> Result<ConstructionResult, SynthError> {
    require(n >= 1, "fanout needs n >= 1")?;
    let all: Vec<usize> = (0..=n).collect();
    let mut wb = WireBuilder::new(n + 1);
    wb.each(&all, &hadamard())?;
    wb.gates(vec![(all.clone(), GateKind::modq(2, n))])?;
    wb.each(&all, &hadamard())?;
    Ok(ConstructionResult::new(
        "fanout_from_parity",
        "H layer, parity into the control, H layer",
        wb.finish(n + 1)?,
        n + 1,
        TargetSpec::Gate(GateKind::Fanout { arity: n }),
    ))
}

/// MOD_2 as a product of controlled π-shifts on an H-conjugated target. The
/// target is fanned out onto n − 1 work lines so every input gets its own
/// copy, and each shift is H·CNOT·H on that copy.
pub fn parity_via_pi_shifts(n: usize) -> Result<ConstructionResult, SynthError> {
    require(n >= 2, "pi-shift parity needs n >= 2")?;
    let t = n;
    let xs: Vec<usize> = (0..n).collect();
    let mut copies: Vec<usize> = (n + 1..2 * n).collect();
    copies.push(t);
    let h = hadamard();
    let mut wb = WireBuilder::new(2 * n);
    wb.arrange(&[xs.clone(), copies.clone()].concat())?;
    wb.each(&[t], &h)?;
    wb.gates(vec![(copies.clone(), GateKind::Fanout { arity: n - 1 })])?;
    wb.each(&copies, &h)?;
    let pairs: Vec<(usize, usize)> = xs.iter().zip(&copies).map(|(&x, &c)| (x, c)).collect();
    wb.cnots(&pairs)?;
    wb.each(&copies, &h)?;
    wb.gates(vec![(copies.clone(), GateKind::Fanout { arity: n - 1 })])?;
    wb.each(&[t], &h)?;
    wb.arrange(&(0..2 * n).collect::<Vec<_>>())?;
    Ok(ConstructionResult::new(
        "parity_via_pi_shifts",
        "H on target, fanout onto n-1 copies, parallel H-CNOT-H shifts, unfanout, H",
        wb.finish(n + 1)?,
        n + 1,
        TargetSpec::Gate(GateKind::modq(2, n)),
    ))
}

/// Copies the last wire of each group onto the others. With no copies to make
/// the layers are identities so depth does not depend on the group size.
/// The parity route handles one group at a time (3 layers each), which keeps
/// the H-conjugated superposition to a single group.
fn copy_bits(wb: &mut WireBuilder, groups: &[Vec<usize>], prim: CopyPrimitive) -> Result<(), SynthError> {
    let arity = groups[0].len() - 1;
    let layers = match prim {
        CopyPrimitive::Fanout => 1,
        CopyPrimitive::Parity => 3 * groups.len(),
    };
    if arity == 0 {
        wb.identity_layers(layers);
        return Ok(());
    }
    match prim {
        CopyPrimitive::Fanout => {
            wb.gates(groups.iter().map(|g| (g.clone(), GateKind::Fanout { arity })).collect())?;
        }
        CopyPrimitive::Parity => {
            for g in groups {
                wb.each(g, &hadamard())?;
                wb.gates(vec![(g.clone(), GateKind::modq(2, arity))])?;
                wb.each(g, &hadamard())?;
            }
        }
    }
    Ok(())
}

/// MOD_q with the register bits copied through H-conjugated parity gates.
pub fn modq_from_parity(q: u32, n: usize) -> Result<ConstructionResult, SynthError> {
    modq_with_copies(q, n, CopyPrimitive::Parity)
}

/// MOD_q from the cycle matrix M = T†DT on a k-bit register: T, copy the
/// register to n blocks, one controlled-D per input in parallel, uncopy, T†,
/// then an OR of the register into the target and the inverse of everything
/// before the OR.
///
/// Lines: n inputs, target, n·k work bits (register plus n − 1 copies).
pub fn modq_with_copies(q: u32, n: usize, prim: CopyPrimitive) -> Result<ConstructionResult, SynthError> {
    require(q >= 2, "q must be at least 2")?;
    require(n >= 1, "MOD_q needs n >= 1")?;
    let k = digit_bits(q);
    let t = n;
    let c = |i: usize, j: usize| n + 1 + i * k + j;
    let reg = |i: usize| (0..k).map(|j| c(i, j)).collect::<Vec<_>>();
    let xs: Vec<usize> = (0..n).collect();
    let x = pauli_x();
    let tcirc = decompose_unitary(&cycle_matrices(q).t);

    let mut wb = WireBuilder::new(n + 1 + n * k);
    let cp0 = wb.checkpoint();
    wb.embed(&tcirc, &reg(0))?;

    let groups: Vec<Vec<usize>> = (0..k)
        .map(|j| (1..n).map(|i| c(i, j)).chain([c(0, j)]).collect())
        .collect();
    let copy_order = [groups.concat(), xs.clone(), vec![t]].concat();
    wb.arrange(&copy_order)?;
    copy_bits(&mut wb, &groups, prim)?;

    let blocks: Vec<Vec<usize>> = (0..n).map(|i| [vec![i], reg(i)].concat()).collect();
    wb.arrange(&[blocks.concat(), vec![t]].concat())?;
    controlled_d(&mut wb, q, &blocks)?;

    wb.arrange(&copy_order)?;
    copy_bits(&mut wb, &groups, prim)?;
    let or_order = [xs, reg(0), vec![t], (1..n).flat_map(reg).collect()].concat();
    wb.arrange(&or_order)?;
    wb.embed(&tcirc.inverse(), &reg(0))?;
    let cp1 = wb.checkpoint();

    // OR with negated inputs and negated target
    let or_span = [reg(0), vec![t]].concat();
    wb.each(&reg(0), &x)?;
    wb.gates(vec![(or_span.clone(), GateKind::toffoli(k))])?;
    wb.each(&or_span, &x)?;
    wb.undo(&cp0, &cp1)?;

    let prim_name = match prim {
        CopyPrimitive::Fanout => "fanout",
        CopyPrimitive::Parity => "parity",
    };
    Ok(ConstructionResult::new(
        format!("modq_from_{prim_name}"),
        format!(
            "T on a {k}-bit register, {prim_name} copies, controlled-D per input, uncopy, T†, OR into target, inverse"
        ),
        wb.finish(n + 1)?,
        n + 1,
        TargetSpec::Gate(GateKind::modq(q, n)),
    ))
}

/// Controlled-D on each block [x, r_0..r_{k-1}]: for every cycle state y
/// with a nontrivial eigenvalue, a phase conditioned on x and the register
/// equal to y. Register bits are X-conjugated to match y's zeros.
fn controlled_d(wb: &mut WireBuilder, q: u32, blocks: &[Vec<usize>]) -> Result<(), SynthError> {
    let k = blocks[0].len() - 1;
    let one = Cyclotomic::one(1);
    let x = pauli_x();
    let fixed = (1usize << k) - q as usize;
    let mut flipped = vec![false; k - 1];
    let mut toggle = |want: Vec<bool>, wb: &mut WireBuilder| -> Result<(), SynthError> {
        let wires: Vec<usize> = blocks
            .iter()
            .flat_map(|b| (0..k - 1).filter(|&j| want[j] != flipped[j]).map(move |j| b[1 + j]))
            .collect();
        wb.each(&wires, &x)?;
        flipped = want;
        Ok(())
    };
    for j in 1..q as usize {
        let y = fixed + j;
        toggle((0..k - 1).map(|b| (y >> (k - 1 - b)) & 1 == 0).collect(), wb)?;
        let ph = d_entry(q, y);
        let u = if y & 1 == 1 {
            diag(&[one.clone(), ph])
        } else {
            diag(&[ph, one.clone()])
        };
        wb.gates(blocks.iter().map(|b| (b.clone(), GateKind::controlled(k, u.clone()))).collect())?;
    }
    toggle(vec![false; k - 1], wb)?;
    Ok(())
}

/// Which register an adder writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DigitSum {
    /// b ← b + p·x
    IntoTarget,
    /// x ← x + p·b
    IntoInput,
}

/// Basis permutation on a [x, b] pair of k-bit blocks; non-digit values fixed.
pub fn digit_adder_permutation(q: u32, power: u32, kind: DigitSum) -> Vec<usize> {
    let k = digit_bits(q);
    let (qs, p) = (q as usize, power as usize);
    let mut perm = Vec::with_capacity(1 << (2 * k));
    for x in 0..1usize << k {
        for b in 0..1usize << k {
            let (nx, nb) = if x < qs && b < qs {
                match kind {
                    DigitSum::IntoTarget => (x, (b + p * x) % qs),
                    DigitSum::IntoInput => ((x + p * b) % qs, b),
                }
            } else {
                (x, b)
            };
            perm.push(nx << k | nb);
        }
    }
    perm
}

/// H_q on one k-bit block by exact two-level decomposition.
pub fn qudigit_h(q: u32, adjoint: bool) -> Result<ConstructionResult, SynthError> {
    require(q >= 2, "q must be at least 2")?;
    let k = digit_bits(q);
    let c = decompose_unitary(&qudigit_fourier(q, adjoint));
    Ok(ConstructionResult::new(
        if adjoint { "qudigit_h_inverse" } else { "qudigit_h" },
        "Gray-ordered two-level rotations",
        LayeredCircuit::new(k, 0, c.layers),
        k,
        TargetSpec::Gate(GateKind::QudigitH { q, adjoint }),
    ))
}

/// M_q (into the target block) or F_q (into each input block) as one digit
/// adder per input, applied in turn after moving that input next to b.
pub fn qudigit_adders(q: u32, n: usize, power: u32, kind: DigitSum) -> Result<ConstructionResult, SynthError> {
    require(q >= 2, "q must be at least 2")?;
    let k = digit_bits(q);
    let lines = (n + 1) * k;
    let digit = |i: usize| (i * k..(i + 1) * k).collect::<Vec<_>>();
    let b = digit(n);
    let adder = permutation_circuit(2 * k, &digit_adder_permutation(q, power % q, kind));
    let mut wb = WireBuilder::new(lines);
    for i in 0..n {
        let others: Vec<usize> = (0..n).filter(|&o| o != i).flat_map(digit).collect();
        wb.arrange(&[others, digit(i), b.clone()].concat())?;
        wb.embed(&adder, &[digit(i), b.clone()].concat())?;
    }
    wb.arrange(&(0..lines).collect::<Vec<_>>())?;
    let (name, gate) = match kind {
        DigitSum::IntoTarget => ("qudigit_m", GateKind::QudigitM { q, inputs: n, power }),
        DigitSum::IntoInput => ("qudigit_f", GateKind::QudigitF { q, inputs: n, power }),
    };
    Ok(ConstructionResult::new(
        name,
        "one digit adder per input, each input moved next to b",
        wb.finish(lines)?,
        lines,
        TargetSpec::Gate(gate),
    ))
}

/// Realizations of H_q, M_q(n) and F_q(n) over one- and two-level gates.
pub fn qudigit_gate_realizations(q: u32, n: usize) -> Result<Vec<ConstructionResult>, SynthError> {
    Ok(vec![
        qudigit_h(q, false)?,
        qudigit_adders(q, n, 1, DigitSum::IntoTarget)?,
        qudigit_adders(q, n, 1, DigitSum::IntoInput)?,
    ])
}

/// M_q = (H_q^{⊗(n+1)})^{-1} · F_q^{q-1} · H_q^{⊗(n+1)}.
pub fn mq_from_fq_conjugation(q: u32, n: usize) -> Result<ConstructionResult, SynthError> {
    require(q >= 2, "q must be at least 2")?;
    require(n >= 1, "M_q construction needs n >= 1")?;
    let k = digit_bits(q);
    let lines = (n + 1) * k;
    let all: Vec<usize> = (0..lines).collect();
    let blocks: Vec<Vec<usize>> = all.chunks(k).map(|c| c.to_vec()).collect();
    let h_layer = |adjoint: bool| {
        blocks
            .iter()
            .map(|b| (b.clone(), GateKind::QudigitH { q, adjoint }))
            .collect::<Vec<_>>()
    };
    let mut wb = WireBuilder::new(lines);
    wb.gates(h_layer(false))?;
    wb.gates(vec![(all.clone(), GateKind::QudigitF { q, inputs: n, power: q - 1 })])?;
    wb.gates(h_layer(true))?;
    Ok(ConstructionResult::new(
        "mq_from_fq_conjugation",
        "H_q on every block, F_q^(q-1), inverse H_q on every block",
        wb.finish(lines)?,
        lines,
        TargetSpec::Gate(GateKind::QudigitM { q, inputs: n, power: 1 }),
    ))
}

/// Fanout groups for digit registers: bit of weight 2^j is copied onto
/// 2^j − 1 work wires numbered from `first_work`. Each group is
/// [copies.., bit].
fn weighted_groups(q: u32, n: usize, first_work: usize) -> Vec<Vec<usize>> {
    let k = digit_bits(q);
    let mut next = first_work;
    let mut groups = Vec::new();
    for i in 0..n {
        for j in 0..k {
            let weight = 1usize << (k - 1 - j);
            let mut g: Vec<usize> = (next..next + weight - 1).collect();
            next += weight - 1;
            g.push(i * k + j);
            groups.push(g);
        }
    }
    groups
}

fn weighted_fanout(wb: &mut WireBuilder, groups: &[Vec<usize>]) -> Result<(), SynthError> {
    wb.gates(
        groups
            .iter()
            .filter(|g| g.len() > 1)
            .map(|g| (g.clone(), GateKind::Fanout { arity: g.len() - 1 }))
            .collect(),
    )?;
    Ok(())
}

/// Reference map: b flips when Σ x_i ≡ r (mod q), digits read as k-bit
/// numbers with the target on the last line.
pub fn digit_sum_oracle(q: u32, r: u32, n: usize) -> TargetSpec {
    let k = digit_bits(q);
    let map = move |x: u64| {
        let sum: u64 = (0..n).map(|i| (x >> (1 + (n - 1 - i) * k)) & ((1 << k) - 1)).sum();
        if sum % u64::from(q) == u64::from(r) {
            x ^ 1
        } else {
            x
        }
    };
    TargetSpec::Map {
        name: format!("b xor [sum of {n} digits = {r} mod {q}]"),
        map: Arc::new(map),
    }
}

/// Digit-sum test: every bit fanned out by its weight, one MOD_{q,r} gate over
/// all copies into b, unfanout. Work: n·(2^k − 1 − k) copies.
pub fn mod_hat(q: u32, r: u32, n: usize) -> Result<ConstructionResult, SynthError> {
    require(q >= 2, "q must be at least 2")?;
    require(r < q, "residue must be below q")?;
    require(n >= 1, "needs n >= 1")?;
    let k = digit_bits(q);
    let b = n * k;
    let groups = weighted_groups(q, n, b + 1);
    let lines = b + 1 + n * ((1 << k) - 1 - k);
    let all = groups.concat();
    let mut wb = WireBuilder::new(lines);
    wb.arrange(&[all.clone(), vec![b]].concat())?;
    weighted_fanout(&mut wb, &groups)?;
    wb.gates(vec![([all.clone(), vec![b]].concat(), GateKind::mod_qr(q, r, all.len()))])?;
    weighted_fanout(&mut wb, &groups)?;
    wb.arrange(&(0..lines).collect::<Vec<_>>())?;
    Ok(ConstructionResult::new(
        "mod_hat",
        "weighted fanout of digit bits, one MOD_{q,r} into b, unfanout",
        wb.finish(b + 1)?,
        b + 1,
        digit_sum_oracle(q, r, n),
    ))
}

/// M_q from MOD_{q,r} gates. C: for every r a MOD_{q,r} of the weighted bit
/// copies into its own line m_r; then bit j of S = (Σx) mod q is the OR of
/// the m_r whose r has bit j set (an AND with a constant 1 bit is the wire
/// itself, with a constant 0 the wire is dropped). Then (S, b) ↦ (S, b + S),
/// then C^{-1}.
///
/// Work: n·(2^k − 1 − k) copies, q lines m_r, k lines S.
pub fn mq_from_modq(q: u32, n: usize) -> Result<ConstructionResult, SynthError> {
    require(q >= 2, "q must be at least 2")?;
    require(n >= 1, "needs n >= 1")?;
    let k = digit_bits(q);
    let b: Vec<usize> = (n * k..(n + 1) * k).collect();
    let first_copy = (n + 1) * k;
    let groups = weighted_groups(q, n, first_copy);
    let ncopies = n * ((1 << k) - 1 - k);
    let m: Vec<usize> = (first_copy + ncopies..first_copy + ncopies + q as usize).collect();
    let s: Vec<usize> = (m[m.len() - 1] + 1..m[m.len() - 1] + 1 + k).collect();
    let lines = s[k - 1] + 1;
    let all = groups.concat();
    let x = pauli_x();

    let mut wb = WireBuilder::new(lines);
    let cp0 = wb.checkpoint();
    for r in 0..q {
        let order = wb.order_with(&all, &[m[r as usize]]);
        wb.arrange(&order)?;
        if r == 0 {
            weighted_fanout(&mut wb, &groups)?;
        }
        wb.gates(vec![(
            [all.clone(), vec![m[r as usize]]].concat(),
            GateKind::mod_qr(q, r, all.len()),
        )])?;
    }
    weighted_fanout(&mut wb, &groups)?;
    for (idx, &sj) in s.iter().enumerate() {
        let weight = 1usize << (k - 1 - idx);
        let ms: Vec<usize> = (0..q as usize).filter(|r| r & weight != 0).map(|r| m[r]).collect();
        let span = [ms.clone(), vec![sj]].concat();
        let order = wb.order_with(&[], &span);
        wb.arrange(&order)?;
        wb.each(&ms, &x)?;
        wb.gates(vec![(span.clone(), GateKind::toffoli(ms.len()))])?;
        wb.each(&span, &x)?;
    }
    let cp1 = wb.checkpoint();

    let sb = [s.clone(), b.clone()].concat();
    let order = wb.order_with(&[], &sb);
    wb.arrange(&order)?;
    let add = permutation_circuit(2 * k, &digit_adder_permutation(q, 1, DigitSum::IntoTarget));
    wb.embed(&add, &sb)?;
    wb.restore(&cp1)?;
    wb.undo(&cp0, &cp1)?;

    let targets = (n + 1) * k;
    Ok(ConstructionResult::new(
        "mq_from_modq",
        "MOD_{q,r} per residue, ORs into the bits of S, (S,b) to (S,b+S), uncompute",
        wb.finish(targets)?,
        targets,
        TargetSpec::Gate(GateKind::QudigitM { q, inputs: n, power: 1 }),
    )
    .with_domain(InputDomain::Digits { q }))
}

/// Bit fanout from F_q: zeroed digit blocks D_i and control block (0..0, x);
/// F_q copies x into every D_i, a controlled-not from each D_i's low bit to
/// y_i, and F_q^{q-1} clears the blocks. Work: n·k + k − 1.
pub fn f_from_fq(q: u32, n: usize) -> Result<ConstructionResult, SynthError> {
    require(q >= 2, "q must be at least 2")?;
    require(n >= 1, "needs n >= 1")?;
    let k = digit_bits(q);
    let xw = n;
    let d = |i: usize| (n + 1 + i * k..n + 1 + (i + 1) * k).collect::<Vec<_>>();
    let z: Vec<usize> = (n + 1 + n * k..n + k + n * k).collect();
    let lines = n + k + n * k;
    let ys: Vec<usize> = (0..n).collect();
    let fq_span = [(0..n).flat_map(d).collect(), z.clone(), vec![xw]].concat();
    let mut wb = WireBuilder::new(lines);
    wb.arrange(&[ys.clone(), fq_span.clone()].concat())?;
    wb.gates(vec![(fq_span.clone(), GateKind::QudigitF { q, inputs: n, power: 1 })])?;
    let pairs: Vec<(usize, usize)> = (0..n).map(|i| (d(i)[k - 1], ys[i])).collect();
    wb.cnots(&pairs)?;
    wb.gates(vec![(fq_span, GateKind::QudigitF { q, inputs: n, power: q - 1 })])?;
    wb.arrange(&(0..lines).collect::<Vec<_>>())?;
    Ok(ConstructionResult::new(
        "f_from_fq",
        "F_q into zeroed digit blocks, controlled-nots to the outputs, F_q^(q-1)",
        wb.finish(n + 1)?,
        n + 1,
        TargetSpec::Gate(GateKind::Fanout { arity: n }),
    ))
}

/// MOD_{q,r} from ¬MOD_q with q − r extra inputs held at 1 (q of them for r = 0).
pub fn modqr_from_neg_modq(q: u32, r: u32, n: usize) -> Result<ConstructionResult, SynthError> {
    require(q >= 2, "q must be at least 2")?;
    require(r < q, "residue must be below q")?;
    let extra = (q - r) as usize;
    let t = n;
    let xs: Vec<usize> = (0..n).collect();
    let consts: Vec<usize> = (n + 1..n + 1 + extra).collect();
    let lines = n + 1 + extra;
    let span = [xs, consts.clone(), vec![t]].concat();
    let x = pauli_x();
    let mut wb = WireBuilder::new(lines);
    wb.arrange(&span)?;
    wb.each(&consts, &x)?;
    wb.gates(vec![(span.clone(), GateKind::neg_modq(q, n + extra))])?;
    wb.each(&consts, &x)?;
    wb.arrange(&(0..lines).collect::<Vec<_>>())?;
    Ok(ConstructionResult::new(
        "modqr_from_neg_modq",
        "constant-1 lines set by X, one negated MOD_q, constants reset",
        wb.finish(n + 1)?,
        n + 1,
        TargetSpec::Gate(GateKind::mod_qr(q, r, n)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{to_unitary, CompiledCircuit, DenseOperator};

    /// Independent check: run every basis input with zero work lines.
    fn realizes_gate(r: &ConstructionResult) {
        let TargetSpec::Gate(g) = &r.target else { panic!() };
        let sim = CompiledCircuit::new(&r.circuit).unwrap();
        let nt = r.target_lines.len();
        let shift = r.work_lines.len();
        let gate = DenseOperator::of_gate(g);
        for x in 0..1u64 << nt {
            if !r.domain.contains(x, nt) {
                continue;
            }
            let got = sim.run_basis(x << shift);
            for (idx, a) in got.iter() {
                assert_eq!(idx & ((1 << shift) - 1), 0, "{}: work dirty on {x}", r.name);
                assert_eq!(gate.get(idx >> shift, x), *a, "{}: input {x}", r.name);
            }
        }
    }

    #[test]
    fn fanout_and_parity_conjugates() {
        for n in 1..=4 {
            let p = parity_from_fanout(n).unwrap();
            assert_eq!(p.circuit.depth(), 3);
            assert_eq!(to_unitary(&p.circuit).unwrap(), DenseOperator::of_gate(&GateKind::modq(2, n)));
            let f = fanout_from_parity(n).unwrap();
            assert_eq!(
                to_unitary(&f.circuit).unwrap(),
                DenseOperator::of_gate(&GateKind::Fanout { arity: n })
            );
        }
    }

    #[test]
    fn pi_shift_parity() {
        for n in 2..=4 {
            realizes_gate(&parity_via_pi_shifts(n).unwrap());
        }
    }

    #[test]
    fn modq_small() {
        for (q, n) in [(2, 2), (3, 2), (3, 3), (4, 2)] {
            for prim in [CopyPrimitive::Fanout, CopyPrimitive::Parity] {
                realizes_gate(&modq_with_copies(q, n, prim).unwrap());
            }
        }
    }

    #[test]
    fn qudigit_adders_exact() {
        for q in [2, 3, 4] {
            for r in qudigit_gate_realizations(q, 2).unwrap() {
                let TargetSpec::Gate(g) = &r.target else { panic!() };
                assert_eq!(to_unitary(&r.circuit).unwrap(), DenseOperator::of_gate(g), "{} q={q}", r.name);
            }
        }
    }

    #[test]
    fn lemma_chain_small() {
        realizes_gate(&f_from_fq(3, 2).unwrap());
        realizes_gate(&modqr_from_neg_modq(3, 2, 2).unwrap());
        realizes_gate(&mq_from_modq(2, 2).unwrap());
        let c = mq_from_fq_conjugation(3, 1).unwrap();
        assert_eq!(
            to_unitary(&c.circuit).unwrap(),
            DenseOperator::of_gate(&GateKind::QudigitM { q: 3, inputs: 1, power: 1 })
        );
    }

    #[test]
    fn mod_hat_examples() {
        // digits (1, 2), target 0, q = 3, r = 0: sum 3 flips b
        let r = mod_hat(3, 0, 2).unwrap();
        let sim = CompiledCircuit::new(&r.circuit).unwrap();
        let shift = r.work_lines.len();
        let x = 0b01_10_0u64;
        assert_eq!(sim.run_basis(x << shift).as_basis(), Some((x ^ 1) << shift));
        let r = mod_hat(3, 1, 2).unwrap();
        let sim = CompiledCircuit::new(&r.circuit).unwrap();
        let x = 0b10_10_0u64;
        assert_eq!(sim.run_basis(x << shift).as_basis(), Some((x ^ 1) << shift));
    }
}
