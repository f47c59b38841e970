//! Replaces qudigit and MOD_q gates by their realizations, leaving one-qubit,
//! controlled, fanout and explicit-unitary blocks.

use super::constructions::{
    modq_with_copies, modqr_from_neg_modq, parity_from_fanout, qudigit_adders, qudigit_h,
    CopyPrimitive, DigitSum, SynthError,
};
use super::ConstructionResult;
use crate::circuit::{pauli_x, Block, CircuitBuilder, GateKind, Layer, LayeredCircuit, Residue};

/// Realization of one gate with its lines first and work lines after, or
/// `None` for gates that stay.
fn realization(g: &GateKind) -> Result<Option<LayeredCircuit>, SynthError> {
    let r = match g {
        GateKind::OneQubit { .. }
        | GateKind::ControlledU { .. }
        | GateKind::Fanout { .. }
        | GateKind::Unitary { .. } => return Ok(None),
        GateKind::QudigitH { q, adjoint } => qudigit_h(*q, *adjoint)?.circuit,
        GateKind::QudigitM { q, inputs, power } => {
            qudigit_adders(*q, *inputs, *power, DigitSum::IntoTarget)?.circuit
        }
        GateKind::QudigitF { q, inputs, power } => {
            qudigit_adders(*q, *inputs, *power, DigitSum::IntoInput)?.circuit
        }
        GateKind::ModQ {
            q,
            inputs,
            residue,
            negated,
        } => {
            let n = *inputs;
            let base = if n == 0 {
                LayeredCircuit::empty(1)
            } else {
                match residue {
                    Residue::NonZero if *q == 2 => parity_from_fanout(n)?.circuit,
                    Residue::NonZero => modq_with_copies(*q, n, CopyPrimitive::Fanout)?.circuit,
                    Residue::Exactly(r) => modqr_from_neg_modq(*q, *r, n)?.circuit,
                }
            };
            // with no inputs the sum is 0: only Exactly(0) flips
            let flip_empty = n == 0 && *residue == Residue::Exactly(0);
            let base = lower_to_primitives(&base)?;
            if *negated != flip_empty {
                let mut b = CircuitBuilder::new(base.num_lines());
                b.append(&base)?;
                b.tensor(vec![(n, GateKind::one_qubit(pauli_x()))])?;
                b.finish(base.num_inputs)
            } else {
                base
            }
        }
    };
    Ok(Some(lower_to_primitives(&r)?))
}

fn widen(layer: &Layer, extra: usize) -> Layer {
    match layer {
        Layer::Tensor { blocks } if extra > 0 => {
            let mut blocks = blocks.clone();
            if let Some(Block::Identity { width }) = blocks.last_mut() {
                *width += extra;
            } else {
                blocks.push(Block::Identity { width: extra });
            }
            Layer::Tensor { blocks }
        }
        other => other.clone(),
    }
}

/// Expands every QudigitH/M/F and ModQ gate. Layers holding such gates are
/// split: the remaining gates first, then each realization in turn, moved next
/// to a shared pool of work lines appended below the original register.
pub fn lower_to_primitives(c: &LayeredCircuit) -> Result<LayeredCircuit, SynthError> {
    c.validate()?;
    let lines = c.num_lines();
    let mut plans: Vec<Vec<(usize, usize, LayeredCircuit)>> = Vec::new();
    let mut pool = 0;
    for layer in &c.layers {
        let mut plan = Vec::new();
        for (start, g) in layer.gates() {
            if let Some(r) = realization(g)? {
                pool = pool.max(r.num_lines() - g.num_lines());
                plan.push((start, g.num_lines(), r));
            }
        }
        plans.push(plan);
    }
    let total = lines + pool;
    let mut b = CircuitBuilder::new(total);
    for (layer, plan) in c.layers.iter().zip(plans) {
        if plan.is_empty() {
            b.push_layer(widen(layer, pool));
            continue;
        }
        let kept: Vec<(usize, GateKind)> = layer
            .gates()
            .into_iter()
            .filter(|(s, _)| !plan.iter().any(|(ps, _, _)| ps == s))
            .map(|(s, g)| (s, g.clone()))
            .collect();
        if !kept.is_empty() {
            b.tensor(kept)?;
        }
        for (start, width, r) in plan {
            let work = r.num_lines() - width;
            let end = start + width;
            // new position of each line: the gate's work lines follow it
            let order: Vec<usize> = (0..end)
                .chain(lines..lines + work)
                .chain(end..lines)
                .chain(lines + work..total)
                .collect();
            let mut dest = vec![0; total];
            for (pos, &line) in order.iter().enumerate() {
                dest[line] = pos;
            }
            let moved = dest.iter().enumerate().any(|(i, &d)| i != d);
            if moved {
                b.permute(&dest)?;
            }
            b.append_at(&r, start)?;
            if moved {
                let back: Vec<usize> = order.clone();
                b.permute(&back)?;
            }
        }
    }
    Ok(LayeredCircuit::new(c.num_inputs, c.num_work + pool, b.finish(c.num_inputs).layers))
}

/// Lowers a construction; new pool lines join its work lines.
pub fn lower_result(r: &ConstructionResult) -> Result<ConstructionResult, SynthError> {
    let circuit = lower_to_primitives(&r.circuit)?;
    let mut work = r.work_lines.clone();
    work.extend(r.circuit.num_lines()..circuit.num_lines());
    Ok(ConstructionResult {
        name: format!("{} (lowered)", r.name),
        description: r.description.clone(),
        circuit,
        target_lines: r.target_lines.clone(),
        work_lines: work,
        target: r.target.clone(),
        domain: r.domain,
    })
}
