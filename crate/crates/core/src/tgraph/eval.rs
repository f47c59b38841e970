//! Amplitude of a basis state in a tensor graph, by height-wise dynamic
//! programming over color sums or by summing over every path.

use crate::arith::Cyclotomic;

use super::{ColorProduct, ColorSum, GraphError, NodeKind, TensorGraph};

/// Largest number of terms a color sum may hold during the dynamic program.
pub const COLOR_SUM_CAP: usize = 1_000_000;
/// Largest number of paths the path sum will enumerate.
pub const PATH_CAP: u128 = 100_000;

fn check_basis(g: &TensorGraph, x: u64) -> Result<(), GraphError> {
    let n = g.num_lines();
    if n < 64 && x >> n != 0 {
        return Err(GraphError::BadBasis { index: x, lines: n });
    }
    Ok(())
}

pub fn amplitude_dp(g: &TensorGraph, x: u64) -> Result<Cyclotomic, GraphError> {
    amplitude_dp_capped(g, x, COLOR_SUM_CAP)
}

/// Walks heights top to bottom. An arrival's value is its feeding departure's
/// value times the edge's amplitude for the bit of `x` on that line and the
/// edge's colors; a departure's value is the sum over its arrivals.
pub fn amplitude_dp_capped(g: &TensorGraph, x: u64, cap: usize) -> Result<Cyclotomic, GraphError> {
    check_basis(g, x)?;
    let n = g.num_lines();
    let mut value: Vec<Option<ColorSum>> = vec![None; g.nodes.len()];
    value[g.source] = Some(ColorSum::scalar(Cyclotomic::one(1)));
    for level in g.nodes_by_height() {
        for id in level {
            let v = match g.nodes[id].kind {
                NodeKind::Arrival => match g.v_in[id] {
                    None => continue,
                    Some(e) => {
                        let edge = &g.vertical[e];
                        let bit = ((x >> (n - 1 - edge.line)) & 1) as usize;
                        value[edge.from]
                            .as_ref()
                            .map(|s| s.mul_term(&edge.amp[bit], &edge.colors))
                            .unwrap_or_default()
                    }
                },
                NodeKind::Departure => {
                    let mut acc = ColorSum::zero();
                    for &a in &g.h_in[id] {
                        if let Some(s) = &value[a] {
                            acc = acc.add(s);
                        }
                    }
                    acc
                }
            };
            if v.len() > cap {
                return Err(GraphError::CapExceeded {
                    what: "color sum size",
                    cap: cap as u128,
                });
            }
            value[id] = Some(v);
        }
    }
    let last = value[g.terminal].take().unwrap_or_default();
    last.as_scalar().ok_or_else(|| GraphError::UnresolvedColors(last.to_string()))
}

pub fn amplitude_pathsum(g: &TensorGraph, x: u64) -> Result<Cyclotomic, GraphError> {
    amplitude_pathsum_capped(g, x, PATH_CAP)
}

/// Σ over paths of the amplitude product, each kept only when its colors
/// cancel to 1.
pub fn amplitude_pathsum_capped(g: &TensorGraph, x: u64, cap: u128) -> Result<Cyclotomic, GraphError> {
    check_basis(g, x)?;
    let mut total = Cyclotomic::zero(1);
    for path in g.paths(cap)? {
        let (amp, colors) = g.path_term(&path, x);
        if colors.is_annihilated() || amp.is_zero() {
            continue;
        }
        if colors != ColorProduct::one() {
            return Err(GraphError::UnresolvedColors(colors.to_string()));
        }
        total = &total + &amp;
    }
    Ok(total)
}
