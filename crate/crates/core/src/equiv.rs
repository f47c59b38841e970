//! Exact realization checks: a construction must map every allowed basis input
//! (work lines at 0) to the target operator's output with work lines at 0.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::arith::{ratio, sqrt_of_integer};
use crate::circuit::{hadamard, CircuitBuilder, GateKind, LayeredCircuit};
use crate::sim::{CompiledCircuit, SimError, StateVector};
use crate::synth::{ConstructionResult, TargetSpec};

/// Default line limit for realization checks, which simulate sparse basis inputs.
pub const REALIZATION_LINE_CAP: usize = crate::sim::SPARSE_LINE_CAP;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquivError {
    #[error("{lines} lines exceed the realization cap of {cap}")]
    CapExceeded { lines: usize, cap: usize },
    #[error("target and work lines do not partition the {0} circuit lines")]
    BadPartition(usize),
    #[error("reference circuit has {got} lines, expected {expected}")]
    ReferenceSize { got: usize, expected: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    /// Input index over the target lines; states are over all lines.
    pub input: u64,
    pub expected: StateVector,
    pub got: StateVector,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub name: String,
    pub checked_inputs: usize,
    pub mismatches: Vec<Mismatch>,
    /// Inputs after which some work line carried weight.
    pub work_bit_violations: Vec<u64>,
}

impl EquivalenceReport {
    pub fn realized(&self) -> bool {
        self.mismatches.is_empty() && self.work_bit_violations.is_empty()
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "construction: {}", self.name)?;
        writeln!(f, "  checked inputs: {}", self.checked_inputs)?;
        writeln!(f, "  mismatches: {}", self.mismatches.len())?;
        for m in self.mismatches.iter().take(5) {
            writeln!(f, "    input {}:", m.input)?;
            writeln!(f, "      expected {}", m.expected.dump().trim_end().replace('\n', ", "))?;
            writeln!(f, "      got      {}", m.got.dump().trim_end().replace('\n', ", "))?;
        }
        writeln!(f, "  work-bit violations: {}", self.work_bit_violations.len())?;
        if !self.work_bit_violations.is_empty() {
            let shown: Vec<String> = self.work_bit_violations.iter().take(10).map(u64::to_string).collect();
            writeln!(f, "    inputs {}", shown.join(", "))?;
        }
        write!(f, "  verdict: {}", if self.realized() { "realized" } else { "NOT realized" })
    }
}

/// Places target-line bits of `x` (first target line = most significant).
fn spread(x: u64, target_lines: &[usize], lines: usize) -> u64 {
    let nt = target_lines.len();
    target_lines.iter().enumerate().fold(0, |acc, (i, &line)| {
        acc | (((x >> (nt - 1 - i)) & 1) << (lines - 1 - line))
    })
}

fn cat_state(n: usize) -> StateVector {
    let amp = sqrt_of_integer(2).div_rational(&ratio(2, 1));
    let all = if n == 0 { 0 } else { (1u64 << n) - 1 };
    StateVector::from_entries(n, [(0, amp.clone()), (all, amp)])
}

/// Checks a construction with the default line cap.
pub fn check_realization(r: &ConstructionResult) -> Result<EquivalenceReport, EquivError> {
    check_realization_capped(r, REALIZATION_LINE_CAP)
}

pub fn check_realization_capped(r: &ConstructionResult, cap: usize) -> Result<EquivalenceReport, EquivError> {
    let lines = r.circuit.num_lines();
    if lines > cap {
        return Err(EquivError::CapExceeded { lines, cap });
    }
    let mut seen = vec![false; lines];
    for &l in r.target_lines.iter().chain(&r.work_lines) {
        if l >= lines || std::mem::replace(&mut seen[l], true) {
            return Err(EquivError::BadPartition(lines));
        }
    }
    if seen.contains(&false) {
        return Err(EquivError::BadPartition(lines));
    }
    let nt = r.target_lines.len();
    let work_mask: u64 = r
        .work_lines
        .iter()
        .fold(0, |acc, &l| acc | (1 << (lines - 1 - l)));

    // the circuit under test, with H prepended for cat-state targets
    let circuit = match &r.target {
        TargetSpec::CatState { .. } => {
            let mut b = CircuitBuilder::new(lines);
            b.tensor(vec![(r.target_lines[0], GateKind::one_qubit(hadamard()))])
                .map_err(SimError::from)?;
            b.append(&r.circuit).map_err(SimError::from)?;
            b.finish(r.circuit.num_inputs)
        }
        _ => r.circuit.clone(),
    };
    let sim = CompiledCircuit::new(&circuit)?;
    let reference = match &r.target {
        TargetSpec::Circuit(c) => {
            if c.num_lines() != nt {
                return Err(EquivError::ReferenceSize {
                    got: c.num_lines(),
                    expected: nt,
                });
            }
            Some(CompiledCircuit::new(c)?)
        }
        _ => None,
    };

    let inputs: Vec<u64> = match &r.target {
        TargetSpec::CatState { .. } => vec![0],
        _ => (0..1u64 << nt).filter(|&x| r.domain.contains(x, nt)).collect(),
    };

    let expected_local = |x: u64| -> StateVector {
        match &r.target {
            TargetSpec::Gate(g) => StateVector::from_entries(nt, g.column(x)),
            TargetSpec::Circuit(_) => reference.as_ref().unwrap().run_basis(x),
            TargetSpec::CatState { n } => cat_state(*n),
            TargetSpec::Map { map, .. } => StateVector::basis(nt, map(x)),
        }
    };

    let outcomes: Vec<(u64, Option<Mismatch>, bool)> = inputs
        .par_iter()
        .map(|&x| {
            let got = sim.run_basis(spread(x, &r.target_lines, lines));
            let dirty = got.iter().any(|(idx, _)| idx & work_mask != 0);
            let expected = StateVector::from_entries(
                lines,
                expected_local(x)
                    .iter()
                    .map(|(&i, a)| (spread(i, &r.target_lines, lines), a.clone())),
            );
            let mismatch = (got != expected).then_some(Mismatch { input: x, expected, got });
            (x, mismatch, dirty)
        })
        .collect();

    let mut report = EquivalenceReport {
        name: r.name.clone(),
        checked_inputs: inputs.len(),
        ..Default::default()
    };
    for (x, mismatch, dirty) in outcomes {
        if let Some(m) = mismatch {
            report.mismatches.push(m);
        }
        if dirty {
            report.work_bit_violations.push(x);
        }
    }
    Ok(report)
}

/// Depth of each family member and whether they all agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthProfile {
    pub constant: bool,
    pub depths: BTreeMap<usize, usize>,
}

pub fn check_constant_depth<F, E>(family: F, ns: &[usize]) -> Result<DepthProfile, E>
where
    F: Fn(usize) -> Result<ConstructionResult, E>,
{
    assert!(!ns.is_empty(), "sample list must be nonempty");
    let mut depths = BTreeMap::new();
    for &n in ns {
        depths.insert(n, family(n)?.circuit.depth());
    }
    let first = *depths.values().next().unwrap();
    Ok(DepthProfile {
        constant: depths.values().all(|&d| d == first),
        depths,
    })
}

/// Identity on `n` lines as a trivially realized construction.
pub fn identity_construction(n: usize) -> ConstructionResult {
    let mut b = CircuitBuilder::new(n);
    b.identity_layer();
    ConstructionResult::new(
        "identity",
        "one identity layer",
        b.finish(n),
        n,
        TargetSpec::Circuit(LayeredCircuit::empty(n)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{cat_log_depth, modq_from_parity, parity_from_fanout};

    #[test]
    fn identity_is_realized() {
        let rep = check_realization(&identity_construction(3)).unwrap();
        assert!(rep.realized());
        assert_eq!(rep.checked_inputs, 8);
    }

    #[test]
    fn parity_from_fanout_realizes_mod2() {
        assert!(check_realization(&parity_from_fanout(3).unwrap()).unwrap().realized());
    }

    #[test]
    fn corrupted_circuit_is_caught() {
        let mut r = parity_from_fanout(3).unwrap();
        r.circuit.layers.remove(0);
        let rep = check_realization(&r).unwrap();
        assert!(!rep.realized());
        assert!(!rep.mismatches.is_empty());
    }

    #[test]
    fn dirty_work_is_reported() {
        let mut r = modq_from_parity(2, 2).unwrap();
        // drop the final layers so the register is left populated
        let keep = r.circuit.layers.len() / 2;
        r.circuit.layers.truncate(keep);
        let rep = check_realization(&r).unwrap();
        assert!(!rep.realized());
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            check_realization(&identity_construction(21)),
            Err(EquivError::CapExceeded { lines: 21, cap: 20 })
        ));
        let r = identity_construction(5);
        assert!(check_realization_capped(&r, 4).is_err());
        assert!(check_realization_capped(&r, 5).unwrap().realized());
    }

    #[test]
    fn cat_cascade_and_depth_profiles() {
        for n in 1..=6 {
            assert!(check_realization(&cat_log_depth(n).unwrap()).unwrap().realized());
        }
        let p = check_constant_depth(cat_log_depth, &[2, 4, 8]).unwrap();
        assert!(!p.constant);
        assert_eq!(p.depths.values().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
        let p = check_constant_depth(parity_from_fanout, &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert!(p.constant);
        let p = check_constant_depth(|n| modq_from_parity(3, n), &[1, 2, 3, 4, 5, 6]).unwrap();
        assert!(p.constant);
    }
}
