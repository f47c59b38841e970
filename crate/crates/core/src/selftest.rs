//! The acceptance checks 1–11, run through the library's own routes. Each
//! check returns a one-line detail; the command line prints them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{ratio, sqrt_of_integer, Cyclotomic, Matrix};
use crate::circuit::random::{random_circuit, GateSet};
use crate::circuit::{hadamard, CircuitBuilder, GateKind, LayeredCircuit};
use crate::equiv::{check_realization, check_realization_capped};
use crate::lang::{decide, AcceptanceQuery, Engine, Mode, Verdict};
use crate::sim::{apply_circuit, to_unitary, CompiledCircuit, DenseOperator, StateVector};
use crate::synth::matrices::cycle_matrices;
use crate::synth::{
    cat_log_depth, f_from_fq, fanout_from_parity, mod_hat, modq_from_parity, mq_from_fq_conjugation,
    mq_from_modq, parity_from_fanout, parity_via_pi_shifts,
};
use crate::tgraph::{
    amplitude_dp, amplitude_pathsum_capped, build_from_circuit, colored_example, two_path_example,
};

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

type Check = (u8, &'static str, fn() -> Outcome);

const CHECKS: &[Check] = &[
    (1, "cat state", cat_state),
    (2, "fanout and parity", fanout_parity),
    (3, "MOD_q from parity", modq),
    (4, "conjugation identity", conjugation),
    (5, "MOD-hat chain", mod_hat_chain),
    (6, "fanout from base-q fanout", fanout_from_fq),
    (7, "tensor graph oracle", tensor_oracle),
    (8, "worked graph examples", worked_examples),
    (9, "structural bounds", structure),
    (10, "language semantics", languages),
    (11, "exact arithmetic", arithmetic),
];

pub fn run() -> Vec<CheckResult> {
    CHECKS.iter().map(|&(id, name, f)| finish(id, name, f())).collect()
}

pub fn run_one(id: u8) -> Option<CheckResult> {
    CHECKS
        .iter()
        .find(|c| c.0 == id)
        .map(|&(id, name, f)| finish(id, name, f()))
}

fn finish(id: u8, name: &'static str, o: Outcome) -> CheckResult {
    let (passed, detail) = match o {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult { id, name, passed, detail }
}

fn cat(n: usize) -> StateVector {
    let a = sqrt_of_integer(2).div_rational(&ratio(2, 1));
    StateVector::from_entries(n, [(0, a.clone()), ((1u64 << n) - 1, a)])
}

fn cat_state() -> Outcome {
    for n in 1..=10 {
        let mut b = CircuitBuilder::new(n);
        b.tensor(vec![(n - 1, GateKind::one_qubit(hadamard()))]).unwrap();
        if n > 1 {
            b.tensor(vec![(0, GateKind::Fanout { arity: n - 1 })]).unwrap();
        }
        let fan = apply_circuit(&StateVector::basis(n, 0), &b.finish(n)).map_err(|e| e.to_string())?;
        ensure(fan == cat(n), || format!("fanout route wrong at n = {n}"))?;
        let mut b = CircuitBuilder::new(n);
        b.tensor(vec![(0, GateKind::one_qubit(hadamard()))]).unwrap();
        b.append(&cat_log_depth(n).map_err(|e| e.to_string())?.circuit).unwrap();
        let log = apply_circuit(&StateVector::basis(n, 0), &b.finish(n)).map_err(|e| e.to_string())?;
        ensure(log == fan, || format!("log-depth route differs at n = {n}"))?;
    }
    Ok("both routes give the cat state for n = 1..10".into())
}

fn fanout_parity() -> Outcome {
    for n in 1..=6 {
        let u = to_unitary(&parity_from_fanout(n).unwrap().circuit).map_err(|e| e.to_string())?;
        ensure(u == DenseOperator::of_gate(&GateKind::modq(2, n)), || format!("parity n = {n}"))?;
        let u = to_unitary(&fanout_from_parity(n).unwrap().circuit).map_err(|e| e.to_string())?;
        ensure(u == DenseOperator::of_gate(&GateKind::Fanout { arity: n }), || format!("fanout n = {n}"))?;
    }
    for n in 2..=5 {
        let rep = check_realization(&parity_via_pi_shifts(n).unwrap()).map_err(|e| e.to_string())?;
        ensure(rep.realized(), || format!("phase-shift parity fails at n = {n}"))?;
    }
    Ok("exact operators for n = 1..6; phase-shift parity realized for n = 2..5".into())
}

fn modq() -> Outcome {
    let grid: Vec<(u32, usize)> = [2u32, 3, 5].iter().flat_map(|&q| (1..=5).map(move |n| (q, n))).collect();
    let results: Vec<Result<(u32, usize, usize), String>> = grid
        .par_iter()
        .map(|&(q, n)| {
            let r = modq_from_parity(q, n).map_err(|e| e.to_string())?;
            let rep = check_realization_capped(&r, 24).map_err(|e| e.to_string())?;
            ensure(rep.realized(), || format!("q = {q}, n = {n} not realized"))?;
            Ok((q, n, r.circuit.depth()))
        })
        .collect();
    let mut depths = std::collections::BTreeMap::<u32, Vec<usize>>::new();
    for r in results {
        let (q, _, d) = r?;
        depths.entry(q).or_default().push(d);
    }
    for (q, ds) in &depths {
        ensure(ds.iter().all(|d| d == &ds[0]), || format!("depth varies with n for q = {q}: {ds:?}"))?;
    }
    let cm = cycle_matrices(3);
    let w = |p| Cyclotomic::root(3, p);
    let s = sqrt_of_integer(3).div_rational(&ratio(3, 1));
    let (o, z) = (Cyclotomic::one(1), Cyclotomic::zero(1));
    let shown_t = Matrix::from_rows(vec![
        vec![z.clone(), z.clone(), z.clone(), o.clone()],
        vec![s.clone(), s.clone(), s.clone(), z.clone()],
        vec![&w(2) * &s, &w(1) * &s, s.clone(), z.clone()],
        vec![&w(1) * &s, &w(2) * &s, s.clone(), z.clone()],
    ])
    .unwrap();
    let shown_m = Matrix::permutation(&[2, 0, 1, 3]);
    let shown_d = crate::circuit::diag(&[o.clone(), o, w(1), w(2)]);
    ensure(cm.m == shown_m && cm.t == shown_t && cm.d == shown_d, || "q = 3 matrices differ".into())?;
    let summary: Vec<String> = depths.iter().map(|(q, d)| format!("q={q}: depth {}", d[0])).collect();
    Ok(format!("realized on the grid; {}; q = 3 M, T, D match", summary.join(", ")))
}

fn conjugation() -> Outcome {
    for (q, n) in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (5, 1)] {
        let r = mq_from_fq_conjugation(q, n).map_err(|e| e.to_string())?;
        let u = to_unitary(&r.circuit).map_err(|e| e.to_string())?;
        let g = DenseOperator::of_gate(&GateKind::QudigitM { q, inputs: n, power: 1 });
        ensure(u == g, || format!("(q, n) = ({q}, {n})"))?;
    }
    Ok("H conjugation of base-q fanout equals the adder on all six sizes".into())
}

fn mod_hat_chain() -> Outcome {
    for r in 0..3 {
        for n in 1..=3 {
            let rep = check_realization(&mod_hat(3, r, n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(rep.realized(), || format!("MOD-hat r = {r}, n = {n}"))?;
        }
    }
    let rep = check_realization(&mq_from_modq(3, 2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(rep.realized() && rep.checked_inputs == 27, || format!("adder from MOD_3: {rep}"))?;
    Ok("MOD-hat realized for all r, n <= 3; adder from MOD_3 on 27 digit inputs".into())
}

fn fanout_from_fq() -> Outcome {
    for n in 1..=4 {
        let rep = check_realization(&f_from_fq(3, n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(rep.realized(), || format!("n = {n}"))?;
    }
    Ok("fanout realized for n = 1..4".into())
}

fn tensor_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57);
    let mut cases = Vec::new();
    for _ in 0..300 {
        let lines = rng.gen_range(1..=6);
        let depth = rng.gen_range(0..=5);
        let c = random_circuit(&mut rng, lines, depth, GateSet::Standard);
        cases.push((c, rng.gen_range(0..1u64 << lines)));
    }
    let checked: Result<Vec<usize>, String> = cases
        .par_iter()
        .map(|(c, z)| {
            let g = build_from_circuit(c, *z).map_err(|e| e.to_string())?;
            let out = CompiledCircuit::new(c).map_err(|e| e.to_string())?.run_basis(*z);
            let with_paths = g.path_count() <= 10_000;
            for x in 0..1u64 << c.num_lines() {
                let a = amplitude_dp(&g, x).map_err(|e| e.to_string())?;
                ensure(a == out.amplitude(x), || format!("dp mismatch at z = {z}, x = {x}"))?;
                if with_paths {
                    let p = amplitude_pathsum_capped(&g, x, 10_000).map_err(|e| e.to_string())?;
                    ensure(p == a, || format!("path sum mismatch at z = {z}, x = {x}"))?;
                }
            }
            Ok(with_paths as usize)
        })
        .collect();
    let with_paths: usize = checked?.iter().sum();
    Ok(format!("300 circuits exact; path sums cross-checked on {with_paths}"))
}

fn worked_examples() -> Outcome {
    let g = two_path_example();
    let paths = g.paths(10).map_err(|e| e.to_string())?;
    let r = sqrt_of_integer(2).div_rational(&ratio(2, 1));
    let h = Cyclotomic::from_rational(&ratio(1, 2), 1);
    let z = Cyclotomic::zero(1);
    let vec3 = |a: [Cyclotomic; 2], b: [Cyclotomic; 2], c: [Cyclotomic; 2]| {
        let mut e = Vec::new();
        for x in 0..8u64 {
            let v = &(&a[(x >> 2) as usize & 1] * &b[(x >> 1) as usize & 1]) * &c[x as usize & 1];
            e.push((x, v));
        }
        StateVector::from_entries(3, e)
    };
    let left = vec3([z.clone(), Cyclotomic::one(1)], [r.clone(), r.clone()], [h.clone(), z.clone()]);
    let right = vec3([Cyclotomic::one(1), z.clone()], [r.clone(), -&r], [h, z]);
    let got: Vec<StateVector> = paths.iter().map(|p| g.path_vector(p).1).collect();
    ensure(got.len() == 2 && got.contains(&left) && got.contains(&right), || "path vectors differ".into())?;
    let g = colored_example();
    let half = Cyclotomic::from_rational(&ratio(1, 2), 1);
    let terms: Vec<(Cyclotomic, bool)> = g
        .paths(10)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|p| {
            let (a, c) = g.path_term(p, 0b100);
            (a, c.is_one())
        })
        .collect();
    let alive: Vec<&Cyclotomic> = terms.iter().filter(|t| t.1 && !t.0.is_zero()).map(|t| &t.0).collect();
    ensure(alive == vec![&half], || format!("colored paths give {terms:?}"))?;
    ensure(amplitude_dp(&g, 0b100).map_err(|e| e.to_string())? == half, || "dp amplitude".into())?;
    Ok("two path vectors reproduced; colored amplitude of |100> is 1/2 from one path".into())
}

fn structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut max_ratio = 0.0f64;
    for _ in 0..200 {
        let lines = rng.gen_range(2..=6);
        let c = random_circuit(&mut rng, lines, 2, GateSet::Standard);
        let z = rng.gen_range(0..1u64 << lines);
        let mut g = build_from_circuit(&LayeredCircuit::empty(lines), z).map_err(|e| e.to_string())?;
        for (t, layer) in c.layers.iter().enumerate() {
            let before = g.width();
            g.apply_layer(layer).map_err(|e| e.to_string())?;
            let after = g.width();
            let bound = 1u128 << (1u32 << (2 * (t + 1)));
            ensure((after as u128) <= bound, || format!("width {after} after {} layers", t + 1))?;
            if matches!(layer, crate::circuit::Layer::Cnot { .. }) {
                ensure(after <= 2 * before, || format!("controlled-not layer took width {before} to {after}"))?;
                max_ratio = max_ratio.max(after as f64 / before as f64);
            }
            let rep = g.check_color_consistency();
            ensure(rep.consistent(), || rep.violations.join("; "))?;
            ensure(rep.color_lines.values().all(|l| l.len() == 2), || "color height count".into())?;
        }
    }
    Ok(format!("200 two-layer builds consistent and within width bounds; largest controlled-not growth x{max_ratio}"))
}

fn languages() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a9);
    let mut tally = [0usize; 3];
    for i in 0..100 {
        let lines = rng.gen_range(1..=5);
        let depth = rng.gen_range(1..=4);
        let c = random_circuit(&mut rng, lines, depth, GateSet::Rational);
        let inputs = rng.gen_range(0..=lines);
        let circuit = LayeredCircuit::new(inputs, lines - inputs, c.layers);
        let base = AcceptanceQuery {
            z: rng.gen_range(0..1u64 << lines),
            x: rng.gen_range(0..1u64 << inputs),
            circuit,
            mode: Mode::N,
        };
        let mut verdicts = Vec::new();
        for mode in [Mode::N, Mode::E, Mode::B] {
            let q = AcceptanceQuery { mode, ..base.clone() };
            let s = decide(&q, Engine::Simulator).map_err(|e| e.to_string())?;
            let t = decide(&q, Engine::TensorGraph).map_err(|e| e.to_string())?;
            ensure(s == t, || format!("engines disagree on query {i} in mode {mode:?}"))?;
            verdicts.push(s.verdict);
        }
        if verdicts[1] == Verdict::Accept {
            ensure(verdicts[0] == Verdict::Accept, || format!("query {i}: E-accept without N-accept"))?;
        }
        tally[0] += (verdicts[0] == Verdict::Accept) as usize;
        tally[1] += (verdicts[1] == Verdict::Accept) as usize;
        tally[2] += (verdicts[2] == Verdict::Accept) as usize;
    }
    Ok(format!(
        "engines agree on 100 queries x 3 modes; accepts N {}, E {}, B {}",
        tally[0], tally[1], tally[2]
    ))
}

fn random_cyclotomic(rng: &mut ChaCha8Rng, order: u32) -> Cyclotomic {
    let mut acc = Cyclotomic::zero(order);
    for _ in 0..rng.gen_range(1..=4) {
        let c = Cyclotomic::from_rational(&ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)), order);
        acc = &acc + &(&c * &Cyclotomic::root(order, rng.gen_range(0..order as i64)));
    }
    acc
}

fn arithmetic() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa417);
    let orders = [1u32, 3, 4, 5, 8, 12, 15];
    for _ in 0..1000 {
        let order = orders[rng.gen_range(0..orders.len())];
        let (a, b, c) = (
            random_cyclotomic(&mut rng, order),
            random_cyclotomic(&mut rng, order),
            random_cyclotomic(&mut rng, order),
        );
        ensure(&(&a + &b) + &c == &a + &(&b + &c), || "additive associativity".into())?;
        ensure(&(&a * &b) * &c == &a * &(&b * &c), || "multiplicative associativity".into())?;
        ensure(&a * &b == &b * &a && &a + &b == &b + &a, || "commutativity".into())?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || "distributivity".into())?;
    }
    for q in 1..=11u64 {
        let s = sqrt_of_integer(q);
        ensure(&s * &s == Cyclotomic::from_int(q as i64, 1), || format!("sqrt({q})^2"))?;
    }
    let mut disagreements = 0;
    for i in 0..1000 {
        let order = orders[rng.gen_range(0..orders.len())];
        let a = random_cyclotomic(&mut rng, order);
        // every other expression is built to vanish exactly
        let e = if i % 2 == 0 { &a - &a.conj().conj() } else { &a * &random_cyclotomic(&mut rng, order) };
        let float_zero = e.to_complex().norm() < 1e-9;
        if float_zero != e.is_zero() {
            disagreements += 1;
        }
    }
    Ok(format!(
        "1000 triples obey the ring laws; sqrt(q)^2 = q for q <= 11; float screening disagreed {disagreements} times (exact result kept)"
    ))
}
