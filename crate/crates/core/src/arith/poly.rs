//! Integer polynomials needed by the cyclotomic field: cyclotomic polynomials
//! and a few number-theoretic helpers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Returns the coefficients of the `n`-th cyclotomic polynomial, lowest degree
/// first. The result is monic and cached per `n`.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    thread_local! {
        static LOCAL: std::cell::RefCell<HashMap<u32, Arc<Vec<i64>>>> = Default::default();
    }
    if let Some(p) = LOCAL.with(|l| l.borrow().get(&n).cloned()) {
        return p;
    }
    let p = shared_poly(n);
    LOCAL.with(|l| l.borrow_mut().insert(n, p.clone()));
    p
}

fn shared_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 = prod_{d | n} phi_d(x)
    let mut poly: Vec<i128> = vec![0; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let divisor = cyclotomic_poly(d);
        poly = exact_div(&poly, &divisor);
    }
    let out: Vec<i64> = poly
        .into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect();
    let out = Arc::new(out);
    cache.lock().unwrap().insert(n, out.clone());
    out
}

/// Divides `num` by the monic polynomial `den`; the division must be exact.
fn exact_div(num: &[i128], den: &[i64]) -> Vec<i128> {
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj as i128;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact polynomial division");
    quot
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient, which is also the degree of the `n`-th cyclotomic polynomial.
pub fn totient(n: u32) -> u32 {
    let mut result = n;
    for p in prime_factors(n) {
        result = result / p * (p - 1);
    }
    result
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u32, b: u32) -> u32 {
    let g = gcd(a as u64, b as u64);
    u32::try_from(a as u64 / g * b as u64).expect("cyclotomic order overflow")
}

/// Splits `n` into `(m, s)` with `n = m^2 * s` and `s` squarefree.
pub fn squarefree_split(mut n: u64) -> (u64, u64) {
    let mut root = 1u64;
    let mut core = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        root *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    core *= n;
    (root, core)
}
