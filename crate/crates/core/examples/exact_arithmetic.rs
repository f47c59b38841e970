//! Exact cyclotomic arithmetic: roots of unity, square roots of integers, and
//! zero tests that floats cannot settle.

use qacc::arith::{ratio, sqrt_of_integer, Cyclotomic};

fn main() {
    let w = Cyclotomic::root(3, 1);
    let sum = &(&Cyclotomic::one(1) + &w) + &(&w * &w);
    println!("1 + w + w^2 = {sum}  (zero: {})", sum.is_zero());

    for q in [2u64, 3, 5, 7, 11] {
        let s = sqrt_of_integer(q);
        println!("sqrt({q}) lives in Q(zeta_{}) and squares to {}", s.order(), (&s * &s).to_rational().unwrap());
    }

    // a tiny difference that double precision still sees, and an exact zero
    let a = Cyclotomic::root(8, 1).scale(&ratio(1, 1_000_000_000_000));
    println!("|a| = {:e}, exact zero {}", a.to_complex().norm(), a.is_zero());
    let h = sqrt_of_integer(2).div_rational(&ratio(2, 1));
    let e = &(&h * &h) - &Cyclotomic::from_rational(&ratio(1, 2), 1);
    println!("(sqrt2/2)^2 - 1/2 = {e}, float value {:e}", e.to_complex().norm());
}
