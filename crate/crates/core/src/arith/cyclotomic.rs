use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{cyclotomic_poly, lcm, squarefree_split, totient};
use super::{ArithError, Rational};

/// An exact element of the cyclotomic field Q(ζ_N) with rational coefficients.
///
/// The value is `Σ_i (num[i] / den) · ζ_N^i`. The coefficient vector always has
/// length `N`, and the canonical form keeps it reduced modulo the cyclotomic
/// relations (the kernel of `Q[x]/(x^N - 1) → Q(ζ_N)`, generated by the sums
/// `Σ_{j<p} ζ_N^{i + jN/p}` for primes `p | N`). Reduction is carried out by
/// division by the cyclotomic polynomial Φ_N, so only the first φ(N) slots can
/// be nonzero and two values are equal iff their representations are.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Cyclotomic {
            order,
            num: vec![BigInt::zero(); order as usize],
            den: BigInt::one(),
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(&Rational::one(), order)
    }

    pub fn from_int(value: i64, order: u32) -> Self {
        Self::from_rational(&Rational::from_integer(value.into()), order)
    }

    pub fn from_rational(value: &Rational, order: u32) -> Self {
        let mut out = Self::zero(order);
        out.num[0] = value.numer().clone();
        out.den = value.denom().clone();
        out.normalize();
        out
    }

    /// ζ_order^power, canonicalized.
    pub fn root(order: u32, power: i64) -> Self {
        let mut out = Self::zero(order);
        let idx = power.rem_euclid(order as i64) as usize;
        out.num[idx] = BigInt::one();
        out.reduce();
        out
    }

    /// Builds a value from an arbitrary (not necessarily canonical) coefficient list.
    pub fn from_coeffs(order: u32, coeffs: &[(usize, Rational)]) -> Self {
        let mut out = Self::zero(order);
        for (i, c) in coeffs {
            let term = {
                let mut t = Self::zero(order);
                t.num[i % order as usize] = c.numer().clone();
                t.den = c.denom().clone();
                t
            };
            out = out.add_same(&term);
        }
        out.reduce();
        out
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The length-N coefficient vector as rationals; slot `i` multiplies ζ_N^i.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    /// Nonzero coefficients in ascending slot order.
    pub fn nonzero_coeffs(&self) -> Vec<(usize, Rational)> {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_zero())
            .map(|(i, n)| (i, BigRational::new(n.clone(), self.den.clone())))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// Returns the value as a rational number if it is one.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Re-expresses the value in Q(ζ_new_order); `new_order` must be a multiple of the order.
    pub fn promote(&self, new_order: u32) -> Result<Self, ArithError> {
        if new_order == 0 || !new_order.is_multiple_of(self.order) {
            return Err(ArithError::NotAMultiple {
                from: self.order,
                to: new_order,
            });
        }
        if new_order == self.order {
            return Ok(self.clone());
        }
        let step = (new_order / self.order) as usize;
        let mut out = Self::zero(new_order);
        for (i, n) in self.num.iter().enumerate() {
            out.num[i * step] = n.clone();
        }
        out.den = self.den.clone();
        out.reduce();
        Ok(out)
    }

    /// Re-expresses the value at a smaller order `target`, which must divide the
    /// current order. Fails when the value does not lie in Q(ζ_target).
    pub fn demote(&self, target: u32) -> Result<Self, ArithError> {
        if target == 0 || !self.order.is_multiple_of(target) {
            return Err(ArithError::NotAMultiple {
                from: target,
                to: self.order,
            });
        }
        let rows = totient(self.order) as usize;
        let cols = totient(target) as usize;
        // Columns: images of ζ_target^j, j < φ(target); last column: self.
        let mut m: Vec<Vec<Rational>> = vec![vec![Rational::zero(); cols + 1]; rows];
        for j in 0..cols {
            let img = Self::root(target, j as i64).promote(self.order)?;
            for (r, row) in m.iter_mut().enumerate() {
                row[j] = BigRational::new(img.num[r].clone(), img.den.clone());
            }
        }
        for (r, row) in m.iter_mut().enumerate() {
            row[cols] = BigRational::new(self.num[r].clone(), self.den.clone());
        }
        let solution = solve_rational(m, cols).ok_or(ArithError::NotInSubfield {
            order: self.order,
            target,
        })?;
        let coeffs: Vec<(usize, Rational)> = solution.into_iter().enumerate().collect();
        Ok(Self::from_coeffs(target, &coeffs))
    }

    /// Complex conjugation, ζ^i ↦ ζ^(N-i).
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut out = Self::zero(self.order);
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                out.num[(n - i) % n] = c.clone();
            }
        }
        out.den = self.den.clone();
        out.reduce();
        out
    }

    /// `|x|^2 = x · conj(x)`, a totally real element.
    pub fn abs2(&self) -> Self {
        self.mul_same(&self.conj())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(self.order);
        }
        let mut out = self.clone();
        for c in out.num.iter_mut() {
            *c *= r.numer();
        }
        out.den *= r.denom();
        out.normalize();
        out
    }

    /// Division by a nonzero rational.
    pub fn div_rational(&self, r: &Rational) -> Self {
        assert!(!r.is_zero(), "division by zero");
        self.scale(&r.recip())
    }

    /// Floating-point evaluation at ζ_N = e^{2πi/N}; diagnostics only.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = BigRational::new(c.clone(), self.den.clone())
                .to_f64()
                .unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * i as f64 / n;
            acc += Complex64::from_polar(coeff, angle);
        }
        acc
    }

    /// Brings two values to a common order (the lcm of both).
    pub fn common_order(a: &Self, b: &Self) -> (Self, Self) {
        let n = lcm(a.order, b.order);
        (a.promote(n).unwrap(), b.promote(n).unwrap())
    }

    fn add_same(&self, other: &Self) -> Self {
        debug_assert_eq!(self.order, other.order);
        let den = &self.den * &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                if a.is_zero() && b.is_zero() {
                    BigInt::zero()
                } else {
                    a * &other.den + b * &self.den
                }
            })
            .collect();
        let mut out = Cyclotomic {
            order: self.order,
            num,
            den,
        };
        out.normalize();
        out
    }

    fn mul_same(&self, other: &Self) -> Self {
        debug_assert_eq!(self.order, other.order);
        let n = self.order as usize;
        let mut num = vec![BigInt::zero(); n];
        let lhs: Vec<(usize, &BigInt)> = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if lhs.is_empty() {
            return Self::zero(self.order);
        }
        for (j, b) in other.num.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for &(i, a) in &lhs {
                num[(i + j) % n] += a * b;
            }
        }
        let mut out = Cyclotomic {
            order: self.order,
            num,
            den: &self.den * &other.den,
        };
        out.reduce();
        out
    }

    /// Reduces modulo Φ_N and normalizes the common denominator.
    fn reduce(&mut self) {
        let phi = cyclotomic_poly(self.order);
        let deg = phi.len() - 1;
        let n = self.order as usize;
        for i in (deg..n).rev() {
            if self.num[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut self.num[i]);
            for (j, &pj) in phi[..deg].iter().enumerate() {
                if pj != 0 {
                    self.num[i - deg + j] -= &c * pj;
                }
            }
        }
        self.normalize();
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in self.num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let mut g = self.den.clone();
        let mut any = false;
        for c in &self.num {
            if !c.is_zero() {
                any = true;
                g = g.gcd(c);
                if g.is_one() {
                    return;
                }
            }
        }
        if !any {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                if !c.is_zero() {
                    *c /= &g;
                }
            }
            self.den /= &g;
        }
    }
}

/// Gaussian elimination for an augmented system with `cols` unknowns.
/// Returns `None` when the system is inconsistent; free variables are set to 0.
fn solve_rational(mut m: Vec<Vec<Rational>>, cols: usize) -> Option<Vec<Rational>> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..=cols {
                    let delta = &f * &m[r][k];
                    m[i][k] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut out = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        out[c] = m[i][cols].clone();
    }
    Some(out)
}

/// An element whose square is `q` and whose complex embedding is the positive
/// real root, built at order `4q` from the quadratic Gauss sum `Σ_k ζ_q^{k²}`.
pub fn sqrt_of_integer(q: u64) -> Cyclotomic {
    assert!(q >= 1, "square root of zero requested");
    let order = u32::try_from(4 * q).expect("order overflow");
    let (root, core) = squarefree_split(q);
    let s = sqrt_squarefree(core).promote(order).unwrap();
    let out = s.scale(&Rational::from_integer(BigInt::from(root)));
    let target = Cyclotomic::from_int(q as i64, order);
    assert!(out.mul_same(&out) == target, "square root of {q} failed exact check");
    out
}

/// √(n/d) for a nonnegative rational, at the smallest convenient order.
pub fn sqrt_of_rational(r: &Rational) -> Option<Cyclotomic> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Cyclotomic::zero(1));
    }
    let prod = (r.numer() * r.denom()).to_u64()?;
    let (root, core) = squarefree_split(prod);
    let s = sqrt_squarefree(core);
    Some(s.scale(&BigRational::new(BigInt::from(root), r.denom().clone())))
}

/// √s for squarefree `s`, at its conductor (s, 4s, or 8 for s = 2).
fn sqrt_squarefree(s: u64) -> Cyclotomic {
    if s == 1 {
        return Cyclotomic::one(1);
    }
    if s.is_multiple_of(2) {
        // √s = √2 · √(s/2) with s/2 odd
        let sqrt2 = &Cyclotomic::root(8, 1) + &Cyclotomic::root(8, 7);
        let rest = sqrt_squarefree(s / 2);
        return &sqrt2 * &rest;
    }
    let q = u32::try_from(s).expect("order overflow");
    let order = 4 * q;
    // Gauss sum g with g^2 = (-1)^((q-1)/2) q for squarefree odd q.
    let mut g = Cyclotomic::zero(order);
    for k in 0..q as u64 {
        g = g.add_same(&Cyclotomic::root(order, (4 * (k * k % q as u64)) as i64));
    }
    let candidate = if q % 4 == 1 {
        g
    } else {
        // g = i·√q
        g.mul_same(&Cyclotomic::root(order, 3 * q as i64))
    };
    let z = candidate.to_complex();
    let fixed = if z.re < 0.0 { -candidate } else { candidate };
    debug_assert!(fixed.to_complex().im.abs() < 1e-9);
    let out = if q % 4 == 1 {
        fixed.demote(q).unwrap_or(fixed)
    } else {
        fixed
    };
    assert!(
        out.abs2() == Cyclotomic::from_int(s as i64, out.order()) && &out * &out == Cyclotomic::from_int(s as i64, 1),
        "square root of {s} failed exact check"
    );
    out
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            self.den == other.den && self.num == other.num
        } else {
            let (a, b) = Cyclotomic::common_order(self, other);
            a.den == b.den && a.num == b.num
        }
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order == rhs.order {
            self.add_same(rhs)
        } else {
            let (a, b) = Cyclotomic::common_order(self, rhs);
            a.add_same(&b)
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order == rhs.order {
            self.mul_same(rhs)
        } else {
            let (a, b) = Cyclotomic::common_order(self, rhs);
            a.mul_same(&b)
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

/// `cyc(N)[i0:n0/d0, i1:n1/d1, ...]`, listing the nonzero canonical coefficients.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cyc({})[", self.order)?;
        let mut first = true;
        for (i, c) in self.nonzero_coeffs() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{}:{}/{}", i, c.numer(), c.denom())?;
        }
        write!(f, "]")
    }
}

impl FromStr for Cyclotomic {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::Parse(s.to_string());
        let s = s.trim();
        let rest = s.strip_prefix("cyc(").ok_or_else(bad)?;
        let (order, rest) = rest.split_once(')').ok_or_else(bad)?;
        let order: u32 = order.trim().parse().map_err(|_| bad())?;
        if order == 0 {
            return Err(bad());
        }
        let body = rest
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let mut coeffs = Vec::new();
        for item in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (idx, value) = item.split_once(':').ok_or_else(bad)?;
            let idx: usize = idx.trim().parse().map_err(|_| bad())?;
            if idx >= order as usize {
                return Err(bad());
            }
            let value = parse_rational(value.trim()).ok_or_else(bad)?;
            coeffs.push((idx, value));
        }
        Ok(Cyclotomic::from_coeffs(order, &coeffs))
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(order: u32, power: i64) -> Cyclotomic {
        Cyclotomic::root(order, power)
    }

    #[test]
    fn root_of_order_one_is_one() {
        assert!(c(1, 0).is_one());
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let s = &(&c(3, 0) + &c(3, 1)) + &c(3, 2);
        assert!(s.is_zero());
    }

    #[test]
    fn eighth_roots_give_sqrt2() {
        let s = &c(8, 1) + &c(8, 7);
        assert_eq!(&s * &s, Cyclotomic::from_int(2, 8));
        assert!((s.to_complex().re - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn i_squared() {
        assert_eq!(&c(4, 1) * &c(4, 1), Cyclotomic::from_int(-1, 4));
    }

    #[test]
    fn conjugate_of_root() {
        assert_eq!(c(8, 1).conj(), c(8, 7));
    }

    #[test]
    fn promotion() {
        assert_eq!(Cyclotomic::one(1).promote(8).unwrap(), Cyclotomic::one(8));
        assert_eq!(c(3, 1).promote(12).unwrap(), c(12, 4));
        assert_eq!(c(3, 1).promote(12).unwrap().order(), 12);
        assert!(c(3, 1).promote(8).is_err());
    }

    #[test]
    fn demotion_round_trip() {
        let x = &c(3, 1) + &Cyclotomic::from_int(5, 3);
        let up = x.promote(24).unwrap();
        let down = up.demote(3).unwrap();
        assert_eq!(down.order(), 3);
        assert!((&down - &x).is_zero());
        assert!(c(8, 1).demote(4).is_err());
    }

    #[test]
    fn sqrt_values() {
        assert!(sqrt_of_integer(1).is_one());
        assert_eq!(sqrt_of_integer(2), &c(8, 1) + &c(8, 7));
        for q in 1..=11u64 {
            let s = sqrt_of_integer(q);
            assert_eq!(&s * &s, Cyclotomic::from_int(q as i64, 1), "q = {q}");
            let z = s.to_complex();
            assert!(z.re > 0.0 && z.im.abs() < 1e-9);
            assert!((z.re - (q as f64).sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn sqrt_rational() {
        let r = BigRational::new(2.into(), 3.into());
        let s = sqrt_of_rational(&r).unwrap();
        assert_eq!(&s * &s, Cyclotomic::from_rational(&r, 1));
        assert!(s.to_complex().re > 0.0);
    }

    #[test]
    fn text_form() {
        let x = &c(8, 1).scale(&BigRational::new(3.into(), 4.into())) + &Cyclotomic::from_int(-2, 8);
        let text = x.to_string();
        assert_eq!(text, "cyc(8)[0:-2/1, 1:3/4]");
        let back: Cyclotomic = text.parse().unwrap();
        assert_eq!(back, x);
        assert_eq!(back.to_string(), text);
        assert_eq!(Cyclotomic::zero(5).to_string(), "cyc(5)[]");
        // non-canonical input is reduced
        let y: Cyclotomic = "cyc(3)[0:1/1, 1:1/1, 2:1/1]".parse().unwrap();
        assert!(y.is_zero());
        assert!("cyc(0)[]".parse::<Cyclotomic>().is_err());
        assert!("cyc(4)[4:1/1]".parse::<Cyclotomic>().is_err());
    }

    #[test]
    fn float_embedding() {
        let z = c(4, 1).to_complex();
        assert!(z.re.abs() < 1e-12 && (z.im - 1.0).abs() < 1e-12);
        assert!((sqrt_of_integer(2).to_complex().re - 1.41421).abs() < 1e-5);
    }
}
