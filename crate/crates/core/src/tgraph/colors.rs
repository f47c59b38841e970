//! Colors and anticolors with c·c = c̃·c̃ = 1 and c·c̃ = 0, and formal sums of
//! cyclotomic coefficients times color products.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::Cyclotomic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorLiteral {
    pub id: u32,
    pub anti: bool,
}

impl ColorLiteral {
    pub fn color(id: u32) -> Self {
        ColorLiteral { id, anti: false }
    }

    pub fn anticolor(id: u32) -> Self {
        ColorLiteral { id, anti: true }
    }

    pub fn flipped(self) -> Self {
        ColorLiteral { id: self.id, anti: !self.anti }
    }
}

impl fmt::Display for ColorLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.anti {
            write!(f, "~c{}", self.id)
        } else {
            write!(f, "c{}", self.id)
        }
    }
}

/// A reduced product of literals: each id at most once, or annihilated.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorProduct {
    literals: BTreeMap<u32, bool>,
    annihilated: bool,
}

impl ColorProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn zero() -> Self {
        ColorProduct {
            literals: BTreeMap::new(),
            annihilated: true,
        }
    }

    pub fn literal(l: ColorLiteral) -> Self {
        ColorProduct {
            literals: BTreeMap::from([(l.id, l.anti)]),
            annihilated: false,
        }
    }

    pub fn from_literals(ls: impl IntoIterator<Item = ColorLiteral>) -> Self {
        ls.into_iter().fold(Self::one(), |acc, l| acc.mul(&Self::literal(l)))
    }

    pub fn is_one(&self) -> bool {
        !self.annihilated && self.literals.is_empty()
    }

    pub fn is_annihilated(&self) -> bool {
        self.annihilated
    }

    pub fn literals(&self) -> impl Iterator<Item = ColorLiteral> + '_ {
        self.literals.iter().map(|(&id, &anti)| ColorLiteral { id, anti })
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.literals.keys().copied()
    }

    pub fn mul(&self, other: &ColorProduct) -> ColorProduct {
        if self.annihilated || other.annihilated {
            return Self::zero();
        }
        let mut literals = self.literals.clone();
        for (&id, &anti) in &other.literals {
            match literals.get(&id) {
                None => {
                    literals.insert(id, anti);
                }
                Some(&a) if a == anti => {
                    literals.remove(&id);
                }
                Some(_) => return Self::zero(),
            }
        }
        ColorProduct {
            literals,
            annihilated: false,
        }
    }
}

impl fmt::Display for ColorProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.annihilated {
            return write!(f, "0");
        }
        if self.literals.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.literals().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Σ coefficient·product with distinct reduced products and no zero terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColorSum {
    terms: BTreeMap<ColorProduct, Cyclotomic>,
}

impl ColorSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Cyclotomic) -> Self {
        Self::term(c, ColorProduct::one())
    }

    pub fn term(c: Cyclotomic, p: ColorProduct) -> Self {
        let mut s = Self::zero();
        s.add_term(c, p);
        s
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ColorProduct, &Cyclotomic)> {
        self.terms.iter()
    }

    /// The coefficient when no colors remain.
    pub fn as_scalar(&self) -> Option<Cyclotomic> {
        match self.terms.len() {
            0 => Some(Cyclotomic::zero(1)),
            1 => self.terms.get(&ColorProduct::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, c: Cyclotomic, p: ColorProduct) {
        if c.is_zero() || p.is_annihilated() {
            return;
        }
        match self.terms.remove(&p) {
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(p, s);
                }
            }
            None => {
                self.terms.insert(p, c);
            }
        }
    }

    pub fn add(&self, other: &ColorSum) -> ColorSum {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(c.clone(), p.clone());
        }
        out
    }

    pub fn mul(&self, other: &ColorSum) -> ColorSum {
        let mut out = Self::zero();
        for (p1, c1) in &self.terms {
            for (p2, c2) in &other.terms {
                out.add_term(c1 * c2, p1.mul(p2));
            }
        }
        out
    }

    /// Product with the single term `c·p`.
    pub fn mul_term(&self, c: &Cyclotomic, p: &ColorProduct) -> ColorSum {
        let mut out = Self::zero();
        if c.is_zero() {
            return out;
        }
        for (p1, c1) in &self.terms {
            out.add_term(c1 * c, p1.mul(p));
        }
        out
    }
}

impl fmt::Display for ColorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("{c}·{p}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ratio, sqrt_of_integer};

    #[test]
    fn color_rules() {
        let c = ColorLiteral::color(0);
        let cc = ColorProduct::literal(c).mul(&ColorProduct::literal(c));
        assert!(cc.is_one());
        let anti = ColorProduct::literal(c.flipped()).mul(&ColorProduct::literal(c.flipped()));
        assert!(anti.is_one());
        assert!(ColorProduct::literal(c).mul(&ColorProduct::literal(c.flipped())).is_annihilated());
        assert!(ColorProduct::zero().mul(&ColorProduct::one()).is_annihilated());
    }

    #[test]
    fn dotted_path_product() {
        // b·(−1/√2)·1·(−1/√2)·b·1
        let b = ColorProduct::literal(ColorLiteral::color(1));
        let m = -&sqrt_of_integer(2).div_rational(&ratio(2, 1));
        let s = ColorSum::term(m.clone(), b.clone())
            .mul_term(&m, &ColorProduct::one())
            .mul_term(&Cyclotomic::one(1), &b);
        assert_eq!(s.as_scalar().unwrap(), Cyclotomic::from_rational(&ratio(1, 2), 1));
    }

    #[test]
    fn sums_cancel_and_merge() {
        let p = ColorProduct::literal(ColorLiteral::color(2));
        let mut s = ColorSum::term(Cyclotomic::one(1), p.clone());
        s.add_term(Cyclotomic::from_int(-1, 1), p.clone());
        assert!(s.is_zero());
        s.add_term(Cyclotomic::one(1), ColorProduct::zero());
        assert!(s.is_zero());
        let t = ColorSum::scalar(Cyclotomic::from_int(2, 1)).add(&ColorSum::term(Cyclotomic::one(1), p));
        assert_eq!(t.len(), 2);
        assert!(t.as_scalar().is_none());
    }
}
