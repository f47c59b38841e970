use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Cyclotomic;

/// Square matrix of cyclotomic numbers, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Cyclotomic>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![Cyclotomic::zero(1); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Cyclotomic::one(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(Matrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Self::zeros(perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, Cyclotomic::one(1));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Cyclotomic {
        &self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Cyclotomic) {
        self.data[row * self.dim + col] = value;
    }

    pub fn rows(&self) -> Vec<Vec<Cyclotomic>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    /// Number of qubit lines when the dimension is a power of two.
    pub fn num_lines(&self) -> Option<usize> {
        if self.dim.is_power_of_two() {
            Some(self.dim.trailing_zeros() as usize)
        } else {
            None
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m.set(c, r, self.get(r, c).conj());
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + &(a * b);
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    /// `self ⊗ other`, with `self` acting on the more significant index bits.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (a, b) = (self.dim, other.dim);
        let mut out = Self::zeros(a * b);
        for r1 in 0..a {
            for c1 in 0..a {
                let x = self.get(r1, c1);
                if x.is_zero() {
                    continue;
                }
                for r2 in 0..b {
                    for c2 in 0..b {
                        let y = other.get(r2, c2);
                        if !y.is_zero() {
                            out.set(r1 * b + r2, c1 * b + c2, x * y);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    /// Exact check of `U · U† = I`.
    pub fn is_unitary(&self) -> bool {
        self.mul(&self.adjoint()).is_identity()
    }

    /// True when every entry is 0 or 1 and each row and column has exactly one 1.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let n = self.dim;
        let mut perm = vec![usize::MAX; n];
        for c in 0..n {
            for r in 0..n {
                let v = self.get(r, c);
                if v.is_zero() {
                    continue;
                }
                if !v.is_one() || perm[c] != usize::MAX {
                    return None;
                }
                perm[c] = r;
            }
            if perm[c] == usize::MAX {
                return None;
            }
        }
        let mut seen = vec![false; n];
        for &r in &perm {
            if std::mem::replace(&mut seen[r], true) {
                return None;
            }
        }
        Some(perm)
    }

    /// lcm of the orders of all entries.
    pub fn field_order(&self) -> u32 {
        self.data
            .iter()
            .fold(1, |acc, x| super::poly::lcm(acc, x.order()))
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.data
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Cyclotomic>>::deserialize(d)?;
        Matrix::from_rows(rows).ok_or_else(|| serde::de::Error::custom("matrix is not square"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ratio, sqrt_of_integer};

    fn hadamard() -> Matrix {
        let inv = sqrt_of_integer(2).scale(&ratio(1, 2));
        Matrix::from_rows(vec![vec![inv.clone(), inv.clone()], vec![inv.clone(), -inv]]).unwrap()
    }

    #[test]
    fn hadamard_is_unitary_and_involutive() {
        let h = hadamard();
        assert!(h.is_unitary());
        assert!(h.mul(&h).is_identity());
    }

    #[test]
    fn kron_dimension_and_unitarity() {
        let h = hadamard();
        let hh = h.kron(&Matrix::identity(2));
        assert_eq!(hh.dim(), 4);
        assert!(hh.is_unitary());
        assert_eq!(hh.get(2, 0), h.get(1, 0));
    }

    #[test]
    fn permutation_detection() {
        let p = Matrix::permutation(&[2, 0, 1]);
        assert_eq!(p.as_permutation(), Some(vec![2, 0, 1]));
        assert!(p.is_unitary());
        assert_eq!(hadamard().as_permutation(), None);
    }

    #[test]
    fn serde_round_trip() {
        let h = hadamard();
        let text = serde_json::to_string(&h).unwrap();
        let back: Matrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
    }
}
