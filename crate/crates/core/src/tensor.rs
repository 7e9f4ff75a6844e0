//! The space N = M⊗M⊗M over 3×3 matrices, its 729-element standard basis,
//! and sparse tensors with polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammar::parse_polynomial;
use crate::poly::Polynomial;

pub const BASIS_SIZE: usize = 729;

/// A basis index ((i₁,j₁),(i₂,j₂),(i₃,j₃)) with entries in 1..=3, stored as
/// its code Σ (i_k−1)·3^{2k−1} + (j_k−1)·3^{2k−2}. The code fixes both the
/// iteration order and the order of entries in tensor files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex(u16);

impl BasisIndex {
    pub fn from_pairs(pairs: [(u8, u8); 3]) -> Self {
        let mut code = 0u16;
        let mut weight = 1u16;
        for (i, j) in pairs {
            debug_assert!((1..=3).contains(&i) && (1..=3).contains(&j));
            code += (j as u16 - 1) * weight + (i as u16 - 1) * weight * 3;
            weight *= 9;
        }
        BasisIndex(code)
    }

    pub fn try_from_pairs(pairs: [(u8, u8); 3]) -> Result<Self> {
        if pairs
            .iter()
            .any(|&(i, j)| !(1..=3).contains(&i) || !(1..=3).contains(&j))
        {
            return Err(Error::Invalid(format!("index out of range: {pairs:?}")));
        }
        Ok(Self::from_pairs(pairs))
    }

    pub fn from_code(code: u16) -> Self {
        assert!((code as usize) < BASIS_SIZE);
        BasisIndex(code)
    }

    pub fn code(self) -> u16 {
        self.0
    }

    pub fn pairs(self) -> [(u8, u8); 3] {
        let mut c = self.0;
        let mut out = [(0u8, 0u8); 3];
        for pair in &mut out {
            let j = (c % 3) as u8 + 1;
            c /= 3;
            let i = (c % 3) as u8 + 1;
            c /= 3;
            *pair = (i, j);
        }
        out
    }

    pub fn all() -> impl Iterator<Item = BasisIndex> {
        (0..BASIS_SIZE as u16).map(BasisIndex)
    }

    /// Parses the compact `11,12,21` notation.
    pub fn parse_short(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Invalid(format!("bad index {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut pairs = [(0, 0); 3];
        for (slot, p) in pairs.iter_mut().zip(&parts) {
            let b = p.as_bytes();
            if b.len() != 2 {
                return Err(bad());
            }
            *slot = (b[0].wrapping_sub(b'0'), b[1].wrapping_sub(b'0'));
        }
        Self::try_from_pairs(pairs)
    }

    /// Each of 1, 2, 3 occurs an even number of times among the six entries.
    pub fn is_even(self) -> bool {
        let mut counts = [0u8; 4];
        for (i, j) in self.pairs() {
            counts[i as usize] += 1;
            counts[j as usize] += 1;
        }
        counts[1..].iter().all(|c| c % 2 == 0)
    }

    /// Indices of the form ((i,i),(j,j),(k,k)).
    pub fn is_diagonal_triple(self) -> bool {
        self.pairs().iter().all(|&(i, j)| i == j)
    }

    pub fn swap12(self) -> Self {
        let [p, q, r] = self.pairs();
        Self::from_pairs([q, p, r])
    }
}

pub fn index_is_even(alpha: BasisIndex) -> bool {
    alpha.is_even()
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [(a, b), (c, d), (e, g)] = self.pairs();
        write!(f, "{a}{b},{c}{d},{e}{g}")
    }
}

/// A 3×3 matrix with polynomial entries, indexed from 1 in the public API.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FactorMatrix {
    entries: [[Polynomial; 3]; 3],
}

impl FactorMatrix {
    pub fn zero() -> Self {
        FactorMatrix::default()
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for k in 1..=3 {
            m.set(k, k, Polynomial::one());
        }
        m
    }

    pub fn from_rows(rows: [[Polynomial; 3]; 3]) -> Self {
        FactorMatrix { entries: rows }
    }

    pub fn parse_rows(rows: &[[String; 3]; 3]) -> Result<Self> {
        let mut m = Self::zero();
        for (r, row) in rows.iter().enumerate() {
            for (c, s) in row.iter().enumerate() {
                m.entries[r][c] = parse_polynomial(s)?;
            }
        }
        Ok(m)
    }

    pub fn get(&self, row: u8, col: u8) -> &Polynomial {
        &self.entries[row as usize - 1][col as usize - 1]
    }

    pub fn set(&mut self, row: u8, col: u8, p: Polynomial) {
        self.entries[row as usize - 1][col as usize - 1] = p;
    }

    pub fn rows(&self) -> &[[Polynomial; 3]; 3] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> FactorMatrix {
        FactorMatrix {
            entries: std::array::from_fn(|r| std::array::from_fn(|c| f(&self.entries[r][c]))),
        }
    }

    pub fn transpose(&self) -> FactorMatrix {
        FactorMatrix {
            entries: std::array::from_fn(|r| std::array::from_fn(|c| self.entries[c][r].clone())),
        }
    }

    pub fn matmul(&self, other: &FactorMatrix) -> FactorMatrix {
        FactorMatrix {
            entries: std::array::from_fn(|r| {
                std::array::from_fn(|c| {
                    let mut acc = Polynomial::zero();
                    for k in 0..3 {
                        acc.add_assign_ref(&(&self.entries[r][k] * &other.entries[k][c]));
                    }
                    acc
                })
            }),
        }
    }

    pub fn add(&self, other: &FactorMatrix) -> FactorMatrix {
        FactorMatrix {
            entries: std::array::from_fn(|r| std::array::from_fn(|c| &self.entries[r][c] + &other.entries[r][c])),
        }
    }

    pub fn scale(&self, p: &Polynomial) -> FactorMatrix {
        self.map(|x| x * p)
    }
}

/// Sparse element of N; only nonzero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tensor {
    entries: BTreeMap<BasisIndex, Polynomial>,
}

impl Tensor {
    pub fn zero() -> Self {
        Tensor::default()
    }

    pub fn basis(alpha: BasisIndex) -> Self {
        let mut t = Tensor::zero();
        t.insert(alpha, Polynomial::one());
        t
    }

    pub fn get(&self, alpha: BasisIndex) -> Polynomial {
        self.entries.get(&alpha).cloned().unwrap_or_default()
    }

    pub fn entry(&self, alpha: BasisIndex) -> Option<&Polynomial> {
        self.entries.get(&alpha)
    }

    /// Sets a coefficient, dropping it if zero.
    pub fn insert(&mut self, alpha: BasisIndex, p: Polynomial) {
        if p.is_zero() {
            self.entries.remove(&alpha);
        } else {
            self.entries.insert(alpha, p);
        }
    }

    pub fn add_at(&mut self, alpha: BasisIndex, p: &Polynomial) {
        if p.is_zero() {
            return;
        }
        let slot = self.entries.entry(alpha).or_default();
        slot.add_assign_ref(p);
        if slot.is_zero() {
            self.entries.remove(&alpha);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (BasisIndex, &Polynomial)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Tensor) {
        for (alpha, p) in other.entries() {
            self.add_at(alpha, p);
        }
    }

    pub fn scale(&self, c: &Polynomial) -> Tensor {
        let mut out = Tensor::zero();
        for (alpha, p) in self.entries() {
            out.insert(alpha, p * c);
        }
        out
    }

    pub fn neg(&self) -> Tensor {
        self.scale(&Polynomial::from_int(-1))
    }

    /// x⊗y⊗z ↦ y⊗x⊗z, without transposing the matrices.
    pub fn pi12(&self) -> Tensor {
        Tensor {
            entries: self
                .entries
                .iter()
                .map(|(alpha, p)| (alpha.swap12(), p.clone()))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Tensor {
        let mut out = Tensor::zero();
        for (alpha, p) in self.entries() {
            out.insert(alpha, f(p));
        }
        out
    }

    pub fn to_file(&self) -> TensorFile {
        TensorFile {
            entries: self
                .entries()
                .map(|(alpha, p)| {
                    let [a, b, c] = alpha.pairs();
                    TensorFileEntry {
                        idx: [[a.0, a.1], [b.0, b.1], [c.0, c.1]],
                        coeff: p.to_string(),
                    }
                })
                .collect(),
        }
    }

    pub fn from_file(file: &TensorFile) -> Result<Tensor> {
        let mut out = Tensor::zero();
        for e in &file.entries {
            let pairs = e.idx.map(|[i, j]| (i, j));
            let alpha = BasisIndex::try_from_pairs(pairs)?;
            out.add_at(alpha, &parse_polynomial(&e.coeff)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("tensor serializes")
    }

    pub fn from_json(s: &str) -> Result<Tensor> {
        let file: TensorFile = serde_json::from_str(s)?;
        Tensor::from_file(&file)
    }
}

/// On-disk tensor layout; entries are sorted by encoded index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorFile {
    pub entries: Vec<TensorFileEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorFileEntry {
    pub idx: [[u8; 2]; 3],
    pub coeff: String,
}

/// Expands x⊗y⊗z into basis coordinates.
pub fn tensor_from_factors(x: &FactorMatrix, y: &FactorMatrix, z: &FactorMatrix) -> Tensor {
    let nonzero = |m: &FactorMatrix| -> Vec<((u8, u8), Polynomial)> {
        let mut v = Vec::new();
        for r in 1..=3 {
            for c in 1..=3 {
                let p = m.get(r, c);
                if !p.is_zero() {
                    v.push(((r, c), p.clone()));
                }
            }
        }
        v
    };
    let (xs, ys, zs) = (nonzero(x), nonzero(y), nonzero(z));
    let mut out = Tensor::zero();
    for (pa, a) in &xs {
        for (pb, b) in &ys {
            let ab = a * b;
            for (pc, c) in &zs {
                out.insert(BasisIndex::from_pairs([*pa, *pb, *pc]), &ab * c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Cyclotomic;
    use crate::grammar::parse_polynomial;

    fn idx(s: &str) -> BasisIndex {
        BasisIndex::parse_short(s).unwrap()
    }

    #[test]
    fn encoding_round_trips_and_orders_first_pair_lowest() {
        for alpha in BasisIndex::all() {
            assert_eq!(BasisIndex::from_pairs(alpha.pairs()), alpha);
        }
        assert_eq!(idx("11,11,11").code(), 0);
        assert_eq!(idx("12,11,11").code(), 1);
        assert_eq!(idx("21,11,11").code(), 3);
        assert_eq!(idx("11,12,11").code(), 9);
        assert_eq!(idx("11,11,21").code(), 243);
        assert_eq!(idx("33,33,33").code(), 728);
    }

    #[test]
    fn evenness_examples() {
        assert!(idx("13,13,33").is_even());
        assert!(!idx("13,23,31").is_even());
        assert!(idx("11,11,11").is_even());
        assert_eq!(BasisIndex::all().filter(|a| a.is_even()).count(), 183);
    }

    #[test]
    fn expansion_of_identity_cube() {
        let d = FactorMatrix::identity();
        let t = tensor_from_factors(&d, &d, &d);
        assert_eq!(t.len(), 27);
        for (alpha, p) in t.entries() {
            assert!(alpha.is_diagonal_triple());
            assert_eq!(*p, Polynomial::one());
        }
    }

    #[test]
    fn expansion_of_single_entry_cube() {
        let mut m = FactorMatrix::zero();
        m.set(3, 3, parse_polynomial("a").unwrap());
        let t = tensor_from_factors(&m, &m, &m);
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(idx("33,33,33")), parse_polynomial("a^3").unwrap());
    }

    #[test]
    fn expansion_with_cube_roots() {
        let mut eta = FactorMatrix::identity();
        eta.set(2, 2, Cyclotomic::zeta().into());
        eta.set(3, 3, Cyclotomic::zeta_bar().into());
        let eta_bar = eta.map(|p| p.as_constant().unwrap().conj().into());
        let t = tensor_from_factors(&eta, &eta_bar, &FactorMatrix::identity());
        assert_eq!(t.get(idx("22,22,22")), Polynomial::one());
        assert_eq!(t.get(idx("22,33,11")), Cyclotomic::zeta().pow(2).into());
    }

    #[test]
    fn linear_operations() {
        let d = FactorMatrix::identity();
        let t = tensor_from_factors(&d, &d, &d);
        assert!(t.add(&t.neg()).is_empty());
        let c = parse_polynomial("c + 1").unwrap();
        let s = t.scale(&c);
        assert!(s.entries().all(|(_, p)| *p == c));
        assert_eq!(t.add(&Tensor::zero()), t);
    }

    #[test]
    fn pi12_swaps_first_two_pairs() {
        let t = Tensor::basis(idx("12,21,11"));
        assert_eq!(t.pi12(), Tensor::basis(idx("21,12,11")));
        let mut u = FactorMatrix::zero();
        u.set(1, 2, parse_polynomial("a").unwrap());
        u.set(3, 1, parse_polynomial("b").unwrap());
        let v = FactorMatrix::identity();
        let uuv = tensor_from_factors(&u, &u, &v);
        assert_eq!(uuv.pi12(), uuv);
        let mixed = tensor_from_factors(&u, &v, &v);
        assert_eq!(mixed.pi12().pi12(), mixed);
        assert_ne!(mixed.pi12(), mixed);
    }

    #[test]
    fn json_round_trip() {
        let mut t = Tensor::zero();
        t.insert(idx("12,23,31"), parse_polynomial("2*a - i*b").unwrap());
        t.insert(idx("11,11,11"), Polynomial::one());
        let json = t.to_json();
        assert_eq!(Tensor::from_json(&json).unwrap(), t);
        let file = t.to_file();
        assert_eq!(file.entries[0].idx, [[1, 1], [1, 1], [1, 1]]);
    }
}
